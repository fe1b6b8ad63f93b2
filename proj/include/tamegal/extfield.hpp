#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tamegal/resring.hpp"

namespace tamegal {

/* dense integer polynomial, coefficients ascending */
using poly_z = std::vector<Int>;

int pz_deg(const poly_z& a); /* -1 for the zero polynomial */
poly_z pz_normalize(poly_z a);
bool pz_is_monic(const poly_z& a);
poly_z pz_add(const poly_z& a, const poly_z& b);
poly_z pz_sub(const poly_z& a, const poly_z& b);
poly_z pz_mul(const poly_z& a, const poly_z& b);
poly_z pz_derivative(const poly_z& a);
Int pz_eval(const poly_z& a, const Int& x);
Int pz_content(const poly_z& a); /* >= 0, 0 only for the zero polynomial */
poly_z pz_primitive(const poly_z& a); /* content removed, leading coeff > 0 */
/* exact quotient; throws arith_error when b does not divide a */
poly_z pz_divexact(const poly_z& a, const poly_z& b);
poly_z pz_gcd(const poly_z& a, const poly_z& b); /* primitive, lead > 0 */
Int pz_resultant(const poly_z& a, const poly_z& b);
Int pz_disc(const poly_z& a);
fp_poly pz_mod(const poly_z& a, const Int& ell);

/* irreducible factorization over the rationals: primitive factors with
   positive leading coefficients and multiplicities, sorted by degree then
   coefficients; the content and sign of the input are dropped */
std::vector<std::pair<poly_z, unsigned>> pz_factor(const poly_z& f);

/* irreducible factorization mod ell: monic factors with multiplicities,
   sorted by degree then coefficients; equal-degree splitting uses seeded
   randomization and is deterministic for a fixed seed */
std::vector<std::pair<fp_poly, unsigned>> poly_factor_mod(
    const poly_z& f, const Int& ell, unsigned long seed = 0x5eedbeef);

/* true when Z[x]/(f) is maximal at ell for monic f, so residue data read
   off the factorization of f mod ell is the true splitting */
bool power_basis_maximal_at(const poly_z& f, const Int& ell);

struct rat {
    Int num;
    Int den; /* > 0 */
};
using nf_elem = std::vector<rat>; /* power-basis coordinates */

/* residue field at a ramified prime together with the images of the
   torsion generator and the fundamental units, supplied with the profile */
struct ramified_residue {
    Int ell;
    fp_poly poly;                     /* monic irreducible mod ell */
    std::vector<fp_poly> unit_images; /* torsion generator first */
};

struct number_field_profile {
    std::string label;
    poly_z defining; /* monic */
    unsigned degree = 0;
    unsigned r1 = 0;
    unsigned r2 = 0;
    Int class_number = 1;
    std::vector<Int> class_group; /* invariant factors, may be empty */
    unsigned torsion_order = 2;
    nf_elem torsion_generator;
    std::vector<nf_elem> fundamental_units;
    std::vector<ramified_residue> ramified;

    unsigned unit_rank() const { return r1 + r2 - 1; }
};

void require_valid_profile(const number_field_profile& F);

struct prime_split_part {
    unsigned e = 1;
    unsigned f = 1;
    bool operator==(const prime_split_part& o) const {
        return e == o.e && f == o.f;
    }
};

struct ell_splitting {
    std::vector<prime_split_part> primes; /* sorted by (f, e) */
    bool index_caveat = false; /* power basis not certified maximal at ell */
};

ell_splitting splitting_data(const number_field_profile& F, const Int& ell);

/* monic integral polynomial whose roots are the p orbit sums of an ell-th
   root of unity under the index-p subgroup of the multiplicative group
   mod ell; defines the degree-p subfield of the ell-th cyclotomic field */
poly_z gaussian_period_subfield(const Int& ell, const Int& p);

/* thrown when the resultant of f(y) and g(x - y) has no irreducible factor
   of degree deg f * deg g; carries the full factorization instead */
struct compositum_error : arith_error {
    std::vector<std::pair<poly_z, unsigned>> factors;
    compositum_error(const char* msg,
                     std::vector<std::pair<poly_z, unsigned>> fs)
        : arith_error(msg), factors(std::move(fs)) {}
};

poly_z compositum(const poly_z& f, const poly_z& g);

/* ell2 generates the index-p power classes mod ell nontrivially:
   ell2^((ell-1)/p) != 1 mod ell, so ell2 stays prime in the degree-p
   cyclotomic subfield */
bool inert_in_cyclotomic_M(const Int& ell, const Int& p, const Int& ell2);

struct prime_datum {
    Int ell;
    unsigned f = 1;
    unsigned e = 1;
};

/* ord_p of the ray class number of F for the squarefree modulus given by
   the listed primes: ord_p(class number) plus the sum of ord_p(ell^f - 1)
   minus ord_p of the unit image index, with the index computed from
   discrete logs of unit images in the residue field p-parts */
unsigned tame_ray_p_part(const number_field_profile& F,
                         const std::vector<prime_datum>& primes, const Int& p);

} // namespace tamegal
