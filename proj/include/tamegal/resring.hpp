#pragma once

#include <vector>

#include "tamegal/quadfield.hpp"

namespace tamegal {

/* dense polynomial over F_ell, coefficients ascending, reduced to [0, ell) */
using fp_poly = std::vector<Int>;

int fp_deg(const fp_poly& a); /* -1 for the zero polynomial */
fp_poly fp_normalize(const Int& ell, fp_poly a);
fp_poly fp_add(const Int& ell, const fp_poly& a, const fp_poly& b);
fp_poly fp_sub(const Int& ell, const fp_poly& a, const fp_poly& b);
fp_poly fp_mul(const Int& ell, const fp_poly& a, const fp_poly& b);
fp_poly fp_monic(const Int& ell, fp_poly a);
fp_poly fp_rem(const Int& ell, fp_poly a, const fp_poly& b);
fp_poly fp_quot(const Int& ell, fp_poly a, const fp_poly& b);
fp_poly fp_gcd(const Int& ell, fp_poly a, fp_poly b); /* monic */
fp_poly fp_powmod(const Int& ell, fp_poly base, Int e, const fp_poly& mod);
fp_poly fp_derivative(const Int& ell, const fp_poly& a);
Int fp_eval(const Int& ell, const fp_poly& a, const Int& x);
bool fp_is_irreducible(const Int& ell, const fp_poly& a);

/* F_{ell^f} presented as F_ell[x] / (poly), poly monic irreducible */
struct finite_field {
    Int ell;
    int f = 0;
    fp_poly poly;
};

using ff_elem = fp_poly; /* degree < f */

finite_field make_finite_field(const Int& ell, fp_poly poly);
ff_elem ff_reduce(const finite_field& F, const fp_poly& a);
ff_elem ff_one(const finite_field& F);
ff_elem ff_gen(const finite_field& F); /* class of x */
bool ff_is_zero(const ff_elem& a);
bool ff_is_one(const ff_elem& a);
ff_elem ff_mul(const finite_field& F, const ff_elem& a, const ff_elem& b);
ff_elem ff_pow(const finite_field& F, ff_elem a, Int e);
Int ff_unit_order(const finite_field& F); /* ell^f - 1 */

/* exact multiplicative order of x via the factored unit-group order */
Int finite_field_order_decompose(const finite_field& F, const ff_elem& x);

/* multiplicative generator by seeded sampling with order certification */
ff_elem ff_generator(const finite_field& F, unsigned long seed = 0x5eedbeef);

/* one prime-power factor q^n of a modulus: unit group G1 x G2 with
   |G1| = ell^f - 1 cyclic and |G2| = ell^(f(n-1)) an ell-group */
struct residue_component {
    ideal_rep q;
    int n = 1;
    ideal_rep qn; /* q^n */
    Int ell;
    unsigned f = 1;
    unsigned e = 1;
    Int g1_order;
    Int g2_order;
    Int order; /* g1_order * g2_order */
};

/* rejects non-prime q and the ramified even case with n > 1 */
residue_component residue_unit_structure(const field_k& K, const ideal_rep& q,
                                         int n);

elt_k element_powmod(const field_k& K, const ideal_rep& m, elt_k base, Int e);

/* exact order of an invertible residue x mod comp.qn */
Int residue_element_order(const field_k& K, const residue_component& comp,
                          const elt_k& x);

/* generator when the component unit group is cyclic; seeded sampling with
   order certification, throws if no element of full order is found */
elt_k component_generator(const field_k& K, const residue_component& comp,
                          unsigned long seed = 0x5eedbeef);

/* order of the p-primary part of x inside a group of the given order */
Int p_primary_order(const field_k& K, const ideal_rep& m, const elt_k& x,
                    const Int& group_order, const Int& p);
Int p_primary_order(const finite_field& F, const ff_elem& x, const Int& p);
/* x^(group_order / p^v): projection onto the p-primary part */
elt_k p_primary_projection(const field_k& K, const ideal_rep& m, const elt_k& x,
                           const Int& group_order, const Int& p);

struct modulus_part {
    ideal_rep q;
    int n = 1;
};
using modulus_t = std::vector<modulus_part>;

/* product ideal of the modulus; (1) for the empty modulus */
ideal_rep modulus_ideal(const field_k& K, const modulus_t& m);

/* [E_K : E_K(m)]: order of the image of the unit group mod m */
Int unit_image_index(const field_k& K, const modulus_t& m);

/* element congruent to x mod i and to y mod j, for coprime i, j */
elt_k crt_element(const field_k& K, const ideal_rep& i, const elt_k& x,
                  const ideal_rep& j, const elt_k& y);

} // namespace tamegal
