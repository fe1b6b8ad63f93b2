#pragma once

#include <map>
#include <optional>
#include <vector>

#include "tamegal/arith.hpp"

namespace tamegal {

/* imaginary quadratic field Q(sqrt(d)), d < 0 squarefree; O = Z[omega] */
struct field_k {
    long d = 0;
    Int disc;             /* d if d = 1 mod 4, else 4d */
    Int omega_trace;      /* 1 or 0 */
    Int omega_norm;       /* (1-d)/4 or -d */
    unsigned unit_torsion = 2; /* 6 iff d = -3, 4 iff d = -1, else 2 */

    bool has_zeta(unsigned p) const { return unit_torsion % p == 0; }
};

field_k make_field(long d);

/* integral ideal as the lattice [a, b + c*omega], c | a, c | b, 0 <= b < a;
   norm = a*c; the zero ideal is not representable */
struct ideal_rep {
    Int a, b, c;
    bool operator==(const ideal_rep& o) const {
        return a == o.a && b == o.b && c == o.c;
    }
    bool operator<(const ideal_rep& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

/* element u + v*omega */
struct elt_k {
    Int u, v;
    bool operator==(const elt_k& o) const { return u == o.u && v == o.v; }
};

Int element_norm(const field_k& K, const elt_k& x);
elt_k element_mul(const field_k& K, const elt_k& x, const elt_k& y);
elt_k element_conj(const field_k& K, const elt_k& x);

ideal_rep principal_ideal(const field_k& K, const elt_k& x);
ideal_rep ideal_from_generators(const field_k& K, const std::vector<elt_k>& gens);
ideal_rep ideal_mul(const field_k& K, const ideal_rep& i, const ideal_rep& j);
ideal_rep ideal_add(const field_k& K, const ideal_rep& i, const ideal_rep& j);
Int ideal_norm(const ideal_rep& i);
bool ideal_coprime(const field_k& K, const ideal_rep& i, const ideal_rep& j);
bool ideal_contains(const field_k& K, const ideal_rep& i, const elt_k& x);
/* canonical coset representative of x modulo the lattice of i */
elt_k reduce_mod_ideal(const field_k& K, const ideal_rep& i, const elt_k& x);

enum class split_type { split, inert, ramified };

struct prime_splitting {
    split_type type;
    std::vector<ideal_rep> primes; /* 2 for split, 1 otherwise */
    unsigned f;                    /* residue degree of each prime */
    unsigned e;                    /* ramification index */
};

/* ell must be a rational prime */
prime_splitting split_prime(const field_k& K, const Int& ell);

/* binary quadratic form a x^2 + b xy + c y^2, positive definite, disc = K.disc */
struct qform {
    Int a, b, c;
    bool operator==(const qform& o) const {
        return a == o.a && b == o.b && c == o.c;
    }
    bool operator<(const qform& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

qform reduce_form(qform f);
qform compose_forms(const field_k& K, const qform& f, const qform& g);
qform form_of_ideal(const field_k& K, const ideal_rep& i);
ideal_rep ideal_of_form(const field_k& K, const qform& f);

struct class_group_data {
    Int h;
    std::vector<Int> invariants;    /* ascending divisibility, empty iff h = 1 */
    std::vector<qform> generators;  /* one per invariant */
    std::vector<qform> all_forms;   /* the h reduced forms */
    std::map<qform, std::vector<Int>> dlog; /* reduced form -> exponents */
};

class_group_data class_group(const field_k& K);

/* exponent vector of the class of i w.r.t. cg.generators;
   requires i coprime to the discriminant */
std::vector<Int> ideal_class(const field_k& K, const class_group_data& cg,
                             const ideal_rep& i);

/* generator of a principal ideal; throws arith_error if i is not principal */
elt_k principal_generator(const field_k& K, const ideal_rep& i);

} // namespace tamegal
