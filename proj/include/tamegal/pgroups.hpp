#pragma once

#include <functional>
#include <string>

#include "tamegal/quadfield.hpp"

namespace tamegal {

/* finite group on element indices 0..order-1 with a functional law */
struct group_realization {
    unsigned order = 0;
    unsigned identity = 0;
    std::vector<unsigned> generators;
    std::function<unsigned(unsigned, unsigned)> law;
};

group_realization cyclic_realization(unsigned m);
group_realization abelian_realization(const std::vector<unsigned>& factors);
/* unitriangular 3x3 over F_p: non-abelian of order p^3, exponent p for
   odd p */
group_realization heisenberg_realization(unsigned p);

/* x^e under the realization law */
unsigned realization_pow(const group_realization& G, unsigned x, const Int& e);

/* two-generator group of order p^n with a of order p^{n-1}, b of order p,
   and b^{-1} a b = a^{1 + p^{n-2}}, realized on pairs
   (i mod p^{n-1}, j mod p) with law
   (i1, j1) * (i2, j2) = (i1 + i2 * (1 + p^{n-2})^{j1}, j1 + j2) */
struct pgroup_presentation {
    Int p;
    unsigned n = 0;
    Int a_relator;    /* p^{n-1} */
    Int b_relator;    /* p */
    Int comm_relator; /* p^{n-2}: [a, b] = a^{p^{n-2}} */
    group_realization realization;
    unsigned a = 0; /* element index realizing a */
    unsigned b = 0;
};

pgroup_presentation modular_group(const Int& p, unsigned n);

std::string presentation_text(const pgroup_presentation& G);
std::string presentation_json(const pgroup_presentation& G);

/* invariant factors n_1, n_2, ... with n_{i+1} | n_i, all > 1; empty for
   the trivial group */
struct ab_group_shape {
    std::vector<Int> factors;
    bool operator==(const ab_group_shape& o) const {
        return factors == o.factors;
    }
};

struct group_invariant_data {
    unsigned order = 0;
    unsigned exponent = 0;
    std::vector<unsigned> center;  /* sorted element indices */
    std::vector<unsigned> derived; /* sorted element indices */
    ab_group_shape abelianization;
};

/* all by enumeration over the realization */
group_invariant_data group_invariants(const group_realization& G);

/* the quotient by the subgroup generated by p-th powers is abelian
   (fourth powers when p = 2) */
bool is_powerful(const group_realization& G, const Int& p);

/* multiplier of n_1 >= n_2 >= ... (divisibility chain):
   one copy of n_2, two of n_3, ..., k-1 of n_k */
ab_group_shape schur_multiplier_abelian(const ab_group_shape& shape);

/* d^2 / 4 >= r forces an infinite group */
bool golod_shafarevich_infinite(const Int& d, const Int& r);

/* (exact generator rank, upper bound) for the tame group over an imaginary
   quadratic field: exact from the ray class p-rank at the squarefree
   modulus built on S, bound from the count of primes with p | N(q) - 1
   plus the class group p-rank (the local and global unit-root terms
   coincide for imaginary quadratic fields and cancel) */
std::pair<unsigned, unsigned> generator_rank(const field_k& K,
                                             const std::vector<ideal_rep>& S,
                                             const Int& p);

} // namespace tamegal
