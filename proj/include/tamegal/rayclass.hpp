#pragma once

#include "tamegal/resring.hpp"

namespace tamegal {

/* finite abelian group as invariant factors d_1 | d_2 | ..., all > 1 */
struct fin_ab_group {
    Int order = 1;
    std::vector<Int> invariants;
};

/* ray class group presented on residue-unit generators of the cyclic
   prime-power components and prime-ideal lifts of class group generators */
struct ray_class_group {
    modulus_t mod;
    ideal_rep mod_product{1, 0, 1};
    std::vector<residue_component> comps;
    std::vector<elt_k> comp_gens;          /* one generator per component */
    class_group_data cg;
    std::vector<ideal_rep> class_reps;     /* prime reps of cg generators */
    Int order = 1;
    std::vector<Int> invariants;           /* > 1, ascending divisibility */
    int_matrix to_new; /* exponent transform: original gens -> invariants */
};

/* |Cl_K(m)| = h_K * prod |(O/q^n)^x| / [E : E(m)] */
Int ray_class_number(const field_k& K, const modulus_t& m);

ray_class_group ray_class_structure(const field_k& K, const modulus_t& m);

/* (ord_p of the ray class number, p-rank of the ray class group);
   the rank is computed on the radical modulus, where it is stable */
std::pair<unsigned, unsigned> ray_p_data(const field_k& K, const modulus_t& m,
                                         const Int& p);

/* exponent vector of the class of I on G.invariants; I coprime to the
   modulus; functorial under ideal multiplication */
std::vector<Int> artin_class(const field_k& K, const ray_class_group& G,
                             const ideal_rep& I);

/* independent check: group generated by classes of primes of norm below
   the bound, relations from elements congruent to 1 mod m, certified
   against the ray class number; throws when the bound cannot close */
fin_ab_group oracle_ray_class(const field_k& K, const modulus_t& m,
                              const Int& norm_bound);

/* discrete log of x base g in the cyclic unit group mod the ideal */
Int dlog_cyclic(const field_k& K, const ideal_rep& mod, const elt_k& g,
                const elt_k& x, const Int& order);

} // namespace tamegal
