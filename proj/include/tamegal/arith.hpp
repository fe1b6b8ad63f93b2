#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tamegal {

using Int = mpz_class;
using int_matrix = std::vector<std::vector<Int>>;

/* recoverable computation failures (budget exhaustion, bad input data) */
struct arith_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Kronecker symbol (a|n), total for all n != 0 */
int kronecker_symbol(const Int& a, const Int& n);

bool is_prime(const Int& n);

/* prime factorization of n >= 1, sorted by prime; 1 -> {}.
   trial division below 10^6, then Pollard rho (Brent) with an
   iteration budget; throws arith_error if the budget is exhausted. */
std::vector<std::pair<Int, unsigned>> factorize(const Int& n, unsigned long rho_budget = 1u << 26);

struct snf_result {
    std::vector<Int> invariants; /* d1 | d2 | ..., zeros trailing */
    int_matrix left;             /* unimodular, left * m * right = diag(invariants) */
    int_matrix right;
};

snf_result smith_normal_form(int_matrix m);

/* residue mod product of pairwise-coprime moduli; throws arith_error otherwise */
Int crt_combine(const std::vector<std::pair<Int, Int>>& residues_mods);

Int powmod(const Int& base, const Int& exp, const Int& mod);
Int invmod(const Int& a, const Int& mod);
Int gcd(const Int& a, const Int& b);

/* largest k with p^k | n, for n != 0 */
unsigned ord_p(const Int& n, const Int& p);

int_matrix identity_matrix(size_t n);
int_matrix matrix_mul(const int_matrix& a, const int_matrix& b);
Int matrix_det(int_matrix m);
/* exact inverse of a matrix with det = +-1 */
int_matrix unimodular_inverse(const int_matrix& m);

} // namespace tamegal
