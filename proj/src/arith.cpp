#include "tamegal/arith.hpp"

#include <algorithm>
#include <cstdlib>

namespace tamegal {

int kronecker_symbol(const Int& a, const Int& n) {
    if (n == 0) throw arith_error("kronecker_symbol: n must be nonzero");
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

Int powmod(const Int& base, const Int& exp, const Int& mod) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

Int invmod(const Int& a, const Int& mod) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw arith_error("invmod: not invertible");
    return r;
}

Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

unsigned ord_p(const Int& n, const Int& p) {
    if (n == 0) throw arith_error("ord_p: n must be nonzero");
    Int m = abs(n);
    unsigned k = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        m /= p;
        ++k;
    }
    return k;
}

namespace {

/* Brent cycle-finding variant of Pollard rho; returns a nontrivial factor
   of composite odd n, or 0 if the iteration budget runs out */
Int rho_brent(const Int& n, unsigned long& budget, gmp_randclass& rng) {
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        Int r;
        mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
        return r;
    }
    while (budget > 0) {
        Int y = rng.get_z_range(n - 3) + 1;
        Int c = rng.get_z_range(n - 1) + 1;
        Int m = 128, g = 1, q = 1, x, ys;
        unsigned long r = 1;
        while (g == 1 && budget > 0) {
            x = y;
            for (unsigned long i = 0; i < r && budget > 0; ++i) {
                y = (y * y + c) % n;
                --budget;
            }
            Int k = 0;
            while (k < r && g == 1 && budget > 0) {
                ys = y;
                Int lim = Int(r) - k;
                if (m < lim) lim = m;
                for (Int i = 0; i < lim && budget > 0; ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                    --budget;
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            /* backtrack to the first collision */
            do {
                ys = (ys * ys + c) % n;
                g = gcd(abs(x - ys), n);
            } while (g == 1);
        }
        if (g != n && g > 1) return g;
    }
    return 0;
}

void factor_into(const Int& n, std::vector<Int>& primes, unsigned long& budget,
                 gmp_randclass& rng) {
    if (n == 1) return;
    if (is_prime(n)) {
        primes.push_back(n);
        return;
    }
    Int d = rho_brent(n, budget, rng);
    if (d == 0) throw arith_error("factorize: iteration budget exhausted on " + n.get_str());
    factor_into(d, primes, budget, rng);
    factor_into(n / d, primes, budget, rng);
}

} // namespace

std::vector<std::pair<Int, unsigned>> factorize(const Int& n, unsigned long rho_budget) {
    if (n < 1) throw arith_error("factorize: n must be >= 1");
    std::vector<std::pair<Int, unsigned>> out;
    Int m = n;
    for (unsigned long p = 2; p < 1000000ul && Int(p) * p <= m; p = (p == 2 ? 3 : p + 2)) {
        if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) continue;
        unsigned e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            m /= p;
            ++e;
        }
        out.emplace_back(Int(p), e);
    }
    if (m > 1) {
        if (m < Int(1000000ul) * 1000000ul || is_prime(m)) {
            out.emplace_back(m, 1);
        } else {
            gmp_randclass rng(gmp_randinit_default);
            rng.seed(0xda7a5eedul);
            std::vector<Int> primes;
            factor_into(m, primes, rho_budget, rng);
            std::sort(primes.begin(), primes.end());
            for (size_t i = 0; i < primes.size();) {
                size_t j = i;
                while (j < primes.size() && primes[j] == primes[i]) ++j;
                out.emplace_back(primes[i], unsigned(j - i));
                i = j;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int_matrix identity_matrix(size_t n) {
    int_matrix m(n, std::vector<Int>(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

int_matrix matrix_mul(const int_matrix& a, const int_matrix& b) {
    size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
    int_matrix out(r, std::vector<Int>(c, 0));
    for (size_t i = 0; i < r; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (size_t j = 0; j < c; ++j) out[i][j] += a[i][t] * b[t][j];
        }
    return out;
}

Int matrix_det(int_matrix m) {
    /* Bareiss fraction-free elimination */
    size_t n = m.size();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t s = k + 1;
            while (s < n && m[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(m[k], m[s]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

int_matrix unimodular_inverse(const int_matrix& m) {
    size_t n = m.size();
    Int d = matrix_det(m);
    if (abs(d) != 1) throw arith_error("unimodular_inverse: determinant not +-1");
    /* adjugate via cofactors */
    int_matrix inv(n, std::vector<Int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            int_matrix minor;
            for (size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                std::vector<Int> row;
                for (size_t c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            Int cf = matrix_det(minor);
            inv[j][i] = ((i + j) % 2 == 0 ? cf : -cf) * d;
        }
    return inv;
}

namespace {

void row_swap(int_matrix& m, int_matrix& u, size_t i, size_t j) {
    std::swap(m[i], m[j]);
    std::swap(u[i], u[j]);
}

void col_swap(int_matrix& m, int_matrix& v, size_t i, size_t j) {
    for (auto& row : m) std::swap(row[i], row[j]);
    for (auto& row : v) std::swap(row[i], row[j]);
}

void row_addmul(int_matrix& m, int_matrix& u, size_t dst, size_t src, const Int& q) {
    size_t c = m[0].size(), n = u[0].size();
    for (size_t j = 0; j < c; ++j) m[dst][j] += q * m[src][j];
    for (size_t j = 0; j < n; ++j) u[dst][j] += q * u[src][j];
}

void col_addmul(int_matrix& m, int_matrix& v, size_t dst, size_t src, const Int& q) {
    for (auto& row : m) row[dst] += q * row[src];
    for (auto& row : v) row[dst] += q * row[src];
}

void row_negate(int_matrix& m, int_matrix& u, size_t i) {
    for (auto& x : m[i]) x = -x;
    for (auto& x : u[i]) x = -x;
}

} // namespace

snf_result smith_normal_form(int_matrix m) {
    size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    snf_result res;
    res.left = identity_matrix(rows);
    res.right = identity_matrix(cols);
    size_t t = 0, dim = std::min(rows, cols);
    for (; t < dim; ++t) {
        /* pivot: entry of minimal absolute value in the trailing submatrix */
        bool again = true;
        while (again) {
            size_t pi = t, pj = t;
            bool found = false;
            for (size_t i = t; i < rows; ++i)
                for (size_t j = t; j < cols; ++j)
                    if (m[i][j] != 0 && (!found || abs(m[i][j]) < abs(m[pi][pj]))) {
                        pi = i;
                        pj = j;
                        found = true;
                    }
            if (!found) goto diagonal_done;
            if (pi != t) row_swap(m, res.left, t, pi);
            if (pj != t) col_swap(m, res.right, t, pj);
            again = false;
            for (size_t i = t + 1; i < rows; ++i)
                if (m[i][t] != 0) {
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), m[i][t].get_mpz_t(), m[t][t].get_mpz_t());
                    row_addmul(m, res.left, i, t, -q);
                    if (m[i][t] != 0) again = true;
                }
            for (size_t j = t + 1; j < cols; ++j)
                if (m[t][j] != 0) {
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), m[t][j].get_mpz_t(), m[t][t].get_mpz_t());
                    col_addmul(m, res.right, j, t, -q);
                    if (m[t][j] != 0) again = true;
                }
            if (!again) {
                /* pivot must divide the whole trailing block */
                for (size_t i = t + 1; i < rows && !again; ++i)
                    for (size_t j = t + 1; j < cols && !again; ++j)
                        if (m[i][j] % m[t][t] != 0) {
                            row_addmul(m, res.left, t, i, 1);
                            again = true;
                        }
            }
        }
        if (m[t][t] < 0) row_negate(m, res.left, t);
    }
diagonal_done:
    res.invariants.assign(dim, 0);
    for (size_t i = 0; i < t; ++i) res.invariants[i] = m[i][i];
    return res;
}

Int crt_combine(const std::vector<std::pair<Int, Int>>& residues_mods) {
    Int x = 0, mod = 1;
    for (const auto& [r, m] : residues_mods) {
        if (m < 1) throw arith_error("crt_combine: modulus must be positive");
        Int g = gcd(mod, m);
        if (g != 1) throw arith_error("crt_combine: moduli not pairwise coprime");
        /* x' = x + mod * ((r - x)/1 * mod^-1 mod m) */
        Int t = ((r - x) % m + m) % m;
        t = t * invmod(mod % m, m) % m;
        x += mod * t;
        mod *= m;
        x %= mod;
        if (x < 0) x += mod;
    }
    return x;
}

} // namespace tamegal
