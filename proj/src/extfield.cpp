#include "tamegal/extfield.hpp"

#include <algorithm>
#include <map>

namespace tamegal {

namespace {

template <typename P>
bool poly_less(const P& a, const P& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

template <typename P>
void sort_factors(std::vector<std::pair<P, unsigned>>& fs) {
    std::sort(fs.begin(), fs.end(), [](const auto& x, const auto& y) {
        if (x.first.size() != y.first.size() || x.first != y.first)
            return poly_less(x.first, y.first);
        return x.second < y.second;
    });
}

} // namespace

int pz_deg(const poly_z& a) { return static_cast<int>(a.size()) - 1; }

poly_z pz_normalize(poly_z a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

bool pz_is_monic(const poly_z& a) { return !a.empty() && a.back() == 1; }

poly_z pz_add(const poly_z& a, const poly_z& b) {
    poly_z r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return pz_normalize(std::move(r));
}

poly_z pz_sub(const poly_z& a, const poly_z& b) {
    poly_z r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return pz_normalize(std::move(r));
}

poly_z pz_mul(const poly_z& a, const poly_z& b) {
    if (a.empty() || b.empty()) return {};
    poly_z r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return pz_normalize(std::move(r));
}

poly_z pz_derivative(const poly_z& a) {
    poly_z r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(Int(i) * a[i]);
    return pz_normalize(std::move(r));
}

Int pz_eval(const poly_z& a, const Int& x) {
    Int r = 0;
    for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

Int pz_content(const poly_z& a) {
    Int c = 0;
    for (auto& x : a) c = gcd(c, x);
    return c;
}

poly_z pz_primitive(const poly_z& a0) {
    poly_z a = pz_normalize(a0);
    if (a.empty()) return a;
    Int c = pz_content(a);
    if (a.back() < 0) c = -c;
    for (auto& x : a) x /= c;
    return a;
}

poly_z pz_divexact(const poly_z& a0, const poly_z& b0) {
    poly_z a = pz_normalize(a0), b = pz_normalize(b0);
    if (b.empty()) throw arith_error("polynomial division by zero");
    if (a.empty()) return {};
    if (a.size() < b.size()) throw arith_error("inexact polynomial division");
    poly_z q(a.size() - b.size() + 1, 0);
    while (a.size() >= b.size() && !a.empty()) {
        if (a.back() % b.back() != 0)
            throw arith_error("inexact polynomial division");
        Int c = a.back() / b.back();
        size_t shift = a.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        a = pz_normalize(std::move(a));
        if (a.empty()) break;
    }
    if (!a.empty()) throw arith_error("inexact polynomial division");
    return pz_normalize(std::move(q));
}

namespace {

poly_z pz_pseudo_rem(poly_z a, const poly_z& b) {
    const Int& lb = b.back();
    size_t db = b.size();
    while (a.size() >= db && !a.empty()) {
        Int la = a.back();
        size_t shift = a.size() - db;
        for (auto& c : a) c *= lb;
        for (size_t i = 0; i < db; ++i) a[shift + i] -= la * b[i];
        a = pz_normalize(std::move(a));
    }
    return a;
}

} // namespace

poly_z pz_gcd(const poly_z& a0, const poly_z& b0) {
    poly_z a = pz_primitive(a0), b = pz_primitive(b0);
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        poly_z r = pz_pseudo_rem(a, b);
        a = std::move(b);
        b = pz_primitive(r);
    }
    return a;
}

Int pz_resultant(const poly_z& a0, const poly_z& b0) {
    poly_z a = pz_normalize(a0), b = pz_normalize(b0);
    if (a.empty() || b.empty()) return 0;
    int m = pz_deg(a), n = pz_deg(b);
    Int r;
    if (m == 0) {
        mpz_pow_ui(r.get_mpz_t(), a[0].get_mpz_t(), n);
        return r;
    }
    if (n == 0) {
        mpz_pow_ui(r.get_mpz_t(), b[0].get_mpz_t(), m);
        return r;
    }
    size_t s = static_cast<size_t>(m + n);
    int_matrix S(s, std::vector<Int>(s, 0));
    for (int row = 0; row < n; ++row)
        for (int i = 0; i <= m; ++i) S[row][row + i] = a[m - i];
    for (int row = 0; row < m; ++row)
        for (int j = 0; j <= n; ++j) S[n + row][row + j] = b[n - j];
    return matrix_det(std::move(S));
}

Int pz_disc(const poly_z& a0) {
    poly_z a = pz_normalize(a0);
    int n = pz_deg(a);
    if (n < 1) throw arith_error("discriminant needs degree at least 1");
    Int res = pz_resultant(a, pz_derivative(a));
    if (res % a.back() != 0) throw arith_error("discriminant division failed");
    Int d = res / a.back();
    if ((static_cast<long>(n) * (n - 1) / 2) % 2 == 1) d = -d;
    return d;
}

fp_poly pz_mod(const poly_z& a, const Int& ell) {
    fp_poly r;
    r.reserve(a.size());
    for (auto& c : a) {
        Int v = c % ell;
        if (v < 0) v += ell;
        r.push_back(v);
    }
    return fp_normalize(ell, std::move(r));
}

/* ---- factorization mod ell ---- */

namespace {

void squarefree_parts(const Int& ell, const fp_poly& f, unsigned mult,
                      std::vector<std::pair<fp_poly, unsigned>>& out) {
    fp_poly d = fp_derivative(ell, f);
    auto ell_th_root = [&](const fp_poly& a) {
        /* a = g(x^ell); the coefficientwise root is the identity on the
           prime field */
        if (!ell.fits_ulong_p()) throw arith_error("characteristic too large");
        unsigned long lu = ell.get_ui();
        fp_poly g;
        for (size_t i = 0; i < a.size(); i += lu) g.push_back(a[i]);
        return g;
    };
    if (fp_deg(d) < 0) {
        if (fp_deg(f) <= 0) return;
        squarefree_parts(ell, ell_th_root(f), mult * ell.get_ui(), out);
        return;
    }
    fp_poly c = fp_gcd(ell, f, d);
    fp_poly w = fp_quot(ell, f, c);
    unsigned i = 1;
    while (fp_deg(w) > 0) {
        fp_poly y = fp_gcd(ell, w, c);
        fp_poly z = fp_quot(ell, w, y);
        if (fp_deg(z) > 0) out.push_back({z, i * mult});
        ++i;
        w = std::move(y);
        c = fp_quot(ell, c, w);
    }
    if (fp_deg(c) > 0)
        squarefree_parts(ell, ell_th_root(c), mult * ell.get_ui(), out);
}

/* (product of the degree-d irreducible factors, d) for squarefree monic f */
std::vector<std::pair<fp_poly, unsigned>> distinct_degree(const Int& ell,
                                                          fp_poly f) {
    std::vector<std::pair<fp_poly, unsigned>> out;
    fp_poly h = fp_rem(ell, fp_poly{0, 1}, f);
    unsigned d = 0;
    while (fp_deg(f) > 0 && 2 * (d + 1) <= static_cast<unsigned>(fp_deg(f))) {
        ++d;
        h = fp_powmod(ell, h, ell, f);
        fp_poly g = fp_gcd(ell, fp_sub(ell, h, fp_poly{0, 1}), f);
        if (fp_deg(g) > 0) {
            out.push_back({g, d});
            f = fp_quot(ell, f, g);
            h = fp_rem(ell, h, f);
        }
    }
    if (fp_deg(f) > 0) out.push_back({f, static_cast<unsigned>(fp_deg(f))});
    return out;
}

void equal_degree(const Int& ell, const fp_poly& g, unsigned d,
                  gmp_randclass& rng, std::vector<fp_poly>& out) {
    if (static_cast<unsigned>(fp_deg(g)) == d) {
        out.push_back(fp_monic(ell, g));
        return;
    }
    if (d == 1 && ell < 4096) {
        fp_poly rest = g;
        for (Int t = 0; t < ell && fp_deg(rest) > 0; ++t) {
            if (fp_eval(ell, rest, t) == 0) {
                fp_poly lin = {(ell - t) % ell, 1};
                out.push_back(lin);
                rest = fp_quot(ell, rest, lin);
            }
        }
        if (fp_deg(rest) != 0) throw arith_error("root scan failed");
        return;
    }
    if (ell == 2)
        throw arith_error("equal-degree splitting needs odd characteristic");
    Int qd;
    mpz_pow_ui(qd.get_mpz_t(), ell.get_mpz_t(), d);
    Int e = (qd - 1) / 2;
    for (int tries = 0; tries < 400; ++tries) {
        fp_poly a;
        for (int i = 0; i < fp_deg(g); ++i) a.push_back(rng.get_z_range(ell));
        a = fp_normalize(ell, std::move(a));
        if (fp_deg(a) < 1) continue;
        fp_poly c = fp_gcd(ell, a, g);
        if (fp_deg(c) == 0) {
            fp_poly b = fp_powmod(ell, a, e, g);
            c = fp_gcd(ell, fp_sub(ell, b, fp_poly{1}), g);
        }
        if (fp_deg(c) > 0 && fp_deg(c) < fp_deg(g)) {
            equal_degree(ell, c, d, rng, out);
            equal_degree(ell, fp_quot(ell, g, c), d, rng, out);
            return;
        }
    }
    throw arith_error("equal-degree splitting budget exhausted");
}

} // namespace

std::vector<std::pair<fp_poly, unsigned>> poly_factor_mod(const poly_z& f,
                                                          const Int& ell,
                                                          unsigned long seed) {
    if (!is_prime(ell)) throw arith_error("factorization modulus not prime");
    poly_z fn = pz_normalize(f);
    if (fn.empty()) throw arith_error("cannot factor the zero polynomial");
    if (fn.back() % ell == 0)
        throw arith_error("leading coefficient vanishes mod ell");
    fp_poly fb = fp_monic(ell, pz_mod(fn, ell));
    if (fp_deg(fb) < 1) return {};
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed);
    std::vector<std::pair<fp_poly, unsigned>> parts;
    squarefree_parts(ell, fb, 1, parts);
    std::vector<std::pair<fp_poly, unsigned>> out;
    for (auto& [sq, mult] : parts)
        for (auto& [bucket, d] : distinct_degree(ell, sq)) {
            std::vector<fp_poly> irr;
            equal_degree(ell, bucket, d, rng, irr);
            for (auto& h : irr) out.push_back({h, mult});
        }
    sort_factors(out);
    fp_poly prod = {1};
    for (auto& [h, m] : out)
        for (unsigned i = 0; i < m; ++i) prod = fp_mul(ell, prod, h);
    if (prod != fb) throw arith_error("factorization check failed");
    return out;
}

bool power_basis_maximal_at(const poly_z& f0, const Int& ell) {
    poly_z f = pz_normalize(f0);
    if (pz_deg(f) < 1 || !pz_is_monic(f)) return false;
    auto facs = poly_factor_mod(f, ell);
    fp_poly rad = {1}, cof = {1};
    for (auto& [g, m] : facs) {
        rad = fp_mul(ell, rad, g);
        for (unsigned i = 1; i < m; ++i) cof = fp_mul(ell, cof, g);
    }
    poly_z lift_prod = pz_mul(poly_z(rad.begin(), rad.end()),
                              poly_z(cof.begin(), cof.end()));
    poly_z t = pz_sub(lift_prod, f);
    for (auto& c : t) {
        if (c % ell != 0) throw arith_error("radical lift mismatch");
        c /= ell;
    }
    fp_poly d = fp_gcd(ell, pz_mod(t, ell), fp_gcd(ell, rad, cof));
    return fp_deg(d) == 0;
}

/* ---- factorization over the rationals ---- */

namespace {

/* arithmetic mod a prime power M, divisor monic */
poly_z pm_norm(const Int& M, poly_z a) {
    for (auto& c : a) {
        c %= M;
        if (c < 0) c += M;
    }
    return pz_normalize(std::move(a));
}

poly_z pm_mul(const Int& M, const poly_z& a, const poly_z& b) {
    return pm_norm(M, pz_mul(a, b));
}

std::pair<poly_z, poly_z> pm_divrem_monic(const Int& M, poly_z a,
                                          const poly_z& b) {
    a = pm_norm(M, std::move(a));
    if (a.size() < b.size()) return {{}, a};
    poly_z q(a.size() - b.size() + 1, 0);
    while (a.size() >= b.size() && !a.empty()) {
        Int c = a.back();
        size_t shift = a.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) {
            a[shift + i] -= c * b[i];
            a[shift + i] %= M;
            if (a[shift + i] < 0) a[shift + i] += M;
        }
        a = pz_normalize(std::move(a));
    }
    return {pz_normalize(std::move(q)), a};
}

void fp_xgcd(const Int& ell, fp_poly a, fp_poly b, fp_poly& g, fp_poly& s,
             fp_poly& t) {
    fp_poly s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    while (fp_deg(b) >= 0) {
        fp_poly q = fp_quot(ell, a, b);
        fp_poly r = fp_rem(ell, a, b);
        a = std::move(b);
        b = std::move(r);
        fp_poly s2 = fp_sub(ell, s0, fp_mul(ell, q, s1));
        fp_poly t2 = fp_sub(ell, t0, fp_mul(ell, q, t1));
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    Int inv = invmod(a.back(), ell);
    auto scale = [&](fp_poly& v) {
        for (auto& c : v) c = c * inv % ell;
        v = fp_normalize(ell, std::move(v));
    };
    scale(a);
    scale(s0);
    scale(t0);
    g = std::move(a);
    s = std::move(s0);
    t = std::move(t0);
}

/* one quadratic step: u = G*H and s*G + t*H = 1 advance from mod m to m^2 */
void hensel_step(const poly_z& u, const Int& m, poly_z& G, poly_z& H,
                 poly_z& s, poly_z& t) {
    Int m2 = m * m;
    poly_z e = pm_norm(m2, pz_sub(pm_norm(m2, u), pz_mul(G, H)));
    auto [q, r] = pm_divrem_monic(m2, pm_mul(m2, s, e), H);
    poly_z Gs = pm_norm(m2, pz_add(pz_add(G, pm_mul(m2, t, e)), pz_mul(q, G)));
    poly_z Hs = pm_norm(m2, pz_add(H, r));
    poly_z b = pm_norm(
        m2, pz_sub(pz_add(pm_mul(m2, s, Gs), pm_mul(m2, t, Hs)), poly_z{1}));
    auto [c, d] = pm_divrem_monic(m2, pm_mul(m2, s, b), Hs);
    s = pm_norm(m2, pz_sub(s, d));
    t = pm_norm(m2, pz_sub(pz_sub(t, pm_mul(m2, t, b)), pz_mul(c, Gs)));
    G = std::move(Gs);
    H = std::move(Hs);
}

/* lift u = lead(u) * prod facs[lo..hi) from mod ell to mod M, M a square
   ladder power of ell; returns the monic lifted factors */
std::vector<poly_z> lift_split(const poly_z& u,
                               const std::vector<fp_poly>& facs, size_t lo,
                               size_t hi, const Int& ell, const Int& M) {
    if (hi - lo == 1) {
        poly_z g = pm_norm(M, u);
        Int inv = invmod(g.back(), M);
        for (auto& c : g) c = c * inv % M;
        return {pz_normalize(std::move(g))};
    }
    size_t mid = lo + (hi - lo) / 2;
    Int lc = u.back() % ell;
    if (lc < 0) lc += ell;
    fp_poly A = {lc};
    for (size_t i = lo; i < mid; ++i) A = fp_mul(ell, A, facs[i]);
    fp_poly B = {1};
    for (size_t i = mid; i < hi; ++i) B = fp_mul(ell, B, facs[i]);
    fp_poly g, s, t;
    fp_xgcd(ell, A, B, g, s, t);
    if (fp_deg(g) != 0) throw arith_error("lift factors not coprime");
    poly_z G(A.begin(), A.end()), H(B.begin(), B.end());
    poly_z S(s.begin(), s.end()), T(t.begin(), t.end());
    Int m = ell;
    while (m < M) {
        hensel_step(u, m, G, H, S, T);
        m *= m;
    }
    auto left = lift_split(G, facs, lo, mid, ell, M);
    auto right = lift_split(H, facs, mid, hi, ell, M);
    left.insert(left.end(), right.begin(), right.end());
    return left;
}

bool pz_try_div(const poly_z& a, const poly_z& b, poly_z& q) {
    try {
        q = pz_divexact(a, b);
        return true;
    } catch (const arith_error&) {
        return false;
    }
}

/* irreducible factors of a primitive squarefree polynomial */
std::vector<poly_z> factor_squarefree(poly_z u) {
    std::vector<poly_z> out;
    if (pz_deg(u) < 1) return out;
    if (pz_deg(u) == 1) {
        out.push_back(pz_primitive(u));
        return out;
    }
    /* pick the admissible odd prime with the fewest modular factors */
    Int best_ell = 0;
    std::vector<std::pair<fp_poly, unsigned>> best;
    int seen = 0;
    for (Int ell = 3; ell < 10000 && seen < 5; ell += 2) {
        if (!is_prime(ell) || u.back() % ell == 0) continue;
        fp_poly fb = fp_monic(ell, pz_mod(u, ell));
        if (fp_deg(fp_gcd(ell, fb, fp_derivative(ell, fb))) != 0) continue;
        auto facs = poly_factor_mod(u, ell);
        ++seen;
        if (best.empty() || facs.size() < best.size()) {
            best = std::move(facs);
            best_ell = ell;
        }
        if (best.size() == 1) break;
    }
    if (best.empty()) throw arith_error("no admissible factorization prime");
    if (best.size() == 1) {
        out.push_back(pz_primitive(u));
        return out;
    }
    std::vector<fp_poly> facs;
    for (auto& [g, m] : best) facs.push_back(g);
    /* factor coefficient bound */
    Int sq = 0;
    for (auto& c : u) sq += c * c;
    Int bound = (sqrt(sq) + 1) * abs(u.back());
    bound <<= pz_deg(u);
    Int target = 2 * bound + 1;
    Int M = best_ell;
    while (M < target) M *= M;
    std::vector<poly_z> lifted = lift_split(u, facs, 0, facs.size(),
                                            best_ell, M);
    std::vector<size_t> alive(lifted.size());
    for (size_t i = 0; i < alive.size(); ++i) alive[i] = i;
    poly_z current = u;
    unsigned card = 1;
    while (2 * card <= alive.size()) {
        /* all card-subsets of alive in lexicographic order */
        std::vector<size_t> pick(card);
        for (size_t i = 0; i < card; ++i) pick[i] = i;
        bool found = false;
        while (true) {
            poly_z cand = {current.back()};
            for (size_t i : pick) cand = pm_mul(M, cand, lifted[alive[i]]);
            for (auto& c : cand)
                if (2 * c > M) c -= M;
            cand = pz_primitive(cand);
            poly_z quot;
            if (static_cast<size_t>(pz_deg(cand)) <
                    static_cast<size_t>(pz_deg(current)) &&
                pz_try_div(current, cand, quot)) {
                out.push_back(cand);
                current = std::move(quot);
                std::vector<size_t> rest;
                for (size_t i = 0; i < alive.size(); ++i)
                    if (std::find(pick.begin(), pick.end(), i) == pick.end())
                        rest.push_back(alive[i]);
                alive = std::move(rest);
                found = true;
                break;
            }
            /* advance the combination */
            size_t i = card;
            while (i-- > 0) {
                if (pick[i] != i + alive.size() - card) {
                    ++pick[i];
                    for (size_t j = i + 1; j < card; ++j)
                        pick[j] = pick[j - 1] + 1;
                    break;
                }
                if (i == 0) {
                    i = SIZE_MAX;
                    break;
                }
            }
            if (i == SIZE_MAX) break;
        }
        if (!found) ++card;
    }
    if (pz_deg(current) > 0) out.push_back(pz_primitive(current));
    return out;
}

} // namespace

std::vector<std::pair<poly_z, unsigned>> pz_factor(const poly_z& f0) {
    poly_z f = pz_primitive(f0);
    std::vector<std::pair<poly_z, unsigned>> out;
    if (pz_deg(f) < 1) return out;
    poly_z rad = pz_primitive(pz_divexact(f, pz_gcd(f, pz_derivative(f))));
    poly_z rest = f;
    for (auto& h : factor_squarefree(rad)) {
        unsigned k = 0;
        poly_z q;
        while (pz_try_div(rest, h, q)) {
            rest = std::move(q);
            ++k;
        }
        if (k == 0) throw arith_error("factor does not divide");
        out.push_back({h, k});
    }
    if (pz_deg(rest) != 0) throw arith_error("factorization incomplete");
    sort_factors(out);
    return out;
}

/* ---- profiles and splitting ---- */

void require_valid_profile(const number_field_profile& F) {
    poly_z d = pz_normalize(F.defining);
    if (pz_deg(d) < 1 || !pz_is_monic(d))
        throw arith_error("profile needs a monic defining polynomial");
    if (static_cast<unsigned>(pz_deg(d)) != F.degree)
        throw arith_error("profile degree mismatch");
    if (F.r1 + 2 * F.r2 != F.degree)
        throw arith_error("profile signature mismatch");
    if (!F.class_group.empty()) {
        Int prod = 1;
        for (auto& inv : F.class_group) prod *= inv;
        if (prod != F.class_number)
            throw arith_error("class group does not match the class number");
    }
    if (!F.fundamental_units.empty() &&
        F.fundamental_units.size() != F.unit_rank())
        throw arith_error("unit count does not match the rank");
    auto check_coords = [](const nf_elem& u) {
        for (auto& c : u)
            if (c.den <= 0)
                throw arith_error("coordinate with nonpositive denominator");
    };
    check_coords(F.torsion_generator);
    for (auto& u : F.fundamental_units) check_coords(u);
}

ell_splitting splitting_data(const number_field_profile& F, const Int& ell) {
    require_valid_profile(F);
    if (!is_prime(ell)) throw arith_error("splitting prime not prime");
    ell_splitting out;
    for (auto& [g, m] : poly_factor_mod(F.defining, ell))
        out.primes.push_back({m, static_cast<unsigned>(fp_deg(g))});
    std::sort(out.primes.begin(), out.primes.end(),
              [](const prime_split_part& x, const prime_split_part& y) {
                  return x.f != y.f ? x.f < y.f : x.e < y.e;
              });
    out.index_caveat = !power_basis_maximal_at(F.defining, ell);
    return out;
}

/* ---- cyclotomic period subfields ---- */

poly_z gaussian_period_subfield(const Int& ell, const Int& p) {
    if (!is_prime(ell) || !is_prime(p))
        throw arith_error("arguments must be prime");
    if ((ell - 1) % p != 0) throw arith_error("p does not divide ell - 1");
    if (ell > 100000) throw arith_error("cyclotomic modulus too large");
    unsigned long L = ell.get_ui(), P = p.get_ui();
    /* primitive root mod ell */
    auto fac = factorize(ell - 1);
    Int g = 0;
    for (Int c = 2; c < ell; ++c) {
        bool ok = true;
        for (auto& [r, k] : fac)
            if (powmod(c, (ell - 1) / r, ell) == 1) {
                ok = false;
                break;
            }
        if (ok) {
            g = c;
            break;
        }
    }
    /* period eta_j sums the root-of-unity exponents in coset j */
    using cyc = std::vector<Int>; /* coefficient of zeta^k, k in [0, ell) */
    std::vector<cyc> eta(P, cyc(L, 0));
    Int pw = 1;
    for (unsigned long j = 0; j < L - 1; ++j) {
        eta[j % P][pw.get_ui()] += 1;
        pw = pw * g % ell;
    }
    auto cyc_mul = [&](const cyc& a, const cyc& b) {
        cyc r(L, 0);
        for (unsigned long i = 0; i < L; ++i) {
            if (a[i] == 0) continue;
            for (unsigned long j = 0; j < L; ++j) {
                if (b[j] == 0) continue;
                r[(i + j) % L] += a[i] * b[j];
            }
        }
        return r;
    };
    /* expand the product of (X - eta_j) */
    std::vector<cyc> coef(P + 1, cyc(L, 0));
    coef[0][0] = 1;
    size_t deg = 0;
    for (unsigned long j = 0; j < P; ++j) {
        std::vector<cyc> next(deg + 2, cyc(L, 0));
        for (size_t k = 0; k <= deg; ++k) {
            next[k + 1] = coef[k];
            cyc prod = cyc_mul(eta[j], coef[k]);
            for (unsigned long i = 0; i < L; ++i) next[k][i] -= prod[i];
        }
        for (size_t k = 0; k <= deg + 1; ++k) coef[k] = std::move(next[k]);
        ++deg;
    }
    /* a rational value has equal coordinates at all nonzero exponents */
    poly_z out(P + 1);
    for (size_t k = 0; k <= P; ++k) {
        for (unsigned long i = 2; i < L; ++i)
            if (coef[k][i] != coef[k][1])
                throw arith_error("period coefficient not rational");
        out[k] = coef[k][0] - coef[k][1];
    }
    if (!pz_is_monic(out)) throw arith_error("period polynomial not monic");
    return out;
}

/* ---- composita ---- */

namespace {

poly_z poly_mat_det(std::vector<std::vector<poly_z>> M) {
    size_t n = M.size();
    int sign = 1;
    poly_z prev = {1};
    for (size_t k = 0; k + 1 < n; ++k) {
        if (M[k][k].empty()) {
            size_t sw = k;
            for (size_t i = k + 1; i < n; ++i)
                if (!M[i][k].empty()) {
                    sw = i;
                    break;
                }
            if (sw == k) return {};
            std::swap(M[k], M[sw]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                M[i][j] = pz_divexact(
                    pz_sub(pz_mul(M[k][k], M[i][j]), pz_mul(M[i][k], M[k][j])),
                    prev);
        prev = M[k][k];
    }
    poly_z det = M[n - 1][n - 1];
    if (sign < 0)
        for (auto& c : det) c = -c;
    return det;
}

} // namespace

poly_z compositum(const poly_z& f0, const poly_z& g0) {
    poly_z f = pz_normalize(f0), g = pz_normalize(g0);
    int m = pz_deg(f), n = pz_deg(g);
    if (m < 1 || n < 1)
        throw arith_error("compositum needs nonconstant polynomials");
    /* coefficients of g(x - y) as polynomials in x, indexed by powers of y */
    std::vector<poly_z> b(n + 1);
    std::vector<poly_z> cur = {poly_z{1}};
    for (int k = 0; k <= n; ++k) {
        if (g[k] != 0)
            for (size_t j = 0; j < cur.size(); ++j) {
                poly_z term = cur[j];
                for (auto& c : term) c *= g[k];
                b[j] = pz_add(b[j], term);
            }
        if (k < n) {
            std::vector<poly_z> nxt(cur.size() + 1);
            for (size_t j = 0; j < cur.size(); ++j) {
                poly_z shifted(cur[j].size() + 1, 0);
                for (size_t i = 0; i < cur[j].size(); ++i)
                    shifted[i + 1] = cur[j][i];
                nxt[j] = pz_add(nxt[j], shifted);
                nxt[j + 1] = pz_sub(nxt[j + 1], cur[j]);
            }
            cur = std::move(nxt);
        }
    }
    size_t s = static_cast<size_t>(m + n);
    std::vector<std::vector<poly_z>> S(s, std::vector<poly_z>(s));
    for (int row = 0; row < n; ++row)
        for (int i = 0; i <= m; ++i)
            if (f[m - i] != 0) S[row][row + i] = poly_z{f[m - i]};
    for (int row = 0; row < m; ++row)
        for (int j = 0; j <= n; ++j) S[n + row][row + j] = b[n - j];
    poly_z R = pz_primitive(poly_mat_det(std::move(S)));
    if (pz_deg(R) != m * n) throw arith_error("resultant degree collapsed");
    auto facs = pz_factor(R);
    for (auto& [h, mult] : facs)
        if (mult == 1 && pz_deg(h) == m * n) return h;
    throw compositum_error("no factor of full compositum degree",
                           std::move(facs));
}

bool inert_in_cyclotomic_M(const Int& ell, const Int& p, const Int& ell2) {
    if (!is_prime(ell) || !is_prime(p) || !is_prime(ell2))
        throw arith_error("arguments must be prime");
    if ((ell - 1) % p != 0) throw arith_error("p does not divide ell - 1");
    if (ell2 == ell || ell2 == p)
        throw arith_error("test prime collides with the construction");
    return powmod(ell2 % ell, (ell - 1) / p, ell) != 1;
}

/* ---- tame ray class p-parts from ingested invariants ---- */

namespace {

ff_elem evaluate_coords(const finite_field& R, const nf_elem& u) {
    fp_poly acc;
    for (size_t i = 0; i < u.size(); ++i) {
        Int den = u[i].den % R.ell;
        if (den < 0) den += R.ell;
        if (den == 0)
            throw arith_error("coordinate denominator not invertible");
        Int num = u[i].num % R.ell;
        if (num < 0) num += R.ell;
        acc.push_back(num * invmod(den, R.ell) % R.ell);
    }
    return ff_reduce(R, acc);
}

} // namespace

unsigned tame_ray_p_part(const number_field_profile& F,
                         const std::vector<prime_datum>& primes,
                         const Int& p) {
    require_valid_profile(F);
    if (!is_prime(p)) throw arith_error("p must be prime");
    if (F.torsion_generator.empty())
        throw arith_error("missing unit data: torsion generator");
    if (F.unit_rank() > 0 && F.fundamental_units.size() != F.unit_rank())
        throw arith_error("missing unit data: fundamental units");

    std::vector<nf_elem> units;
    units.push_back(F.torsion_generator);
    for (auto& u : F.fundamental_units) units.push_back(u);

    unsigned total = ord_p(F.class_number, p);
    std::map<Int, std::vector<fp_poly>> factor_pool;
    std::map<std::pair<Int, unsigned>, size_t> used;
    std::map<std::pair<Int, unsigned>, size_t> ram_used;
    std::vector<Int> pk_list;
    std::vector<std::vector<Int>> rows(units.size());

    for (auto& pd : primes) {
        if (!is_prime(pd.ell)) throw arith_error("listed prime not prime");
        if (pd.ell == p) throw arith_error("modulus not coprime to p");
        if (pd.f == 0 || pd.e == 0) throw arith_error("invalid splitting datum");
        finite_field R;
        std::vector<ff_elem> imgs;
        if (pd.e == 1) {
            if (!factor_pool.count(pd.ell)) {
                if (!power_basis_maximal_at(F.defining, pd.ell))
                    throw arith_error(
                        "power basis index divisible by the residue prime");
                std::vector<fp_poly> fs;
                for (auto& [gg, mult] : poly_factor_mod(F.defining, pd.ell)) {
                    if (mult != 1)
                        throw arith_error(
                            "prime listed unramified but the pattern ramifies");
                    fs.push_back(gg);
                }
                factor_pool[pd.ell] = std::move(fs);
            }
            size_t& cnt = used[{pd.ell, pd.f}];
            fp_poly pick;
            size_t seen = 0;
            for (auto& gg : factor_pool[pd.ell])
                if (static_cast<unsigned>(fp_deg(gg)) == pd.f &&
                    seen++ == cnt) {
                    pick = gg;
                    break;
                }
            if (pick.empty())
                throw arith_error(
                    "no unramified prime with the requested inertia degree");
            ++cnt;
            R = make_finite_field(pd.ell, pick);
            for (auto& u : units) imgs.push_back(evaluate_coords(R, u));
        } else {
            size_t& cnt = ram_used[{pd.ell, pd.f}];
            const ramified_residue* hit = nullptr;
            size_t seen = 0;
            for (auto& rr : F.ramified)
                if (rr.ell == pd.ell &&
                    static_cast<unsigned>(fp_deg(rr.poly)) == pd.f &&
                    seen++ == cnt) {
                    hit = &rr;
                    break;
                }
            if (!hit)
                throw arith_error("ramified prime without residue unit images");
            ++cnt;
            R = make_finite_field(pd.ell, hit->poly);
            if (hit->unit_images.size() != units.size())
                throw arith_error("ramified residue image count mismatch");
            for (auto& im : hit->unit_images) imgs.push_back(ff_reduce(R, im));
        }
        for (auto& im : imgs)
            if (ff_is_zero(im)) throw arith_error("unit image vanishes");
        Int m = ff_unit_order(R);
        unsigned k = ord_p(m, p);
        total += k;
        if (k == 0) continue;
        Int pk = 1;
        for (unsigned i = 0; i < k; ++i) pk *= p;
        Int cof = m / pk;
        ff_elem gamma = ff_pow(R, ff_generator(R), cof);
        for (size_t j = 0; j < units.size(); ++j) {
            ff_elem y = ff_pow(R, imgs[j], cof);
            Int t = 0;
            ff_elem probe = ff_one(R);
            while (!(probe == y)) {
                probe = ff_mul(R, probe, gamma);
                if (++t > pk)
                    throw arith_error("image escapes the cyclic p-part");
            }
            rows[j].push_back(t);
        }
        pk_list.push_back(pk);
    }
    if (pk_list.empty()) return total;
    /* order of the unit image inside the product of cyclic p-parts */
    int_matrix mat;
    for (auto& r : rows) mat.push_back(r);
    for (size_t i = 0; i < pk_list.size(); ++i) {
        std::vector<Int> diag(pk_list.size(), 0);
        diag[i] = pk_list[i];
        mat.push_back(std::move(diag));
    }
    auto snf = smith_normal_form(mat);
    Int D = 1;
    for (auto& d : snf.invariants)
        if (d != 0) D *= d;
    Int prod = 1;
    for (auto& pk : pk_list) prod *= pk;
    if (prod % D != 0) throw arith_error("unit index computation failed");
    unsigned image_ord = ord_p(prod / D, p);
    return total - image_ord;
}

} // namespace tamegal
