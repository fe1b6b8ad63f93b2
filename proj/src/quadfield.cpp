#include "tamegal/quadfield.hpp"

#include <algorithm>
#include <set>

namespace tamegal {

field_k make_field(long d) {
    if (d >= 0) throw arith_error("make_field: d must be negative");
    Int ad = -Int(d);
    for (auto& [p, e] : factorize(ad))
        if (e > 1) throw arith_error("make_field: d must be squarefree");
    field_k K;
    K.d = d;
    bool one_mod4 = ((d % 4) + 4) % 4 == 1;
    K.disc = one_mod4 ? Int(d) : Int(4) * d;
    K.omega_trace = one_mod4 ? 1 : 0;
    K.omega_norm = one_mod4 ? Int(1 - d) / 4 : Int(-d);
    K.unit_torsion = d == -3 ? 6 : (d == -1 ? 4 : 2);
    return K;
}

Int element_norm(const field_k& K, const elt_k& x) {
    return x.u * x.u + K.omega_trace * x.u * x.v + K.omega_norm * x.v * x.v;
}

elt_k element_mul(const field_k& K, const elt_k& x, const elt_k& y) {
    /* omega^2 = t*omega - n */
    Int cross = x.u * y.v + x.v * y.u;
    return {x.u * y.u - K.omega_norm * x.v * y.v,
            cross + K.omega_trace * x.v * y.v};
}

elt_k element_conj(const field_k& K, const elt_k& x) {
    /* conj(omega) = t - omega */
    return {x.u + K.omega_trace * x.v, -x.v};
}

namespace {

/* column HNF of the Z-span of (u, v) pairs in basis (1, omega) */
ideal_rep hnf_of_pairs(std::vector<elt_k> vecs) {
    Int c = 0, bb = 0;
    for (auto& w : vecs) {
        if (w.v == 0) continue;
        if (c == 0) {
            c = abs(w.v);
            bb = w.v > 0 ? w.u : -w.u;
        } else {
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                       c.get_mpz_t(), w.v.get_mpz_t());
            bb = s * bb + t * w.u;
            c = g;
        }
    }
    Int a = 0;
    for (auto& w : vecs) {
        Int rest = c == 0 ? w.u : w.u - w.v / c * bb;
        if (rest != 0) a = a == 0 ? abs(rest) : gcd(a, rest);
    }
    if (a == 0 && c == 0) throw arith_error("hnf: zero module");
    if (a == 0) throw arith_error("hnf: rank 1 module is not an ideal");
    if (c != 0) {
        bb %= a;
        if (bb < 0) bb += a;
    }
    return {a, bb, c};
}

} // namespace

ideal_rep ideal_from_generators(const field_k& K, const std::vector<elt_k>& gens) {
    std::vector<elt_k> vecs;
    for (auto& g : gens) {
        vecs.push_back(g);
        vecs.push_back(element_mul(K, g, {0, 1}));
    }
    return hnf_of_pairs(vecs);
}

ideal_rep principal_ideal(const field_k& K, const elt_k& x) {
    if (x.u == 0 && x.v == 0) throw arith_error("principal_ideal: zero element");
    return ideal_from_generators(K, {x});
}

ideal_rep ideal_mul(const field_k& K, const ideal_rep& i, const ideal_rep& j) {
    elt_k bi{i.b, i.c}, bj{j.b, j.c};
    std::vector<elt_k> vecs = {{i.a * j.a, 0},
                               element_mul(K, {i.a, 0}, bj),
                               element_mul(K, bi, {j.a, 0}),
                               element_mul(K, bi, bj)};
    return hnf_of_pairs(vecs);
}

ideal_rep ideal_add(const field_k& K, const ideal_rep& i, const ideal_rep& j) {
    (void)K;
    return hnf_of_pairs({{i.a, 0}, {i.b, i.c}, {j.a, 0}, {j.b, j.c}});
}

Int ideal_norm(const ideal_rep& i) { return i.a * i.c; }

bool ideal_coprime(const field_k& K, const ideal_rep& i, const ideal_rep& j) {
    ideal_rep s = ideal_add(K, i, j);
    return s.a == 1 && s.c == 1;
}

bool ideal_contains(const field_k& K, const ideal_rep& i, const elt_k& x) {
    (void)K;
    if (x.v % i.c != 0) return false;
    return (x.u - x.v / i.c * i.b) % i.a == 0;
}

elt_k reduce_mod_ideal(const field_k& K, const ideal_rep& i, const elt_k& x) {
    (void)K;
    Int v = x.v % i.c;
    if (v < 0) v += i.c;
    Int u = x.u - (x.v - v) / i.c * i.b;
    u %= i.a;
    if (u < 0) u += i.a;
    return {u, v};
}

namespace {

/* Tonelli-Shanks square root mod odd prime; a must be a QR */
Int sqrt_mod(const Int& a0, const Int& p) {
    Int a = a0 % p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    Int q = p - 1, z = 2;
    unsigned s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    Int m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        Int tt = t;
        unsigned k = 0;
        while (tt != 1) {
            tt = tt * tt % p;
            ++k;
        }
        Int b = c;
        for (Int i = 0; i < m - k - 1; ++i) b = b * b % p;
        m = k;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

} // namespace

prime_splitting split_prime(const field_k& K, const Int& ell) {
    if (!is_prime(ell)) throw arith_error("split_prime: ell must be prime");
    int k = kronecker_symbol(K.disc, ell);
    prime_splitting out;
    if (k == -1) {
        out.type = split_type::inert;
        out.primes = {{ell, 0, ell}};
        out.f = 2;
        out.e = 1;
        return out;
    }
    /* roots of x^2 - t x + n mod ell; prime = (ell, b + omega), b = -root */
    std::vector<Int> roots;
    if (ell == 2) {
        for (Int r = 0; r < 2; ++r)
            if ((r * r - K.omega_trace * r + K.omega_norm) % 2 == 0) roots.push_back(r);
    } else {
        Int s = sqrt_mod(K.disc, ell);
        Int inv2 = invmod(2, ell);
        roots.push_back((K.omega_trace + s) % ell * inv2 % ell);
        if (k == 1) roots.push_back(((K.omega_trace - s) % ell + ell) * inv2 % ell);
    }
    std::set<Int> bs;
    for (auto& r : roots) bs.insert(((-r) % ell + ell) % ell);
    out.type = k == 1 ? split_type::split : split_type::ramified;
    out.f = 1;
    out.e = k == 0 ? 2 : 1;
    for (auto& b : bs) out.primes.push_back({ell, b, 1});
    if (k == 1 && out.primes.size() != 2)
        throw arith_error("split_prime: expected two roots");
    return out;
}

qform reduce_form(qform f) {
    for (;;) {
        /* normalize: -a < b <= a */
        Int r = f.b % (2 * f.a);
        if (r > f.a) r -= 2 * f.a;
        if (r <= -f.a) r += 2 * f.a;
        f.c -= (f.b - r) / (2 * f.a) * ((f.b + r) / 2);
        f.b = r;
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        break;
    }
    if ((f.a == f.c || f.a == abs(f.b)) && f.b < 0) f.b = -f.b;
    return f;
}

namespace {

/* merge x = r1 mod m1 into x = r mod m (non-coprime tolerant) */
void crt_merge(Int& r, Int& m, const Int& r1, const Int& m1) {
    Int g = gcd(m, m1);
    if ((r1 - r) % g != 0) throw arith_error("compose: inconsistent congruences");
    Int lcm = m / g * m1;
    Int t = (r1 - r) / g % (m1 / g);
    if (t < 0) t += m1 / g;
    t = t * invmod(m / g % (m1 / g), m1 / g) % (m1 / g);
    r += m * t;
    m = lcm;
    r %= m;
    if (r < 0) r += m;
}

} // namespace

qform compose_forms(const field_k& K, const qform& f, const qform& g) {
    const Int& D = K.disc;
    Int s = (f.b + g.b) / 2;
    Int m = gcd(gcd(f.a, g.a), s);
    Int a3 = f.a / m * (g.a / m);
    /* B = b1 mod 2a1/m, B = b2 mod 2a2/m, (s/m) B = (b1 b2 + D)/(2m) mod 2 a3 */
    Int r = f.b % (2 * f.a / m), mod = 2 * f.a / m;
    if (r < 0) r += mod;
    crt_merge(r, mod, ((g.b % (2 * g.a / m)) + 2 * g.a / m) % (2 * g.a / m),
              2 * g.a / m);
    Int co = s / m, rhs = (f.b * g.b + D) / (2 * m), m3 = 2 * a3;
    Int gg = gcd(co % m3 == 0 ? m3 : ((co % m3) + m3) % m3, m3);
    if (gg == 0) gg = m3;
    if (rhs % gg != 0) throw arith_error("compose: congruence not solvable");
    if (gg != m3) {
        Int sub_r = rhs / gg % (m3 / gg) * invmod(co / gg % (m3 / gg), m3 / gg) % (m3 / gg);
        if (sub_r < 0) sub_r += m3 / gg;
        crt_merge(r, mod, sub_r, m3 / gg);
    }
    Int B = r % (2 * a3);
    if (B < 0) B += 2 * a3;
    if ((B * B - D) % (4 * a3) != 0)
        throw arith_error("compose: invalid composite form");
    return reduce_form({a3, B, (B * B - D) / (4 * a3)});
}

qform form_of_ideal(const field_k& K, const ideal_rep& i) {
    Int a = i.a / i.c, b = i.b / i.c;
    Int B = 2 * b + K.omega_trace;
    Int nb = b * b + K.omega_trace * b + K.omega_norm;
    if (nb % a != 0) throw arith_error("form_of_ideal: invalid ideal");
    return reduce_form({a, B, nb / a});
}

ideal_rep ideal_of_form(const field_k& K, const qform& f) {
    Int b = (f.b - K.omega_trace) / 2;
    b %= f.a;
    if (b < 0) b += f.a;
    return {f.a, b, 1};
}

class_group_data class_group(const field_k& K) {
    const Int& D = K.disc;
    class_group_data cg;
    qform one = reduce_form({1, K.omega_trace,
                             (K.omega_trace * K.omega_trace - D) / 4});
    /* enumerate reduced forms: |b| <= a <= c, b = D mod 2 */
    for (Int a = 1; 3 * a * a <= -D; ++a)
        for (Int b = -a; b <= a; ++b) {
            if (((b - D) % 2 + 2) % 2 != 0) continue;
            if ((b * b - D) % (4 * a) != 0) continue;
            Int c = (b * b - D) / (4 * a);
            if (c < a) continue;
            if ((a == c || a == abs(b)) && b < 0) continue;
            cg.all_forms.push_back({a, b, c});
        }
    std::sort(cg.all_forms.begin(), cg.all_forms.end());
    cg.h = Int(cg.all_forms.size());
    if (cg.h == 1) return cg;

    /* prime forms generate; close under composition via BFS, collecting
       relation rows from cross edges, then SNF the relation lattice */
    std::vector<qform> gens;
    std::map<qform, std::vector<Int>> vec;
    std::vector<std::vector<Int>> rel;
    std::vector<qform> frontier;
    auto restart_bfs = [&]() {
        vec.clear();
        rel.clear();
        vec[one] = std::vector<Int>(gens.size(), 0);
        frontier = {one};
        while (!frontier.empty()) {
            std::vector<qform> next;
            for (auto& f : frontier)
                for (size_t gi = 0; gi < gens.size(); ++gi) {
                    qform pf = compose_forms(K, f, gens[gi]);
                    std::vector<Int> w = vec[f];
                    w[gi] += 1;
                    auto it = vec.find(pf);
                    if (it == vec.end()) {
                        vec[pf] = w;
                        next.push_back(pf);
                    } else {
                        std::vector<Int> d(w.size());
                        bool nz = false;
                        for (size_t k = 0; k < w.size(); ++k) {
                            d[k] = w[k] - it->second[k];
                            nz = nz || d[k] != 0;
                        }
                        if (nz) rel.push_back(d);
                    }
                }
            frontier = std::move(next);
        }
    };
    for (Int ell = 2; vec.size() != cg.all_forms.size(); ell = ell + 1) {
        if (ell > abs(D) + 1)
            throw arith_error("class_group: prime forms below |disc| do not generate");
        if (!is_prime(ell)) continue;
        if (kronecker_symbol(D, ell) != 1) continue;
        qform pf = form_of_ideal(K, split_prime(K, ell).primes[0]);
        if (pf == one) continue;
        gens.push_back(pf);
        restart_bfs();
    }
    if (rel.empty()) throw arith_error("class_group: no relations found");
    auto snf = smith_normal_form(rel);
    /* change basis so the relation lattice is diagonal: with L*rel*R = D the
       diagonalizing exponent coordinates are f = R^T e, so the new generator
       h_j carries the j-th row of R^{-1} as exponents on the old ones */
    size_t m = gens.size();
    std::vector<Int> inv(m, 0);
    for (size_t i = 0; i < snf.invariants.size() && i < m; ++i)
        inv[i] = snf.invariants[i];
    auto rinv = unimodular_inverse(snf.right);
    std::vector<qform> newgens;
    std::vector<Int> newinv;
    for (size_t j = 0; j < m; ++j) {
        Int dj = inv[j];
        if (dj == 1) continue;
        if (dj == 0) throw arith_error("class_group: infinite invariant");
        qform gj = one;
        for (size_t i = 0; i < m; ++i) {
            Int e = rinv[j][i] % dj;
            if (e < 0) e += dj;
            for (Int k = 0; k < e; ++k) gj = compose_forms(K, gj, gens[i]);
        }
        newgens.push_back(gj);
        newinv.push_back(dj);
    }
    cg.generators = newgens;
    cg.invariants = newinv;
    /* enumerate the group over the new basis: must hit every form exactly once */
    cg.dlog[one] = std::vector<Int>(newgens.size(), 0);
    std::vector<qform> cur = {one};
    std::vector<std::vector<Int>> curv = {cg.dlog[one]};
    for (size_t j = 0; j < newgens.size(); ++j) {
        std::vector<qform> nx = cur;
        std::vector<std::vector<Int>> nxv = curv;
        qform pw = one;
        for (Int e = 1; e < newinv[j]; ++e) {
            pw = compose_forms(K, pw, newgens[j]);
            for (size_t t = 0; t < cur.size(); ++t) {
                qform f = compose_forms(K, cur[t], pw);
                auto w = curv[t];
                w[j] = e;
                nx.push_back(f);
                nxv.push_back(w);
            }
        }
        cur = std::move(nx);
        curv = std::move(nxv);
    }
    if (Int(cur.size()) != cg.h)
        throw arith_error("class_group: invariant product mismatch");
    for (size_t t = 0; t < cur.size(); ++t) {
        if (cg.dlog.count(cur[t]) && !(curv[t] == cg.dlog[cur[t]]))
            throw arith_error("class_group: basis enumeration collision");
        cg.dlog[cur[t]] = curv[t];
    }
    if (cg.dlog.size() != cur.size())
        throw arith_error("class_group: basis does not enumerate the group");
    return cg;
}

std::vector<Int> ideal_class(const field_k& K, const class_group_data& cg,
                             const ideal_rep& i) {
    if (gcd(ideal_norm(i), K.disc) != 1)
        throw arith_error("ideal_class: ideal not coprime to the discriminant");
    auto it = cg.dlog.find(form_of_ideal(K, i));
    if (it == cg.dlog.end()) {
        if (cg.h == 1) return {};
        throw arith_error("ideal_class: form not in table");
    }
    return it->second;
}

elt_k principal_generator(const field_k& K, const ideal_rep& i) {
    Int nv = ideal_norm(i);
    /* N(x + y omega) = nv forces y^2 |D| <= 4 nv; x = (-t y +- sqrt(D y^2 + 4 nv))/2 */
    for (Int ya = 0; ya * ya * (-K.disc) <= 4 * nv; ++ya) {
        Int rad = K.disc * ya * ya + 4 * nv;
        Int s;
        mpz_sqrt(s.get_mpz_t(), rad.get_mpz_t());
        if (s * s != rad) continue;
        for (int ys : {1, -1}) {
            Int y = ys * ya;
            for (int sgn : {1, -1}) {
                Int num = -K.omega_trace * y + sgn * s;
                if (((num % 2) + 2) % 2 != 0) continue;
                elt_k cand{num / 2, y};
                if (cand.u == 0 && cand.v == 0) continue;
                if (element_norm(K, cand) != nv) continue;
                if (!ideal_contains(K, i, cand)) continue;
                return cand;
            }
            if (ya == 0) break;
        }
    }
    throw arith_error("principal_generator: ideal is not principal");
}

} // namespace tamegal
