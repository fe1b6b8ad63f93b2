#include "tamegal/resring.hpp"

#include <algorithm>

namespace tamegal {

int fp_deg(const fp_poly& a) { return int(a.size()) - 1; }

fp_poly fp_normalize(const Int& ell, fp_poly a) {
    for (auto& c : a) {
        c %= ell;
        if (c < 0) c += ell;
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

fp_poly fp_add(const Int& ell, const fp_poly& a, const fp_poly& b) {
    fp_poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return fp_normalize(ell, r);
}

fp_poly fp_sub(const Int& ell, const fp_poly& a, const fp_poly& b) {
    fp_poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return fp_normalize(ell, r);
}

fp_poly fp_mul(const Int& ell, const fp_poly& a, const fp_poly& b) {
    if (a.empty() || b.empty()) return {};
    fp_poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return fp_normalize(ell, r);
}

fp_poly fp_monic(const Int& ell, fp_poly a) {
    a = fp_normalize(ell, a);
    if (a.empty()) return a;
    Int inv = invmod(a.back(), ell);
    for (auto& c : a) c = c * inv % ell;
    return a;
}

namespace {

/* divides in place; returns the quotient, leaves the remainder in a */
fp_poly fp_divstep(const Int& ell, fp_poly& a, const fp_poly& b) {
    if (b.empty()) throw arith_error("fp division by zero polynomial");
    Int lead_inv = invmod(b.back(), ell);
    if (a.size() < b.size()) return {};
    fp_poly q(a.size() - b.size() + 1, 0);
    for (size_t i = a.size(); i-- >= b.size();) {
        Int c = a[i] % ell * lead_inv % ell;
        if (c < 0) c += ell;
        q[i - b.size() + 1] = c;
        if (c == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            a[i - b.size() + 1 + j] -= c * b[j];
            a[i - b.size() + 1 + j] %= ell;
        }
        if (i + 1 == b.size()) break;
    }
    a = fp_normalize(ell, a);
    return q;
}

} // namespace

fp_poly fp_rem(const Int& ell, fp_poly a, const fp_poly& b) {
    a = fp_normalize(ell, a);
    auto bb = fp_normalize(ell, b);
    fp_divstep(ell, a, bb);
    return a;
}

fp_poly fp_quot(const Int& ell, fp_poly a, const fp_poly& b) {
    a = fp_normalize(ell, a);
    auto bb = fp_normalize(ell, b);
    return fp_divstep(ell, a, bb);
}

fp_poly fp_gcd(const Int& ell, fp_poly a, fp_poly b) {
    a = fp_normalize(ell, a);
    b = fp_normalize(ell, b);
    while (!b.empty()) {
        a = fp_rem(ell, a, b);
        std::swap(a, b);
    }
    return fp_monic(ell, a);
}

fp_poly fp_powmod(const Int& ell, fp_poly base, Int e, const fp_poly& mod) {
    if (e < 0) throw arith_error("fp_powmod: negative exponent");
    auto m = fp_normalize(ell, mod);
    base = fp_rem(ell, base, m);
    fp_poly r = fp_rem(ell, {1}, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = fp_rem(ell, fp_mul(ell, r, base), m);
        e >>= 1;
        if (e > 0) base = fp_rem(ell, fp_mul(ell, base, base), m);
    }
    return r;
}

fp_poly fp_derivative(const Int& ell, const fp_poly& a) {
    fp_poly r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * Int(i));
    return fp_normalize(ell, r);
}

Int fp_eval(const Int& ell, const fp_poly& a, const Int& x) {
    Int r = 0;
    for (size_t i = a.size(); i-- > 0;) r = (r * x + a[i]) % ell;
    if (r < 0) r += ell;
    return r;
}

bool fp_is_irreducible(const Int& ell, const fp_poly& a) {
    auto f = fp_normalize(ell, a);
    int d = fp_deg(f);
    if (d <= 0) return false;
    if (d == 1) return true;
    /* x^(ell^d) = x mod f, and x^(ell^(d/r)) - x coprime to f for primes r|d */
    fp_poly x = {0, 1};
    Int q = 1;
    for (int i = 0; i < d; ++i) q *= ell;
    if (fp_powmod(ell, x, q, f) != fp_rem(ell, x, f)) return false;
    for (auto& [r, k] : factorize(d)) {
        Int qr = 1;
        for (int i = 0; i < d / int(r.get_si()); ++i) qr *= ell;
        auto g = fp_gcd(ell, fp_sub(ell, fp_powmod(ell, x, qr, f), x), f);
        if (fp_deg(g) != 0) return false;
    }
    return true;
}

finite_field make_finite_field(const Int& ell, fp_poly poly) {
    if (ell < 2 || !is_prime(ell))
        throw arith_error("make_finite_field: characteristic not prime");
    poly = fp_normalize(ell, poly);
    if (fp_deg(poly) < 1 || poly.back() != 1)
        throw arith_error("make_finite_field: polynomial not monic of degree >= 1");
    if (!fp_is_irreducible(ell, poly))
        throw arith_error("make_finite_field: polynomial reducible");
    return {ell, fp_deg(poly), poly};
}

ff_elem ff_reduce(const finite_field& F, const fp_poly& a) {
    return fp_rem(F.ell, a, F.poly);
}

ff_elem ff_one(const finite_field& F) { return ff_reduce(F, {1}); }

ff_elem ff_gen(const finite_field& F) { return ff_reduce(F, {0, 1}); }

bool ff_is_zero(const ff_elem& a) { return a.empty(); }

bool ff_is_one(const ff_elem& a) { return a.size() == 1 && a[0] == 1; }

ff_elem ff_mul(const finite_field& F, const ff_elem& a, const ff_elem& b) {
    return fp_rem(F.ell, fp_mul(F.ell, a, b), F.poly);
}

ff_elem ff_pow(const finite_field& F, ff_elem a, Int e) {
    return fp_powmod(F.ell, a, e, F.poly);
}

Int ff_unit_order(const finite_field& F) {
    Int q = 1;
    for (int i = 0; i < F.f; ++i) q *= F.ell;
    return q - 1;
}

namespace {

/* minimal m dividing group_order with pow(x, m) = 1 */
template <typename Elem, typename PowFn, typename OneFn>
Int order_via_factored(const Elem& x, const Int& group_order, PowFn pow,
                       OneFn is_one) {
    Int m = group_order;
    for (auto& [p, k] : factorize(group_order)) {
        for (unsigned i = 0; i < k; ++i) {
            Int cand = m / p;
            if (is_one(pow(x, cand)))
                m = cand;
            else
                break;
        }
    }
    if (!is_one(pow(x, m))) throw arith_error("element order exceeds group order");
    return m;
}

template <typename Elem, typename PowFn, typename OneFn>
Int p_part_of_order(const Elem& x, const Int& group_order, const Int& p,
                    PowFn pow, OneFn is_one) {
    unsigned v = ord_p(group_order, p);
    Int cofactor = group_order;
    for (unsigned i = 0; i < v; ++i) cofactor /= p;
    Elem y = pow(x, cofactor);
    Int res = 1;
    unsigned k = 0;
    while (!is_one(y)) {
        y = pow(y, p);
        res *= p;
        if (++k > v) throw arith_error("p-part order exceeds valuation bound");
    }
    return res;
}

} // namespace

Int finite_field_order_decompose(const finite_field& F, const ff_elem& x) {
    if (ff_is_zero(x)) throw arith_error("finite_field_order_decompose: zero element");
    return order_via_factored(
        x, ff_unit_order(F),
        [&](const ff_elem& a, const Int& e) { return ff_pow(F, a, e); },
        ff_is_one);
}

ff_elem ff_generator(const finite_field& F, unsigned long seed) {
    Int m = ff_unit_order(F);
    auto fac = factorize(m);
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed);
    for (int attempt = 0; attempt < 4000; ++attempt) {
        fp_poly cand(F.f);
        for (int i = 0; i < F.f; ++i) cand[i] = rng.get_z_range(F.ell);
        cand = fp_normalize(F.ell, cand);
        if (ff_is_zero(cand)) continue;
        bool full = true;
        for (auto& [p, k] : fac)
            if (ff_is_one(ff_pow(F, cand, m / p))) {
                full = false;
                break;
            }
        if (full) return cand;
    }
    throw arith_error("ff_generator: no generator found");
}

residue_component residue_unit_structure(const field_k& K, const ideal_rep& q,
                                         int n) {
    if (n < 1) throw arith_error("residue_unit_structure: exponent < 1");
    Int norm = ideal_norm(q);
    auto fac = factorize(norm);
    if (fac.size() != 1)
        throw arith_error("residue_unit_structure: modulus not a prime power");
    Int ell = fac.begin()->first;
    auto sp = split_prime(K, ell);
    bool found = false;
    for (auto& pr : sp.primes)
        if (pr == q) found = true;
    if (!found)
        throw arith_error("residue_unit_structure: not a prime ideal");
    if (ell == 2 && sp.e > 1 && n > 1)
        throw arith_error(
            "residue_unit_structure: ramified even prime with exponent > 1");
    residue_component c;
    c.q = q;
    c.n = n;
    c.qn = q;
    for (int i = 1; i < n; ++i) c.qn = ideal_mul(K, c.qn, q);
    c.ell = ell;
    c.f = sp.f;
    c.e = sp.e;
    Int qf = 1;
    for (unsigned i = 0; i < sp.f; ++i) qf *= ell;
    c.g1_order = qf - 1;
    c.g2_order = 1;
    for (int i = 1; i < n; ++i) c.g2_order *= qf;
    c.order = c.g1_order * c.g2_order;
    return c;
}

elt_k element_powmod(const field_k& K, const ideal_rep& m, elt_k base, Int e) {
    if (e < 0) throw arith_error("element_powmod: negative exponent");
    base = reduce_mod_ideal(K, m, base);
    elt_k r = reduce_mod_ideal(K, m, {1, 0});
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t()))
            r = reduce_mod_ideal(K, m, element_mul(K, r, base));
        e >>= 1;
        if (e > 0) base = reduce_mod_ideal(K, m, element_mul(K, base, base));
    }
    return r;
}

namespace {

bool invertible_mod(const field_k& K, const ideal_rep& m, const elt_k& x) {
    elt_k r = reduce_mod_ideal(K, m, x);
    if (r.u == 0 && r.v == 0) return false;
    return ideal_coprime(K, principal_ideal(K, r), m);
}

} // namespace

Int residue_element_order(const field_k& K, const residue_component& comp,
                          const elt_k& x) {
    if (!invertible_mod(K, comp.qn, x))
        throw arith_error("residue_element_order: element not invertible");
    elt_k one = reduce_mod_ideal(K, comp.qn, {1, 0});
    return order_via_factored(
        reduce_mod_ideal(K, comp.qn, x), comp.order,
        [&](const elt_k& a, const Int& e) {
            return element_powmod(K, comp.qn, a, e);
        },
        [&](const elt_k& a) { return a == one; });
}

elt_k component_generator(const field_k& K, const residue_component& comp,
                          unsigned long seed) {
    auto fac = factorize(comp.order);
    elt_k one = reduce_mod_ideal(K, comp.qn, {1, 0});
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed);
    for (int attempt = 0; attempt < 4000; ++attempt) {
        elt_k cand{rng.get_z_range(comp.qn.a), rng.get_z_range(comp.qn.a)};
        cand = reduce_mod_ideal(K, comp.qn, cand);
        if (!invertible_mod(K, comp.qn, cand)) continue;
        bool full = true;
        for (auto& [p, k] : fac)
            if (element_powmod(K, comp.qn, cand, comp.order / p) == one) {
                full = false;
                break;
            }
        if (full) return cand;
    }
    throw arith_error("component_generator: no generator found (group may not be cyclic)");
}

Int p_primary_order(const field_k& K, const ideal_rep& m, const elt_k& x,
                    const Int& group_order, const Int& p) {
    if (!invertible_mod(K, m, x))
        throw arith_error("p_primary_order: element not invertible");
    elt_k one = reduce_mod_ideal(K, m, {1, 0});
    return p_part_of_order(
        reduce_mod_ideal(K, m, x), group_order, p,
        [&](const elt_k& a, const Int& e) { return element_powmod(K, m, a, e); },
        [&](const elt_k& a) { return a == one; });
}

Int p_primary_order(const finite_field& F, const ff_elem& x, const Int& p) {
    if (ff_is_zero(x)) throw arith_error("p_primary_order: element not invertible");
    return p_part_of_order(
        x, ff_unit_order(F), p,
        [&](const ff_elem& a, const Int& e) { return ff_pow(F, a, e); },
        ff_is_one);
}

elt_k p_primary_projection(const field_k& K, const ideal_rep& m, const elt_k& x,
                           const Int& group_order, const Int& p) {
    if (!invertible_mod(K, m, x))
        throw arith_error("p_primary_projection: element not invertible");
    unsigned v = ord_p(group_order, p);
    Int cofactor = group_order;
    for (unsigned i = 0; i < v; ++i) cofactor /= p;
    return element_powmod(K, m, x, cofactor);
}

ideal_rep modulus_ideal(const field_k& K, const modulus_t& m) {
    ideal_rep r{1, 0, 1};
    for (auto& part : m)
        for (int i = 0; i < part.n; ++i) r = ideal_mul(K, r, part.q);
    return r;
}

Int unit_image_index(const field_k& K, const modulus_t& m) {
    ideal_rep M = modulus_ideal(K, m);
    elt_k g = K.unit_torsion == 2 ? elt_k{-1, 0} : elt_k{0, 1};
    elt_k acc{1, 0};
    for (unsigned k = 1; k <= K.unit_torsion; ++k) {
        acc = reduce_mod_ideal(K, M, element_mul(K, acc, g));
        if (ideal_contains(K, M, {acc.u - 1, acc.v})) return k;
    }
    throw arith_error("unit_image_index: torsion generator order mismatch");
}

elt_k crt_element(const field_k& K, const ideal_rep& i, const elt_k& x,
                  const ideal_rep& j, const elt_k& y) {
    if (!ideal_coprime(K, i, j))
        throw arith_error("crt_element: moduli not coprime");
    /* solve z * G = (1, 0) over Z, G rows = lattice generators of i then j */
    int_matrix G = {{i.a, 0},
                    {i.b, i.c},
                    {j.a, 0},
                    {j.b, j.c}};
    auto s = smith_normal_form(G);
    /* z = w * left with w * D = (1,0) * right */
    Int c0 = s.right[0][0], c1 = s.right[0][1];
    if (c0 % s.invariants[0] != 0 || c1 % s.invariants[1] != 0)
        throw arith_error("crt_element: unsolvable system");
    std::vector<Int> w = {c0 / s.invariants[0], c1 / s.invariants[1], 0, 0};
    std::vector<Int> z(4, 0);
    for (int col = 0; col < 4; ++col)
        for (int row = 0; row < 4; ++row) z[col] += w[row] * s.left[row][col];
    /* beta = part of 1 lying in j; alpha = 1 - beta lies in i */
    elt_k beta{z[2] * j.a + z[3] * j.b, z[3] * j.c};
    elt_k alpha{1 - beta.u, -beta.v};
    /* z = x*beta + y*alpha = x mod i, y mod j */
    elt_k xb = element_mul(K, x, beta), ya = element_mul(K, y, alpha);
    ideal_rep prod = ideal_mul(K, i, j);
    return reduce_mod_ideal(K, prod, {xb.u + ya.u, xb.v + ya.v});
}

} // namespace tamegal
