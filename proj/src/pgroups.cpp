#include "tamegal/pgroups.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "tamegal/rayclass.hpp"

namespace tamegal {

group_realization cyclic_realization(unsigned m) {
    if (m == 0) throw arith_error("cyclic order must be positive");
    group_realization G;
    G.order = m;
    G.identity = 0;
    if (m > 1) G.generators = {1};
    G.law = [m](unsigned x, unsigned y) { return (x + y) % m; };
    return G;
}

group_realization abelian_realization(const std::vector<unsigned>& factors) {
    unsigned long total = 1;
    for (auto f : factors) {
        if (f == 0) throw arith_error("factor must be positive");
        total *= f;
        if (total > (1ul << 22)) throw arith_error("realization too large");
    }
    group_realization G;
    G.order = static_cast<unsigned>(total);
    G.identity = 0;
    std::vector<unsigned> fs = factors;
    /* mixed radix, first factor most significant */
    unsigned stride = G.order;
    for (auto f : fs) {
        stride /= f;
        if (f > 1) G.generators.push_back(stride);
    }
    G.law = [fs](unsigned x, unsigned y) {
        std::vector<unsigned> digs(fs.size());
        for (size_t i = fs.size(); i-- > 0;) {
            unsigned f = fs[i];
            digs[i] = (x % f + y % f) % f;
            x /= f;
            y /= f;
        }
        unsigned out = 0;
        for (size_t i = 0; i < fs.size(); ++i) out = out * fs[i] + digs[i];
        return out;
    };
    return G;
}

group_realization heisenberg_realization(unsigned p) {
    if (p < 2) throw arith_error("p must be at least 2");
    unsigned long total = static_cast<unsigned long>(p) * p * p;
    if (total > (1ul << 22)) throw arith_error("realization too large");
    group_realization G;
    G.order = static_cast<unsigned>(total);
    G.identity = 0;
    G.generators = {p * p, p}; /* (1,0,0) and (0,1,0) */
    G.law = [p](unsigned x, unsigned y) {
        unsigned x1 = x / (p * p), y1 = x / p % p, z1 = x % p;
        unsigned x2 = y / (p * p), y2 = y / p % p, z2 = y % p;
        unsigned x3 = (x1 + x2) % p;
        unsigned y3 = (y1 + y2) % p;
        unsigned z3 = (z1 + z2 + x1 * y2) % p;
        return (x3 * p + y3) * p + z3;
    };
    return G;
}

unsigned realization_pow(const group_realization& G, unsigned x, const Int& e) {
    if (e < 0) throw arith_error("exponent must be nonnegative");
    unsigned r = G.identity;
    unsigned base = x;
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = G.law(r, base);
        base = G.law(base, base);
        k >>= 1;
    }
    return r;
}

pgroup_presentation modular_group(const Int& p, unsigned n) {
    if (n < 3) throw arith_error("n must be at least 3");
    if (p < 3 || !is_prime(p)) throw arith_error("p must be an odd prime");
    if (!p.fits_ulong_p()) throw arith_error("p too large to realize");
    unsigned long pl = p.get_ui();
    unsigned long pn1 = 1;
    for (unsigned i = 0; i + 1 < n; ++i) {
        pn1 *= pl;
        if (pn1 * pl > (1ul << 22)) throw arith_error("realization too large");
    }
    unsigned long pn2 = pn1 / pl;
    unsigned long t = 1 + pn2;
    std::vector<std::uint64_t> tp(pl);
    tp[0] = 1;
    for (unsigned long j = 1; j < pl; ++j) tp[j] = tp[j - 1] * t % pn1;

    pgroup_presentation G;
    G.p = p;
    G.n = n;
    G.a_relator = Int(pn1);
    G.b_relator = p;
    G.comm_relator = Int(pn2);
    G.realization.order = static_cast<unsigned>(pn1 * pl);
    G.realization.identity = 0;
    G.a = static_cast<unsigned>(pl);     /* (1, 0) */
    G.b = static_cast<unsigned>(pl - 1); /* (0, p-1) */
    G.realization.generators = {G.a, G.b};
    G.realization.law = [pl, pn1, tp = std::move(tp)](unsigned x, unsigned y) {
        std::uint64_t i1 = x / pl, j1 = x % pl;
        std::uint64_t i2 = y / pl, j2 = y % pl;
        std::uint64_t i = (i1 + i2 * tp[j1]) % pn1;
        std::uint64_t j = (j1 + j2) % pl;
        return static_cast<unsigned>(i * pl + j);
    };

    /* certify the realization against the relations and the order */
    const auto& R = G.realization;
    if (static_cast<unsigned long>(R.order) != pn1 * pl)
        throw arith_error("realization order mismatch");
    if (realization_pow(R, G.a, G.a_relator) != R.identity ||
        realization_pow(R, G.a, G.comm_relator) == R.identity)
        throw arith_error("realization breaks the order of a");
    if (realization_pow(R, G.b, G.b_relator) != R.identity ||
        G.b == R.identity)
        throw arith_error("realization breaks the order of b");
    unsigned binv = realization_pow(R, G.b, G.b_relator - 1);
    unsigned conj = R.law(R.law(binv, G.a), G.b);
    if (conj != realization_pow(R, G.a, Int(t)))
        throw arith_error("realization breaks the conjugation relation");
    return G;
}

std::string presentation_text(const pgroup_presentation& G) {
    std::ostringstream os;
    os << "⟨a,b | a^" << G.a_relator.get_str() << ", b^"
       << G.b_relator.get_str() << ", [a,b]=a^" << G.comm_relator.get_str()
       << "⟩";
    return os.str();
}

std::string presentation_json(const pgroup_presentation& G) {
    std::ostringstream os;
    os << "{\"p\":" << G.p.get_str() << ",\"n\":" << G.n
       << ",\"relator_exponents\":[" << G.a_relator.get_str() << ","
       << G.b_relator.get_str() << "," << G.comm_relator.get_str() << "]}";
    return os.str();
}

namespace {

/* order of x and its inverse, by iterated multiplication */
std::pair<unsigned, unsigned> order_and_inverse(const group_realization& G,
                                                unsigned x) {
    unsigned k = 1, y = x, prev = G.identity;
    while (y != G.identity) {
        prev = y;
        y = G.law(y, x);
        ++k;
        if (k > G.order) throw arith_error("law does not close");
    }
    /* prev = x^{k-1} */
    return {k, x == G.identity ? G.identity : prev};
}

/* subgroup generated by a set closed under inverses (and conjugation when
   normality is needed by the caller) */
std::vector<unsigned> subgroup_closure(const group_realization& G,
                                       std::vector<unsigned> seed) {
    std::vector<char> in(G.order, 0);
    std::vector<unsigned> members = {G.identity};
    in[G.identity] = 1;
    std::sort(seed.begin(), seed.end());
    seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
    for (size_t i = 0; i < members.size(); ++i)
        for (unsigned s : seed) {
            unsigned t = G.law(members[i], s);
            if (!in[t]) {
                in[t] = 1;
                members.push_back(t);
            }
        }
    std::sort(members.begin(), members.end());
    return members;
}

std::vector<unsigned> inverse_table(const group_realization& G) {
    std::vector<unsigned> inv(G.order);
    for (unsigned x = 0; x < G.order; ++x)
        inv[x] = order_and_inverse(G, x).second;
    return inv;
}

/* abelian shape of the quotient of G by the sorted normal subgroup D,
   recovered from coset order statistics prime by prime */
ab_group_shape quotient_shape(const group_realization& G,
                              const std::vector<unsigned>& D) {
    std::vector<char> in_d(G.order, 0);
    for (unsigned d : D) in_d[d] = 1;
    std::vector<unsigned> rep(G.order);
    for (unsigned x = 0; x < G.order; ++x) {
        unsigned best = G.order;
        for (unsigned d : D) best = std::min(best, G.law(x, d));
        rep[x] = best;
    }
    std::vector<unsigned> reps;
    for (unsigned x = 0; x < G.order; ++x)
        if (rep[x] == x) reps.push_back(x);
    unsigned q = static_cast<unsigned>(reps.size());
    if (q * static_cast<unsigned long>(D.size()) != G.order)
        throw arith_error("coset count mismatch");
    /* coset orders */
    std::vector<unsigned> cord(reps.size());
    for (size_t i = 0; i < reps.size(); ++i) {
        unsigned k = 1, y = reps[i];
        while (!in_d[y]) {
            y = G.law(y, reps[i]);
            ++k;
        }
        cord[i] = k;
    }
    ab_group_shape shape;
    if (q == 1) return shape;
    auto fac = factorize(Int(q));
    std::vector<std::vector<unsigned>> primary; /* exponent lists, desc */
    std::vector<Int> primes;
    for (auto& [ell, mult] : fac) {
        unsigned long lu = ell.get_ui();
        /* lambda_k = log_ell #(cosets of order dividing ell^k) */
        std::vector<unsigned> lambda = {0};
        unsigned long lk = 1;
        for (unsigned k = 1; k <= mult; ++k) {
            lk *= lu;
            unsigned cnt = 0;
            for (auto o : cord)
                if (lk % o == 0) ++cnt;
            unsigned lg = 0;
            unsigned long c = cnt;
            while (c > 1) {
                if (c % lu != 0) throw arith_error("order count not a power");
                c /= lu;
                ++lg;
            }
            lambda.push_back(lg);
        }
        std::vector<unsigned> parts; /* d_k = #{i : e_i >= k} */
        for (size_t k = 1; k < lambda.size(); ++k)
            parts.push_back(lambda[k] - lambda[k - 1]);
        /* conjugate partition */
        std::vector<unsigned> es;
        for (unsigned j = 1; j <= (parts.empty() ? 0 : parts[0]); ++j) {
            unsigned e = 0;
            for (auto d : parts)
                if (d >= j) ++e;
            es.push_back(e);
        }
        primary.push_back(es);
        primes.push_back(ell);
    }
    size_t width = 0;
    for (auto& es : primary) width = std::max(width, es.size());
    for (size_t i = 0; i < width; ++i) {
        Int f = 1;
        for (size_t t = 0; t < primary.size(); ++t)
            if (i < primary[t].size()) {
                Int pe;
                mpz_pow_ui(pe.get_mpz_t(), primes[t].get_mpz_t(),
                           primary[t][i]);
                f *= pe;
            }
        shape.factors.push_back(f);
    }
    return shape;
}

} // namespace

group_invariant_data group_invariants(const group_realization& G) {
    if (G.order == 0 || !G.law) throw arith_error("empty realization");
    group_invariant_data out;
    out.order = G.order;
    auto inv = inverse_table(G);
    unsigned long expo = 1;
    for (unsigned x = 0; x < G.order; ++x)
        expo = std::lcm(expo, (unsigned long)order_and_inverse(G, x).first);
    out.exponent = static_cast<unsigned>(expo);
    for (unsigned x = 0; x < G.order; ++x) {
        bool central = true;
        for (unsigned g : G.generators)
            if (G.law(x, g) != G.law(g, x)) {
                central = false;
                break;
            }
        if (central) out.center.push_back(x);
    }
    /* the full commutator set is conjugation-invariant, so its closure is
       the derived subgroup */
    std::vector<char> seen(G.order, 0);
    std::vector<unsigned> comms;
    for (unsigned x = 0; x < G.order; ++x)
        for (unsigned y = 0; y < G.order; ++y) {
            unsigned c = G.law(G.law(inv[x], inv[y]), G.law(x, y));
            if (!seen[c]) {
                seen[c] = 1;
                comms.push_back(c);
            }
        }
    out.derived = subgroup_closure(G, comms);
    out.abelianization = quotient_shape(G, out.derived);
    return out;
}

bool is_powerful(const group_realization& G, const Int& p) {
    if (G.order == 0 || !G.law) throw arith_error("empty realization");
    if (!is_prime(p)) throw arith_error("p must be prime");
    Int e = p == 2 ? Int(4) : p;
    std::vector<unsigned> powers;
    for (unsigned x = 0; x < G.order; ++x)
        powers.push_back(realization_pow(G, x, e));
    /* the p-th power set is closed under inverses and conjugation, so the
       closure is a normal subgroup and the quotient is abelian exactly
       when it holds the generator commutators */
    auto H = subgroup_closure(G, powers);
    std::vector<char> in_h(G.order, 0);
    for (unsigned h : H) in_h[h] = 1;
    for (unsigned g1 : G.generators)
        for (unsigned g2 : G.generators) {
            unsigned i1 = order_and_inverse(G, g1).second;
            unsigned i2 = order_and_inverse(G, g2).second;
            unsigned c = G.law(G.law(i1, i2), G.law(g1, g2));
            if (!in_h[c]) return false;
        }
    return true;
}

ab_group_shape schur_multiplier_abelian(const ab_group_shape& shape) {
    std::vector<Int> chain;
    for (auto& f : shape.factors) {
        if (f <= 0) throw arith_error("invariant factor must be positive");
        if (f > 1) chain.push_back(f);
    }
    for (size_t i = 0; i + 1 < chain.size(); ++i)
        if (chain[i] % chain[i + 1] != 0)
            throw arith_error("invalid divisibility chain");
    ab_group_shape out;
    for (size_t i = 1; i < chain.size(); ++i)
        for (size_t c = 0; c < i; ++c) out.factors.push_back(chain[i]);
    return out;
}

bool golod_shafarevich_infinite(const Int& d, const Int& r) {
    if (d < 0 || r < 0) throw arith_error("ranks must be nonnegative");
    return d * d >= 4 * r;
}

std::pair<unsigned, unsigned> generator_rank(const field_k& K,
                                             const std::vector<ideal_rep>& S,
                                             const Int& p) {
    if (!is_prime(p)) throw arith_error("p must be prime");
    modulus_t m;
    unsigned indicator = 0;
    for (auto& q : S) {
        Int nq = ideal_norm(q);
        if (nq % p == 0) throw arith_error("place above p in the support");
        m.push_back({q, 1});
        if ((nq - 1) % p == 0) ++indicator;
    }
    unsigned exact = ray_p_data(K, m, p).second;
    auto cg = class_group(K);
    unsigned cl_rank = 0;
    for (auto& f : cg.invariants)
        if (f % p == 0) ++cl_rank;
    unsigned bound = indicator + cl_rank;
    if (exact > bound) throw arith_error("rank exceeds its bound");
    return {exact, bound};
}

} // namespace tamegal
