#include "tamegal/rayclass.hpp"

#include <algorithm>
#include <set>

namespace tamegal {

namespace {

void validate_modulus(const field_k& K, const modulus_t& m) {
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i].n < 1) throw arith_error("modulus exponent < 1");
        for (size_t j = i + 1; j < m.size(); ++j)
            if (!ideal_coprime(K, m[i].q, m[j].q))
                throw arith_error("modulus primes not distinct");
    }
}

elt_k torsion_generator(const field_k& K) {
    return K.unit_torsion == 2 ? elt_k{-1, 0} : elt_k{0, 1};
}

} // namespace

Int dlog_cyclic(const field_k& K, const ideal_rep& mod, const elt_k& g,
                const elt_k& x, const Int& order) {
    elt_k one = reduce_mod_ideal(K, mod, {1, 0});
    elt_k xr = reduce_mod_ideal(K, mod, x);
    std::vector<std::pair<Int, Int>> residues;
    for (auto& [p, k] : factorize(order)) {
        Int pk = 1;
        for (unsigned i = 0; i < k; ++i) pk *= p;
        elt_k gp = element_powmod(K, mod, g, order / pk); /* order p^k */
        elt_k xp = element_powmod(K, mod, xr, order / pk);
        elt_k gamma = element_powmod(K, mod, gp, pk / p); /* order p */
        Int e = 0, pj = 1;
        for (unsigned j = 0; j < k; ++j) {
            /* strip known digits, project to the order-p quotient layer */
            elt_k ge = element_powmod(K, mod, gp, pk - e % pk);
            elt_k y = reduce_mod_ideal(K, mod, element_mul(K, xp, ge));
            y = element_powmod(K, mod, y, pk / (pj * p));
            elt_k probe = one;
            Int d = -1;
            for (Int t = 0; t < p; ++t) {
                if (probe == y) {
                    d = t;
                    break;
                }
                probe = reduce_mod_ideal(K, mod, element_mul(K, probe, gamma));
            }
            if (d < 0) throw arith_error("dlog_cyclic: digit not found");
            e += d * pj;
            pj *= p;
        }
        residues.push_back({e, pk});
    }
    Int e = residues.empty() ? Int(0) : crt_combine(residues);
    if (element_powmod(K, mod, g, e) != xr)
        throw arith_error("dlog_cyclic: not in the cyclic subgroup");
    return e;
}

Int ray_class_number(const field_k& K, const modulus_t& m) {
    validate_modulus(K, m);
    Int num = class_group(K).h;
    for (auto& part : m)
        num *= residue_unit_structure(K, part.q, part.n).order;
    Int idx = unit_image_index(K, m);
    if (num % idx != 0)
        throw arith_error("ray_class_number: unit index does not divide");
    return num / idx;
}

ray_class_group ray_class_structure(const field_k& K, const modulus_t& m) {
    validate_modulus(K, m);
    ray_class_group G;
    G.mod = m;
    G.mod_product = modulus_ideal(K, m);
    for (auto& part : m) {
        auto comp = residue_unit_structure(K, part.q, part.n);
        G.comp_gens.push_back(component_generator(K, comp));
        G.comps.push_back(std::move(comp));
    }
    G.cg = class_group(K);
    size_t k = G.comps.size(), r = G.cg.invariants.size();

    /* prime-ideal representatives of the class group generators, coprime to
       the modulus and the discriminant, smallest norm first */
    std::vector<bool> have(r, false);
    size_t found = 0;
    G.class_reps.resize(r);
    for (Int ell = 2; found < r && ell < 100000; ell = ell + 1) {
        if (!is_prime(ell) || K.disc % ell == 0) continue;
        auto sp = split_prime(K, ell);
        if (sp.type == split_type::inert) continue;
        for (auto& P : sp.primes) {
            if (!ideal_coprime(K, P, G.mod_product)) continue;
            auto ev = G.cg.dlog.at(form_of_ideal(K, P));
            for (size_t j = 0; j < r; ++j) {
                if (have[j]) continue;
                bool is_ej = true;
                for (size_t t = 0; t < r; ++t)
                    if (ev[t] != (t == j ? 1 : 0)) is_ej = false;
                if (is_ej) {
                    G.class_reps[j] = P;
                    have[j] = true;
                    ++found;
                    break;
                }
            }
        }
    }
    if (found < r)
        throw arith_error(
            "ray_class_structure: no coprime class representative found");

    /* relation rows on columns (u_1..u_k, g_1..g_r) */
    int_matrix rel;
    for (size_t i = 0; i < k; ++i) {
        std::vector<Int> row(k + r, 0);
        row[i] = G.comps[i].order;
        rel.push_back(row);
    }
    {
        std::vector<Int> row(k + r, 0);
        elt_k zeta = torsion_generator(K);
        for (size_t i = 0; i < k; ++i)
            row[i] = dlog_cyclic(K, G.comps[i].qn, G.comp_gens[i], zeta,
                                 G.comps[i].order);
        rel.push_back(row);
    }
    for (size_t j = 0; j < r; ++j) {
        std::vector<Int> row(k + r, 0);
        ideal_rep A{1, 0, 1};
        for (Int t = 0; t < G.cg.invariants[j]; t += 1)
            A = ideal_mul(K, A, G.class_reps[j]);
        elt_k alpha = principal_generator(K, A);
        for (size_t i = 0; i < k; ++i)
            row[i] = -dlog_cyclic(K, G.comps[i].qn, G.comp_gens[i], alpha,
                                  G.comps[i].order);
        row[k + j] = G.cg.invariants[j];
        rel.push_back(row);
    }

    auto snf = smith_normal_form(rel);
    G.order = 1;
    for (size_t t = 0; t < k + r; ++t) {
        Int d = t < snf.invariants.size() ? snf.invariants[t] : Int(0);
        if (d == 0) throw arith_error("ray_class_structure: infinite quotient");
        G.order *= d;
        if (d > 1) {
            G.invariants.push_back(d);
            std::vector<Int> col(k + r);
            for (size_t i = 0; i < k + r; ++i) col[i] = snf.right[i][t];
            G.to_new.push_back(col);
        }
    }
    Int expected = ray_class_number(K, m);
    if (G.order != expected)
        throw arith_error("ray_class_structure: order mismatch vs formula");
    return G;
}

std::pair<unsigned, unsigned> ray_p_data(const field_k& K, const modulus_t& m,
                                         const Int& p) {
    validate_modulus(K, m);
    for (auto& part : m)
        if (ideal_norm(part.q) % p == 0)
            throw arith_error("ray_p_data: modulus not coprime to p");
    unsigned ord = ord_p(ray_class_number(K, m), p);
    modulus_t radical;
    for (auto& part : m) radical.push_back({part.q, 1});
    auto G = ray_class_structure(K, radical);
    unsigned rank = 0;
    for (auto& d : G.invariants)
        if (d % p == 0) ++rank;
    return {ord, rank};
}

std::vector<Int> artin_class(const field_k& K, const ray_class_group& G,
                             const ideal_rep& I) {
    if (!ideal_coprime(K, I, G.mod_product))
        throw arith_error("artin_class: ideal not coprime to the modulus");
    size_t k = G.comps.size(), r = G.cg.invariants.size();
    std::vector<Int> v(k + r, 0);
    ideal_rep A = I;
    if (r > 0) {
        auto ev = G.cg.dlog.at(form_of_ideal(K, I));
        for (size_t j = 0; j < r; ++j) {
            Int c = (G.cg.invariants[j] - ev[j]) % G.cg.invariants[j];
            if (c < 0) c += G.cg.invariants[j];
            for (Int t = 0; t < c; t += 1) A = ideal_mul(K, A, G.class_reps[j]);
            v[k + j] = -c;
        }
    }
    elt_k alpha = principal_generator(K, A);
    for (size_t i = 0; i < k; ++i)
        v[i] = dlog_cyclic(K, G.comps[i].qn, G.comp_gens[i], alpha,
                           G.comps[i].order);
    std::vector<Int> out;
    for (size_t t = 0; t < G.invariants.size(); ++t) {
        Int f = 0;
        for (size_t i = 0; i < k + r; ++i) f += G.to_new[t][i] * v[i];
        f %= G.invariants[t];
        if (f < 0) f += G.invariants[t];
        out.push_back(f);
    }
    return out;
}

namespace {

/* row-operation echelon basis of the lattice spanned by the rows */
int_matrix hnf_rows(int_matrix m) {
    if (m.empty()) return m;
    size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = rows;
        for (size_t i = r; i < rows; ++i)
            if (m[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        for (size_t i = r + 1; i < rows; ++i) {
            while (m[i][c] != 0) {
                Int q = m[r][c] / m[i][c];
                for (size_t t = c; t < cols; ++t) m[r][t] -= q * m[i][t];
                std::swap(m[r], m[i]);
            }
        }
        if (m[r][c] < 0)
            for (size_t t = c; t < cols; ++t) m[r][t] = -m[r][t];
        ++r;
    }
    m.resize(r);
    return m;
}

Int ideal_valuation(const field_k& K, const std::vector<ideal_rep>& powers,
                    const elt_k& x) {
    Int v = 0;
    for (auto& pw : powers) {
        if (!ideal_contains(K, pw, x)) break;
        v += 1;
    }
    return v;
}

} // namespace

fin_ab_group oracle_ray_class(const field_k& K, const modulus_t& m,
                              const Int& norm_bound) {
    validate_modulus(K, m);
    Int expected = ray_class_number(K, m);
    ideal_rep M = modulus_ideal(K, m);

    /* generating primes of norm below the bound, coprime to the modulus */
    struct gen_prime {
        ideal_rep P;
        Int ell;
        unsigned f;
        std::vector<ideal_rep> powers; /* P, P^2, ... */
    };
    std::vector<gen_prime> gens;
    for (Int ell = 2; ell <= norm_bound; ell += 1) {
        if (!is_prime(ell)) continue;
        auto sp = split_prime(K, ell);
        for (auto& P : sp.primes) {
            if (ideal_norm(P) > norm_bound) continue;
            if (!ideal_coprime(K, P, M)) continue;
            gens.push_back({P, ell, sp.f, {}});
        }
    }
    if (gens.empty()) {
        if (expected == 1) return {1, {}};
        throw arith_error("oracle_ray_class: no generators below bound");
    }
    size_t g = gens.size();
    Int max_pow_norm = Int(1) << 62;
    for (auto& gp : gens) {
        ideal_rep pw = gp.P;
        Int nn = ideal_norm(gp.P);
        Int acc = nn;
        while (acc <= max_pow_norm) {
            gp.powers.push_back(pw);
            pw = ideal_mul(K, pw, gp.P);
            acc *= nn;
        }
    }

    Int B = ideal_norm(M) * ideal_norm(M) * abs(K.disc);
    for (int round = 0; round < 12; ++round) {
        std::set<std::vector<Int>> rows;
        /* alpha = 1 + s*a + t*(b + c*omega), exact norm filter */
        const Int &a = M.a, &b = M.b, &c = M.c;
        Int fourB = 4 * B, absD = abs(K.disc);
        Int tmax = mpz_class(sqrt(fourB / (absD * c * c)));
        for (Int t = -tmax; t <= tmax; t += 1) {
            Int v = t * c;
            Int W = fourB - absD * v * v;
            if (W < 0) continue;
            Int w = mpz_class(sqrt(W));
            Int lo2 = -K.omega_trace * v - w, hi2 = -K.omega_trace * v + w;
            /* u in [ceil(lo2/2), floor(hi2/2)], s from u = 1 + s*a + t*b */
            Int ulo, uhi, slo, shi;
            mpz_cdiv_q(ulo.get_mpz_t(), lo2.get_mpz_t(), Int(2).get_mpz_t());
            mpz_fdiv_q(uhi.get_mpz_t(), hi2.get_mpz_t(), Int(2).get_mpz_t());
            Int s_num_lo = ulo - 1 - t * b, s_num_hi = uhi - 1 - t * b;
            mpz_cdiv_q(slo.get_mpz_t(), s_num_lo.get_mpz_t(), a.get_mpz_t());
            mpz_fdiv_q(shi.get_mpz_t(), s_num_hi.get_mpz_t(), a.get_mpz_t());
            for (Int s = slo; s <= shi; s += 1) {
                elt_k alpha{1 + s * a + t * b, v};
                if (alpha.u == 0 && alpha.v == 0) continue;
                Int n = element_norm(K, alpha);
                if (n > B) continue;
                /* factor the norm over the generating primes */
                std::vector<Int> row(g, 0);
                bool smooth = true;
                Int rest = n;
                for (size_t i = 0; i < g && smooth; ++i) {
                    if (rest % gens[i].ell != 0) continue;
                    unsigned av = 0;
                    while (rest % gens[i].ell == 0) {
                        rest /= gens[i].ell;
                        ++av;
                    }
                    /* distribute the valuation over the primes above ell */
                    Int used = 0;
                    for (size_t jj = i; jj < g; ++jj) {
                        if (gens[jj].ell != gens[i].ell) continue;
                        Int val = ideal_valuation(K, gens[jj].powers, alpha);
                        row[jj] = val;
                        used += val * gens[jj].f;
                    }
                    if (used != av) smooth = false; /* ramified part or gap */
                }
                if (!smooth || rest != 1) continue;
                rows.insert(row);
            }
        }
        int_matrix basis(rows.begin(), rows.end());
        basis = hnf_rows(std::move(basis));
        if (basis.size() == g) {
            auto snf = smith_normal_form(basis);
            Int order = 1;
            for (auto& d : snf.invariants) order *= d;
            if (order == expected) {
                fin_ab_group out;
                out.order = order;
                for (auto& d : snf.invariants)
                    if (d > 1) out.invariants.push_back(d);
                return out;
            }
        }
        B *= 2;
    }
    throw arith_error("oracle_ray_class: norm bound insufficient to close");
}

} // namespace tamegal
