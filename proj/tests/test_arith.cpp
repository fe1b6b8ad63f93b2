#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tamegal/arith.hpp"

using namespace tamegal;

namespace {

/* Bareiss fraction-free determinant, independent of the SNF transforms */
Int det_bareiss(int_matrix m) {
    size_t n = m.size();
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

} // namespace

TEST_CASE("kronecker symbol agrees with the Euler criterion at odd primes") {
    for (long p = 3; p < 1000; p += 2) {
        if (!is_prime(p)) continue;
        for (long a = -p; a <= p; ++a) {
            Int e = powmod(((a % p) + p) % p, (p - 1) / 2, p);
            int euler = e == 0 ? 0 : (e == 1 ? 1 : -1);
            CAPTURE(a);
            CAPTURE(p);
            REQUIRE(kronecker_symbol(a, p) == euler);
        }
    }
}

TEST_CASE("kronecker symbol edge cases") {
    CHECK(kronecker_symbol(-23, 151) == 1);
    CHECK(kronecker_symbol(-23, 73) == 1);
    CHECK(kronecker_symbol(-23, 5) == -1);
    CHECK(kronecker_symbol(-4, 7) == -1);
    CHECK(kronecker_symbol(0, 1) == 1);
    CHECK(kronecker_symbol(5, -1) == 1);
    CHECK(kronecker_symbol(-5, -1) == -1);
    CHECK(kronecker_symbol(7, 2) == 1);
    CHECK(kronecker_symbol(3, 2) == -1);
    CHECK_THROWS_AS(kronecker_symbol(3, 0), arith_error);
}

TEST_CASE("factorize known values") {
    auto f150 = factorize(150);
    REQUIRE(f150.size() == 3);
    CHECK(f150[0] == std::pair<Int, unsigned>(2, 1));
    CHECK(f150[1] == std::pair<Int, unsigned>(3, 1));
    CHECK(f150[2] == std::pair<Int, unsigned>(5, 2));

    Int n = 1;
    for (int i = 0; i < 6; ++i) n *= 31;
    auto f = factorize(n - 1); /* 31^6 - 1 = 2^5 3^2 5 331 1087 */
    unsigned v3 = 0;
    for (auto& [p, e] : f)
        if (p == 3) v3 = e;
    CHECK(v3 == 2);
    Int back = 1;
    for (auto& [p, e] : f)
        for (unsigned i = 0; i < e; ++i) back *= p;
    CHECK(back == n - 1);

    CHECK(factorize(1).empty());
    CHECK_THROWS_AS(factorize(0), arith_error);
}

TEST_CASE("factorize round-trips random products") {
    std::mt19937 rng(20260816);
    std::uniform_int_distribution<long> d(2, 999983);
    for (int t = 0; t < 200; ++t) {
        Int n = 1;
        int parts = 1 + int(rng() % 4);
        for (int i = 0; i < parts; ++i) n *= d(rng);
        auto f = factorize(n);
        Int back = 1;
        for (auto& [p, e] : f) {
            CHECK(is_prime(p));
            for (unsigned i = 0; i < e; ++i) back *= p;
        }
        REQUIRE(back == n);
        for (size_t i = 1; i < f.size(); ++i) CHECK(f[i - 1].first < f[i].first);
    }
}

TEST_CASE("factorize budget exhaustion is an error") {
    /* product of two 30-digit primes; tiny budget cannot split it */
    Int p("1000000000000000000000000000057");
    Int q("1000000000000000000000000000099");
    REQUIRE(is_prime(p));
    REQUIRE(is_prime(q));
    CHECK_THROWS_AS(factorize(p * q, 50), arith_error);
}

TEST_CASE("smith normal form frozen examples") {
    {
        auto r = smith_normal_form({{2, 0}, {0, 3}});
        REQUIRE(r.invariants == std::vector<Int>{1, 6});
    }
    {
        auto r = smith_normal_form({{0, 0}, {0, 0}});
        REQUIRE(r.invariants == std::vector<Int>{0, 0});
    }
    {
        auto r = smith_normal_form({{3, 0}, {0, 3}});
        REQUIRE(r.invariants == std::vector<Int>{3, 3});
    }
    {
        /* relation matrix of Z/9 x Z/3 presented on 3 generators */
        auto r = smith_normal_form({{9, 0, 0}, {0, 3, 0}, {0, 0, 1}});
        REQUIRE(r.invariants == std::vector<Int>{1, 3, 9});
    }
}

TEST_CASE("smith normal form random invariants") {
    std::mt19937 rng(4916747);
    std::uniform_int_distribution<long> d(-1000000, 1000000);
    for (int t = 0; t < 100; ++t) {
        size_t rows = 1 + rng() % 8, cols = 1 + rng() % 8;
        int_matrix m(rows, std::vector<Int>(cols));
        for (auto& row : m)
            for (auto& x : row) x = d(rng);
        auto r = smith_normal_form(m);
        REQUIRE(r.invariants.size() == std::min(rows, cols));
        /* diagonality and exact reconstruction */
        auto prod = matrix_mul(matrix_mul(r.left, m), r.right);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j)
                REQUIRE(prod[i][j] == (i == j && i < r.invariants.size() ? r.invariants[i] : 0));
        /* divisibility chain, zeros trailing, nonzero invariants positive */
        bool seen_zero = false;
        for (size_t i = 0; i < r.invariants.size(); ++i) {
            if (r.invariants[i] == 0) {
                seen_zero = true;
                continue;
            }
            CHECK(!seen_zero);
            CHECK(r.invariants[i] > 0);
            if (i > 0 && r.invariants[i - 1] != 0)
                CHECK(r.invariants[i] % r.invariants[i - 1] == 0);
        }
        Int du = det_bareiss(r.left), dv = det_bareiss(r.right);
        CHECK(abs(du) == 1);
        CHECK(abs(dv) == 1);
        CHECK(matrix_det(r.left) == du);
        CHECK(matrix_det(r.right) == dv);
        auto linv = unimodular_inverse(r.left);
        auto id = matrix_mul(linv, r.left);
        CHECK(id == identity_matrix(id.size()));
        auto rinv = unimodular_inverse(r.right);
        CHECK(matrix_mul(r.right, rinv) == identity_matrix(rinv.size()));
    }
}

TEST_CASE("unimodular inverse rejects singular and non-unit determinants") {
    CHECK(matrix_det({{2, 0}, {0, 3}}) == 6);
    CHECK(matrix_det({{1, 2}, {2, 4}}) == 0);
    CHECK_THROWS_AS(unimodular_inverse({{2, 0}, {0, 3}}), arith_error);
    CHECK_THROWS_AS(unimodular_inverse({{1, 2}, {2, 4}}), arith_error);
}

TEST_CASE("crt combine") {
    CHECK(crt_combine({{4, 7}, {16, 31}}) == 109);
    CHECK(crt_combine({{1, 3}, {2, 5}}) == 7);
    CHECK(crt_combine({}) == 0);
    CHECK(crt_combine({{-1, 5}}) == 4);
    CHECK_THROWS_AS(crt_combine({{1, 2}, {1, 4}}), arith_error);
    std::mt19937 rng(217);
    for (int t = 0; t < 50; ++t) {
        Int m1 = 2 + rng() % 1000, m2 = 2 + rng() % 1000;
        if (gcd(m1, m2) != 1) continue;
        Int r1 = rng() % m1.get_ui(), r2 = rng() % m2.get_ui();
        Int x = crt_combine({{r1, m1}, {r2, m2}});
        CHECK(x % m1 == r1);
        CHECK(x % m2 == r2);
        CHECK(x >= 0);
        CHECK(x < m1 * m2);
    }
}

TEST_CASE("ord_p and helpers") {
    CHECK(ord_p(48, 2) == 4);
    CHECK(ord_p(48, 3) == 1);
    CHECK(ord_p(-27, 3) == 3);
    CHECK(ord_p(5, 7) == 0);
    CHECK_THROWS_AS(ord_p(0, 3), arith_error);
    CHECK(powmod(3, 100, 101) == 1);
    CHECK(invmod(7, 31) == 9);
    CHECK_THROWS_AS(invmod(6, 33), arith_error);
}
