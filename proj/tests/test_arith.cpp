#include <doctest.h>

#include "oracles.hpp"
#include "qf4/arith.hpp"

using namespace qf4;
using namespace qf4::arith;

TEST_SUITE_BEGIN("arith");

TEST_CASE("factorize basics") {
    CHECK(factorize(1).factors.empty());
    auto f = factorize(697);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == std::pair<u128, int>{17, 1});
    CHECK(f.factors[1] == std::pair<u128, int>{41, 1});
    auto g = factorize(u128(1) << 40);
    REQUIRE(g.factors.size() == 1);
    CHECK(g.factors[0] == std::pair<u128, int>{2, 40});
    CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize recombines") {
    for (u64 n : {2u * 3 * 5 * 7 * 11, 999983u, 1u << 20, 123456789u}) {
        auto f = factorize(n);
        u128 prod = 1;
        for (auto [p, e] : f.factors) {
            CHECK(is_prime(p));
            for (int i = 0; i < e; ++i) prod *= p;
        }
        CHECK(prod == n);
    }
    // Semiprime past the trial-division bound (the divisor fast path range).
    u128 big = u128(10000019) * 10000079;
    auto f = factorize(big);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].first == 10000019);
    CHECK(f.factors[1].first == 10000079);
}

TEST_CASE("primality") {
    CHECK(is_prime(2));
    CHECK(is_prime(999983));
    CHECK_FALSE(is_prime(561));   // Carmichael
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime((u128(1) << 61) - 1));
    CHECK_FALSE(is_prime((u128(1) << 62) - 1));
}

TEST_CASE("kronecker examples") {
    CHECK(kronecker(13, 17) == 1);
    CHECK(kronecker(13, 41) == -1);
    for (i64 a : {-7, -1, 0, 1, 5, 100}) CHECK(kronecker(a, 1) == 1);
}

TEST_CASE("kronecker matches Legendre on odd primes") {
    for (i64 p : {3, 5, 7, 11, 13, 17, 41}) {
        for (i64 a = -10; a <= 10; ++a) CHECK(kronecker(a, p) == oracle::naive_legendre(a, p));
    }
}

TEST_CASE("kronecker multiplicative in the lower argument") {
    u64 state = 12345;
    auto next = [&] {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return i64(state >> 40);
    };
    for (int i = 0; i < 200; ++i) {
        i64 a = next() % 61 - 30;
        i64 n1 = next() % 50 + 1;
        i64 n2 = next() % 50 + 1;
        CHECK(kronecker(a, n1 * n2) == kronecker(a, n1) * kronecker(a, n2));
    }
}

TEST_CASE("mod_inverse") {
    CHECK(mod_inverse(3, 7) == 5);
    CHECK(mod_inverse(4, 9) == 7);
    CHECK(mod_inverse(1, 10) == 1);
    CHECK_THROWS_AS(mod_inverse(6, 9), NotCoprimeError);
    for (i64 b : {2, 3, 5, 8, 9, 697}) {
        for (i64 a = 1; a < b; ++a) {
            if (gcd_i64(a, b) != 1) continue;
            CHECK(mod_norm(a * mod_inverse(a, b), b) == 1);
        }
    }
}

TEST_CASE("crt_split") {
    CHECK(crt_split(12, 10) == std::pair<u64, u64>{3, 4});
    CHECK(crt_split(7, 1) == std::pair<u64, u64>{7, 1});
    CHECK(crt_split(8, 2) == std::pair<u64, u64>{1, 8});
    for (u64 q = 1; q <= 60; ++q) {
        for (u64 m : {1u, 2u, 4u, 6u, 697u}) {
            auto [u, v] = crt_split(q, m);
            CHECK(u * v == q);
            CHECK(gcd_u64(u, m) == 1);
            for (auto [p, e] : factorize(v).factors) {
                (void)e;
                CHECK(m % u64(p) == 0);
            }
        }
    }
}

TEST_CASE("ramanujan sum") {
    CHECK(ramanujan_sum(4, 2) == -2);
    CHECK(ramanujan_sum(4, 0) == 2);
    CHECK(ramanujan_sum(1, 12345) == 1);
    // c_q(n) equals the direct complex sum over units.
    for (u64 q = 1; q <= 200; ++q) {
        for (i64 n : {-200, -37, -1, 0, 1, 2, 99, 200}) {
            CHECK(std::abs(double(ramanujan_sum(q, n)) - oracle::naive_ramanujan(q, n)) < 1e-8);
        }
    }
}

TEST_CASE("mobius phi divisors") {
    CHECK(mobius(1) == 1);
    CHECK(mobius(6) == 1);
    CHECK(mobius(30) == -1);
    CHECK(mobius(12) == 0);
    CHECK(euler_phi(697) == 640);
    CHECK(euler_phi(1) == 1);
    auto ds = divisors(u128(25));
    CHECK(ds == std::vector<u128>{1, 5, 25});
}

TEST_CASE("sqrt_mod_p") {
    for (i64 p : {3, 5, 7, 13, 17, 41, 101}) {
        for (i64 a = 0; a < p; ++a) {
            i64 r = sqrt_mod_p(a, p);
            if (oracle::naive_legendre(a, p) >= 0) {
                REQUIRE(r >= 0);
                CHECK(r * r % p == a);
            } else {
                CHECK(r == -1);
            }
        }
    }
}

TEST_SUITE_END();
