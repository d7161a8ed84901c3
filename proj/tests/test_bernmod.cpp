#include <doctest.h>

#include <random>

#include "bern/bernmod.hpp"
#include "bern/primesieve.hpp"
#include "bern/verify.hpp"

using namespace bern;

namespace {

// exact reduction of the oracle rational mod p
u64 oracle_mod(u64 k, u64 p) {
    BernoulliRational b = oracle_bernoulli(k);
    MontgomeryContext ctx(p);
    u64 num = mpz_fdiv_ui(b.num.get_mpz_t(), p);
    u64 den = mpz_fdiv_ui(b.den.get_mpz_t(), p);
    return ctx.mul_mod(num, mod_inv(den, p));
}

// +1 below p/2, -1 above; x must not be 0 mod p
int f_sign(u64 x, u64 p) {
    u64 r = x % p;
    return 2 * r < p ? 1 : -1;
}

// 2p * h_g(x) for integer 0 < g < p: 2(x mod p) - 2g(x/g mod p) + p(g-1)
long long hg_scaled(u64 x, u64 g, u64 p) {
    u64 xg = static_cast<u64>(u128(x % p) * mod_inv(g, p) % p);
    return 2ll * static_cast<long long>(x % p) -
           2ll * static_cast<long long>(g) * static_cast<long long>(xg) +
           static_cast<long long>(p) * (static_cast<long long>(g) - 1);
}

// 4p * h_{1/2}(x) for the rational c = 1/2: 4(x mod p) - 2(2x mod p) - p
long long hhalf_scaled(u64 x, u64 p) {
    u64 x2 = (2 * (x % p)) % p;
    return 4ll * static_cast<long long>(x % p) - 2ll * static_cast<long long>(x2) -
           static_cast<long long>(p);
}

} // namespace

TEST_CASE("basic kernel examples") {
    CHECK(bern_mod_p_basic(2, 5) == 1);   // B_2 = 1/6
    CHECK(bern_mod_p_basic(4, 7) == 3);   // B_4 = -1/30
    CHECK(bern_mod_p_basic(10, 13) == 5); // B_10 = 5/66

    CHECK_THROWS_AS(bern_mod_p_basic(3, 7), std::invalid_argument);
    CHECK_THROWS_AS(bern_mod_p_basic(6, 7), std::invalid_argument); // k > p-3
    CHECK_THROWS_AS(bern_mod_p_basic(2, 3), std::invalid_argument);
}

TEST_CASE("kummer reduction") {
    KummerReduced r = kummer_reduce(14, 5);
    CHECK(r.m == 2);
    CHECK(r.scale == 2); // 14 * inv(2) mod 5

    r = kummer_reduce(4, 7);
    CHECK(r.m == 4);
    CHECK(r.scale == 1);

    r = kummer_reduce(100, 13);
    CHECK(r.m == 4);

    CHECK_THROWS_AS(kummer_reduce(12, 5), std::invalid_argument);  // 4 | 12
    CHECK_THROWS_AS(kummer_reduce(12, 13), std::invalid_argument); // 12 | 12
    CHECK_THROWS_AS(kummer_reduce(7, 11), std::invalid_argument);  // odd k
}

TEST_CASE("fraction bits") {
    MontgomeryContext c7(7);
    CHECK(fraction_bits(1, c7, 6) == std::vector<std::uint8_t>{0, 0, 1, 0, 0, 1});

    MontgomeryContext c5(5);
    CHECK(fraction_bits(1, c5, 4) == std::vector<std::uint8_t>{0, 0, 1, 1});

    for (u64 p : {5ull, 7ull, 101ull, 65537ull}) {
        MontgomeryContext ctx(p);
        CHECK(fraction_bits(p - 1, ctx, 1)[0] == 1); // (p-1)/p > 1/2
    }

    CHECK_THROWS_AS(fraction_bits(0, c7, 4), std::invalid_argument);
}

TEST_CASE("bit expansion is the sign oracle: f(2^j s) = (-1)^{b_j}") {
    PrimeList primes = sieve_upto(255);
    for (u64 p : primes) {
        if (p < 5)
            continue;
        MontgomeryContext ctx(p);
        for (u64 s = 1; s < p; ++s) {
            auto bits = fraction_bits(s, ctx, 24);
            u64 x = s;
            for (int j = 0; j < 24; ++j) {
                CHECK(f_sign(x, p) == (bits[j] ? -1 : 1));
                x = (2 * x) % p;
            }
        }
    }
}

TEST_CASE("signed power sum micro case") {
    MontgomeryContext c7(7);
    // sigma = (+1, -1), r = 3: 1 - 3 = -2 = 5 mod 7
    u64 v = signed_power_sum(c7, c7.to_mont(3), 0b01, 2);
    CHECK(c7.from_mont(v) == 5);
}

TEST_CASE("inner sum examples") {
    MontgomeryContext c7(7);
    CHECK(inner_sum_fast(3, 1, 1, c7) == 1); // f(1)+f(2)+f(4) = 1+1-1
    CHECK(inner_sum_fast(3, 2, 1, c7) == 6); // 1 + 2 - 4 = -1
}

TEST_CASE("inner sum is independent of block size and sweep cadence") {
    std::mt19937_64 rng(77);
    PrimeList primes = sieve_upto(100000);
    for (int iter = 0; iter < 60; ++iter) {
        u64 p = primes[5 + rng() % (primes.size() - 5)];
        MontgomeryContext ctx(p);
        u64 r = rng() % p;
        u64 s = 1 + rng() % (p - 1);
        u64 n = 1 + rng() % 4000;
        u64 reference = inner_sum_fast(n, r, s, ctx);
        for (unsigned block : {64u, 128u, 1024u, 8192u})
            CHECK(inner_sum_fast(n, r, s, ctx, block) == reference);
        for (u64 max_adds : {1ull, 2ull, 7ull})
            CHECK(inner_sum_fast(n, r, s, ctx, 4096, max_adds) == reference);
    }
}

TEST_CASE("inner sum against direct evaluation") {
    std::mt19937_64 rng(31);
    PrimeList primes = sieve_upto(3000);
    for (int iter = 0; iter < 200; ++iter) {
        u64 p = primes[5 + rng() % (primes.size() - 5)];
        MontgomeryContext ctx(p);
        u64 r = rng() % p;
        u64 s = 1 + rng() % (p - 1);
        u64 n = 1 + rng() % 300;
        u64 want = 0;
        u64 rj = 1, x = s;
        for (u64 j = 0; j < n; ++j) {
            want = f_sign(x, p) > 0 ? ctx.add(want, rj) : ctx.sub(want, rj);
            rj = ctx.mul_mod(rj, r);
            x = (2 * x) % p;
        }
        CHECK(inner_sum_fast(n, r, s, ctx) == want);
    }
}

TEST_CASE("fast path plan shape") {
    PrimeList primes = sieve_upto(2000);
    for (u64 p : primes) {
        if (p < 5)
            continue;
        MontgomeryContext ctx(p);
        auto factors = distinct_prime_factors(p - 1);
        auto plan = plan_fast_path(2, ctx, factors); // 2^2 = 4 != 1 for p >= 5
        REQUIRE(plan.has_value());
        CHECK((p - 1) % plan->n == 0);
        CHECK(plan->nprime * plan->mprime == (p - 1) / 2);
    }
}

TEST_CASE("fast kernel examples") {
    auto v = bern_mod_p_fast(4, 7);
    REQUIRE(v.has_value());
    CHECK(*v == 3);

    v = bern_mod_p_fast(4, 17);
    REQUIRE(v.has_value());
    CHECK(*v == bern_mod_p_basic(4, 17));
    CHECK(*v == 13);

    CHECK_FALSE(bern_mod_p_fast(6, 7).has_value()); // ord_2(7) = 3 divides 6
}

TEST_CASE("fast kernel touches every term exactly once") {
    for (u64 p : {13ull, 257ull, 1009ull, 65537ull}) {
        FastPathStats stats;
        auto v = bern_mod_p_fast(4, p, &stats);
        REQUIRE(v.has_value());
        CHECK(stats.table_adds + stats.tail_terms == (p - 1) / 2);
    }
}

TEST_CASE("dispatch examples") {
    ResiduePair r = bern_mod_p(14, 5);
    CHECK(r.p == 5);
    CHECK(r.rp == 2);

    r = bern_mod_p(4, 7);
    CHECK(r.rp == 3);

    // oracle reduction of B_12 = -691/2730 mod 11: both are 2, so rp = 1
    r = bern_mod_p(12, 11);
    CHECK(r.rp == 1);
    CHECK(r.rp == oracle_mod(12, 11));

    CHECK(bern_mod_p(100, 13).rp == oracle_mod(100, 13));
    CHECK(bern_mod_p(2, 5).rp == 1);
}

TEST_CASE("path equivalence on a sample") {
    std::mt19937_64 rng(4242);
    PrimeList primes = sieve_upto(600);
    for (u64 p : primes) {
        if (p < 5)
            continue;
        for (int i = 0; i < 10; ++i) {
            u64 k = 2 * (1 + rng() % ((p - 3) / 2));
            u64 want = bern_mod_p(k, p, Path::force_basic).rp;
            CHECK(bern_mod_p(k, p).rp == want);
            auto fast = bern_mod_p_fast(k, p);
            if (fast)
                CHECK(*fast == want);
            if (k <= 1000)
                CHECK(want == oracle_mod(k, p));
        }
    }
}

TEST_CASE("h antisymmetry and the f identity") {
    PrimeList primes = sieve_upto(99);
    for (u64 p : primes) {
        if (p < 5)
            continue;
        u64 g = find_generator(p, distinct_prime_factors(p - 1));
        for (u64 x = 1; x < p; ++x) {
            CHECK(hg_scaled(p - x, g, p) == -hg_scaled(x, g, p));
            CHECK(hhalf_scaled(p - x, p) == -hhalf_scaled(x, p));
            // h_{1/2}(x) = -f(x)/4, scaled by 4p
            CHECK(hhalf_scaled(x, p) == -static_cast<long long>(p) * f_sign(x, p));
        }
    }
}
