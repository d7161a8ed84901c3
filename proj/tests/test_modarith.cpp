#include <doctest.h>

#include <random>

#include "bern/modarith.hpp"
#include "bern/primesieve.hpp"

using namespace bern;

TEST_CASE("montgomery context construction") {
    MontgomeryContext c5(5);
    CHECK(c5.pinv() * 5 == ~u64(0)); // pinv * p = -1 mod 2^64

    MontgomeryContext c7(7);
    CHECK(c7.from_mont(c7.to_mont(3)) == 3);

    // largest prime the record computation needs fits comfortably
    CHECK_NOTHROW(MontgomeryContext(1558322063));

    CHECK_THROWS_AS(MontgomeryContext(4), std::invalid_argument);
    CHECK_THROWS_AS(MontgomeryContext(3), std::invalid_argument);
    CHECK_THROWS_AS(MontgomeryContext(u64(1) << 62), std::invalid_argument);
}

TEST_CASE("montgomery multiply matches schoolbook") {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 10000; ++iter) {
        u64 p = (rng() % (MontgomeryContext::max_modulus - 5)) + 5;
        p |= 1;
        MontgomeryContext ctx(p);
        u64 a = rng() % p, b = rng() % p;
        u64 want = static_cast<u64>(u128(a) * b % p);
        CHECK(ctx.from_mont(ctx.mul(ctx.to_mont(a), ctx.to_mont(b))) == want);
        CHECK(ctx.mul_mod(a, b) == want);
        // mixed-domain product: mul(plain, mont) gives the plain product
        CHECK(ctx.mul(a, ctx.to_mont(b)) == want);
    }
}

TEST_CASE("montgomery roundtrip") {
    std::mt19937_64 rng(7);
    for (u64 p : {u64(5), u64(7), u64(97), u64(65537), u64(1558322063), (u64(1) << 62) - 57}) {
        if (p % 2 == 0)
            continue;
        MontgomeryContext ctx(p);
        for (int i = 0; i < 200; ++i) {
            u64 a = rng() % p;
            CHECK(ctx.from_mont(ctx.to_mont(a)) == a);
        }
    }
}

TEST_CASE("quot_rem against wide division") {
    std::mt19937_64 rng(1234);
    for (int iter = 0; iter < 20000; ++iter) {
        u64 p = (rng() % (MontgomeryContext::max_modulus - 5)) + 5;
        p |= 1;
        MontgomeryContext ctx(p);
        u128 a;
        switch (iter % 4) {
        case 0: a = u128(rng() % p) * (rng() % p); break;
        case 1: a = (u128(rng() % p) << 64) | rng(); break; // u * 2^64 + junk < p*2^64
        case 2: a = (u128(p) << 64) - 1; break;             // largest admissible
        default: a = rng() % p; break;
        }
        auto qr = ctx.quot_rem(a);
        CHECK(qr.quot == static_cast<u64>(a / p));
        CHECK(qr.rem == static_cast<u64>(a % p));
    }
}

TEST_CASE("mod_pow examples") {
    CHECK(mod_pow(2, 10, MontgomeryContext(11)) == 1);
    CHECK(mod_pow(3, 0, MontgomeryContext(7)) == 1);
    CHECK(mod_pow(2, 5, MontgomeryContext(31)) == 1);
    // random agreement with repeated multiplication
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        u64 p = (rng() % 10000) | 1;
        if (p < 5)
            p = 5;
        MontgomeryContext ctx(p);
        u64 b = rng() % p;
        u64 e = rng() % 50;
        u64 want = 1;
        for (u64 j = 0; j < e; ++j)
            want = static_cast<u64>(u128(want) * b % p);
        CHECK(mod_pow(b, e, ctx) == want);
    }
}

TEST_CASE("mod_inv") {
    CHECK(mod_inv(2, 7) == 4);
    CHECK(mod_inv(1, 7) == 1);
    CHECK(mod_inv(1, 1558322063) == 1);
    CHECK(mod_inv(6 % 5, 5) == 1);
    CHECK_THROWS_AS(mod_inv(0, 7), std::invalid_argument);

    std::mt19937_64 rng(99);
    PrimeList primes = sieve_upto(100000);
    for (int i = 0; i < 500; ++i) {
        u64 p = primes[5 + rng() % (primes.size() - 5)];
        u64 a = 1 + rng() % (p - 1);
        u64 inv = mod_inv(a, p);
        CHECK(static_cast<u64>(u128(a) * inv % p) == 1);
    }
}

TEST_CASE("prime testing and factoring") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(1558322063));
    CHECK(is_prime_u64(1000000007));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(561));  // Carmichael
    CHECK_FALSE(is_prime_u64(3215031751ull));

    CHECK(distinct_prime_factors(24) == std::vector<u64>{2, 3});
    CHECK(distinct_prime_factors(1) == std::vector<u64>{});
    CHECK(distinct_prime_factors(1000000006) == std::vector<u64>{2, 500000003});

    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        u64 n = rng() % 1000000000 + 2;
        u64 rest = n;
        for (u64 q : distinct_prime_factors(n)) {
            CHECK(is_prime_u64(q));
            CHECK(n % q == 0);
            while (rest % q == 0)
                rest /= q;
        }
        CHECK(rest == 1);
    }
}

TEST_CASE("find_generator smallest roots") {
    auto gen = [](u64 p) { return find_generator(p, distinct_prime_factors(p - 1)); };
    CHECK(gen(5) == 2);
    CHECK(gen(7) == 3);
    CHECK(gen(11) == 2);
    CHECK(gen(41) == 6);
}

TEST_CASE("find_generator output has exact order p-1 for all p < 10^4") {
    PrimeList primes = sieve_upto(10000);
    for (u64 p : primes) {
        if (p < 5)
            continue;
        u64 g = find_generator(p, distinct_prime_factors(p - 1));
        // brute force: no power below p-1 hits 1
        u64 x = g % p;
        for (u64 e = 1; e < p - 1; ++e) {
            CHECK(x != 1);
            x = static_cast<u64>(u128(x) * g % p);
        }
        CHECK(x == 1);
    }
}

TEST_CASE("order_of_two") {
    auto ord = [](u64 p) { return order_of_two(p, distinct_prime_factors(p - 1)); };
    CHECK(ord(7) == 3);
    CHECK(ord(17) == 8);
    CHECK(ord(5) == 4);

    PrimeList primes = sieve_upto(10000);
    for (u64 p : primes) {
        if (p < 5)
            continue;
        MontgomeryContext ctx(p);
        u64 n = ord(p);
        CHECK((p - 1) % n == 0);
        CHECK(mod_pow(2, n, ctx) == 1);
        for (u64 q : distinct_prime_factors(n))
            CHECK(mod_pow(2, n / q, ctx) != 1);
    }
}
