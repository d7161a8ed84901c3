#include <doctest.h>

#include "bern/bounds.hpp"
#include "bern/verify.hpp"

using namespace bern;

TEST_CASE("oracle basics") {
    CHECK(oracle_bernoulli(0).num == 1);
    CHECK(oracle_bernoulli(0).den == 1);
    CHECK(oracle_bernoulli(1).num == -1);
    CHECK(oracle_bernoulli(1).den == 2);
    CHECK(oracle_bernoulli(3).num == 0);
    CHECK(oracle_bernoulli(3).den == 1);
    CHECK(oracle_bernoulli(12).num == -691);
    CHECK(oracle_bernoulli(12).den == 2730);
    CHECK(oracle_bernoulli(20).num == -174611);
    CHECK(oracle_bernoulli(20).den == 330);
    CHECK(oracle_bernoulli(50).num == mpz_class("495057205241079648212477525"));
    CHECK(oracle_bernoulli(50).den == 66);
    CHECK_THROWS_AS(oracle_bernoulli(4001), std::invalid_argument);
}

TEST_CASE("oracle denominators match von Staudt-Clausen up to 1000") {
    for (std::uint64_t k = 2; k <= 1000; k += 2)
        CHECK(oracle_bernoulli(k).den == denominator_vsc(k));
}

TEST_CASE("oracle numerators stay under the beta bound") {
    for (std::uint64_t k = 4; k <= 400; k += 2) {
        BernoulliRational b = oracle_bernoulli(k);
        mpz_class mag = b.num < 0 ? mpz_class(-b.num) : b.num;
        CHECK(mpz_sizeinbase(mag.get_mpz_t(), 2) <= beta_bound(k, b.den));
    }
}

TEST_CASE("magnitude check hits the zeta values") {
    MagnitudeCheck m4 = magnitude_check(oracle_bernoulli(4), 4);
    CHECK(m4.ok);
    CHECK(m4.ratio == doctest::Approx(1.0823232337).epsilon(1e-9)); // zeta(4)

    MagnitudeCheck m6 = magnitude_check(oracle_bernoulli(6), 6);
    CHECK(m6.ok);
    CHECK(m6.ratio == doctest::Approx(1.0173430619).epsilon(1e-9)); // zeta(6)

    MagnitudeCheck m50 = magnitude_check(oracle_bernoulli(50), 50);
    CHECK(m50.ok);
    CHECK(m50.ratio - 1.0 < 1e-12); // zeta(50) - 1 is about 2^-50
}

TEST_CASE("magnitude ratio decreases toward 1") {
    // strict decrease holds while zeta(k) - 1 is still resolvable in the
    // reported double; past k = 48 the ratio saturates at 1
    double prev = 2.0;
    for (std::uint64_t k = 4; k <= 48; k += 2) {
        MagnitudeCheck m = magnitude_check(oracle_bernoulli(k), k);
        CHECK(m.ok);
        CHECK(m.ratio < prev);
        CHECK(m.ratio > 1.0);
        prev = m.ratio;
    }
    for (std::uint64_t k = 50; k <= 80; k += 2) {
        MagnitudeCheck m = magnitude_check(oracle_bernoulli(k), k);
        CHECK(m.ok);
        CHECK(m.ratio <= prev);
        CHECK(m.ratio >= 1.0);
    }
}

TEST_CASE("magnitude check rejects a wrong numerator") {
    BernoulliRational bad = oracle_bernoulli(4);
    bad.num *= 2;
    CHECK_FALSE(magnitude_check(bad, 4).ok);
}

TEST_CASE("spot check") {
    BernoulliRational b12 = oracle_bernoulli(12);
    std::vector<std::uint64_t> used;
    CHECK(spot_check(b12, 12, 3, &used));
    REQUIRE(used.size() == 3);
    PrimeList primes = sieve_upto(a_priori_Y(12));
    BoundSet bounds = compute_bounds(12, primes);
    for (std::uint64_t p : used) {
        CHECK(p > bounds.X); // disjoint from the reconstruction set
        CHECK(12 % (p - 1) != 0);
    }

    BernoulliRational off = b12;
    off.num += 1;
    CHECK_FALSE(spot_check(off, 12, 1));
}

TEST_CASE("oracle agrees with the modular kernels (independent route)") {
    for (std::uint64_t k : {12ull, 30ull, 100ull}) {
        for (std::uint64_t p : {11ull, 101ull, 257ull}) {
            if (k % (p - 1) == 0)
                continue;
            BernoulliRational b = oracle_bernoulli(k);
            std::uint64_t num = mpz_fdiv_ui(b.num.get_mpz_t(), p);
            std::uint64_t den = mpz_fdiv_ui(b.den.get_mpz_t(), p);
            MontgomeryContext ctx(p);
            CHECK(ctx.mul_mod(num, mod_inv(den, p)) == bern_mod_p(k, p).rp);
        }
    }
}

TEST_CASE("full verification report") {
    BernoulliRational b = bernoulli(40);
    VerificationReport r = verify_bernoulli(b, 40);
    CHECK(r.ok());
    CHECK(r.magnitude_ok);
    CHECK(r.spot_ok);
    REQUIRE(r.oracle_ok.has_value());
    CHECK(*r.oracle_ok);
    CHECK(r.spot_primes.size() == 3);

    VerificationReport small = verify_bernoulli(bernoulli(1), 1);
    CHECK(small.ok());
}
