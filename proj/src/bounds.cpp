#include "bern/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <mpfr.h>

#include "bern/modarith.hpp"
#include "bern/reconstruct.hpp"

namespace bern {

namespace {

void require_even(std::uint64_t k, std::uint64_t min) {
    if (k < min || k % 2 != 0)
        throw std::invalid_argument("k must be even and >= " + std::to_string(min));
}

} // namespace

mpz_class denominator_vsc(std::uint64_t k) {
    require_even(k, 2);
    std::vector<std::uint64_t> divisors;
    for (std::uint64_t i = 1; i * i <= k; ++i) {
        if (k % i == 0) {
            divisors.push_back(i);
            if (i != k / i)
                divisors.push_back(k / i);
        }
    }
    std::vector<std::uint64_t> retained;
    for (std::uint64_t d : divisors)
        if (is_prime_u64(d + 1))
            retained.push_back(d + 1);
    return product_tree(retained).root();
}

std::uint64_t beta_bound(std::uint64_t k, const mpz_class& Dk) {
    require_even(k, 4);
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, Dk.get_mpz_t());
    double log2_Dk = std::log2(mant) + static_cast<double>(exp2);
    double kd = static_cast<double>(k);
    // slack of k * 2^-20 so double rounding can only overestimate
    double value = (kd + 0.5) * std::log2(kd) - 4.094 * kd + 2.470 + log2_Dk + kd * 0x1p-20;
    double up = std::ceil(value);
    if (up < 1.0)
        up = 1.0;
    return static_cast<std::uint64_t>(up);
}

std::uint64_t a_priori_Y(std::uint64_t k) {
    require_even(k, 4);
    mpfr_t v, lg;
    mpfr_init2(v, 192);
    mpfr_init2(lg, 192);
    mpfr_set_ui(lg, static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_log2(lg, lg, MPFR_RNDN);
    mpfr_set_ui(v, static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_add_d(v, v, 0.5, MPFR_RNDN);
    mpfr_mul(v, v, lg, MPFR_RNDN);
    mpfr_ceil(v, v);
    unsigned long y = mpfr_get_ui(v, MPFR_RNDN);
    mpfr_clear(v);
    mpfr_clear(lg);
    return std::max<std::uint64_t>(37, y);
}

TightX tight_X(std::uint64_t k, std::uint64_t beta, const PrimeList& primes) {
    require_even(k, 4);
    if (std::numeric_limits<long double>::digits < 64)
        throw std::runtime_error("tight_X: long double narrower than 64 mantissa bits");

    // accumulator as mant * 2^e2 with mant in [0.5, 1); one rounding per
    // multiply keeps the relative error within the proof's budget
    long double mant = 0.5L;
    std::int64_t e2 = 1; // value 1.0
    std::uint64_t p = 3;
    std::uint64_t skipped = 0;

    auto below_threshold = [&]() {
        // value < 2^{beta+1}  <=>  e2 < beta + 2
        return e2 < static_cast<std::int64_t>(beta) + 2;
    };

    while (below_threshold()) {
        p = next_prime(p, primes);
        if (k % (p - 1) != 0) {
            mant *= static_cast<long double>(p);
            int adj = 0;
            mant = std::frexp(mant, &adj);
            e2 += adj;
        } else {
            ++skipped;
        }
    }
    return {p, skipped};
}

BoundSet compute_bounds(std::uint64_t k, const PrimeList& primes) {
    require_even(k, 4);
    BoundSet b;
    b.k = k;
    b.Y = a_priori_Y(k);
    if (primes.limit() < b.Y)
        throw std::invalid_argument("compute_bounds: prime list does not cover Y");
    b.Dk = denominator_vsc(k);
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, b.Dk.get_mpz_t());
    b.log2_Dk = std::log2(mant) + static_cast<double>(exp2);
    b.beta = beta_bound(k, b.Dk);
    TightX tx = tight_X(k, b.beta, primes);
    b.X = tx.X;
    b.skipped = tx.skipped;
    return b;
}

} // namespace bern
