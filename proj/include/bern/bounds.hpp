#pragma once

#include <cstdint>
#include <gmpxx.h>

#include "bern/primesieve.hpp"

namespace bern {

// Quantities governing how many primes the reconstruction needs:
//   Dk   exact denominator of B_k (product of p with p-1 | k)
//   beta bit bound, |N_k| < 2^beta
//   Y    a-priori prime bound; the product of admissible primes up to Y
//        provably reaches 2^{beta+2}
//   X    tight prime bound found by the floating-point scan; the exact
//        product of admissible primes up to X is at least 2^beta
struct BoundSet {
    std::uint64_t k = 0;
    mpz_class Dk;
    std::uint64_t beta = 0;
    std::uint64_t Y = 0;
    std::uint64_t X = 0;
    std::uint64_t skipped = 0; // primes seen by the X scan with p-1 | k
    double log2_Dk = 0.0;
};

// Product of d+1 over divisors d of k with d+1 prime (von Staudt-Clausen).
// k must be even and >= 2.
mpz_class denominator_vsc(std::uint64_t k);

// Ceiling of (k + 0.5) log2 k - 4.094 k + 2.470 + log2 Dk, evaluated so that
// rounding can only push the result up. Requires even k >= 4.
std::uint64_t beta_bound(std::uint64_t k, const mpz_class& Dk);

// max(37, ceil((k + 0.5) log2 k)), evaluated in high precision so the
// ceiling is exact. Requires even k >= 4.
std::uint64_t a_priori_Y(std::uint64_t k);

struct TightX {
    std::uint64_t X = 0;
    std::uint64_t skipped = 0;
};

// Scan primes from 3, multiplying a floating accumulator by each p with
// p-1 not dividing k, until the accumulator reaches 2^{beta+1}; returns the
// final prime. The accumulator keeps >= 64 mantissa bits, which covers the
// ceil(log2 Y) + 1 requirement for any feasible Y.
TightX tight_X(std::uint64_t k, std::uint64_t beta, const PrimeList& primes);

// Convenience bundle of the above; `primes` must cover a_priori_Y(k).
BoundSet compute_bounds(std::uint64_t k, const PrimeList& primes);

} // namespace bern
