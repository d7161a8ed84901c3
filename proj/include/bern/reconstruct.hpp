#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "bern/bernmod.hpp"

namespace bern {

// Exact result B_k = num / den with gcd(num, den) = 1 and den > 0.
struct BernoulliRational {
    mpz_class num;
    mpz_class den;

    // "num/den" with a leading '-' for negative numerators; base 10 or 16.
    std::string to_string(int base = 10) const;
};

// Balanced product tree over the leaf moduli; level 0 holds the leaves,
// the last level the full product.
class CrtTree {
public:
    explicit CrtTree(std::span<const std::uint64_t> moduli);

    const mpz_class& root() const { return levels_.back().front(); }
    std::size_t leaf_count() const { return levels_.front().size(); }
    const std::vector<std::vector<mpz_class>>& levels() const { return levels_; }

private:
    std::vector<std::vector<mpz_class>> levels_;
};

CrtTree product_tree(std::span<const std::uint64_t> moduli);

// Unique R in [0, M) with R = rp mod p for every pair; pairs must match the
// tree's leaves index by index. The pairwise merges on the wide bottom
// levels run on `threads` workers; the serial apex is the extended GCD.
mpz_class crt_combine(std::span<const ResiduePair> pairs, const CrtTree& tree,
                      unsigned threads = 1);

// N' = Dk * R mod M, then the sign rule: k = 2 mod 4 keeps N', otherwise
// the numerator is N' - M.
mpz_class recover_numerator(const mpz_class& R, const mpz_class& M,
                            const mpz_class& Dk, std::uint64_t k);

struct ComputeStats {
    std::size_t prime_count = 0;
    std::size_t modulus_bits = 0;
    double residue_seconds = 0.0;
    double reconstruct_seconds = 0.0;
};

using ProgressFn = std::function<void(std::uint64_t done, std::uint64_t total)>;

// Full pipeline for any k >= 0: bounds, residue collection over the worker
// pool (largest primes first, results slotted by index), CRT, sign fix.
// The result is independent of the thread count.
BernoulliRational bernoulli(std::uint64_t k, unsigned threads = 1,
                            const ProgressFn& progress = {}, ComputeStats* stats = nullptr);

} // namespace bern
