#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bern/modarith.hpp"

namespace bern {

// One collected residue: rp = B_k mod p for a prime p with p-1 not
// dividing k (so p does not divide the denominator of B_k).
struct ResiduePair {
    u64 p = 0;
    u64 rp = 0;
};

// Loop shape of the fast kernel for a given prime:
//   n       multiplicative order of 2 mod p
//   nprime  n/2 if n is even, else n (inner loop length)
//   mprime  ((p-1)/2) / nprime     (outer loop length)
// so that nprime * mprime = (p-1)/2 exactly.
struct FastPathPlan {
    u64 n = 0;
    u64 nprime = 0;
    u64 mprime = 0;
    u64 g = 0;
    unsigned table_bits = 8;   // bits of s/p consumed per table lookup
    unsigned block_bits = 4096; // bits of the expansion processed per block
};

// Counters a test can use to confirm the kernel touches every term once.
struct FastPathStats {
    u64 table_adds = 0; // terms folded through the byte tables
    u64 tail_terms = 0; // terms handled directly past the last full byte
};

// Builds the plan; fails (nullopt) when the order of 2 divides k, i.e.
// 2^k = 1 mod p and the c = 1/2 specialisation breaks down.
std::optional<FastPathPlan> plan_fast_path(u64 k, const MontgomeryContext& ctx,
                                           const std::vector<u64>& factors);

// B_k mod p by the g-power loop: S accumulates (u - floor(gX/p)) * Y over
// (p-1)/2 iterations, then 2kS/(1 - g^k). Requires p >= 5 prime, k even,
// 2 <= k <= p-3.
u64 bern_mod_p_basic(u64 k, u64 p);

struct KummerReduced {
    u64 m = 0;     // k mod (p-1), in [2, p-3], even
    u64 scale = 0; // (k mod p) / m mod p,  B_k = scale * B_m mod p
};

// Reduce a large k to the kernel range via Kummer's congruence
// B_k/k = B_m/m mod p. Requires p-1 not dividing k.
KummerReduced kummer_reduce(u64 k, u64 p);

// First `count` bits of the binary expansion of s/p (b_0 is the leading
// bit). Diagnostic form of the word stream below. Requires 0 < s < p.
std::vector<std::uint8_t> fraction_bits(u64 s, const MontgomeryContext& ctx, std::size_t count);

// Streams the expansion of s/p one 64-bit word at a time via
// u -> (u * 2^64 div p, u * 2^64 mod p) with the precomputed reciprocal.
class FractionStream {
public:
    FractionStream(u64 s, const MontgomeryContext& ctx) : u_(s), ctx_(&ctx) {
        if (s == 0 || s >= ctx.modulus())
            throw std::invalid_argument("FractionStream: s must lie in (0, p)");
    }
    u64 next_word() {
        auto qr = ctx_->frac_word(u_);
        u_ = qr.rem;
        return qr.quot;
    }

private:
    u64 u_;
    const MontgomeryContext* ctx_;
};

// sum_{0 <= u < width} r^u * (bit u of pattern ? -1 : +1), Montgomery in and
// out. Bit u of the pattern is bit (width-1-u) of `pattern`, i.e. the
// pattern reads b_0 b_1 ... most significant first, matching the stream.
u64 signed_power_sum(const MontgomeryContext& ctx, u64 r_mont, u64 pattern, unsigned width);

// sum_{0 <= j < N} r^j f(2^j s) mod p where f is +1 below p/2 and -1 above,
// evaluated through the byte tables. Plain in, plain out. Single-shot form
// used by tests; the production path drives InnerSumAccumulator directly.
u64 inner_sum_fast(u64 N, u64 r, u64 s, const MontgomeryContext& ctx,
                   unsigned block_bits = 4096, u64 max_adds_override = 0,
                   FastPathStats* stats = nullptr);

// B_k mod p via the c = 1/2 kernel (one table add per expansion bit-8 and
// one modular multiply per word). Returns nullopt when the order of 2
// divides k; the caller then falls back on the basic kernel. Requires
// p >= 5 prime, k even, 2 <= k <= p-3.
std::optional<u64> bern_mod_p_fast(u64 k, u64 p, FastPathStats* stats = nullptr);

enum class Path {
    automatic, // fast kernel, basic fallback
    force_basic,
    force_fast // throws if the fast kernel is inapplicable
};

// Full per-prime computation: Kummer reduction, kernel dispatch, scale.
// Requires p >= 5 prime, k even >= 2, p-1 not dividing k.
ResiduePair bern_mod_p(u64 k, u64 p, Path path = Path::automatic);

} // namespace bern
