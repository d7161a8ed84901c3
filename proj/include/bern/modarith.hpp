#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bern {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Word-sized modular arithmetic for an odd prime modulus p with
// 5 <= p < 2^62. The two-bit headroom leaves room for the delayed-reduction
// accumulators used by the residue kernels.
//
// Two representations are in play and the caller tracks which one a value
// is in:
//   plain      x in [0, p)
//   Montgomery x * 2^64 mod p, in [0, p)
// mul() is a Montgomery product; mixing one plain and one Montgomery operand
// yields the plain product, which the hot loops exploit.
class MontgomeryContext {
public:
    static constexpr unsigned word_bits = 64;
    static constexpr u64 max_modulus = (u64(1) << 62) - 1;

    explicit MontgomeryContext(u64 p) : p_(p) {
        if (p < 5 || p > max_modulus)
            throw std::invalid_argument("modulus out of range [5, 2^62)");
        if (p % 2 == 0)
            throw std::invalid_argument("modulus must be odd");
        // pinv = -p^{-1} mod 2^64 by Newton iteration (doubles correct bits).
        u64 inv = p;
        for (int i = 0; i < 6; ++i)
            inv *= 2 - p * inv;
        pinv_ = 0 - inv;
        shift_ = static_cast<unsigned>(std::countl_zero(p));
        dnorm_ = p << shift_;
        u128 all_ones = (u128(~u64(0)) << 64) | ~u64(0);
        recip_ = static_cast<u64>(all_ones / dnorm_);
        r2_ = static_cast<u64>(((u128(1) << 64) % p) * ((u128(1) << 64) % p) % p);
        one_mont_ = to_mont(1);
    }

    u64 modulus() const { return p_; }
    u64 r2() const { return r2_; }
    u64 pinv() const { return pinv_; }
    u64 recip() const { return recip_; }
    u64 one_mont() const { return one_mont_; }

    // REDC(a*b). Valid whenever a * b < p * 2^64; in particular for two
    // values in [0, p), or one value in [0, p) against any 64-bit word.
    u64 mul(u64 a, u64 b) const {
        u128 t = u128(a) * b;
        u64 m = static_cast<u64>(t) * pinv_;
        u64 res = static_cast<u64>((t + u128(m) * p_) >> 64);
        return res >= p_ ? res - p_ : res;
    }

    u64 add(u64 a, u64 b) const {
        u64 r = a + b;           // no overflow: a, b < p < 2^62
        return r >= p_ ? r - p_ : r;
    }

    u64 sub(u64 a, u64 b) const {
        return a >= b ? a - b : a + p_ - b;
    }

    u64 to_mont(u64 a) const { return mul(a, r2_); }
    u64 from_mont(u64 a) const { return mul(a, 1); }

    // base^exp with base in Montgomery form; result in Montgomery form.
    u64 pow_mont(u64 base, u64 exp) const {
        u64 acc = one_mont_;
        while (exp) {
            if (exp & 1)
                acc = mul(acc, base);
            base = mul(base, base);
            exp >>= 1;
        }
        return acc;
    }

    struct QuotRem {
        u64 quot;
        u64 rem;
    };

    // floor(a / p) and a mod p for a < p * 2^64, by double-width multiply
    // with the precomputed reciprocal and a single correction step.
    QuotRem quot_rem(u128 a) const {
        u128 an = a << shift_;
        u64 hi = static_cast<u64>(an >> 64);
        u64 lo = static_cast<u64>(an);
        u128 prod = u128(recip_) * hi;
        u64 q1 = static_cast<u64>(prod >> 64);
        u64 q0 = static_cast<u64>(prod);
        u128 sum = u128(q0) + lo;
        q1 += hi + static_cast<u64>(sum >> 64) + 1;
        q0 = static_cast<u64>(sum);
        u64 r = lo - q1 * dnorm_;
        u64 over = r > q0 ? ~u64(0) : 0;
        q1 += over;
        r += dnorm_ & over;
        if (r >= dnorm_) {
            q1 += 1;
            r -= dnorm_;
        }
        return {q1, r >> shift_};
    }

    // a * b mod p for plain operands.
    u64 mul_mod(u64 a, u64 b) const { return quot_rem(u128(a) * b).rem; }

    // One word of the binary expansion of u/p: returns
    // { floor(u * 2^64 / p), u * 2^64 mod p }. The quotient word holds bits
    // b_{64v} ... b_{64v+63} of the expansion, most significant first.
    // Same division as quot_rem with the low word pinned to zero.
    QuotRem frac_word(u64 u) const {
        u64 hi = u << shift_; // u < p, so no bits are lost
        u128 prod = u128(recip_) * hi;
        u64 q1 = static_cast<u64>(prod >> 64);
        u64 q0 = static_cast<u64>(prod);
        q1 += hi + 1;
        u64 r = 0 - q1 * dnorm_;
        // the first correction fires about half the time: keep it branchless
        u64 over = r > q0 ? ~u64(0) : 0;
        q1 += over;
        r += dnorm_ & over;
        if (r >= dnorm_) {
            q1 += 1;
            r -= dnorm_;
        }
        return {q1, r >> shift_};
    }

private:
    u64 p_;
    u64 r2_;
    u64 pinv_;
    u64 recip_;
    u64 dnorm_;
    u64 one_mont_;
    unsigned shift_;
};

inline MontgomeryContext mont_new(u64 p) { return MontgomeryContext(p); }

// base^exp mod p, plain in / plain out.
inline u64 mod_pow(u64 base, u64 exp, const MontgomeryContext& ctx) {
    return ctx.from_mont(ctx.pow_mont(ctx.to_mont(base), exp));
}

// a^{-1} mod p by extended Euclid. Throws if a is not invertible.
u64 mod_inv(u64 a, u64 p);

// Deterministic Miller-Rabin for 64-bit n.
bool is_prime_u64(u64 n);

// Distinct prime factors of n, ascending. Trial division with a Pollard rho
// fallback for large cofactors.
std::vector<u64> distinct_prime_factors(u64 n);

// Smallest g >= 2 with g^((p-1)/q) != 1 mod p for every prime q | p-1.
// `factors` must be exactly the distinct prime divisors of p-1.
u64 find_generator(const MontgomeryContext& ctx, const std::vector<u64>& factors);
u64 find_generator(u64 p, const std::vector<u64>& factors);

// Least n >= 1 with 2^n = 1 mod p, found by stripping prime factors from
// p-1 while the power stays 1.
u64 order_of_two(const MontgomeryContext& ctx, const std::vector<u64>& factors);
u64 order_of_two(u64 p, const std::vector<u64>& factors);

} // namespace bern
