#include "bern/bernmod.hpp"

#include <algorithm>
#include <array>

namespace bern {

namespace {

void check_kernel_domain(u64 k, u64 p) {
    if (p < 5)
        throw std::invalid_argument("kernel requires p >= 5");
    if (k % 2 != 0 || k < 2 || k > p - 3)
        throw std::invalid_argument("kernel requires even k with 2 <= k <= p-3");
}

// Tables per prime: fewer tables keep the final combination cheap for small
// primes, more tables cut the per-word multiply count for large ones.
unsigned tables_for(u64 p) {
    if (p < (u64(1) << 14))
        return 1;
    if (p < (u64(1) << 16))
        return 2;
    if (p < (u64(1) << 18))
        return 4;
    return 8;
}

// Accumulates inner sums sum_j r^j f(2^j s) for a fixed ratio r and varying
// (s, weight), sharing one set of byte-indexed tables across all calls; the
// tables are combined once at the end. Weighted values go into the tables
// without reduction; entries are swept mod p before they can overflow.
class InnerSumAccumulator {
public:
    InnerSumAccumulator(const MontgomeryContext& ctx, u64 r_mont,
                        unsigned block_bits, u64 max_adds_override)
        : ctx_(ctx), p_(ctx.modulus()), ntables_(tables_for(ctx.modulus())) {
        if (block_bits < 64 || block_bits % 64 != 0)
            throw std::invalid_argument("block_bits must be a positive multiple of 64");
        block_words_ = block_bits / 64;
        granule_ = 8 / ntables_; // adds per table contributed by one word
        u64 auto_max = ~u64(0) / (p_ - 1) - 1;
        max_adds_ = max_adds_override ? std::min(max_adds_override, auto_max) : auto_max;
        if (max_adds_ < granule_)
            max_adds_ = granule_;
        if ((granule_ + 1) * (u128(p_) - 1) > u128(~u64(0)))
            throw std::logic_error("table granule too coarse for this modulus");

        rpow_[0] = ctx.one_mont();
        for (unsigned i = 1; i <= 8; ++i)
            rpow_[i] = ctx.mul(rpow_[i - 1], r_mont);
        r8pow_.resize(ntables_);
        r8pow_[0] = ctx.one_mont();
        for (unsigned i = 1; i < ntables_; ++i)
            r8pow_[i] = ctx.mul(r8pow_[i - 1], rpow_[8]);
        stride_ = ctx.pow_mont(rpow_[8], ntables_);
        tables_.assign(std::size_t(ntables_) * 256, 0);
    }

    // Folds sum_{0 <= j < N} weight * r^j f(2^j s) into the state.
    // `weight` is a Montgomery residue, s is plain with 0 < s < p.
    void accumulate(u64 s, u64 weight, u64 N, FastPathStats* stats) {
        if (N == 0)
            return;
        if (s == 0 || s >= p_)
            throw std::invalid_argument("accumulate: s must lie in (0, p)");
        // everything the word loop touches lives in locals so the stream
        // and weight recurrences stay in registers across iterations
        const MontgomeryContext mctx = ctx_;
        u64 u = s;
        u64 cur = weight;
        u64 full_words = N >> 6;

        u64 done = 0;
        if (ntables_ == 8 && full_words >= 128) {
            // two interleaved half-streams; the serial divide and multiply
            // recurrences of each half overlap, roughly doubling throughput.
            // Half B starts at word A, i.e. at 2^{64A} s mod p with weight
            // w * (r^64)^A.
            const u64 half_a = (full_words + 1) / 2;
            const u64 half_b = full_words - half_a;
            u64 ub = mctx.mul_mod(mod_pow(2, 64 * half_a, mctx), s);
            u64 curb = mctx.mul(cur, mctx.pow_mont(stride_, half_a));
            u64* tab = tables_.data();
            const u64 stride = stride_;
            const u64 cap = max_adds_;
            u64 pending = adds_pending_;
            auto step = [&](u64& state, u64& wt) {
                auto qr = mctx.frac_word(state);
                state = qr.rem;
                const u64 w = qr.quot;
                tab[0 * 256 + (w >> 56)] += wt;
                tab[1 * 256 + ((w >> 48) & 255)] += wt;
                tab[2 * 256 + ((w >> 40) & 255)] += wt;
                tab[3 * 256 + ((w >> 32) & 255)] += wt;
                tab[4 * 256 + ((w >> 24) & 255)] += wt;
                tab[5 * 256 + ((w >> 16) & 255)] += wt;
                tab[6 * 256 + ((w >> 8) & 255)] += wt;
                tab[7 * 256 + (w & 255)] += wt;
                wt = mctx.mul(wt, stride);
            };
            u64 pairs_done = 0;
            while (pairs_done < half_b) {
                u64 n_block = std::min<u64>(block_words_ / 2 + 1, half_b - pairs_done);
                for (u64 i = 0; i < n_block; ++i) {
                    if (pending + 2 > cap) {
                        adds_pending_ = pending;
                        sweep();
                        pending = 0;
                    }
                    step(u, cur);
                    step(ub, curb);
                    pending += 2;
                }
                pairs_done += n_block;
            }
            if (half_a > half_b) {
                if (pending + 1 > cap) {
                    adds_pending_ = pending;
                    sweep();
                    pending = 0;
                }
                step(u, cur);
                pending += 1;
            }
            adds_pending_ = pending;
            // the trailing partial word continues from half B's stream state
            u = ub;
            cur = curb;
        } else if (ntables_ == 8) {
            u64* tab = tables_.data();
            const u64 stride = stride_;
            const u64 cap = max_adds_;
            u64 pending = adds_pending_;
            while (done < full_words) {
                u64 n_block = std::min<u64>(block_words_, full_words - done);
                for (u64 i = 0; i < n_block; ++i) {
                    if (pending + 1 > cap) {
                        adds_pending_ = pending;
                        sweep();
                        pending = 0;
                    }
                    auto qr = mctx.frac_word(u);
                    u = qr.rem;
                    const u64 w = qr.quot;
                    tab[0 * 256 + (w >> 56)] += cur;
                    tab[1 * 256 + ((w >> 48) & 255)] += cur;
                    tab[2 * 256 + ((w >> 40) & 255)] += cur;
                    tab[3 * 256 + ((w >> 32) & 255)] += cur;
                    tab[4 * 256 + ((w >> 24) & 255)] += cur;
                    tab[5 * 256 + ((w >> 16) & 255)] += cur;
                    tab[6 * 256 + ((w >> 8) & 255)] += cur;
                    tab[7 * 256 + (w & 255)] += cur;
                    cur = mctx.mul(cur, stride);
                    pending += 1;
                }
                done += n_block;
            }
            adds_pending_ = pending;
        } else {
            while (done < full_words) {
                u64 n_block = std::min<u64>(block_words_, full_words - done);
                for (u64 i = 0; i < n_block; ++i) {
                    auto qr = mctx.frac_word(u);
                    u = qr.rem;
                    cur = process_word(qr.quot, cur);
                }
                done += n_block;
            }
        }
        if (stats)
            stats->table_adds += full_words * 64;

        unsigned leftover = static_cast<unsigned>(N & 63);
        if (leftover == 0)
            return;
        u64 word = mctx.frac_word(u).quot;
        unsigned digits = leftover >> 3;
        unsigned tail_bits = leftover & 7;
        if (digits > 0) {
            maybe_sweep();
            for (unsigned pos = 0; pos < digits; ++pos) {
                unsigned byte = static_cast<unsigned>(word >> (56 - 8 * pos)) & 255;
                tables_[std::size_t(pos & (ntables_ - 1)) * 256 + byte] += cur;
                if ((pos & (ntables_ - 1)) == ntables_ - 1)
                    cur = ctx_.mul(cur, stride_);
            }
            adds_pending_ += granule_;
            if (stats)
                stats->table_adds += u64(digits) * 8;
        }
        if (tail_bits > 0) {
            // weight of the first tail term is cur shifted to digit `digits`
            u64 tw = ctx_.mul(cur, r8pow_[digits & (ntables_ - 1)]);
            u64 pattern = (word >> (64 - 8 * digits - tail_bits)) & ((u64(1) << tail_bits) - 1);
            u64 acc = 0;
            for (unsigned b = 0; b < tail_bits; ++b) {
                u64 term = rpow_[b];
                acc = (pattern >> (tail_bits - 1 - b)) & 1 ? ctx_.sub(acc, term)
                                                           : ctx_.add(acc, term);
            }
            tail_acc_ = ctx_.add(tail_acc_, ctx_.mul(tw, acc));
            if (stats)
                stats->tail_terms += tail_bits;
        }
    }

    // One pass over the tables: total = sum_q (r^8)^q sum_sigma V_sigma T_q[sigma],
    // plus the directly-accumulated tail. Montgomery result. Entries go into
    // the product unreduced: V < p keeps V * e below p * 2^64, which is all
    // the Montgomery reduction needs.
    u64 combine() {
        std::array<u64, 256> V;
        for (unsigned sigma = 0; sigma < 256; ++sigma) {
            u64 acc = 0;
            for (unsigned u = 0; u < 8; ++u)
                acc = (sigma >> (7 - u)) & 1 ? ctx_.sub(acc, rpow_[u]) : ctx_.add(acc, rpow_[u]);
            V[sigma] = acc;
        }
        u64 total = tail_acc_;
        for (unsigned q = 0; q < ntables_; ++q) {
            u64 sq = 0;
            const u64* row = tables_.data() + std::size_t(q) * 256;
            for (unsigned sigma = 0; sigma < 256; ++sigma)
                if (row[sigma])
                    sq = ctx_.add(sq, ctx_.mul(V[sigma], row[sigma]));
            total = ctx_.add(total, ctx_.mul(sq, r8pow_[q]));
        }
        return total;
    }

private:
    u64 process_word(u64 word, u64 cur) {
        maybe_sweep();
        const unsigned nt = ntables_;
        for (unsigned pos = 0; pos < 8; ++pos) {
            unsigned byte = static_cast<unsigned>(word >> (56 - 8 * pos)) & 255;
            tables_[std::size_t(pos & (nt - 1)) * 256 + byte] += cur;
            if ((pos & (nt - 1)) == nt - 1)
                cur = ctx_.mul(cur, stride_);
        }
        adds_pending_ += granule_;
        return cur;
    }

    void maybe_sweep() {
        if (adds_pending_ + granule_ > max_adds_) {
            sweep();
        }
    }

    void sweep() {
        for (u64& e : tables_)
            e %= p_;
        adds_pending_ = 0;
    }

    const MontgomeryContext& ctx_;
    u64 p_;
    unsigned ntables_;
    u64 granule_ = 0;
    u64 block_words_ = 0;
    u64 max_adds_ = 0;
    u64 adds_pending_ = 0;
    u64 tail_acc_ = 0;
    u64 stride_ = 0;
    std::array<u64, 9> rpow_{};
    std::vector<u64> r8pow_;
    std::vector<u64> tables_;
};

} // namespace

std::optional<FastPathPlan> plan_fast_path(u64 k, const MontgomeryContext& ctx,
                                           const std::vector<u64>& factors) {
    const u64 p = ctx.modulus();
    FastPathPlan plan;
    plan.n = order_of_two(ctx, factors);
    if (k % plan.n == 0)
        return std::nullopt; // 2^k = 1 mod p, c = 1/2 is unusable
    plan.nprime = plan.n % 2 == 0 ? plan.n / 2 : plan.n;
    plan.mprime = ((p - 1) / 2) / plan.nprime;
    if (plan.nprime * plan.mprime != (p - 1) / 2)
        throw std::logic_error("plan_fast_path: loop split does not cover (p-1)/2");
    plan.g = find_generator(ctx, factors);
    return plan;
}

u64 bern_mod_p_basic(u64 k, u64 p) {
    check_kernel_domain(k, p);
    MontgomeryContext ctx(p);
    auto factors = distinct_prime_factors(p - 1);
    const u64 g = find_generator(ctx, factors);

    const u64 r_mont = ctx.pow_mont(ctx.to_mont(g), k - 1);
    const u64 u = ctx.mul_mod(g - 1, (p + 1) / 2); // (g-1)/2 mod p
    u64 x = 1;
    u64 y_mont = r_mont;
    u64 s = 0;
    for (u64 i = (p - 1) / 2; i > 0; --i) {
        auto qr = ctx.quot_rem(u128(g) * x);
        u64 diff = u >= qr.quot ? u - qr.quot : u + p - qr.quot;
        s = ctx.add(s, ctx.mul(diff, y_mont)); // mixed product is plain
        x = qr.rem;
        y_mont = ctx.mul(y_mont, r_mont);
    }

    u64 gk = ctx.mul_mod(ctx.from_mont(r_mont), g); // g^k
    u64 t = ctx.sub(1, gk);                         // nonzero since k < p-1
    u64 v = ctx.mul_mod(s, k % p);
    v = ctx.add(v, v);
    return ctx.mul_mod(v, mod_inv(t, p));
}

KummerReduced kummer_reduce(u64 k, u64 p) {
    if (p < 5)
        throw std::invalid_argument("kummer_reduce requires p >= 5");
    if (k < 2 || k % 2 != 0)
        throw std::invalid_argument("kummer_reduce requires even k >= 2");
    if (k % (p - 1) == 0)
        throw std::invalid_argument("kummer_reduce: p-1 divides k (von Staudt-Clausen prime)");
    KummerReduced out;
    out.m = k % (p - 1);
    if (out.m == k) {
        out.scale = 1;
        return out;
    }
    MontgomeryContext ctx(p);
    out.scale = ctx.mul_mod(k % p, mod_inv(out.m, p));
    return out;
}

std::vector<std::uint8_t> fraction_bits(u64 s, const MontgomeryContext& ctx, std::size_t count) {
    FractionStream stream(s, ctx);
    std::vector<std::uint8_t> bits;
    bits.reserve(count);
    while (bits.size() < count) {
        u64 word = stream.next_word();
        for (unsigned b = 0; b < 64 && bits.size() < count; ++b)
            bits.push_back(static_cast<std::uint8_t>((word >> (63 - b)) & 1));
    }
    return bits;
}

u64 signed_power_sum(const MontgomeryContext& ctx, u64 r_mont, u64 pattern, unsigned width) {
    u64 acc = 0;
    u64 rp = ctx.one_mont();
    for (unsigned u = 0; u < width; ++u) {
        acc = (pattern >> (width - 1 - u)) & 1 ? ctx.sub(acc, rp) : ctx.add(acc, rp);
        if (u + 1 < width)
            rp = ctx.mul(rp, r_mont);
    }
    return acc;
}

u64 inner_sum_fast(u64 N, u64 r, u64 s, const MontgomeryContext& ctx,
                   unsigned block_bits, u64 max_adds_override, FastPathStats* stats) {
    InnerSumAccumulator acc(ctx, ctx.to_mont(r), block_bits, max_adds_override);
    acc.accumulate(s, ctx.one_mont(), N, stats);
    return ctx.from_mont(acc.combine());
}

std::optional<u64> bern_mod_p_fast(u64 k, u64 p, FastPathStats* stats) {
    if (p < 5)
        throw std::invalid_argument("kernel requires p >= 5");
    MontgomeryContext ctx(p);
    auto factors = distinct_prime_factors(p - 1);
    // the applicability signal outranks the range check: 2^k = 1 mod p is
    // decidable for any k and is what the caller dispatches on
    auto plan = plan_fast_path(k, ctx, factors);
    if (!plan)
        return std::nullopt;
    check_kernel_domain(k, p);

    const u64 r_mont = ctx.pow_mont(ctx.to_mont(2), k - 1);
    const u64 gk1_mont = ctx.pow_mont(ctx.to_mont(plan->g), k - 1);

    InnerSumAccumulator acc(ctx, r_mont, plan->block_bits, 0);
    u64 s = 1;
    u64 w = ctx.one_mont();
    for (u64 i = 0; i < plan->mprime; ++i) {
        acc.accumulate(s, w, plan->nprime, stats);
        if (i + 1 < plan->mprime) {
            s = ctx.mul_mod(s, plan->g);
            w = ctx.mul(w, gk1_mont);
        }
    }
    u64 total = acc.combine();

    // prefactor k / (2 (2^{-k} - 1))
    u64 two_pow_k = ctx.pow_mont(ctx.to_mont(2), k);
    u64 two_pow_mk = ctx.pow_mont(two_pow_k, p - 2);
    u64 den = ctx.sub(two_pow_mk, ctx.one_mont());
    den = ctx.add(den, den);
    u64 den_inv = ctx.pow_mont(den, p - 2);
    u64 result = ctx.mul(ctx.mul(ctx.to_mont(k % p), den_inv), total);
    return ctx.from_mont(result);
}

ResiduePair bern_mod_p(u64 k, u64 p, Path path) {
    KummerReduced kr = kummer_reduce(k, p);
    u64 value = 0;
    switch (path) {
    case Path::force_basic:
        value = bern_mod_p_basic(kr.m, p);
        break;
    case Path::force_fast: {
        auto v = bern_mod_p_fast(kr.m, p);
        if (!v)
            throw std::invalid_argument("fast path inapplicable: order of 2 divides k");
        value = *v;
        break;
    }
    case Path::automatic: {
        auto v = bern_mod_p_fast(kr.m, p);
        value = v ? *v : bern_mod_p_basic(kr.m, p);
        break;
    }
    }
    u64 rp = static_cast<u64>(u128(kr.scale) * value % p);
    return {p, rp};
}

} // namespace bern
