#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bern/reconstruct.hpp"

namespace bern {

// Outcome of the consistency checks run against a computed B_k. The spot
// primes are always distinct from the primes used by the reconstruction.
struct VerificationReport {
    bool magnitude_ok = false;
    double magnitude_ratio = 0.0;
    std::vector<std::uint64_t> spot_primes;
    bool spot_ok = false;
    std::optional<bool> oracle_ok;

    bool ok() const { return magnitude_ok && spot_ok && oracle_ok.value_or(true); }
};

// Exact B_k from the defining recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0,
// evaluated in exact arithmetic over a fixed common denominator. Quadratic
// cost; capped at k <= 4000. Results are cached across calls.
BernoulliRational oracle_bernoulli(std::uint64_t k);

struct MagnitudeCheck {
    bool ok = false;
    double ratio = 0.0; // |B_k| (2pi)^k / (2 k!), equal to zeta(k) when B_k is right
};

// Checks the computed value against the analytic size estimate: the ratio
// must land in (1, 1.0824], the range of zeta on even k >= 4. Evaluated
// with enough precision (k + 64 bits) that the open lower bound is
// meaningful even when zeta(k) - 1 is tiny.
MagnitudeCheck magnitude_check(const BernoulliRational& value, std::uint64_t k);

// Reduces the claimed B_k modulo `count` fresh primes above the
// reconstruction bound X and compares with bern_mod_p.
bool spot_check(const BernoulliRational& value, std::uint64_t k, unsigned count,
                std::vector<std::uint64_t>* used_primes = nullptr);

// Runs the full battery; the oracle comparison only for k small enough to
// be cheap.
VerificationReport verify_bernoulli(const BernoulliRational& value, std::uint64_t k,
                                    unsigned spot_count = 3);

} // namespace bern
