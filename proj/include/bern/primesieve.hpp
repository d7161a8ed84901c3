#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bern {

// All primes up to an inclusive limit, strictly increasing. Built once by a
// segmented sieve; immutable and shareable afterwards.
class PrimeList {
public:
    PrimeList() = default;
    PrimeList(std::uint64_t limit, std::vector<std::uint64_t> primes)
        : limit_(limit), primes_(std::move(primes)) {}

    std::uint64_t limit() const { return limit_; }
    std::size_t size() const { return primes_.size(); }
    bool empty() const { return primes_.empty(); }
    std::uint64_t operator[](std::size_t i) const { return primes_[i]; }
    std::span<const std::uint64_t> primes() const { return primes_; }
    auto begin() const { return primes_.begin(); }
    auto end() const { return primes_.end(); }

    bool contains(std::uint64_t n) const;

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> primes_;
};

// Segmented sieve of Eratosthenes; limits below 2 yield an empty list.
PrimeList sieve_upto(std::uint64_t limit);

// Smallest prime q with p < q <= list.limit(). Exhaustion means the caller's
// bound was wrong, so it throws std::logic_error rather than recovering.
std::uint64_t next_prime(std::uint64_t p, const PrimeList& list);

} // namespace bern
