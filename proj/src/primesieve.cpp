#include "bern/primesieve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bern {

bool PrimeList::contains(std::uint64_t n) const {
    return std::binary_search(primes_.begin(), primes_.end(), n);
}

PrimeList sieve_upto(std::uint64_t limit) {
    if (limit < 2)
        return PrimeList(limit, {});

    const std::uint64_t segment_size = 1 << 18;
    std::uint64_t sqrt_limit = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
    while (sqrt_limit * sqrt_limit > limit)
        --sqrt_limit;
    while ((sqrt_limit + 1) * (sqrt_limit + 1) <= limit)
        ++sqrt_limit;

    // base primes <= sqrt(limit) by a plain sieve
    std::vector<std::uint8_t> small(sqrt_limit + 1, 1);
    for (std::uint64_t i = 2; i * i <= sqrt_limit; ++i)
        if (small[i])
            for (std::uint64_t j = i * i; j <= sqrt_limit; j += i)
                small[j] = 0;

    std::vector<std::uint64_t> base;
    for (std::uint64_t i = 3; i <= sqrt_limit; i += 2)
        if (small[i])
            base.push_back(i);

    std::vector<std::uint64_t> primes;
    if (limit >= 3) {
        // rough upper bound on pi(x) to avoid reallocation, x/(ln x - 1.1)
        double x = static_cast<double>(limit);
        primes.reserve(static_cast<std::size_t>(x / (std::log(x) - 1.1)) + 16);
    }
    primes.push_back(2);

    // sieve odd numbers segment by segment
    std::vector<std::uint8_t> flags(segment_size);
    std::vector<std::uint64_t> next(base.size());
    for (std::size_t i = 0; i < base.size(); ++i)
        next[i] = base[i] * base[i];

    for (std::uint64_t low = 3; low <= limit; low += 2 * segment_size) {
        std::uint64_t high = std::min(low + 2 * segment_size - 2, limit | 1);
        std::fill(flags.begin(), flags.end(), 1);
        for (std::size_t i = 0; i < base.size(); ++i) {
            std::uint64_t p = base[i];
            std::uint64_t j = next[i];
            if (j < low) {
                j = ((low - j + 2 * p - 1) / (2 * p)) * 2 * p + j;
            }
            for (; j <= high; j += 2 * p)
                flags[(j - low) / 2] = 0;
            next[i] = j;
        }
        for (std::uint64_t n = low; n <= high && n <= limit; n += 2)
            if (flags[(n - low) / 2])
                primes.push_back(n);
    }

    return PrimeList(limit, std::move(primes));
}

std::uint64_t next_prime(std::uint64_t p, const PrimeList& list) {
    auto it = std::upper_bound(list.begin(), list.end(), p);
    if (it == list.end())
        throw std::logic_error("next_prime: prime list exhausted (bound bug upstream)");
    return *it;
}

} // namespace bern
