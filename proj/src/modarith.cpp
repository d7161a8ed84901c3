#include "bern/modarith.hpp"

#include <algorithm>
#include <numeric>

namespace bern {

u64 mod_inv(u64 a, u64 p) {
    a %= p;
    if (a == 0)
        throw std::invalid_argument("mod_inv: zero is not invertible");
    // extended Euclid on (a, p); coefficients stay below p so i64 suffices
    std::int64_t t = 0, newt = 1;
    u64 r = p, newr = a;
    while (newr != 0) {
        u64 q = r / newr;
        std::int64_t tmpt = t - static_cast<std::int64_t>(q) * newt;
        t = newt;
        newt = tmpt;
        u64 tmpr = r - q * newr;
        r = newr;
        newr = tmpr;
    }
    if (r != 1)
        throw std::invalid_argument("mod_inv: argument shares a factor with the modulus");
    return t < 0 ? static_cast<u64>(t + static_cast<std::int64_t>(p)) : static_cast<u64>(t);
}

namespace {

u64 mulmod_u128(u64 a, u64 b, u64 n) {
    return static_cast<u64>(u128(a) * b % n);
}

u64 powmod_u128(u64 a, u64 e, u64 n) {
    u64 acc = 1;
    a %= n;
    while (e) {
        if (e & 1)
            acc = mulmod_u128(acc, a, n);
        a = mulmod_u128(a, a, n);
        e >>= 1;
    }
    return acc;
}

// Brent-cycle Pollard rho; returns a nontrivial factor of odd composite n.
u64 pollard_rho(u64 n) {
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        u64 power = 1, lam = 1;
        while (d == 1) {
            if (power == lam) {
                x = y;
                power *= 2;
                lam = 0;
            }
            y = mulmod_u128(y, y, n) + c;
            if (y >= n)
                y -= n;
            ++lam;
            u64 diff = x > y ? x - y : y - x;
            d = std::gcd(diff, n);
        }
        if (d != n)
            return d;
    }
}

} // namespace

bool is_prime_u64(u64 n) {
    if (n < 2)
        return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0)
            return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    // deterministic witness set for all 64-bit n
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u128(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u128(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

std::vector<u64> distinct_prime_factors(u64 n) {
    std::vector<u64> factors;
    auto push = [&](u64 q) {
        if (std::find(factors.begin(), factors.end(), q) == factors.end())
            factors.push_back(q);
    };
    for (u64 q : {2ull, 3ull, 5ull}) {
        if (n % q == 0) {
            push(q);
            while (n % q == 0)
                n /= q;
        }
    }
    // wheel over 7, 11, 13, ... up to 2^20; larger survivors go to rho
    for (u64 q = 7; q * q <= n && q < (1 << 20); q += 2) {
        if (n % q == 0) {
            push(q);
            while (n % q == 0)
                n /= q;
        }
    }
    // n is now 1, prime, or a composite with no factor below 2^20
    std::vector<u64> stack;
    if (n > 1)
        stack.push_back(n);
    while (!stack.empty()) {
        u64 m = stack.back();
        stack.pop_back();
        if (is_prime_u64(m)) {
            push(m);
            continue;
        }
        u64 d = pollard_rho(m);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    std::sort(factors.begin(), factors.end());
    return factors;
}

u64 find_generator(const MontgomeryContext& ctx, const std::vector<u64>& factors) {
    const u64 p = ctx.modulus();
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        u64 gm = ctx.to_mont(g);
        for (u64 q : factors) {
            if (ctx.pow_mont(gm, (p - 1) / q) == ctx.one_mont()) {
                ok = false;
                break;
            }
        }
        if (ok)
            return g;
    }
    throw std::logic_error("find_generator: no generator found (modulus not prime?)");
}

u64 find_generator(u64 p, const std::vector<u64>& factors) {
    return find_generator(MontgomeryContext(p), factors);
}

u64 order_of_two(const MontgomeryContext& ctx, const std::vector<u64>& factors) {
    const u64 p = ctx.modulus();
    u64 n = p - 1;
    u64 two = ctx.to_mont(2);
    for (u64 q : factors) {
        while (n % q == 0 && ctx.pow_mont(two, n / q) == ctx.one_mont())
            n /= q;
    }
    return n;
}

u64 order_of_two(u64 p, const std::vector<u64>& factors) {
    return order_of_two(MontgomeryContext(p), factors);
}

} // namespace bern
