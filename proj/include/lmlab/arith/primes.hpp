#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "../errors.hpp"

namespace lmlab {

namespace detail {

inline std::vector<std::uint32_t> small_primes_upto(std::uint64_t n) {
    std::vector<std::uint32_t> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

inline std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace detail

// Calls f(p) for every prime p < limit in increasing order. Works in
// fixed-size segments, so memory is O(sqrt(limit) + segment).
template <class F>
void for_each_prime_below(std::uint64_t limit, F&& f) {
    if (limit <= 2) return;
    const std::uint64_t hi = limit - 1;
    const auto base = detail::small_primes_upto(detail::isqrt(hi));
    constexpr std::uint64_t segment = 1u << 18;
    std::vector<std::uint8_t> mark(segment);
    std::vector<std::uint64_t> next(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) next[i] = std::uint64_t(base[i]) * base[i];
    for (std::uint64_t lo = 2; lo <= hi; lo += segment) {
        const std::uint64_t top = std::min(hi, lo + segment - 1);
        const std::uint64_t len = top - lo + 1;
        std::fill(mark.begin(), mark.begin() + len, 0);
        for (std::size_t i = 0; i < base.size(); ++i) {
            const std::uint64_t p = base[i];
            std::uint64_t j = next[i];
            for (; j <= top; j += p) mark[j - lo] = 1;
            next[i] = j;
        }
        for (std::uint64_t j = 0; j < len; ++j)
            if (!mark[j]) f(lo + j);
    }
}

class PrimeTable {
public:
    explicit PrimeTable(std::uint64_t limit) : limit_(limit) {
        if (limit < 2) throw DomainError("sieve_primes: limit must be >= 2");
        if (limit > 3) {
            // pi(x) < 1.26 x / log x
            const double x = static_cast<double>(limit);
            primes_.reserve(static_cast<std::size_t>(1.26 * x / std::log(x)) + 16);
        }
        for_each_prime_below(limit, [this](std::uint64_t p) { primes_.push_back(p); });
    }

    std::uint64_t limit() const { return limit_; }
    const std::vector<std::uint64_t>& primes() const { return primes_; }
    std::size_t count() const { return primes_.size(); }

    bool is_prime(std::uint64_t n) const {
        if (n >= limit_) throw DomainError("PrimeTable::is_prime: n beyond table");
        return std::binary_search(primes_.begin(), primes_.end(), n);
    }

    // Lambda(n) for 1 <= n <= limit.
    double von_mangoldt(std::uint64_t n) const {
        if (n == 0 || n > limit_) throw DomainError("PrimeTable::von_mangoldt: n out of range");
        if (n < 2) return 0.0;
        for (std::uint64_t p : primes_) {
            if (p * p > n) break;
            if (n % p == 0) {
                while (n % p == 0) n /= p;
                return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
            }
        }
        return std::log(static_cast<double>(n));
    }

private:
    std::uint64_t limit_;
    std::vector<std::uint64_t> primes_;
};

inline PrimeTable sieve_primes(std::uint64_t limit) { return PrimeTable(limit); }

inline std::vector<std::uint64_t> primes_below(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for_each_prime_below(limit, [&](std::uint64_t p) { out.push_back(p); });
    return out;
}

// Smallest-prime-factor table on [0, n]; spf[0] = spf[1] = 0.
inline std::vector<std::uint32_t> smallest_prime_factors(std::uint32_t n) {
    std::vector<std::uint32_t> spf(std::size_t(n) + 1, 0);
    std::vector<std::uint32_t> primes;
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (spf[i] == 0) {
            spf[i] = i;
            primes.push_back(i);
        }
        for (std::uint32_t p : primes) {
            const std::uint64_t m = std::uint64_t(p) * i;
            if (p > spf[i] || m > n) break;
            spf[m] = p;
        }
    }
    return spf;
}

// Omega(n): number of prime factors with multiplicity.
inline int big_omega(std::uint64_t n) {
    int c = 0;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        while (n % p == 0) { n /= p; ++c; }
    return c + (n > 1 ? 1 : 0);
}

// Returns (p, l) if n = p^l with l >= 1, else (0, 0).
inline std::pair<std::uint64_t, int> prime_power_split(std::uint64_t n) {
    if (n < 2) return {0, 0};
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int l = 0;
        while (n % p == 0) { n /= p; ++l; }
        return n == 1 ? std::pair<std::uint64_t, int>{p, l} : std::pair<std::uint64_t, int>{0, 0};
    }
    return {n, 1};
}

} // namespace lmlab
