#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "../errors.hpp"

namespace lmlab {

using cplx = std::complex<double>;

inline std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, int>> f;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((unsigned __int128)a * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    for (; e; e >>= 1) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
    }
    return r;
}

// e^{2 pi i num/den} with exact values on quarter turns.
inline cplx root_of_unity(std::uint64_t num, std::uint64_t den) {
    num %= den;
    if ((4 * num) % den == 0) {
        switch ((4 * num) / den) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double ang = 2.0L * pi * static_cast<long double>(num) / static_cast<long double>(den);
    return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

class DirichletCharacter {
public:
    DirichletCharacter() = default;
    DirichletCharacter(std::uint64_t q, std::size_t index, std::vector<cplx> values, bool principal,
                       bool real)
        : q_(q), index_(index), values_(std::move(values)), principal_(principal), real_(real) {}

    std::uint64_t modulus() const { return q_; }
    std::size_t index() const { return index_; }
    bool is_principal() const { return principal_; }
    bool is_real() const { return real_; }
    std::string id() const { return std::to_string(q_) + ":" + std::to_string(index_); }

    cplx operator()(std::uint64_t n) const { return values_[n % q_]; }
    const std::vector<cplx>& values() const { return values_; }

private:
    std::uint64_t q_ = 1;
    std::size_t index_ = 0;
    std::vector<cplx> values_{cplx(1.0, 0.0)};
    bool principal_ = true;
    bool real_ = true;
};

namespace detail {

struct CyclicComponent {
    std::uint64_t modulus;       // prime power p^e
    std::uint64_t generator;     // generator of the component (mod modulus)
    std::uint64_t order;
    std::vector<std::uint64_t> log;  // discrete log table indexed by residue mod modulus
    bool minus_one = false;           // the {±1} factor of (Z/2^e)^x, e >= 3
};

inline std::uint64_t smallest_primitive_root(std::uint64_t pe, std::uint64_t p) {
    const std::uint64_t order = pe / p * (p - 1);
    const auto fac = factorize(order);
    for (std::uint64_t g = 2; g < pe; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (auto [r, e] : fac)
            if (powmod(g, order / r, pe) == 1) { ok = false; break; }
        if (ok) return g;
    }
    return 1;
}

// Cyclic decomposition of (Z/qZ)^x. Order: prime factors ascending; for 2^e
// with e >= 3 the -1 component precedes the 5 component.
inline std::vector<CyclicComponent> unit_group_components(std::uint64_t q) {
    std::vector<CyclicComponent> out;
    for (auto [p, e] : factorize(q)) {
        std::uint64_t pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        auto cyclic = [&](std::uint64_t g, std::uint64_t order, bool minus) {
            CyclicComponent c{pe, g, order, std::vector<std::uint64_t>(pe, 0), minus};
            return c;
        };
        if (p == 2) {
            if (e == 1) continue;
            if (e == 2) {
                auto c = cyclic(3, 2, false);
                c.log[1] = 0;
                c.log[3] = 1;
                out.push_back(std::move(c));
                continue;
            }
            // n = (-1)^a 5^b mod 2^e
            auto cm = cyclic(pe - 1, 2, true);
            auto c5 = cyclic(5, pe / 4, false);
            std::uint64_t x = 1;
            for (std::uint64_t b = 0; b < pe / 4; ++b) {
                c5.log[x] = b;
                cm.log[x] = 0;
                c5.log[pe - x] = b;
                cm.log[pe - x] = 1;
                x = x * 5 % pe;
            }
            out.push_back(std::move(cm));
            out.push_back(std::move(c5));
        } else {
            const std::uint64_t g = smallest_primitive_root(pe, p);
            const std::uint64_t order = pe / p * (p - 1);
            auto c = cyclic(g, order, false);
            std::uint64_t x = 1;
            for (std::uint64_t a = 0; a < order; ++a) {
                c.log[x] = a;
                x = mulmod(x, g, pe);
            }
            out.push_back(std::move(c));
        }
    }
    return out;
}

} // namespace detail

// All phi(q) characters mod q. Index enumerates exponent vectors (b_1,...,b_r)
// lexicographically, b_1 most significant; index 0 is principal. Component
// order is documented in unit_group_components.
inline std::vector<DirichletCharacter> character_group(std::uint64_t q) {
    if (q < 1) throw DomainError("character_group: q must be >= 1");
    const auto comps = detail::unit_group_components(q);
    std::uint64_t L = 1;
    for (const auto& c : comps) L = std::lcm(L, c.order);
    std::uint64_t count = 1;
    for (const auto& c : comps) count *= c.order;

    // logs[n] = exponent vector of residue n (empty for non-units).
    std::vector<std::vector<std::uint64_t>> logs(q);
    std::vector<bool> unit(q, false);
    for (std::uint64_t n = 0; n < q; ++n) {
        if (std::gcd(n, q) != 1) continue;
        unit[n] = true;
        logs[n].resize(comps.size());
        for (std::size_t i = 0; i < comps.size(); ++i) logs[n][i] = comps[i].log[n % comps[i].modulus];
    }

    std::vector<DirichletCharacter> out;
    out.reserve(count);
    std::vector<std::uint64_t> b(comps.size(), 0);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t rem = idx;
        for (std::size_t i = comps.size(); i-- > 0;) {
            b[i] = rem % comps[i].order;
            rem /= comps[i].order;
        }
        std::vector<cplx> values(q, cplx(0.0, 0.0));
        bool real = true;
        for (std::size_t i = 0; i < comps.size(); ++i)
            if ((2 * b[i]) % comps[i].order != 0) real = false;
        for (std::uint64_t n = 0; n < q; ++n) {
            if (!unit[n]) continue;
            std::uint64_t num = 0;
            for (std::size_t i = 0; i < comps.size(); ++i)
                num = (num + (logs[n][i] * b[i] % comps[i].order) * (L / comps[i].order)) % L;
            values[n] = root_of_unity(num, L);
        }
        if (q == 1) values[0] = cplx(1.0, 0.0);
        out.emplace_back(q, static_cast<std::size_t>(idx), std::move(values), idx == 0, real);
    }
    return out;
}

inline DirichletCharacter character_by_id(std::uint64_t q, std::size_t index) {
    auto group = character_group(q);
    if (index >= group.size())
        throw DomainError("character index " + std::to_string(index) + " out of range for modulus " +
                          std::to_string(q));
    return group[index];
}

} // namespace lmlab
