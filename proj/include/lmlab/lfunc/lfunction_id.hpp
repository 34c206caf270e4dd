#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "../arith/characters.hpp"
#include "../arith/satake.hpp"
#include "../errors.hpp"

namespace lmlab {

struct Zeta {};
struct Hurwitz {
    std::uint64_t a = 1, q = 1;
};
struct DirichletL {
    std::uint64_t q = 1;
    std::size_t index = 0;
};
// Product of L(s, chi) over the listed characters mod q. The principal
// character is replaced by the trivial character mod 1, so `dedekind:q` with
// the full group is the Dedekind zeta of Q(zeta_q) up to Euler factors at
// primes dividing q for imprimitive nonprincipal characters.
struct DedekindAbelian {
    std::uint64_t q = 1;
    std::vector<std::size_t> indices;
};

class LFunctionId {
public:
    using Base = std::variant<Zeta, Hurwitz, DirichletL, DedekindAbelian>;

    LFunctionId() = default;
    LFunctionId(Base b) : base_(std::move(b)) { validate(); }

    static LFunctionId zeta() { return LFunctionId(Zeta{}); }
    static LFunctionId hurwitz(std::uint64_t a, std::uint64_t q) { return LFunctionId(Hurwitz{a, q}); }
    static LFunctionId dirichlet(std::uint64_t q, std::size_t index) { return LFunctionId(DirichletL{q, index}); }
    static LFunctionId dedekind(std::uint64_t q) {
        DedekindAbelian d{q, {}};
        const auto n = euler_phi(q);
        for (std::size_t i = 0; i < n; ++i) d.indices.push_back(i);
        return LFunctionId(d);
    }
    static LFunctionId dedekind(std::uint64_t q, std::vector<std::size_t> indices) {
        return LFunctionId(DedekindAbelian{q, std::move(indices)});
    }

    const Base& base() const { return base_; }

    std::string canonical() const {
        return std::visit(
            [](const auto& b) -> std::string {
                using T = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<T, Zeta>) return "zeta";
                else if constexpr (std::is_same_v<T, Hurwitz>)
                    return "hurwitz:" + std::to_string(b.a) + "/" + std::to_string(b.q);
                else if constexpr (std::is_same_v<T, DirichletL>)
                    return "dirichlet:" + std::to_string(b.q) + ":" + std::to_string(b.index);
                else {
                    std::string s = "dedekind:" + std::to_string(b.q);
                    if (b.indices.size() != euler_phi(b.q)) {
                        s += ":";
                        for (std::size_t i = 0; i < b.indices.size(); ++i)
                            s += (i ? "+" : "") + std::to_string(b.indices[i]);
                    }
                    return s;
                }
            },
            base_);
    }

    // Degree over Q: 1 for the degree-1 objects, [K:Q] for Dedekind products.
    int degree() const {
        if (auto d = std::get_if<DedekindAbelian>(&base_)) return static_cast<int>(d->indices.size());
        return 1;
    }

    // Characters whose L-functions multiply to this object (empty for Hurwitz).
    std::vector<DirichletCharacter> characters() const {
        if (std::holds_alternative<Zeta>(base_)) return {DirichletCharacter{}};
        if (auto d = std::get_if<DirichletL>(&base_)) return {character_by_id(d->q, d->index)};
        if (auto d = std::get_if<DedekindAbelian>(&base_)) {
            const auto group = character_group(d->q);
            std::vector<DirichletCharacter> out;
            for (auto i : d->indices) out.push_back(i == 0 ? DirichletCharacter{} : group[i]);
            return out;
        }
        return {};
    }

    // Satake data for the coefficient layer (degree-1 objects only).
    std::vector<SatakeSpec> satake_specs() const {
        if (std::holds_alternative<Hurwitz>(base_))
            throw DataError("Hurwitz zeta has no Euler product: " + canonical());
        std::vector<SatakeSpec> out;
        for (const auto& chi : characters()) out.push_back(satake_from_character(chi));
        return out;
    }

    bool real_coefficients() const {
        if (std::holds_alternative<Hurwitz>(base_)) return true;
        for (const auto& chi : characters())
            if (!chi.is_real()) return false;
        return true;
    }

    friend bool operator==(const LFunctionId& a, const LFunctionId& b) { return a.canonical() == b.canonical(); }

private:
    void validate() const {
        if (auto h = std::get_if<Hurwitz>(&base_)) {
            if (h->q < 1 || h->a < 1 || h->a > h->q)
                throw DomainError("hurwitz selector requires 1 <= a <= q");
            if (std::gcd(h->a, h->q) != 1) throw DomainError("hurwitz selector requires gcd(a, q) = 1");
        } else if (auto d = std::get_if<DirichletL>(&base_)) {
            if (d->q < 1) throw DomainError("dirichlet selector requires q >= 1");
            if (d->index >= euler_phi(d->q))
                throw DomainError("character index " + std::to_string(d->index) + " out of range mod " +
                                  std::to_string(d->q));
        } else if (auto d = std::get_if<DedekindAbelian>(&base_)) {
            if (d->q < 1 || d->indices.empty()) throw DomainError("dedekind selector needs a nonempty character list");
            int principal = 0;
            for (auto i : d->indices) {
                if (i >= euler_phi(d->q)) throw DomainError("dedekind character index out of range");
                principal += i == 0;
            }
            if (principal != 1) throw DomainError("dedekind character list must contain the principal character once");
        }
    }

    Base base_ = Zeta{};
};

// Degree-1 factors: the object itself, or zeta and dirichlet:q:i for a Dedekind product.
inline std::vector<LFunctionId> factor_ids(const LFunctionId& id) {
    if (auto d = std::get_if<DedekindAbelian>(&id.base())) {
        std::vector<LFunctionId> out;
        for (auto i : d->indices) out.push_back(i == 0 ? LFunctionId::zeta() : LFunctionId::dirichlet(d->q, i));
        return out;
    }
    return {id};
}

// One factor |L|^{2k} of a moment integrand.
struct Component {
    LFunctionId id;
    double k = 1.0;
};

namespace detail {

inline std::uint64_t parse_uint(const std::string& s, const std::string& ctx) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw DomainError("bad integer '" + s + "' in selector '" + ctx + "'");
    return std::stoull(s);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

} // namespace detail

// zeta | hurwitz:a/q | dirichlet:q:index | dedekind:q[:i+j+...]
inline LFunctionId parse_lfunction(const std::string& text) {
    const auto parts = detail::split(text, ':');
    if (parts.empty()) throw DomainError("empty L-function selector");
    const auto& head = parts[0];
    if (head == "zeta" && parts.size() == 1) return LFunctionId::zeta();
    if (head == "hurwitz" && parts.size() == 2) {
        const auto frac = detail::split(parts[1], '/');
        if (frac.size() != 2) throw DomainError("hurwitz selector must be hurwitz:a/q");
        return LFunctionId::hurwitz(detail::parse_uint(frac[0], text), detail::parse_uint(frac[1], text));
    }
    if (head == "dirichlet" && parts.size() == 3)
        return LFunctionId::dirichlet(detail::parse_uint(parts[1], text), detail::parse_uint(parts[2], text));
    if (head == "dedekind" && (parts.size() == 2 || parts.size() == 3)) {
        const auto q = detail::parse_uint(parts[1], text);
        if (parts.size() == 2) return LFunctionId::dedekind(q);
        std::vector<std::size_t> idx;
        for (const auto& s : detail::split(parts[2], '+')) idx.push_back(detail::parse_uint(s, text));
        return LFunctionId::dedekind(q, idx);
    }
    throw DomainError("unrecognized L-function selector '" + text + "'");
}

// Comma-separated components, each with an optional ^k suffix (default 1).
inline std::vector<Component> parse_selector(const std::string& text) {
    std::vector<Component> out;
    for (const auto& item : detail::split(text, ',')) {
        if (item.empty()) throw DomainError("empty component in selector '" + text + "'");
        Component c;
        const auto caret = item.find('^');
        c.id = parse_lfunction(item.substr(0, caret));
        if (caret != std::string::npos) {
            const auto ks = item.substr(caret + 1);
            std::size_t used = 0;
            try {
                c.k = std::stod(ks, &used);
            } catch (const std::logic_error&) {
                used = 0;
            }
            if (used != ks.size() || ks.empty()) throw DomainError("bad exponent '" + ks + "' in '" + item + "'");
            if (!(c.k > 0.0) || !std::isfinite(c.k)) throw DomainError("exponents must be > 0 in '" + item + "'");
        }
        out.push_back(c);
    }
    return out;
}

inline std::string format_selector(const std::vector<Component>& comps) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (i) os << ",";
        os << comps[i].id.canonical();
        if (comps[i].k != 1.0) os << "^" << comps[i].k;
    }
    return os.str();
}

} // namespace lmlab
