#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "../arith/characters.hpp"
#include "../errors.hpp"
#include "euler_maclaurin.hpp"
#include "lfunction_id.hpp"
#include "riemann_siegel.hpp"

namespace lmlab {

inline constexpr double default_value_precision = 1e-10;

// zeta(s, a/q) for 1 <= a <= q.
inline cplx hurwitz_zeta(cplx s, std::uint64_t a, std::uint64_t q, double precision = default_value_precision) {
    if (q < 1 || a < 1 || a > q) throw DomainError("hurwitz_zeta requires 1 <= a <= q");
    if (s == cplx(1.0)) throw PoleError("hurwitz_zeta: pole at s = 1");
    if (a == q && s.real() == 0.5 && std::abs(s.imag()) > rs_threshold) return zeta_critical_rs(s.imag());
    return evaluate_system(s, hurwitz_system(a, q), {precision, 0});
}

inline cplx riemann_zeta(cplx s, double precision = default_value_precision) { return hurwitz_zeta(s, 1, 1, precision); }

// L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q).
inline cplx dirichlet_l(cplx s, const DirichletCharacter& chi, double precision = default_value_precision,
                        std::uint64_t extra_M = 0) {
    if (chi.is_principal() && s == cplx(1.0)) throw PoleError("dirichlet_l: principal character has a pole at s = 1");
    return evaluate_system(s, character_system(chi), {precision, extra_M});
}

// q^s / phi(q) sum_chi conj(chi(a)) L(s, chi), each L with its own cutoff.
inline cplx hurwitz_from_characters(cplx s, std::uint64_t a, std::uint64_t q,
                                    double precision = default_value_precision) {
    if (std::gcd(a, q) != 1) throw DomainError("hurwitz_from_characters requires gcd(a, q) = 1");
    const auto group = character_group(q);
    cplx sum = 0.0;
    for (const auto& chi : group) sum += std::conj(chi(a)) * dirichlet_l(s, chi, precision, 7 + 3 * chi.index());
    return std::exp(s * std::log(static_cast<double>(q))) / static_cast<double>(group.size()) * sum;
}

inline cplx dedekind_abelian(cplx s, const std::vector<DirichletCharacter>& chars,
                             double precision = default_value_precision) {
    if (chars.empty()) throw DomainError("dedekind_abelian: empty character list");
    int principal = 0;
    for (const auto& c : chars) principal += c.is_principal();
    if (principal != 1) throw DomainError("dedekind_abelian: exactly one principal character required");
    cplx v = 1.0;
    for (const auto& c : chars) v *= dirichlet_l(s, c, precision);
    return v;
}

inline cplx evaluate(const LFunctionId& id, cplx s, double precision = default_value_precision) {
    if (std::holds_alternative<Zeta>(id.base())) return riemann_zeta(s, precision);
    if (auto h = std::get_if<Hurwitz>(&id.base())) return hurwitz_zeta(s, h->a, h->q, precision);
    if (std::holds_alternative<DirichletL>(id.base())) return dirichlet_l(s, id.characters()[0], precision);
    return dedekind_abelian(s, id.characters(), precision);
}

} // namespace lmlab
