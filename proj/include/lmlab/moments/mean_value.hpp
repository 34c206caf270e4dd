#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "../arith/primes.hpp"
#include "../errors.hpp"
#include "dirichlet_poly.hpp"
#include "quadrature.hpp"

namespace lmlab {

namespace detail {

inline constexpr std::size_t mean_block = std::size_t(1) << 20;

// Calls body(j0, values) for consecutive blocks of samples t = T + j h, j <= n, where
// values[i] holds polys[i] evaluated at sigma = 0 on the block.
template <class Body>
void scan_segment(const std::vector<DirichletPolynomial>& polys, double T, std::size_t n, double h, Body&& body) {
    std::vector<std::vector<cplx>> vals(polys.size());
    for (std::size_t j0 = 0; j0 <= n; j0 += mean_block) {
        const std::size_t m = std::min(mean_block, n + 1 - j0);
        const long double ts = static_cast<long double>(T) + static_cast<long double>(j0) * h;
        for (std::size_t i = 0; i < polys.size(); ++i) vals[i] = polys[i].on_line(0.0, ts, h, m);
        body(j0, m, vals);
    }
}

// Samples on [T, 2T] resolving frequencies up to `max_log` (even count).
inline std::pair<std::size_t, double> segment_layout(double T, double max_log) {
    const double d = std::min(0.02, std::numbers::pi / (8.0 * std::max(max_log, 1.0)));
    std::size_t n = static_cast<std::size_t>(std::ceil(T / d));
    n += n % 2;
    return {n, T / static_cast<double>(n)};
}

} // namespace detail

struct MeanValueReport {
    double T = 0.0;
    std::size_t N = 0;
    double mean = 0.0;      // (1/T) int_T^{2T} |sum a_n n^{-it}|^2 dt
    double diagonal = 0.0;  // sum |a_n|^2
    double deviation = 0.0; // |mean / diagonal - 1|
    double quad_error = 0.0;
};

// coeffs[n - 1] = a_n.
inline MeanValueReport mv_check(const std::vector<cplx>& coeffs, double T) {
    const std::size_t N = coeffs.size();
    if (N == 0) throw DomainError("mv_check needs at least one coefficient");
    if (static_cast<double>(N) > T) throw PreconditionError("mv_check requires N <= T");
    const auto [n, h] = detail::segment_layout(T, std::log(static_cast<double>(N)));
    NewtonCotesAccumulator acc(n, h);
    detail::scan_segment({DirichletPolynomial(coeffs)}, T, n, h, [&](std::size_t j0, std::size_t m, const auto& v) {
        for (std::size_t i = 0; i < m; ++i) acc.add(j0 + i, std::norm(v[0][i]));
    });
    MeanValueReport r;
    r.T = T;
    r.N = N;
    const auto q = acc.result();
    r.mean = q.value / T;
    r.quad_error = q.error / T;
    for (const auto& a : coeffs) r.diagonal += std::norm(a);
    r.deviation = r.diagonal > 0 ? std::fabs(r.mean / r.diagonal - 1.0) : std::fabs(r.mean);
    return r;
}

struct CoprimeReport {
    double T = 0.0;
    std::uint64_t N = 0;               // largest index of the product polynomial
    std::vector<double> factor_means;  // (1/T) int |D_j|^2
    double product_mean = 0.0;         // (1/T) int |prod D_j|^2
    double ratio = 0.0;
    double deviation = 0.0;            // |ratio - 1|
    double scale = 0.0;                // N log N / T

    bool within(double c) const { return deviation < c * scale; }
};

inline CoprimeReport coprime_factorization_check(const std::vector<std::vector<cplx>>& polys, double T) {
    if (polys.empty()) throw DomainError("coprime_factorization_check needs at least one polynomial");
    std::vector<std::vector<std::uint64_t>> supports;
    for (const auto& p : polys) {
        std::vector<std::uint64_t> s;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] != 0.0) s.push_back(i + 1);
        if (s.empty()) throw DomainError("coprime_factorization_check: empty support");
        supports.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < supports.size(); ++i)
        for (std::size_t j = i + 1; j < supports.size(); ++j)
            for (auto a : supports[i])
                for (auto b : supports[j])
                    if (std::gcd(a, b) != 1)
                        throw DomainError("coprime_factorization_check: supports " + std::to_string(i) + " and " +
                                          std::to_string(j) + " share the factor " + std::to_string(std::gcd(a, b)));
    double N = 1.0;
    for (const auto& s : supports) N *= static_cast<double>(s.back());
    if (N > T / 10.0) throw PreconditionError("coprime_factorization_check requires N <= T/10");

    std::vector<DirichletPolynomial> dp;
    for (const auto& p : polys) dp.emplace_back(p);
    const auto [n, h] = detail::segment_layout(T, std::log(N));
    NewtonCotesAccumulator prod(n, h);
    std::vector<NewtonCotesAccumulator> each(polys.size(), NewtonCotesAccumulator(n, h));
    detail::scan_segment(dp, T, n, h, [&](std::size_t j0, std::size_t m, const auto& v) {
        for (std::size_t i = 0; i < m; ++i) {
            cplx P = 1.0;
            for (std::size_t f = 0; f < v.size(); ++f) {
                P *= v[f][i];
                each[f].add(j0 + i, std::norm(v[f][i]));
            }
            prod.add(j0 + i, std::norm(P));
        }
    });
    CoprimeReport r;
    r.T = T;
    r.N = static_cast<std::uint64_t>(N);
    r.product_mean = prod.result().value / T;
    double denom = 1.0;
    for (auto& e : each) {
        r.factor_means.push_back(e.result().value / T);
        denom *= r.factor_means.back();
    }
    r.ratio = r.product_mean / denom;
    r.deviation = std::fabs(r.ratio - 1.0);
    r.scale = N * std::log(N) / T;
    return r;
}

struct HighMomentReport {
    double T = 0.0;
    std::uint64_t N = 0;
    int ell = 1;
    double lhs = 0.0;          // int_T^{2T} |sum_{p <= N} a(p) p^{-1/2-it}|^{2 ell} dt
    double normaliser = 0.0;   // T ell! (sum |a(p)|^2 / p)^ell
    double ratio = 0.0;        // lhs / normaliser, 0 when both vanish
    double quad_error = 0.0;
};

// a[n] for n <= N; only prime indices are read.
inline HighMomentReport high_moment_check(const std::vector<cplx>& a, int ell, double T) {
    if (a.size() < 2) throw DomainError("high_moment_check needs coefficients up to N >= 1");
    if (ell < 1) throw DomainError("high_moment_check requires ell >= 1");
    const std::uint64_t N = a.size() - 1;
    if (std::pow(static_cast<double>(N), ell) > T) throw PreconditionError("high_moment_check requires N^ell <= T");
    std::vector<cplx> coef(N, 0.0);
    double mass = 0.0;
    for (auto p : primes_below(N + 1)) {
        coef[p - 1] = a[p] / std::sqrt(static_cast<double>(p));
        mass += std::norm(a[p]) / static_cast<double>(p);
    }
    const auto [n, h] = detail::segment_layout(T, ell * std::log(static_cast<double>(std::max<std::uint64_t>(N, 2))));
    NewtonCotesAccumulator acc(n, h);
    detail::scan_segment({DirichletPolynomial(coef)}, T, n, h, [&](std::size_t j0, std::size_t m, const auto& v) {
        for (std::size_t i = 0; i < m; ++i) acc.add(j0 + i, std::pow(std::norm(v[0][i]), ell));
    });
    HighMomentReport r;
    r.T = T;
    r.N = N;
    r.ell = ell;
    const auto q = acc.result();
    r.lhs = q.value;
    r.quad_error = q.error;
    r.normaliser = T * std::tgamma(ell + 1.0) * std::pow(mass, ell);
    r.ratio = r.normaliser > 0 ? r.lhs / r.normaliser : 0.0;
    return r;
}

} // namespace lmlab
