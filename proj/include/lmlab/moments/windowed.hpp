#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "../errors.hpp"
#include "dirichlet_poly.hpp"
#include "quadrature.hpp"

namespace lmlab {

// H, K, J against the window w(t, T):
//   H = int |S_N(sigma+it)|^2 w,  K = int |g_N(sigma+it)|^2 w,  J = int prod |L_j(sigma+it)|^{2k_j} w.
struct WindowedIntegrals {
    double sigma = 0.5, T = 0.0;
    std::uint32_t N = 0;
    Quadrature H, K, J;
    double K_half = 0.0;  // K(1/2, T), reported next to T
    double step = 0.0;

    // H <= 2(J + K) and K <= 2(J + H), from |a + b|^2 <= 2|a|^2 + 2|b|^2.
    bool triangle_holds() const {
        return H.value <= 2.0 * (J.value + K.value) * (1 + 1e-9) && K.value <= 2.0 * (J.value + H.value) * (1 + 1e-9);
    }
};

struct WindowedOptions {
    double delta = 0.0;  // 0 selects min(0.02, pi / (2 log max(T, N)))
    Parallelism par{};
};

namespace detail {

inline constexpr std::size_t window_block = std::size_t(1) << 20;

struct WindowedPass {
    Quadrature H, K, J;
};

inline WindowedPass windowed_pass(double sigma, double T, double a, std::size_t n, double h,
                                  const GTail& g, const LineOptions& lo) {
    NewtonCotesAccumulator H(n, h), K(n, h), J(n, h);
    for (std::size_t j0 = 0; j0 <= n; j0 += window_block) {
        const std::size_t m = std::min(window_block, n + 1 - j0);
        const long double ts = static_cast<long double>(a) + static_cast<long double>(j0) * h;
        const auto S = g.S().on_line(sigma, ts, h, m);
        const auto P = powered_product_line(g.characters(), g.k(), sigma, ts, h, m, lo);
        for (std::size_t i = 0; i < m; ++i) {
            const double t = static_cast<double>(ts + static_cast<long double>(i) * h);
            const double w = window_weight(t, T);
            H.add(j0 + i, std::norm(S[i]) * w);
            K.add(j0 + i, std::norm(P[i] - S[i]) * w);
            J.add(j0 + i, std::norm(P[i]) * w);
        }
    }
    return {H.result(), K.result(), J.result()};
}

} // namespace detail

inline WindowedIntegrals windowed_integrals(double sigma, double T, std::uint32_t N, const std::vector<LFunctionId>& ids,
                                            const std::vector<double>& k, const WindowedOptions& opt = {}) {
    if (!(sigma >= 0.5 && sigma <= 1.5)) throw DomainError("windowed_integrals requires 1/2 <= sigma <= 3/2");
    if (!(T >= 10.0)) throw DomainError("windowed_integrals requires T >= 10");
    if (N < 1) throw DomainError("windowed_integrals requires N >= 1");
    const auto g = GTail::from_ids(ids, k, N);
    const double a = T - gaussian_cutoff, b = 2.0 * T + gaussian_cutoff;
    const double d = opt.delta > 0 ? opt.delta
                                   : std::min(0.02, std::numbers::pi / (2.0 * std::log(std::max<double>(T, N))));
    std::size_t n = static_cast<std::size_t>(std::ceil((b - a) / d));
    n += n % 2;
    const double h = (b - a) / static_cast<double>(n);
    LineOptions lo;
    lo.precision = 1e-10;
    lo.par = opt.par;

    WindowedIntegrals r;
    r.sigma = sigma;
    r.T = T;
    r.N = N;
    r.step = h;
    const auto p = detail::windowed_pass(sigma, T, a, n, h, g, lo);
    r.H = p.H;
    r.K = p.K;
    r.J = p.J;
    r.K_half = sigma == 0.5 ? r.K.value : detail::windowed_pass(0.5, T, a, n, h, g, lo).K.value;
    return r;
}

} // namespace lmlab
