#pragma once

#include <cmath>
#include <vector>

#include "../errors.hpp"
#include "dirichlet_poly.hpp"

namespace lmlab {

// Line integrals of |f(x + it)|^2 for f(z) = g_N(z) exp((z - i tau)^2 / 2) on
// Re z = alpha, gamma, beta, and the convexity ratio
//   I(gamma) / (I(alpha)^{(beta-gamma)/(beta-alpha)} I(beta)^{(gamma-alpha)/(beta-alpha)}).
struct GabrielReport {
    double alpha = 0, gamma = 0, beta = 0, tau = 0;
    double I_alpha = 0, I_gamma = 0, I_beta = 0;
    double ratio = 0;
};

inline constexpr double gabriel_min_sigma = 1.0 + 1e-3;
inline constexpr double gabriel_max_sigma = 1.5;
inline constexpr double gabriel_half_width = 8.0;  // exp(-64) relative tail
inline constexpr double gabriel_step = 0.01;

namespace detail {

inline double gabriel_line(const GTail& g, double x, double tau) {
    const auto n = static_cast<std::size_t>(2.0 * gabriel_half_width / gabriel_step);
    long double acc = 0.0L;
    // trapezoid: spectrally accurate for the Gaussian-damped analytic integrand
    for (std::size_t j = 0; j <= n; ++j) {
        const double u = -gabriel_half_width + static_cast<double>(j) * gabriel_step;
        const double v = std::norm(g(cplx(x, tau + u))) * std::exp(x * x - u * u);
        acc += (j == 0 || j == n) ? 0.5L * v : static_cast<long double>(v);
    }
    return static_cast<double>(acc * gabriel_step);
}

} // namespace detail

inline GabrielReport gabriel_check(std::uint32_t N, const std::vector<LFunctionId>& ids, const std::vector<double>& k,
                                   double alpha, double gamma, double beta, double tau) {
    if (!(alpha <= gamma && gamma <= beta)) throw DomainError("gabriel_check requires alpha <= gamma <= beta");
    if (!(beta - alpha >= 0.01)) throw DomainError("gabriel_check requires beta - alpha >= 0.01");
    if (!(alpha >= gabriel_min_sigma && beta <= gabriel_max_sigma))
        throw DomainError("gabriel_check runs on 1.001 <= Re z <= 1.5");
    if (!(tau >= 2.0 * gabriel_half_width)) throw DomainError("gabriel_check requires tau >= 16");
    const auto g = GTail::from_ids(ids, k, N);
    GabrielReport r;
    r.alpha = alpha;
    r.gamma = gamma;
    r.beta = beta;
    r.tau = tau;
    r.I_alpha = detail::gabriel_line(g, alpha, tau);
    r.I_beta = detail::gabriel_line(g, beta, tau);
    r.I_gamma = gamma == alpha ? r.I_alpha : gamma == beta ? r.I_beta : detail::gabriel_line(g, gamma, tau);
    const double wa = (beta - gamma) / (beta - alpha), wb = (gamma - alpha) / (beta - alpha);
    r.ratio = r.I_gamma / (std::pow(r.I_alpha, wa) * std::pow(r.I_beta, wb));
    return r;
}

} // namespace lmlab
