#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "../errors.hpp"

namespace lmlab {

struct FitResult {
    double exponent = 0.0;
    double intercept = 0.0;
    double residual_norm = 0.0;
    double T_min = 0.0, T_max = 0.0;
};

// Least squares of log(I/T) against log log T.
inline FitResult scaling_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw FitError("scaling_fit needs at least 3 points");
    double tmin = points[0].first, tmax = points[0].first;
    for (const auto& [T, I] : points) {
        if (!(T > std::exp(1.0)) || !(I > 0)) throw FitError("scaling_fit needs T > e and I > 0");
        tmin = std::min(tmin, T);
        tmax = std::max(tmax, T);
    }
    if (std::log10(tmax / tmin) < 2.0 - 1e-9) throw FitError("scaling_fit needs T spanning two decades");
    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (const auto& [T, I] : points) {
        sx += std::log(std::log(T));
        sy += std::log(I / T);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [T, I] : points) {
        const double dx = std::log(std::log(T)) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(I / T) - my);
    }
    if (!(sxx > 1e-12)) throw FitError("scaling_fit: degenerate abscissas");
    FitResult r;
    r.exponent = sxy / sxx;
    r.intercept = my - r.exponent * mx;
    double rr = 0;
    for (const auto& [T, I] : points) {
        const double e = std::log(I / T) - (r.intercept + r.exponent * std::log(std::log(T)));
        rr += e * e;
    }
    r.residual_norm = std::sqrt(rr);
    r.T_min = tmin;
    r.T_max = tmax;
    return r;
}

} // namespace lmlab
