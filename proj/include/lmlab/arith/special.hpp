#pragma once

#include <cmath>
#include <limits>

#include "../errors.hpp"

namespace lmlab {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// E1(x) = int_x^inf e^{-t}/t dt.
inline double exp_integral_E1(double x) {
    if (!(x > 0.0)) throw DomainError("exp_integral_E1: x must be > 0");
    if (x <= 5.0) {
        // -gamma - log x - sum_{k>=1} (-x)^k/(k! k); long double absorbs the
        // alternating cancellation near x = 5.
        long double term = 1.0L, sum = 0.0L;
        const long double lx = x;
        for (int k = 1; k < 200; ++k) {
            term *= -lx / k;
            const long double add = term / k;
            sum += add;
            if (std::fabs(add) < 1e-22L * std::fabs(sum)) break;
        }
        return static_cast<double>(-static_cast<long double>(euler_gamma) - std::log(lx) - sum);
    }
    // Continued fraction e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))), modified Lentz.
    const double tiny = 1e-300;
    double b = x + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x);
}

} // namespace lmlab
