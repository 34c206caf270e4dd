#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include "../arith/characters.hpp"
#include "euler_maclaurin.hpp"
#include "rs_coeffs.hpp"

namespace lmlab {

inline constexpr double rs_threshold = 1e4;

// Riemann-Siegel theta, asymptotic series (t >= 10).
inline long double rs_theta(long double t) {
    const long double t2 = t * t;
    return t / 2.0L * std::log(t / two_pi_ld) - t / 2.0L - pi_ld / 8.0L + 1.0L / (48.0L * t) +
           7.0L / (5760.0L * t * t2) + 31.0L / (80640.0L * t * t2 * t2) + 127.0L / (430080.0L * t * t2 * t2 * t2);
}

namespace detail {

template <std::size_t N>
inline double horner_parity(const std::array<double, N>& c, double z, bool odd) {
    // c holds a polynomial with only even (or only odd) powers of z.
    const double z2 = z * z;
    double acc = 0.0;
    const long start = odd ? 1 : 0;
    long top = static_cast<long>(N) - 1;
    if ((top - start) % 2 != 0) --top;
    for (long i = top; i >= start; i -= 2) acc = acc * z2 + c[i];
    return odd ? acc * z : acc;
}

// (-1)^{N-1} a^{-1/2} sum_k C_k(p) a^{-k}, a = sqrt(t / 2 pi).
inline double rs_remainder(double a, std::uint64_t N) {
    const double p = a - static_cast<double>(N);
    const double z = p - 0.5;
    const double ia = 1.0 / a;
    double r = horner_parity(rs_c4, z, false);
    r = r * ia + horner_parity(rs_c3, z, true);
    r = r * ia + horner_parity(rs_c2, z, false);
    r = r * ia + horner_parity(rs_c1, z, true);
    r = r * ia + horner_parity(rs_c0, z, false);
    r /= std::sqrt(a);
    return (N % 2 == 1) ? r : -r;
}

} // namespace detail

// Hardy Z(t) by the Riemann-Siegel formula with C_0..C_4; intended for t >= 1e4.
inline double hardy_z(double t) {
    const long double tl = t;
    const long double a = std::sqrt(tl / two_pi_ld);
    const auto N = static_cast<std::uint64_t>(a);
    const long double theta = rs_theta(tl);
    double sum = 0.0;
    for (std::uint64_t n = N; n >= 1; --n) {
        const long double ln = std::log(static_cast<long double>(n));
        const long double ph = std::fmod(theta - tl * ln, two_pi_ld);
        sum += std::cos(static_cast<double>(ph)) / std::sqrt(static_cast<double>(n));
    }
    return 2.0 * sum + detail::rs_remainder(static_cast<double>(a), N);
}

// zeta(1/2 + it) = e^{-i theta(t)} Z(t); conjugate symmetric for t < 0.
inline cplx zeta_critical_rs(double t) {
    const double at = std::abs(t);
    const cplx v = hardy_z(at) * detail::unit_phase(rs_theta(static_cast<long double>(at)));
    return t < 0 ? std::conj(v) : v;
}

} // namespace lmlab
