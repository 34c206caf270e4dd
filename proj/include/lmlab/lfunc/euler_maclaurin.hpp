#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "../arith/characters.hpp"
#include "../errors.hpp"

namespace lmlab {

inline constexpr long double pi_ld = 3.141592653589793238462643383279502884L;
inline constexpr long double two_pi_ld = 6.283185307179586476925286766559005768L;

namespace detail {

inline constexpr int em_max_order = 60;

// b_j = B_{2j}/(2j)! = (-1)^{j+1} 2 zeta(2j) / (2 pi)^{2j}, j = 1..em_max_order.
inline const std::array<double, em_max_order + 1>& bernoulli_ratios() {
    static const auto table = [] {
        std::array<double, em_max_order + 1> b{};
        for (int j = 1; j <= em_max_order; ++j) {
            long double z2j;
            if (j == 1) {
                z2j = pi_ld * pi_ld / 6.0L;
            } else {
                z2j = 0.0L;
                for (int n = 20000; n >= 1; --n) z2j += std::pow(static_cast<long double>(n), -2.0L * j);
            }
            const long double mag = 2.0L * z2j * std::pow(two_pi_ld, -2.0L * j);
            b[j] = static_cast<double>(j % 2 ? mag : -mag);
        }
        return b;
    }();
    return table;
}

// e^{-i phase} for a long double phase, reduced mod 2 pi before rounding.
inline cplx unit_phase(long double phase) {
    const long double r = std::fmod(phase, two_pi_ld);
    const double x = static_cast<double>(r);
    return {std::cos(x), -std::sin(x)};
}

} // namespace detail

// Cutoff M and order p for the Euler-Maclaurin tail of zeta(s, alpha),
// alpha in (0, 1], valid for every s with Re s = sigma and |Im s| <= tmax.
struct EMPlan {
    std::uint64_t M = 10;
    int p = 1;
    double bound = 0.0;
};

inline double em_error_bound(double sigma, double tmax, std::uint64_t M, int p) {
    // 4 |(s)_{2p}| / (2 pi)^{2p} * M^{1 - sigma - 2p} / (sigma + 2p - 1)
    long double lg = std::log(4.0L);
    for (int i = 0; i < 2 * p; ++i) lg += 0.5L * std::log((sigma + i) * (long double)(sigma + i) + (long double)tmax * tmax);
    lg -= 2.0L * p * std::log(two_pi_ld);
    lg += (1.0L - sigma - 2.0L * p) * std::log(static_cast<long double>(M));
    return static_cast<double>(std::exp(lg) / (sigma + 2.0 * p - 1.0));
}

inline EMPlan em_plan(double sigma, double tmax, double tol, double m_factor = 1.0, std::uint64_t extra_M = 0) {
    if (!(sigma > 0.0)) throw DomainError("Euler-Maclaurin evaluation requires Re s > 0");
    const double smax = std::hypot(sigma, tmax);
    std::uint64_t M = static_cast<std::uint64_t>(std::ceil(m_factor * smax / M_PI)) + 10 + extra_M;
    constexpr std::uint64_t M_cap = std::uint64_t(1) << 30;
    double best = std::numeric_limits<double>::infinity();
    for (; M <= M_cap; M *= 2) {
        double prev = std::numeric_limits<double>::infinity();
        for (int p = 1; p <= detail::em_max_order; ++p) {
            const double b = em_error_bound(sigma, tmax, M, p);
            best = std::min(best, b);
            if (b < tol) return {M, p, b};
            if (b > prev) break;
            prev = b;
        }
    }
    throw AccuracyError("Euler-Maclaurin cutoff exceeds cap at height " + std::to_string(tmax), best);
}

// Tail of zeta(s, alpha) beyond the first M terms, at X = M + alpha, given
// log X. If drop_pole is set, X^{1-s}/(s-1) is replaced by (X^{1-s}-1)/(s-1):
// the constant cancels in zero-sum character combinations and stays finite at s = 1.
inline cplx em_tail(cplx s, long double X, long double logX, int p, bool drop_pole) {
    const double sigma = s.real();
    const long double t = s.imag();
    const cplx Xs = std::exp(-sigma * static_cast<double>(logX)) * detail::unit_phase(t * logX);
    const double Xd = static_cast<double>(X);
    const cplx eps = s - 1.0;
    cplx pole;
    if (!drop_pole) {
        if (eps == cplx(0.0)) throw PoleError("Hurwitz zeta has a pole at s = 1");
        pole = Xd * Xs / eps;
    } else {
        const cplx u = -eps * static_cast<double>(logX);
        if (std::abs(u) < 0.1) {
            // (e^u - 1)/eps = -logX * sum_n u^n/(n+1)!
            cplx term = 1.0, sum = 1.0;
            for (int n = 1; n < 30; ++n) {
                term *= u / double(n + 1);
                sum += term;
            }
            pole = -static_cast<double>(logX) * sum;
        } else {
            pole = (Xd * Xs - 1.0) / eps;
        }
    }
    const auto& b = detail::bernoulli_ratios();
    const double invX2 = 1.0 / (Xd * Xd);
    cplx r = s / Xd;
    cplx sum = b[1] * r;
    for (int j = 2; j <= p; ++j) {
        r *= (s + double(2 * j - 3)) * (s + double(2 * j - 2)) * invX2;
        sum += b[j] * r;
    }
    return pole + Xs * (0.5 + sum);
}

// sum_a w_a scale^{-s} zeta(s, alpha_a); the direct part runs over bases
// scale*(m + alpha_a) for m < M.
struct ShiftedSystem {
    long double scale = 1.0L;
    std::vector<long double> alpha;
    std::vector<cplx> weight;
    bool zero_sum = false;  // sum of weights vanishes exactly

    double weight_mass() const {
        double m = 0.0;
        for (const auto& w : weight) m += std::abs(w);
        return m;
    }
};

inline ShiftedSystem hurwitz_system(std::uint64_t a, std::uint64_t q) {
    ShiftedSystem sys;
    sys.alpha = {static_cast<long double>(a) / static_cast<long double>(q)};
    sys.weight = {1.0};
    return sys;
}

inline ShiftedSystem character_system(const DirichletCharacter& chi) {
    ShiftedSystem sys;
    const auto q = chi.modulus();
    sys.scale = static_cast<long double>(q);
    for (std::uint64_t a = 1; a <= q; ++a) {
        const cplx w = chi(a);
        if (w == cplx(0.0)) continue;
        sys.alpha.push_back(static_cast<long double>(a) / static_cast<long double>(q));
        sys.weight.push_back(w);
    }
    sys.zero_sum = !chi.is_principal();
    return sys;
}

struct EMOptions {
    double precision = 1e-10;     // absolute, on the value
    std::uint64_t extra_M = 0;    // shifts the cutoff; used for independent cross-checks
};

// Rounding floor of the direct sum: relative rounding of each term plus the
// long double phase error t * log(base) * eps.
inline double em_rounding_floor(double sigma, double t, std::uint64_t M, long double scale) {
    const double eps_d = std::numeric_limits<double>::epsilon();
    const double eps_ld = static_cast<double>(std::numeric_limits<long double>::epsilon());
    const double logmax = std::log(static_cast<double>(scale) * (M + 1.0));
    const double sq = sigma == 0.5 ? std::log(M + 1.0) + 1.0 : std::max(1.0, std::pow(M + 1.0, 1.0 - 2.0 * sigma));
    return (eps_d + std::abs(t) * logmax * eps_ld) * std::sqrt(sq) * std::pow(static_cast<double>(scale), -sigma);
}

inline cplx evaluate_system(cplx s, const ShiftedSystem& sys, const EMOptions& opt = {}) {
    const double sigma = s.real();
    const double t = s.imag();
    if (!sys.zero_sum && s == cplx(1.0)) throw PoleError("pole at s = 1");
    const double scale_pow = std::pow(static_cast<double>(sys.scale), -sigma);
    const double mass = sys.weight_mass() * scale_pow;
    const auto plan = em_plan(sigma, std::abs(t), 0.5 * opt.precision / std::max(mass, 1e-300), 1.0, opt.extra_M);
    const double floor = em_rounding_floor(sigma, t, plan.M, sys.scale);
    if (floor > opt.precision)
        throw AccuracyError("requested precision below the rounding floor at this height", floor);

    cplx total = 0.0;
    const long double lscale = std::log(sys.scale);
    for (std::size_t i = 0; i < sys.alpha.size(); ++i) {
        const long double alpha = sys.alpha[i];
        cplx direct = 0.0;
        for (std::uint64_t m = 0; m < plan.M; ++m) {
            const long double lb = std::log(static_cast<long double>(m) + alpha);
            direct += std::exp(-sigma * static_cast<double>(lb)) * detail::unit_phase(static_cast<long double>(t) * lb);
        }
        const long double X = static_cast<long double>(plan.M) + alpha;
        const cplx tail = em_tail(s, X, std::log(X), plan.p, sys.zero_sum);
        total += sys.weight[i] * (direct + tail);
    }
    // scale^{-s}
    const cplx scale_s = scale_pow * detail::unit_phase(static_cast<long double>(t) * lscale);
    return scale_s * total;
}

} // namespace lmlab
