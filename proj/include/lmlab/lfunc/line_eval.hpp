#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "../detail/parallel.hpp"
#include "../errors.hpp"
#include "euler_maclaurin.hpp"
#include "lfunction_id.hpp"
#include "nufft.hpp"
#include "riemann_siegel.hpp"

namespace lmlab {

struct LineOptions {
    double precision = 1e-8;  // absolute on log|L|
    Parallelism par{};
    std::size_t chunk = std::size_t(1) << 18;
};

namespace detail {

// A factor of the product: scale^{-s} sum_a w_a zeta(s, alpha_a); `is_zeta`
// enables the Riemann-Siegel path on the critical line.
struct LineFactor {
    ShiftedSystem system;
    bool is_zeta = false;
};

inline std::vector<LineFactor> line_factors(const LFunctionId& id) {
    std::vector<LineFactor> out;
    if (std::holds_alternative<Zeta>(id.base())) {
        out.push_back({hurwitz_system(1, 1), true});
    } else if (auto h = std::get_if<Hurwitz>(&id.base())) {
        out.push_back({hurwitz_system(h->a, h->q), h->a == h->q});
    } else {
        for (const auto& chi : id.characters()) out.push_back({character_system(chi), chi.modulus() == 1});
    }
    return out;
}

// Euler-Maclaurin with the direct part summed on the whole chunk at once.
inline void em_chunk(const ShiftedSystem& sys, double sigma, long double t_start, long double delta,
                     std::size_t count, double value_tol, cplx* out) {
    const long double t_end = t_start + static_cast<long double>(count - 1) * delta;
    const double tmax = static_cast<double>(std::max(std::fabs(t_start), std::fabs(t_end)));
    const double scale_pow = std::pow(static_cast<double>(sys.scale), -sigma);
    const double mass = sys.weight_mass() * scale_pow;
    const auto plan = em_plan(sigma, tmax, value_tol / mass, 1.5);

    std::vector<cplx> coef;
    std::vector<long double> lambda;
    coef.reserve(sys.alpha.size() * plan.M);
    lambda.reserve(sys.alpha.size() * plan.M);
    for (std::uint64_t m = 0; m < plan.M; ++m)
        for (std::size_t i = 0; i < sys.alpha.size(); ++i) {
            const long double base = sys.scale * (static_cast<long double>(m) + sys.alpha[i]);
            const long double lb = std::log(base);
            lambda.push_back(lb);
            coef.push_back(sys.weight[i] * std::exp(-sigma * static_cast<double>(lb)));
        }
    std::vector<cplx> acc(count, cplx(0.0));
    dirichlet_sum_grid(coef, lambda, t_start, delta, count, acc.data());

    const long double lscale = std::log(sys.scale);
    std::vector<long double> X(sys.alpha.size()), logX(sys.alpha.size());
    for (std::size_t i = 0; i < sys.alpha.size(); ++i) {
        X[i] = static_cast<long double>(plan.M) + sys.alpha[i];
        logX[i] = std::log(X[i]);
    }
    for (std::size_t j = 0; j < count; ++j) {
        const long double t = t_start + static_cast<long double>(j) * delta;
        const cplx s(sigma, static_cast<double>(t));
        cplx tail = 0.0;
        for (std::size_t i = 0; i < sys.alpha.size(); ++i)
            tail += sys.weight[i] * em_tail(s, X[i], logX[i], plan.p, sys.zero_sum);
        tail *= scale_pow * unit_phase(t * lscale);
        out[j] = acc[j] + tail;
    }
}

// zeta(1/2 + it) for t >= rs_threshold by Riemann-Siegel, main sums by tiles.
inline void rs_chunk(long double t_start, long double delta, std::size_t count, cplx* out) {
    const long double t_end = t_start + static_cast<long double>(count - 1) * delta;
    const auto Nmax = static_cast<std::size_t>(std::sqrt(t_end / two_pi_ld)) + 1;
    std::vector<long double> logn(Nmax + 1);
    std::vector<double> isq(Nmax + 1);
    for (std::size_t n = 1; n <= Nmax; ++n) {
        logn[n] = std::log(static_cast<long double>(n));
        isq[n] = 1.0 / std::sqrt(static_cast<double>(n));
    }
    std::vector<double> zr(Nmax), zi(Nmax), rr(Nmax), ri(Nmax);
    std::vector<cplx> S(tile_points);
    for (std::size_t j0 = 0; j0 < count; j0 += tile_points) {
        const std::size_t n_pts = std::min(tile_points, count - j0);
        const long double t0 = t_start + static_cast<long double>(j0) * delta;
        const auto Nmin = static_cast<std::size_t>(std::sqrt(t0 / two_pi_ld));
        for (std::size_t n = 1; n <= Nmin; ++n) {
            const cplx z = isq[n] * unit_phase(t0 * logn[n]);
            const cplx r = unit_phase(delta * logn[n]);
            zr[n - 1] = z.real();
            zi[n - 1] = z.imag();
            rr[n - 1] = r.real();
            ri[n - 1] = r.imag();
        }
        std::fill(S.begin(), S.begin() + n_pts, cplx(0.0));
        rotate_accumulate(zr.data(), zi.data(), rr.data(), ri.data(), Nmin, n_pts, S.data());
        for (std::size_t j = 0; j < n_pts; ++j) {
            const long double t = t0 + static_cast<long double>(j) * delta;
            const long double a = std::sqrt(t / two_pi_ld);
            const auto N = static_cast<std::size_t>(a);
            for (std::size_t n = Nmin + 1; n <= N; ++n) S[j] += isq[n] * unit_phase(t * logn[n]);
            const cplx e_mtheta = unit_phase(rs_theta(t));  // e^{-i theta}
            const double Z = 2.0 * (std::conj(e_mtheta) * S[j]).real() + rs_remainder(static_cast<double>(a), N);
            out[j0 + j] = Z * e_mtheta;
        }
    }
}

inline void factor_chunk(const LineFactor& f, double sigma, long double t_start, long double delta, std::size_t count,
                         double value_tol, cplx* out) {
    if (f.is_zeta && sigma == 0.5 && t_start >= rs_threshold)
        rs_chunk(t_start, delta, count, out);
    else
        em_chunk(f.system, sigma, t_start, delta, count, value_tol, out);
}

} // namespace detail

// Calls sink(first_index, values, n) for each fixed-size chunk of L(sigma + i t_j),
// t_j = t0 + j delta. Chunks are independent of the worker count; sink may be
// invoked concurrently for disjoint ranges.
inline void evaluate_line_chunks(const LFunctionId& id, double sigma, long double t0, long double delta,
                                 std::size_t count, const LineOptions& opt,
                                 const std::function<void(std::size_t, const cplx*, std::size_t)>& sink) {
    if (!(delta > 0)) throw DomainError("grid step must be > 0");
    if (!(sigma > 0.0)) throw DomainError("line evaluation requires Re s > 0");
    const auto factors = detail::line_factors(id);
    const double value_tol = std::max(opt.precision * 1e-3, 1e-14);
    const std::size_t nchunks = (count + opt.chunk - 1) / opt.chunk;
    detail::parallel_for(nchunks, opt.par, [&](std::size_t c) {
        const std::size_t i0 = c * opt.chunk;
        const std::size_t n = std::min(opt.chunk, count - i0);
        const long double ts = t0 + static_cast<long double>(i0) * delta;
        std::vector<cplx> vals(n), tmp(n);
        detail::factor_chunk(factors[0], sigma, ts, delta, n, value_tol, vals.data());
        for (std::size_t f = 1; f < factors.size(); ++f) {
            detail::factor_chunk(factors[f], sigma, ts, delta, n, value_tol, tmp.data());
            for (std::size_t j = 0; j < n; ++j) vals[j] *= tmp[j];
        }
        sink(i0, vals.data(), n);
    });
}

inline std::vector<cplx> evaluate_line(const LFunctionId& id, double sigma, long double t0, long double delta,
                                       std::size_t count, const LineOptions& opt = {}) {
    std::vector<cplx> out(count);
    evaluate_line_chunks(id, sigma, t0, delta, count, opt, [&](std::size_t i0, const cplx* v, std::size_t n) {
        std::copy(v, v + n, out.begin() + static_cast<std::ptrdiff_t>(i0));
    });
    return out;
}

} // namespace lmlab
