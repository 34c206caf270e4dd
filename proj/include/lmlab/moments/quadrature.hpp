#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <variant>
#include <vector>

#include "../detail/parallel.hpp"

namespace lmlab {

struct SharpWindow {};    // indicator of [1, T]
struct GaussianWindow {}; // w(t, T) = int_T^{2T} exp(-(t - tau)^2) dtau

using Window = std::variant<SharpWindow, GaussianWindow>;

// 8 standard deviations of exp(-x^2).
inline constexpr double gaussian_cutoff = 8.0 / std::numbers::sqrt2;

inline double window_weight(double t, double T) {
    if (t < T - gaussian_cutoff || t > 2.0 * T + gaussian_cutoff) return 0.0;
    return 0.5 * std::sqrt(std::numbers::pi) * (std::erfc(T - t) - std::erfc(2.0 * T - t));
}

struct Interval {
    double a, b;
};

inline Interval window_support(const Window& w, double T) {
    if (std::holds_alternative<SharpWindow>(w)) return {1.0, T};
    return {T - gaussian_cutoff, 2.0 * T + gaussian_cutoff};
}

inline double default_moment_step(double T) {
    return std::min(0.02, std::numbers::pi / (2.0 * std::log(T)));
}

namespace detail {

// Composite Newton-Cotes weight of sample j out of n + 1 (n intervals): Simpson,
// with the 3/8 rule on the last three intervals when n is odd.
inline double newton_cotes_weight(std::size_t j, std::size_t n) {
    if (n == 1) return 0.5;
    if (n % 2 == 0) {
        if (j == 0 || j == n) return 1.0 / 3.0;
        return j % 2 ? 4.0 / 3.0 : 2.0 / 3.0;
    }
    const std::size_t m = n - 3;  // even Simpson part on [0, m]
    if (j < m || (j == m && m > 0)) {
        if (j == 0) return 1.0 / 3.0;
        if (j == m) return 1.0 / 3.0 + 3.0 / 8.0;
        return j % 2 ? 4.0 / 3.0 : 2.0 / 3.0;
    }
    const std::size_t r = j - m;
    return (r == 0 || r == 3) ? 3.0 / 8.0 : 9.0 / 8.0;
}

inline constexpr std::size_t reduction_chunk = std::size_t(1) << 18;

} // namespace detail

struct Quadrature {
    double value = 0.0;
    double error = 0.0;
};

// h * sum_j w_j f(j) over n intervals plus the same rule at step 2h on the even samples.
// The reduction is split into fixed chunks and merged in order, so the result does not
// depend on the worker count.
template <class F>
Quadrature newton_cotes(std::size_t n, double h, F&& f, Parallelism par = {}) {
    if (n == 0) return {};
    const std::size_t npts = n + 1;
    const std::size_t nchunks = (npts + detail::reduction_chunk - 1) / detail::reduction_chunk;
    const std::size_t nc = n / 2;
    std::vector<long double> fine(nchunks, 0.0L), coarse(nchunks, 0.0L);
    detail::parallel_for(nchunks, par, [&](std::size_t c) {
        const std::size_t lo = c * detail::reduction_chunk, hi = std::min(npts, lo + detail::reduction_chunk);
        long double sf = 0.0L, sc = 0.0L;
        for (std::size_t j = lo; j < hi; ++j) {
            const long double v = f(j);
            sf += detail::newton_cotes_weight(j, n) * v;
            if (nc > 0 && j % 2 == 0 && j / 2 <= nc) sc += detail::newton_cotes_weight(j / 2, nc) * v;
        }
        fine[c] = sf;
        coarse[c] = sc;
    });
    long double sf = 0.0L, sc = 0.0L;
    for (std::size_t c = 0; c < nchunks; ++c) {
        sf += fine[c];
        sc += coarse[c];
    }
    Quadrature q;
    q.value = static_cast<double>(sf * h);
    if (nc > 0) {
        // coarse grid ends at 2 nc h, short of n h by one interval when n is odd
        long double cv = sc * 2.0L * h;
        if (n % 2) cv += 0.5L * h * (f(n - 1) + f(n));
        q.error = static_cast<double>(std::fabs(sf * h - cv) / 15.0L);
    }
    return q;
}

// Streaming form of newton_cotes for samples produced in order by the caller.
class NewtonCotesAccumulator {
public:
    NewtonCotesAccumulator(std::size_t n, double h) : n_(n), nc_(n / 2), h_(h) {}

    void add(std::size_t j, double v) {
        fine_ += detail::newton_cotes_weight(j, n_) * static_cast<long double>(v);
        if (nc_ > 0 && j % 2 == 0 && j / 2 <= nc_) coarse_ += detail::newton_cotes_weight(j / 2, nc_) * static_cast<long double>(v);
        if (n_ % 2 && j + 1 >= n_) tail_ += 0.5L * h_ * v;
    }

    Quadrature result() const {
        Quadrature q;
        q.value = static_cast<double>(fine_ * h_);
        if (nc_ > 0) {
            long double cv = coarse_ * 2.0L * h_;
            if (n_ % 2) cv += tail_;
            q.error = static_cast<double>(std::fabs(fine_ * h_ - cv) / 15.0L);
        }
        return q;
    }

private:
    std::size_t n_, nc_;
    long double h_;
    long double fine_ = 0.0L, coarse_ = 0.0L, tail_ = 0.0L;
};

} // namespace lmlab
