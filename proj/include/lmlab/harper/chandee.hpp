#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "../arith/primes.hpp"
#include "../errors.hpp"
#include "../lfunc/grid.hpp"
#include "poly_bank.hpp"

namespace lmlab {

struct ChandeeReport {
    double T = 0.0, x = 0.0;
    std::size_t samples = 0;
    double additive_term = 0.0;  // m log T / log x summed with weights k
    double min_slack = 0.0, mean_slack = 0.0, max_slack = 0.0;
    double q01 = 0.0, q05 = 0.0, q50 = 0.0, q95 = 0.0;
    double C_emp = 0.0;  // -min slack
    // measure of t with |sum_{(log T)^{5(sum k^2 + 1)} < p <= x} Lambda_x(p^2) p^{-1-2it}| > sum k m
    double E_x_measure = 0.0;
    bool E_x_range_empty = true;
};

inline double chandee_additive_term(double m, double T, double x) { return m * std::log(T) / std::log(x); }

// The smallest admissible x = T^{0.1}, raised to e^2 where T^{0.1} < e^2.
inline double chandee_default_x(double T) { return std::max(std::exp(2.0), std::pow(T, 0.1)); }

// slack(t) = Re sum_{n <= x, n = p, p^2} (sum k Lambda)(n) / (n^{1/2 + 1/log x + it} log n) log(x/n)/log x
//            + (sum k m) log T / log x - (sum k) log|L(1/2 + it)|
// over the grid samples, with T = grid.t0. The grid holds log|L| of the product whose
// degree-1 factors carry the specs; each factor is weighted by k.
inline ChandeeReport chandee_audit(const std::vector<SatakeSpec>& specs, double k, double x, const CriticalLineGrid& g) {
    if (specs.empty()) throw DomainError("chandee_audit needs at least one spec");
    const double T = g.t0;
    if (!(T > 1.0)) throw DomainError("chandee_audit needs a grid starting above t = 1");
    if (!(x >= std::exp(2.0) * (1 - 1e-15) && x <= T * T)) throw DomainError("chandee_audit requires e^2 <= x <= T^2");
    const std::vector<double> kk(specs.size(), k);
    const double lx = std::log(x);
    double m = 0.0;
    for (const auto& s : specs) m += k * s.degree();

    // n = p and n = p^2 up to x
    PolyTable poly;
    for (auto p : primes_below(static_cast<std::uint64_t>(std::floor(x)) + 1)) {
        for (std::uint64_t n = p; static_cast<double>(n) <= x; n *= p) {
            if (n != p && n != p * p) break;
            const double dn = static_cast<double>(n);
            const cplx c = detail::weighted_lambda(n, kk, specs) / std::log(dn) * (std::log(x / dn) / lx) *
                           std::pow(dn, -1.0 / lx);
            poly.coef.push_back(c);
            poly.log_n.push_back(std::log(static_cast<long double>(n)));
        }
    }
    ChandeeReport r;
    r.T = T;
    r.x = x;
    r.additive_term = m * std::log(T) / lx;
    const auto vals = poly.on_line(0.5, 1.0, g.t0, g.delta, g.size());
    std::vector<double> slack(g.size());
    long double sum = 0.0L;
    for (std::size_t j = 0; j < g.size(); ++j) {
        slack[j] = vals[j].real() + r.additive_term - k * g.values[j];
        sum += slack[j];
    }
    r.samples = g.size();
    r.mean_slack = static_cast<double>(sum / static_cast<long double>(g.size()));
    std::vector<double> sorted = slack;
    std::sort(sorted.begin(), sorted.end());
    auto q = [&](double f) { return sorted[static_cast<std::size_t>(std::floor(f * double(sorted.size() - 1)))]; };
    r.min_slack = sorted.front();
    r.max_slack = sorted.back();
    r.q01 = q(0.01);
    r.q05 = q(0.05);
    r.q50 = q(0.5);
    r.q95 = q(0.95);
    r.C_emp = -r.min_slack;

    // E_x diagnostic
    double ksq = 0.0;
    for (std::size_t i = 0; i < specs.size(); ++i) ksq += k * k;
    const double lo = std::pow(std::log(T), 5.0 * (ksq + 1.0));
    PolyTable sq;
    if (lo < x) {
        for (auto p : primes_below(static_cast<std::uint64_t>(std::floor(std::sqrt(x))) + 1)) {
            if (static_cast<double>(p) <= lo) continue;
            const std::uint64_t n = p * p;
            sq.coef.push_back(detail::smoothed_lambda_or_zero(x, n, kk, specs) / static_cast<double>(p));
            sq.log_n.push_back(std::log(static_cast<long double>(p)));
        }
    }
    r.E_x_range_empty = sq.support() == 0;
    if (!r.E_x_range_empty) {
        const auto e = sq.on_line(0.0, 2.0, g.t0, g.delta, g.size());
        std::size_t hits = 0;
        for (const auto& v : e) hits += std::abs(v) > m;
        r.E_x_measure = double(hits) / double(g.size()) * (g.t1 - g.t0);
    }
    return r;
}

} // namespace lmlab
