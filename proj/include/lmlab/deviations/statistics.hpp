#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../detail/parallel.hpp"
#include "../errors.hpp"
#include "../lfunc/grid.hpp"
#include "tail_grid.hpp"

namespace lmlab {

inline constexpr std::size_t clt_min_samples = 10000;

struct CLTReport {
    double T = 0.0;
    double norm = 1.0;               // sqrt(1/2 log log T)
    double mean = 0.0;               // of log|L| / norm
    double variance = 0.0;           // of log|L|, unnormalized
    double normalized_variance = 0.0;
    double ks = 0.0;                 // sup |F_emp - Phi_normal| on the normalized values
    std::size_t samples = 0;
    std::size_t clamped = 0;
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Mean, variance and Kolmogorov-Smirnov distance of log_values / sqrt(1/2 log log T).
inline CLTReport selberg_clt_test(std::span<const double> log_values, double T, Parallelism par = {}) {
    if (log_values.size() < clt_min_samples)
        throw StatisticsError("CLT test needs at least " + std::to_string(clt_min_samples) + " samples, got " +
                              std::to_string(log_values.size()));
    CLTReport r;
    r.T = T;
    r.norm = tail_normalization(T);
    r.samples = log_values.size();
    const std::size_t n = log_values.size();
    const std::size_t nchunks = (n + tail_chunk - 1) / tail_chunk;
    std::vector<long double> s1(nchunks), s2(nchunks);
    detail::parallel_for(nchunks, par, [&](std::size_t c) {
        long double a = 0, b = 0;
        for (std::size_t i = c * tail_chunk; i < std::min(n, (c + 1) * tail_chunk); ++i) {
            a += log_values[i];
            b += static_cast<long double>(log_values[i]) * log_values[i];
        }
        s1[c] = a;
        s2[c] = b;
    });
    long double a = 0, b = 0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        a += s1[c];
        b += s2[c];
    }
    const long double mu = a / n;
    r.mean = static_cast<double>(mu) / r.norm;
    r.variance = static_cast<double>((b - a * mu) / (n - 1));
    r.normalized_variance = r.variance / (r.norm * r.norm);
    std::vector<double> z(log_values.begin(), log_values.end());
    std::sort(z.begin(), z.end());
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double F = normal_cdf(z[i] / r.norm);
        d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
    }
    r.ks = std::min(1.0, d);
    return r;
}

// Grid overload; the normalization uses T, by default the left end of the grid.
inline CLTReport selberg_clt_test(const CriticalLineGrid& grid, double T = 0.0, Parallelism par = {}) {
    auto r = selberg_clt_test(std::span<const double>(grid.values), T > 0 ? T : grid.t0, par);
    r.clamped = grid.clamped_count;
    return r;
}

inline nlohmann::ordered_json to_json(const CLTReport& r) {
    nlohmann::ordered_json j;
    j["T"] = r.T;
    j["normalization"] = r.norm;
    j["mean"] = r.mean;
    j["variance"] = r.variance;
    j["normalized_variance"] = r.normalized_variance;
    j["ks"] = r.ks;
    j["samples"] = r.samples;
    j["clamped"] = r.clamped;
    return j;
}

namespace detail {

inline std::string format_cell(const std::vector<double>& V) {
    std::ostringstream os;
    os << "(";
    for (std::size_t j = 0; j < V.size(); ++j) os << (j ? ", " : "") << V[j];
    os << ")";
    return os.str();
}

} // namespace detail

// log[ Phi(V) / prod_j Phi_j(V_j) ], with Phi_j the marginal tail of coordinate j.
inline double joint_tail_ratio(const TailGrid& tg, const std::vector<double>& V, Parallelism par = {}) {
    const std::size_t joint = tail_count(tg, V, par);
    if (joint == 0) throw StatisticsError("empty joint tail at V = " + detail::format_cell(V));
    if (tg.rank() == 1) return 0.0;
    const double n = static_cast<double>(tg.samples());
    double log_ratio = std::log(static_cast<double>(joint) / n);
    for (std::size_t j = 0; j < tg.rank(); ++j) {
        std::vector<double> m(V.size(), -HUGE_VAL);
        m[j] = V[j];
        const std::size_t c = tail_count(tg, m, par);
        if (c == 0)
            throw StatisticsError("empty marginal tail for coordinate " + std::to_string(j + 1) + " at V = " +
                                  detail::format_cell(V));
        log_ratio -= std::log(static_cast<double>(c) / n);
    }
    return log_ratio;
}

struct LdpRow {
    double T = 0.0;
    std::vector<double> V;  // c_j sqrt(log log T)
    std::size_t count = 0;
    double log_phi = 0.0;
    double gaussian_exponent = 0.0;  // -sum V_j^2 / 2
    double ratio = 0.0;              // log_phi / gaussian_exponent; NaN when guarded
    bool guarded = false;
};

// Below this |sum V^2 / 2| the ratio is 0/0 and only the raw pair is reported.
inline constexpr double ldp_guard = 1e-3;

inline LdpRow large_deviation_profile(const TailGrid& tg, const std::vector<double>& c, Parallelism par = {}) {
    if (c.size() != tg.rank()) throw DomainError("c vector length differs from the number of L-functions");
    LdpRow row;
    row.T = tg.T;
    const double s = std::sqrt(std::log(std::log(tg.T)));
    double q = 0.0;
    for (double cj : c) {
        if (!(cj >= 0.0)) throw DomainError("large deviation profile requires c_j >= 0");
        row.V.push_back(cj * s);
        q += cj * s * cj * s;
    }
    row.count = tail_count(tg, row.V, par);
    if (row.count == 0) throw StatisticsError("empty tail cell at V = " + detail::format_cell(row.V));
    row.log_phi = std::log(static_cast<double>(row.count) / static_cast<double>(tg.samples()));
    row.gaussian_exponent = -0.5 * q;
    row.guarded = 0.5 * q < ldp_guard;
    row.ratio = row.guarded ? std::nan("") : row.log_phi / row.gaussian_exponent;
    return row;
}

inline std::vector<LdpRow> large_deviation_profile(const std::vector<const TailGrid*>& grids,
                                                   const std::vector<double>& c, Parallelism par = {}) {
    std::vector<LdpRow> out;
    for (const auto* tg : grids) out.push_back(large_deviation_profile(*tg, c, par));
    return out;
}

} // namespace lmlab
