#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "../detail/parallel.hpp"
#include "../errors.hpp"
#include "../lfunc/grid.hpp"

namespace lmlab {

inline constexpr std::size_t tail_chunk = std::size_t(1) << 18;

// sqrt(1/2 log log T)
inline double tail_normalization(double T) {
    if (!(T > std::exp(1.0))) throw DomainError("normalization sqrt(log log T / 2) requires T > e");
    return std::sqrt(0.5 * std::log(std::log(T)));
}

// Normalized log-values of r L-functions on a common t-sample.
struct TailGrid {
    std::vector<std::string> ids;
    double T = 0.0;
    bool dyadic = false;  // sample over [T, 2T] instead of [1, T]
    double norm = 1.0;
    double t0 = 0.0, delta = 0.0;
    std::vector<std::vector<double>> z;  // z[j][i] = log|L_j(1/2 + i t_i)| / norm
    std::vector<std::size_t> clamped;    // per L-function

    std::size_t rank() const { return z.size(); }
    std::size_t samples() const { return z.empty() ? 0 : z[0].size(); }
};

struct TailOptions {
    bool dyadic = false;
    Parallelism par{};
};

// From raw log|L| rows; used directly for synthetic inputs.
inline TailGrid tail_grid_from_values(std::vector<std::vector<double>> log_values, double T,
                                      std::vector<std::string> ids = {}) {
    if (log_values.empty()) throw DomainError("tail grid needs at least one L-function");
    for (const auto& row : log_values)
        if (row.size() != log_values[0].size()) throw DomainError("tail grid rows differ in length");
    TailGrid tg;
    tg.T = T;
    tg.norm = tail_normalization(T);
    tg.ids = ids.empty() ? std::vector<std::string>(log_values.size()) : std::move(ids);
    if (tg.ids.size() != log_values.size()) throw DomainError("tail grid ids and rows differ in count");
    tg.clamped.assign(log_values.size(), 0);
    const double inv = 1.0 / tg.norm;
    for (auto& row : log_values)
        for (double& v : row) v *= inv;
    tg.z = std::move(log_values);
    return tg;
}

// Restricts each grid to [1, T] (or [T, 2T]) and normalizes. The grids must share t0 and step.
inline TailGrid make_tail_grid(const std::vector<const CriticalLineGrid*>& grids, double T,
                               const TailOptions& opt = {}) {
    if (grids.empty()) throw DomainError("tail grid needs at least one L-function");
    const double a = opt.dyadic ? T : 1.0, b = opt.dyadic ? 2.0 * T : T;
    std::vector<CriticalLineGrid> parts;
    for (const auto* g : grids) {
        if (std::fabs(g->delta - grids[0]->delta) > 1e-12 * g->delta ||
            std::fabs(g->t0 - grids[0]->t0) > 1e-9 * std::max(1.0, g->t0))
            throw DomainError("tail grid inputs must share t0 and step");
        if (g->t0 > a + g->delta || g->t1 < b - g->delta)
            throw DomainError("grid " + g->id + " does not cover the sample range");
        parts.push_back(restrict_to(*g, a, b));
    }
    std::vector<std::vector<double>> rows;
    std::vector<std::string> ids;
    for (auto& p : parts) {
        ids.push_back(p.id);
        rows.push_back(std::move(p.values));
    }
    TailGrid tg = tail_grid_from_values(std::move(rows), T, std::move(ids));
    tg.dyadic = opt.dyadic;
    tg.t0 = parts[0].t0;
    tg.delta = parts[0].delta;
    for (std::size_t j = 0; j < parts.size(); ++j) tg.clamped[j] = parts[j].clamped_count;
    return tg;
}

// Number of samples with z_j >= V_j for every j; V_j = -inf drops coordinate j.
inline std::size_t tail_count(const TailGrid& tg, const std::vector<double>& V, Parallelism par = {}) {
    if (V.size() != tg.rank()) throw DomainError("threshold vector length differs from the number of L-functions");
    const std::size_t n = tg.samples();
    const std::size_t nchunks = (n + tail_chunk - 1) / tail_chunk;
    std::vector<std::size_t> part(nchunks, 0);
    detail::parallel_for(nchunks, par, [&](std::size_t c) {
        const std::size_t i0 = c * tail_chunk, i1 = std::min(n, i0 + tail_chunk);
        std::size_t hits = 0;
        for (std::size_t i = i0; i < i1; ++i) {
            bool in = true;
            for (std::size_t j = 0; j < V.size() && in; ++j) in = tg.z[j][i] >= V[j];
            hits += in;
        }
        part[c] = hits;
    });
    std::size_t total = 0;
    for (auto h : part) total += h;
    return total;
}

inline double empirical_phi(const TailGrid& tg, const std::vector<double>& V, Parallelism par = {}) {
    if (tg.samples() == 0) throw StatisticsError("empty tail grid");
    return static_cast<double>(tail_count(tg, V, par)) / static_cast<double>(tg.samples());
}

inline double gaussian_tail(double V) { return 0.5 * std::erfc(V / std::sqrt(2.0)); }

// Cumulative counts on the lattice W_i = lo + i step (i < n) in every coordinate:
// count(i_1..i_r) = #{samples : z_j >= W_{i_j} for all j}. lo sits at or below every
// sample and W_{n-1} above every sample; n is odd so the even sublattice has the same span.
struct TailLattice {
    double lo = 0.0, step = 0.0;
    std::size_t n = 0;
    std::size_t r = 0;
    std::size_t samples = 0;
    std::vector<std::uint32_t> count;  // row-major, last coordinate fastest

    double W(std::size_t i) const { return lo + static_cast<double>(i) * step; }
    std::size_t cells() const { return count.size(); }
    double phi(std::size_t flat) const { return static_cast<double>(count[flat]) / static_cast<double>(samples); }
};

inline constexpr std::size_t lattice_cell_budget = std::size_t(1) << 27;

inline TailLattice tail_lattice(const TailGrid& tg, double step) {
    if (!(step > 0)) throw DomainError("lattice step must be > 0");
    if (tg.samples() == 0) throw StatisticsError("empty tail grid");
    if (tg.samples() > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("too many samples", 4.29e9, double(tg.samples()));
    double zmin = HUGE_VAL, zmax = -HUGE_VAL;
    for (const auto& row : tg.z)
        for (double v : row) {
            zmin = std::min(zmin, v);
            zmax = std::max(zmax, v);
        }
    TailLattice L;
    L.step = step;
    L.r = tg.rank();
    L.samples = tg.samples();
    L.lo = std::floor(zmin / step) * step;
    while (L.lo > zmin) L.lo -= step;
    L.n = static_cast<std::size_t>(std::floor((zmax - L.lo) / step)) + 2;
    while (L.W(L.n - 1) <= zmax) ++L.n;
    if (L.n % 2 == 0) ++L.n;
    const double cells = std::pow(static_cast<double>(L.n), static_cast<double>(L.r));
    if (cells > static_cast<double>(lattice_cell_budget))
        throw ResourceError("tail lattice exceeds the cell budget", double(lattice_cell_budget), cells);
    L.count.assign(static_cast<std::size_t>(cells), 0);
    // histogram of the largest lattice index below each sample
    for (std::size_t i = 0; i < L.samples; ++i) {
        std::size_t flat = 0;
        for (std::size_t j = 0; j < L.r; ++j) {
            const double v = tg.z[j][i];
            auto b = static_cast<std::size_t>(std::max(0.0, std::floor((v - L.lo) / step)));
            b = std::min(b, L.n - 1);
            while (b + 1 < L.n && L.W(b + 1) <= v) ++b;
            while (b > 0 && L.W(b) > v) --b;
            flat = flat * L.n + b;
        }
        ++L.count[flat];
    }
    // suffix sums along each coordinate
    std::size_t stride = 1;
    for (std::size_t d = 0; d < L.r; ++d) {
        const std::size_t block = stride * L.n;
        for (std::size_t base = 0; base < L.count.size(); base += block)
            for (std::size_t off = 0; off < stride; ++off)
                for (std::size_t i = L.n - 1; i-- > 0;)
                    L.count[base + off + i * stride] += L.count[base + off + (i + 1) * stride];
        stride = block;
    }
    return L;
}

// CSV columns V_1..V_r, phi, count; every `stride`-th lattice point per coordinate.
inline void write_tail_csv(std::ostream& os, const TailLattice& L, std::size_t stride = 1) {
    if (stride == 0) throw DomainError("stride must be >= 1");
    for (std::size_t j = 0; j < L.r; ++j) os << "V_" << j + 1 << ",";
    os << "phi,count\n";
    std::vector<std::size_t> idx(L.r, 0);
    char buf[64];
    for (std::size_t flat = 0; flat < L.cells(); ++flat) {
        std::size_t rem = flat;
        bool keep = true;
        for (std::size_t j = L.r; j-- > 0;) {
            idx[j] = rem % L.n;
            rem /= L.n;
            keep = keep && idx[j] % stride == 0;
        }
        if (!keep) continue;
        for (std::size_t j = 0; j < L.r; ++j) {
            std::snprintf(buf, sizeof buf, "%.10g,", L.W(idx[j]));
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g,", L.phi(flat));
        os << buf << L.count[flat] << "\n";
    }
}

} // namespace lmlab
