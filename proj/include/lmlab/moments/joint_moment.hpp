#pragma once

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../lfunc/grid_pool.hpp"
#include "quadrature.hpp"

namespace lmlab {

struct MomentSpec {
    std::vector<LFunctionId> ids;
    std::vector<double> k;
    double T = 1e3;
    double delta = 0.0;  // 0 selects default_moment_step(T)
    Window window = SharpWindow{};

    double step() const { return delta > 0 ? delta : default_moment_step(T); }

    void validate() const {
        if (ids.empty() || ids.size() != k.size()) throw DomainError("moment spec: ids and k lengths differ");
        for (double kj : k)
            if (!(kj >= 0.0) || !std::isfinite(kj)) throw DomainError("moment spec: k must be >= 0");
        if (!(T >= 10.0)) throw DomainError("moment spec: T must be >= 10");
        if (!(step() > 0) || step() > std::numbers::pi / std::log(T))
            throw DomainError("moment spec: step exceeds pi / log T");
        for (const auto& id : ids)
            if (std::holds_alternative<Hurwitz>(id.base())) throw DomainError("moment spec: Hurwitz ids are not supported");
    }

    static MomentSpec from_components(const std::vector<Component>& comps, double T) {
        MomentSpec s;
        for (const auto& c : comps) {
            s.ids.push_back(c.id);
            s.k.push_back(c.k);
        }
        s.T = T;
        return s;
    }
};

struct MomentResult {
    double value = 0.0;
    double error = 0.0;
    double clamped_fraction = 0.0;
    std::string warning;  // set when more than 1% of the samples are clamped
    std::size_t intervals = 0;
    double step = 0.0;
    double wall_ms = 0.0;
};

inline constexpr double clamped_warning_fraction = 0.01;

namespace detail {

// Integration layout on grids anchored at t = 1: samples first..first+n with step h.
struct MomentLayout {
    std::size_t first = 0, n = 0;
    double h = 0.0;
};

inline MomentLayout moment_layout(const MomentSpec& spec) {
    MomentLayout L;
    const double d = spec.step();
    if (std::holds_alternative<SharpWindow>(spec.window)) {
        L.n = static_cast<std::size_t>(std::ceil((spec.T - 1.0) / d - 1e-9));
        if (L.n % 2) ++L.n;
        L.h = (spec.T - 1.0) / static_cast<double>(L.n);
    } else {
        const auto [a, b] = window_support(spec.window, spec.T);
        L.h = d;
        L.first = static_cast<std::size_t>(std::floor((a - 1.0) / d));
        L.n = static_cast<std::size_t>(std::ceil((b - 1.0) / d)) - L.first;
    }
    return L;
}

} // namespace detail

// Composite Newton-Cotes quadrature of prod_j exp(2 k_j log|L_j(1/2 + it)|), with
// the step-halving error estimate.
inline MomentResult joint_moment(const MomentSpec& spec, const std::vector<GridPtr>& grids, Parallelism par = {}) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto L = detail::moment_layout(spec);
    if (grids.size() != spec.ids.size()) throw DomainError("joint_moment: one grid per id required");
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const auto& g = *grids[i];
        if (g.id != spec.ids[i].canonical() || g.t0 != 1.0 || !same_step(g.delta, L.h) || g.size() <= L.first + L.n)
            throw PreconditionError("joint_moment: grid " + g.id + " does not cover the integration range");
    }
    const bool sharp = std::holds_alternative<SharpWindow>(spec.window);
    auto f = [&](std::size_t j) {
        const std::size_t idx = L.first + j;
        double e = 0.0;
        for (std::size_t i = 0; i < grids.size(); ++i)
            if (spec.k[i] != 0.0) e += 2.0 * spec.k[i] * grids[i]->values[idx];
        double v = std::exp(e);
        if (!sharp) v *= window_weight(1.0 + static_cast<double>(idx) * L.h, spec.T);
        return v;
    };
    const auto q = newton_cotes(L.n, L.h, f, par);
    std::size_t nclamped = 0;
    for (std::size_t j = 0; j <= L.n; ++j) {
        for (std::size_t i = 0; i < grids.size(); ++i) {
            if (grids[i]->clamped(L.first + j)) {
                ++nclamped;
                break;
            }
        }
    }
    MomentResult r;
    r.value = q.value;
    r.error = q.error;
    r.intervals = L.n;
    r.step = L.h;
    r.clamped_fraction = double(nclamped) / double(L.n + 1);
    if (r.clamped_fraction > clamped_warning_fraction)
        r.warning = "clamped fraction " + std::to_string(r.clamped_fraction) + " exceeds 1%";
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline MomentResult joint_moment(const MomentSpec& spec, GridPool& pool, Parallelism par = {}) {
    spec.validate();
    const auto L = detail::moment_layout(spec);
    const double t1 = 1.0 + static_cast<double>(L.first + L.n) * L.h;
    std::vector<GridPtr> grids;
    for (const auto& id : spec.ids) grids.push_back(pool.get(id, t1, L.h));
    return joint_moment(spec, grids, par);
}

} // namespace lmlab
