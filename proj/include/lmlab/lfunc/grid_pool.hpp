#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "grid.hpp"

namespace lmlab {

using GridPtr = std::shared_ptr<const CriticalLineGrid>;

// Supplies a grid starting at t = 1 with the given step and extending at least to t1.
using GridProvider = std::function<GridPtr(const LFunctionId&, double t1, double delta)>;

inline bool same_step(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(a, b); }

// In-memory grids anchored at t = 1. A request is served by any stored grid with the
// same step that reaches t1; Dedekind products are summed from their degree-1 factors.
class GridPool {
public:
    explicit GridPool(GridOptions opt = {}) : opt_(opt) {}

    // Hook for an external store (the CLI's disk cache); called for degree-1 factors.
    std::function<GridPtr(const LFunctionId&, double t1, double delta)> compute;

    GridPtr get(const LFunctionId& id, double t1, double delta) {
        if (auto g = find(id.canonical(), t1, delta)) return g;
        const auto factors = factor_ids(id);
        GridPtr out;
        if (factors.size() == 1 && factors[0] == id) {
            out = compute ? compute(id, t1, delta) : std::make_shared<const CriticalLineGrid>(log_abs_grid(id, 1.0, t1, delta, opt_));
        } else {
            auto g = std::make_shared<CriticalLineGrid>();
            g->id = id.canonical();
            g->t0 = 1.0;
            g->t1 = t1;
            g->delta = delta;
            g->clamp_floor = opt_.clamp_floor;
            g->precision = opt_.precision;
            g->values.assign(grid_length(1.0, t1, delta), 0.0);
            for (const auto& f : factors) {
                const auto part = get(f, t1, delta);
                for (std::size_t j = 0; j < g->values.size(); ++j) g->values[j] += part->values[j];
            }
            for (double& v : g->values) {
                if (v <= g->clamp_floor) {
                    v = g->clamp_floor;
                    ++g->clamped_count;
                }
            }
            out = g;
        }
        std::lock_guard lock(mu_);
        auto& slot = grids_[id.canonical()];
        std::erase_if(slot, [&](const GridPtr& g) { return same_step(g->delta, delta) && g->t1 <= out->t1; });
        slot.push_back(out);
        return out;
    }

    GridPtr operator()(const LFunctionId& id, double t1, double delta) { return get(id, t1, delta); }

    GridProvider provider() {
        return [this](const LFunctionId& id, double t1, double delta) { return get(id, t1, delta); };
    }

    const GridOptions& options() const { return opt_; }
    void clear() {
        std::lock_guard lock(mu_);
        grids_.clear();
    }

private:
    GridPtr find(const std::string& key, double t1, double delta) {
        std::lock_guard lock(mu_);
        auto it = grids_.find(key);
        if (it == grids_.end()) return nullptr;
        for (const auto& g : it->second)
            if (g->t0 == 1.0 && same_step(g->delta, delta) && g->t(g->size() - 1) >= t1 - 0.5 * delta) return g;
        return nullptr;
    }

    GridOptions opt_;
    std::mutex mu_;
    std::map<std::string, std::vector<GridPtr>> grids_;
};

} // namespace lmlab
