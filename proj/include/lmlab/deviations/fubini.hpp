#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "tail_grid.hpp"

namespace lmlab {

struct FubiniReport {
    double T = 0.0;
    std::vector<double> k;
    double v_step = 0.0;
    double lhs = 0.0;         // sample mean of prod |L_j|^{2 k_j}
    double rhs = 0.0;         // Riemann sum of the Phi integral at step v_step
    double rhs_coarse = 0.0;  // the same at step 2 v_step
    double gap = 0.0;         // |rhs - lhs| / lhs
    double discretization_error = 0.0;  // |rhs - rhs_coarse| / rhs
    std::size_t samples = 0;
    std::vector<std::size_t> clamped;
};

inline constexpr double fubini_max_discretization_error = 0.1;

namespace detail {

// Trapezoid weights at the lattice points (every `every`-th one) for
// int_{[A,B]} a e^{a W} Phi(W) dW; the cell below the lattice has Phi = 1 in this
// coordinate, so its whole weight goes to the first point.
inline std::vector<double> fubini_weights(const TailLattice& L, double a, double A, double B, std::size_t every) {
    auto E = [&](double x) { return x == -HUGE_VAL ? 0.0 : std::exp(a * x); };
    auto clip = [&](double lo, double hi) {
        lo = std::max(lo, A);
        hi = std::min(hi, B);
        return hi > lo ? E(hi) - E(lo) : 0.0;
    };
    const std::size_t m = (L.n - 1) / every + 1;
    std::vector<double> u(m, 0.0);
    u[0] = clip(-HUGE_VAL, L.W(0));
    for (std::size_t c = 0; c + 1 < m; ++c) {
        const double w = clip(L.W(c * every), L.W((c + 1) * every));
        u[c] += 0.5 * w;
        u[c + 1] += 0.5 * w;
    }
    return u;
}

// sum over lattice points (every `every`-th in each coordinate) of Phi * prod_j u_j.
inline double fubini_contract(const TailLattice& L, const std::vector<std::vector<double>>& u, std::size_t every) {
    long double total = 0.0L;
    for (std::size_t flat = 0; flat < L.cells(); ++flat) {
        if (L.count[flat] == 0) continue;
        std::size_t rem = flat;
        double w = 1.0;
        bool keep = true;
        for (std::size_t j = L.r; j-- > 0 && keep;) {
            const std::size_t i = rem % L.n;
            rem /= L.n;
            keep = i % every == 0;
            if (keep) w *= u[j][i / every];
        }
        if (keep) total += static_cast<long double>(w) * L.count[flat];
    }
    return static_cast<double>(total / static_cast<long double>(L.samples));
}

inline std::vector<double> fubini_rates(const TailGrid& tg, const std::vector<double>& k) {
    if (k.size() != tg.rank()) throw DomainError("k vector length differs from the number of L-functions");
    std::vector<double> a;
    for (double kj : k) {
        if (!(kj > 0.0)) throw DomainError("Fubini identity requires k_j > 0");
        a.push_back(2.0 * kj * tg.norm);
    }
    return a;
}

} // namespace detail

inline FubiniReport fubini_check(const TailGrid& tg, const TailLattice& L, const std::vector<double>& k) {
    const auto a = detail::fubini_rates(tg, k);
    FubiniReport r;
    r.T = tg.T;
    r.k = k;
    r.v_step = L.step;
    r.samples = tg.samples();
    r.clamped = tg.clamped;
    long double s = 0.0L;
    for (std::size_t i = 0; i < tg.samples(); ++i) {
        double e = 0.0;
        for (std::size_t j = 0; j < tg.rank(); ++j) e += a[j] * tg.z[j][i];
        s += std::exp(static_cast<long double>(e));
    }
    r.lhs = static_cast<double>(s / tg.samples());
    std::vector<std::vector<double>> fine, coarse;
    for (double aj : a) {
        fine.push_back(detail::fubini_weights(L, aj, -HUGE_VAL, HUGE_VAL, 1));
        coarse.push_back(detail::fubini_weights(L, aj, -HUGE_VAL, HUGE_VAL, 2));
    }
    r.rhs = detail::fubini_contract(L, fine, 1);
    r.rhs_coarse = detail::fubini_contract(L, coarse, 2);
    r.gap = std::fabs(r.rhs - r.lhs) / r.lhs;
    r.discretization_error = std::fabs(r.rhs - r.rhs_coarse) / r.rhs;
    if (r.discretization_error > fubini_max_discretization_error)
        throw ResolutionError("V-grid too coarse for the Fubini integral", r.discretization_error);
    return r;
}

inline FubiniReport fubini_check(const TailGrid& tg, const std::vector<double>& k, double v_step = 0.01) {
    return fubini_check(tg, tail_lattice(tg, v_step), k);
}

struct MassReport {
    std::vector<double> V;  // concentration point 2 k_j sqrt(1/2 log log T) = sqrt(2) k_j sqrt(log log T)
    double epsilon = 0.0;
    double total = 0.0;
    // per box: one of '-', '0', '+' per coordinate for (-inf, V(1-e)], (V(1-e), V(1+e)), [V(1+e), inf)
    std::map<std::string, double> fractions;
    double central = 0.0;
};

// Splits the Fubini integral over the 3^r boxes around V_j = 2 k_j sqrt(1/2 log log T).
inline MassReport mass_concentration_check(const TailGrid& tg, const TailLattice& L, const std::vector<double>& k,
                                           double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("mass concentration requires epsilon > 0");
    const auto a = detail::fubini_rates(tg, k);
    MassReport m;
    m.epsilon = epsilon;
    std::vector<std::array<std::vector<double>, 3>> u(tg.rank());
    for (std::size_t j = 0; j < tg.rank(); ++j) {
        const double V = a[j];
        m.V.push_back(V);
        const double lo = V * (1 - epsilon), hi = V * (1 + epsilon);
        u[j][0] = detail::fubini_weights(L, a[j], -HUGE_VAL, lo, 1);
        u[j][1] = detail::fubini_weights(L, a[j], lo, hi, 1);
        u[j][2] = detail::fubini_weights(L, a[j], hi, HUGE_VAL, 1);
    }
    std::size_t boxes = 1;
    for (std::size_t j = 0; j < tg.rank(); ++j) boxes *= 3;
    std::vector<double> value(boxes);
    for (std::size_t b = 0; b < boxes; ++b) {
        std::vector<std::vector<double>> w(tg.rank());
        std::size_t rem = b;
        for (std::size_t j = tg.rank(); j-- > 0;) {
            w[j] = u[j][rem % 3];
            rem /= 3;
        }
        value[b] = detail::fubini_contract(L, w, 1);
        m.total += value[b];
    }
    for (std::size_t b = 0; b < boxes; ++b) {
        std::string label(tg.rank(), '0');
        std::size_t rem = b;
        for (std::size_t j = tg.rank(); j-- > 0;) {
            label[j] = "-0+"[rem % 3];
            rem /= 3;
        }
        m.fractions[label] = value[b] / m.total;
    }
    m.central = m.fractions[std::string(tg.rank(), '0')];
    return m;
}

inline MassReport mass_concentration_check(const TailGrid& tg, const std::vector<double>& k, double epsilon,
                                           double v_step = 0.01) {
    return mass_concentration_check(tg, tail_lattice(tg, v_step), k, epsilon);
}

} // namespace lmlab
