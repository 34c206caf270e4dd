#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "../detail/parallel.hpp"
#include "../moments/quadrature.hpp"
#include "poly_bank.hpp"

namespace lmlab {

// j == 0 marks the good set G; otherwise B_{j,l}.
struct SetLabel {
    int j = 0, l = 0;
    bool good() const { return j == 0; }
    std::string str() const { return good() ? "G" : "B_" + std::to_string(j) + "_" + std::to_string(l); }
    friend bool operator<(const SetLabel& a, const SetLabel& b) { return a.j != b.j ? a.j < b.j : a.l < b.l; }
    friend bool operator==(const SetLabel& a, const SetLabel& b) { return a.j == b.j && a.l == b.l; }
};

struct MeasureEstimate {
    std::size_t count = 0;
    double fraction = 0.0;
    double measure = 0.0;       // fraction times the length of [T, 2T]
    double ci_low = 0.0, ci_high = 0.0;  // Wilson 95% interval for the measure
};

inline MeasureEstimate wilson_measure(std::size_t hits, std::size_t n, double length) {
    MeasureEstimate m;
    m.count = hits;
    if (n == 0) return m;
    const double z = 1.959963984540054, dn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / dn;
    const double den = 1.0 + z * z / dn;
    const double centre = (p + z * z / (2.0 * dn)) / den;
    const double half = z * std::sqrt(p * (1.0 - p) / dn + z * z / (4.0 * dn * dn)) / den;
    m.fraction = p;
    m.measure = p * length;
    m.ci_low = std::min(p, std::max(0.0, centre - half)) * length;
    m.ci_high = std::max(p, std::min(1.0, centre + half)) * length;
    return m;
}

struct SetClassification {
    double T = 0.0, t0 = 0.0, delta = 0.0;
    double k_scale = 1.0;
    std::vector<SetLabel> labels;  // per sample t0 + i delta
    std::map<SetLabel, MeasureEstimate> measures;

    double t(std::size_t i) const { return t0 + static_cast<double>(i) * delta; }
    const MeasureEstimate& good() const {
        static const MeasureEstimate none{};
        auto it = measures.find(SetLabel{});
        return it == measures.end() ? none : it->second;
    }
};

// A sample is labelled G when |P_{j,T_J}| <= K_j for every j. Otherwise it gets B_{j,l} for
// the smallest j with |P_{j,T_s}| > K_j for some j <= s <= J, and l the smallest such s.
// The sets overlap as defined; G takes precedence, so the labels partition the sample.
inline SetClassification classify_sets(const PolyBank& bank, double t0, double delta, std::size_t count,
                                       double k_scale = 1.0) {
    const auto& S = bank.schedule();
    if (S.J < 1) throw DomainError("classify_sets requires a schedule with J >= 1");
    SetClassification c;
    c.T = S.T;
    c.t0 = t0;
    c.delta = delta;
    c.k_scale = k_scale;
    c.labels.assign(count, SetLabel{});
    // |P_{j, T_s}| on the sample, for 1 <= j <= s <= J
    std::vector<std::vector<std::vector<double>>> absP(S.J + 1, std::vector<std::vector<double>>(S.J + 1));
    for (int j = 1; j <= S.J; ++j)
        for (int s = j; s <= S.J; ++s) {
            const auto v = bank.P(j, S.T_at(s)).on_line(0.5, 1.0, t0, delta, count);
            auto& a = absP[j][s];
            a.resize(count);
            for (std::size_t i = 0; i < count; ++i) a[i] = std::abs(v[i]);
        }
    std::vector<double> K(S.J + 1);
    for (int j = 1; j <= S.J; ++j) K[j] = k_scale * S.K_at(j);
    for (std::size_t i = 0; i < count; ++i) {
        bool good = true;
        for (int j = 1; j <= S.J && good; ++j) good = absP[j][S.J][i] <= K[j];
        if (good) continue;
        for (int j = 1; j <= S.J; ++j) {
            int l = 0;
            for (int s = j; s <= S.J && !l; ++s)
                if (absP[j][s][i] > K[j]) l = s;
            if (l) {
                c.labels[i] = SetLabel{j, l};
                break;
            }
        }
    }
    std::map<SetLabel, std::size_t> counts;
    for (const auto& l : c.labels) ++counts[l];
    for (const auto& [l, n] : counts) c.measures[l] = wilson_measure(n, count, S.T);
    return c;
}

inline void write_labels_csv(std::ostream& os, const SetClassification& c) {
    os << "t,label\n";
    char buf[64];
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", c.t(i));
        os << buf << "," << c.labels[i].str() << "\n";
    }
}

struct GoodSetMoment {
    double T = 0.0;
    double mean = 0.0;        // (1/T) int_T^{2T} |M_{T_J}(1+2it)|^2 prod_j |N_{j,T_J}(1/2+it)|^2 dt
    double normalised = 0.0;  // mean / (log T)^{sum k^2}
    double error = 0.0;
};

inline GoodSetMoment good_set_moment(const PolyBank& bank, double delta = 0.02) {
    const auto& S = bank.schedule();
    if (S.J < 1) throw DomainError("good_set_moment requires a schedule with J >= 1");
    std::size_t n = static_cast<std::size_t>(std::ceil(S.T / delta));
    n += n % 2;
    const double h = S.T / static_cast<double>(n);
    const double x = S.T_at(S.J);
    NewtonCotesAccumulator acc(n, h);
    constexpr std::size_t block = std::size_t(1) << 20;
    for (std::size_t j0 = 0; j0 <= n; j0 += block) {
        const std::size_t m = std::min(block, n + 1 - j0);
        const long double ts = static_cast<long double>(S.T) + static_cast<long double>(j0) * h;
        auto v = bank.M(x).on_line(1.0, 2.0, ts, h, m);
        std::vector<double> f(m);
        for (std::size_t i = 0; i < m; ++i) f[i] = std::norm(v[i]);
        for (int j = 1; j <= S.J; ++j) {
            const auto w = bank.N(j, x).on_line(0.5, 1.0, ts, h, m);
            for (std::size_t i = 0; i < m; ++i) f[i] *= std::norm(w[i]);
        }
        for (std::size_t i = 0; i < m; ++i) acc.add(j0 + i, f[i]);
    }
    const auto q = acc.result();
    GoodSetMoment g;
    g.T = S.T;
    g.mean = q.value / S.T;
    g.error = q.error / S.T;
    double ksq = 0.0;
    for (double k : bank.k()) ksq += k * k;
    g.normalised = g.mean / std::pow(std::log(S.T), ksq);
    return g;
}

} // namespace lmlab
