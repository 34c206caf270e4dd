#pragma once

#include <cmath>
#include <complex>

#include "../errors.hpp"

namespace lmlab {

struct TruncationResult {
    double ratio = 1.0;      // exp(2 Re D) / |S|^2, S = sum_{j <= 10V} D^j / j!
    double deviation = 0.0;  // ratio - 1, from the tail R = e^D - S so it stays accurate below 1e-16
    int terms = 0;           // number of retained powers, floor(10 V) + 1
};

inline TruncationResult truncation(std::complex<double> D, double V) {
    if (!(V >= 0.0) || !std::isfinite(V)) throw DomainError("truncation requires V >= 0");
    if (std::abs(D) > V) throw PreconditionError("truncation requires |D| <= V");
    const int m = static_cast<int>(std::floor(10.0 * V));
    // Neumaier-compensated partial sum
    std::complex<double> sum = 0.0, comp = 0.0, term = 1.0;
    auto add = [&](std::complex<double>& s, std::complex<double>& c, std::complex<double> v) {
        auto part = [](double& sv, double& cv, double x) {
            const double t = sv + x;
            cv += std::fabs(sv) >= std::fabs(x) ? (sv - t) + x : (x - t) + sv;
            sv = t;
        };
        double sr = s.real(), si = s.imag(), cr = c.real(), ci = c.imag();
        part(sr, cr, v.real());
        part(si, ci, v.imag());
        s = {sr, si};
        c = {cr, ci};
    };
    for (int j = 0; j <= m; ++j) {
        add(sum, comp, term);
        term *= D / static_cast<double>(j + 1);
    }
    const std::complex<double> S_direct = sum + comp;
    // tail R = sum_{j > m} D^j / j!; term now holds D^{m+1}/(m+1)!
    std::complex<double> R = 0.0, rc = 0.0;
    for (int j = m + 1; j < m + 400; ++j) {
        add(R, rc, term);
        if (std::abs(term) <= 1e-18 * std::abs(R)) break;
        term *= D / static_cast<double>(j + 1);
    }
    R += rc;
    const std::complex<double> E = std::exp(D);
    TruncationResult r;
    r.terms = m + 1;
    // For Re D << 0 the direct sum cancels badly; E - R does not.
    const std::complex<double> S = std::abs(R) < std::abs(E) ? E - R : S_direct;
    r.ratio = std::norm(E) / std::norm(S);
    // |E|^2 - |E - R|^2 = 2 Re(conj(E) R) - |R|^2
    r.deviation = (2.0 * (std::conj(E) * R).real() - std::norm(R)) / std::norm(S);
    return r;
}

inline double truncation_ratio(std::complex<double> D, double V) { return truncation(D, V).ratio; }

} // namespace lmlab
