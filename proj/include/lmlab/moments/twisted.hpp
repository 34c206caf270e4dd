#pragma once

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "../errors.hpp"
#include "../lfunc/line_eval.hpp"
#include "quadrature.hpp"

namespace lmlab {

struct TwistedMomentReport {
    std::uint64_t a = 1, q = 1;
    double k = 1.0, T = 0.0;
    cplx value = 0.0;
    double error = 0.0;
    double comparison = 0.0;  // |value| / (T (log T)^{k^2})
};

namespace detail {

inline constexpr std::size_t twisted_block = std::size_t(1) << 20;

// int_1^T twist(t) F(1/2 + it) conj(zeta) |zeta|^{2(k-1)} dt on the default moment step.
template <class Twist>
std::pair<cplx, double> zeta_weighted_integral(const LFunctionId& F, Twist&& twist, double k, double T,
                                               const LineOptions& lo) {
    std::size_t n = static_cast<std::size_t>(std::ceil((T - 1.0) / default_moment_step(T) - 1e-9));
    n += n % 2;
    const double h = (T - 1.0) / static_cast<double>(n);
    NewtonCotesAccumulator re(n, h), im(n, h);
    for (std::size_t j0 = 0; j0 <= n; j0 += twisted_block) {
        const std::size_t m = std::min(twisted_block, n + 1 - j0);
        const long double ts = 1.0L + static_cast<long double>(j0) * h;
        const auto z = evaluate_line(LFunctionId::zeta(), 0.5, ts, h, m, lo);
        const auto f = F == LFunctionId::zeta() ? z : evaluate_line(F, 0.5, ts, h, m, lo);
        for (std::size_t i = 0; i < m; ++i) {
            const long double t = ts + static_cast<long double>(i) * h;
            const double az = std::abs(z[i]);
            cplx v = 0.0;
            if (az > 0.0) v = twist(t) * f[i] * std::conj(z[i]) * std::exp(2.0 * (k - 1.0) * std::log(az));
            re.add(j0 + i, v.real());
            im.add(j0 + i, v.imag());
        }
    }
    const auto qr = re.result(), qi = im.result();
    return {cplx(qr.value, qi.value), std::hypot(qr.error, qi.error)};
}

} // namespace detail

// int_1^T q^{-it} zeta(1/2+it, a/q) conj(zeta(1/2+it)) |zeta(1/2+it)|^{2(k-1)} dt.
inline TwistedMomentReport twisted_hurwitz_moment(std::uint64_t a, std::uint64_t q, double k, double T,
                                                  Parallelism par = {}) {
    if (q == 0 || a == 0 || a > q || std::gcd(a, q) != 1) throw DomainError("twisted_hurwitz_moment requires gcd(a,q)=1, 1<=a<=q");
    if (!(k >= 0.5)) throw DomainError("twisted_hurwitz_moment requires k >= 1/2");
    if (!(T >= 10.0)) throw DomainError("twisted_hurwitz_moment requires T >= 10");
    LineOptions lo;
    lo.par = par;
    const auto F = q == 1 ? LFunctionId::zeta() : LFunctionId::hurwitz(a, q);
    const long double lq = std::log(static_cast<long double>(q));
    auto twist = [lq](long double t) { return detail::unit_phase(t * lq); };
    const auto [v, err] = detail::zeta_weighted_integral(F, twist, k, T, lo);
    TwistedMomentReport r;
    r.a = a;
    r.q = q;
    r.k = k;
    r.T = T;
    r.value = v;
    r.error = err;
    r.comparison = std::abs(v) / (T * std::pow(std::log(T), k * k));
    return r;
}

// Character decomposition: q^{-it} zeta(1/2+it, a/q) = sqrt(q)/phi(q) sum_chi conj(chi(a)) L(1/2+it, chi),
// so value = sum_chi weight_chi * integral_chi.
struct TwistedComponent {
    DirichletCharacter chi;
    cplx weight = 0.0;
    cplx integral = 0.0;  // int_1^T L(1/2+it, chi) conj(zeta) |zeta|^{2(k-1)} dt
    double error = 0.0;
};

inline std::vector<TwistedComponent> twisted_components(std::uint64_t a, std::uint64_t q, double k, double T,
                                                        Parallelism par = {}) {
    if (q == 0 || a == 0 || a > q || std::gcd(a, q) != 1) throw DomainError("twisted_components requires gcd(a,q)=1");
    LineOptions lo;
    lo.par = par;
    std::vector<TwistedComponent> out;
    const double phi = static_cast<double>(euler_phi(q));
    for (const auto& chi : character_group(q)) {
        TwistedComponent c;
        c.chi = chi;
        c.weight = std::sqrt(static_cast<double>(q)) / phi * std::conj(chi(a));
        const auto id = q == 1 ? LFunctionId::zeta() : LFunctionId::dirichlet(q, chi.index());
        const auto [v, err] = detail::zeta_weighted_integral(id, [](long double) { return cplx(1.0); }, k, T, lo);
        c.integral = v;
        c.error = err;
        out.push_back(c);
    }
    return out;
}

} // namespace lmlab
