#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "primes.hpp"
#include "satake.hpp"

namespace lmlab {

// d_k(p^l) = Gamma(k+l)/(Gamma(k) l!) via the rising product.
inline double divisor_coeff(double k, int l) {
    if (!(k > 0.0)) throw DomainError("divisor_coeff: k must be > 0");
    if (l < 0) throw DomainError("divisor_coeff: l must be >= 0");
    double r = 1.0;
    for (int i = 0; i < l; ++i) r *= (k + i) / (i + 1);
    return r;
}

namespace detail {

// Coefficients z^0..z^L of prod_j (1 - alpha_j z)^{-k}, times an existing series.
inline void multiply_local_factor(std::vector<cplx>& series, double k, const std::vector<cplx>& alphas) {
    const int L = static_cast<int>(series.size()) - 1;
    std::vector<double> d(L + 1);
    for (int l = 0; l <= L; ++l) d[l] = divisor_coeff(k, l);
    for (const auto& a : alphas) {
        std::vector<cplx> f(L + 1);
        cplx ap = 1.0;
        for (int l = 0; l <= L; ++l) {
            f[l] = d[l] * ap;
            ap *= a;
        }
        std::vector<cplx> out(L + 1, 0.0);
        for (int i = 0; i <= L; ++i) {
            if (series[i] == cplx(0.0)) continue;
            for (int j = 0; i + j <= L; ++j) out[i + j] += series[i] * f[j];
        }
        series.swap(out);
    }
}

inline void check_k_specs(const std::vector<double>& k, const std::vector<SatakeSpec>& specs) {
    if (k.size() != specs.size())
        throw DomainError("k-vector length " + std::to_string(k.size()) + " differs from spec count " +
                          std::to_string(specs.size()));
    if (k.empty()) throw DomainError("at least one (k, spec) pair is required");
    for (double ki : k)
        if (!(ki > 0.0)) throw DomainError("exponents k_j must be > 0");
}

} // namespace detail

// Local series of h_k for one spec: coefficients for l = 0..L.
inline std::vector<cplx> h_local_series(double k, const SatakeSpec& spec, std::uint64_t p, int L) {
    std::vector<cplx> s(L + 1, 0.0);
    s[0] = 1.0;
    detail::multiply_local_factor(s, k, spec.alphas(p));
    return s;
}

// h_k(p^l): sum over compositions l_1+...+l_m = l of prod_j d_k(p^{l_j}) alpha_j^{l_j}.
inline cplx h_coeff(double k, const SatakeSpec& spec, std::uint64_t p, int l) {
    if (l < 0) throw DomainError("h_coeff: l must be >= 0");
    return h_local_series(k, spec, p, l)[l];
}

// Local series of the r-fold product bold-h at p, l = 0..L.
inline std::vector<cplx> bigH_local_series(const std::vector<double>& k, const std::vector<SatakeSpec>& specs,
                                           std::uint64_t p, int L) {
    std::vector<cplx> s(L + 1, 0.0);
    s[0] = 1.0;
    for (std::size_t i = 0; i < k.size(); ++i) detail::multiply_local_factor(s, k[i], specs[i].alphas(p));
    return s;
}

// Multiplicative function on [1, N], defined by its values on prime powers.
class MultiplicativeSeries {
public:
    // rule(p, L) returns the coefficients at p^0..p^L (entry 0 must be 1).
    using Rule = std::function<std::vector<cplx>(std::uint64_t p, int L)>;

    MultiplicativeSeries(Rule rule, std::uint32_t N) : rule_(std::move(rule)), N_(N) {
        if (N < 1) throw DomainError("MultiplicativeSeries: N must be >= 1");
        c_.assign(std::size_t(N) + 1, cplx(0.0));
        c_[1] = 1.0;
        if (N < 2) return;
        const auto spf = smallest_prime_factors(N);
        for (std::uint32_t n = 2; n <= N; ++n) {
            if (spf[n] != n) continue;
            const std::uint64_t p = n;
            int L = 0;
            for (std::uint64_t q = p; q <= N; q *= p) ++L;
            const auto s = rule_(p, L);
            std::uint64_t q = p;
            for (int l = 1; l <= L; ++l, q *= p) c_[q] = s[l];
        }
        for (std::uint32_t n = 2; n <= N; ++n) {
            const std::uint32_t p = spf[n];
            if (p == n) continue;
            std::uint32_t m = n, pe = 1;
            while (m % p == 0) {
                m /= p;
                pe *= p;
            }
            if (m == 1) continue;  // prime power, already set
            c_[n] = c_[pe] * c_[m];
        }
    }

    std::uint32_t N() const { return N_; }
    cplx operator[](std::uint64_t n) const { return c_.at(n); }
    const std::vector<cplx>& coefficients() const { return c_; }
    std::vector<cplx> local(std::uint64_t p, int L) const { return rule_(p, L); }

private:
    Rule rule_;
    std::uint32_t N_;
    std::vector<cplx> c_;
};

inline MultiplicativeSeries divisor_series(double k, std::uint32_t N) {
    if (!(k > 0.0)) throw DomainError("divisor_series: k must be > 0");
    return MultiplicativeSeries(
        [k](std::uint64_t, int L) {
            std::vector<cplx> s(L + 1);
            for (int l = 0; l <= L; ++l) s[l] = divisor_coeff(k, l);
            return s;
        },
        N);
}

inline MultiplicativeSeries h_series(double k, const SatakeSpec& spec, std::uint32_t N) {
    return MultiplicativeSeries([k, spec](std::uint64_t p, int L) { return h_local_series(k, spec, p, L); }, N);
}

inline MultiplicativeSeries bigH_stream(const std::vector<double>& k, const std::vector<SatakeSpec>& specs,
                                        std::uint32_t N) {
    detail::check_k_specs(k, specs);
    return MultiplicativeSeries([k, specs](std::uint64_t p, int L) { return bigH_local_series(k, specs, p, L); },
                                N);
}

// Lambda_pi(n) = Lambda(n) sum_j alpha_j^l for n = p^l, else 0.
inline cplx lambda_pi(const SatakeSpec& spec, std::uint64_t n) {
    if (n < 2) throw DomainError("lambda_pi: n must be >= 2");
    const auto [p, l] = prime_power_split(n);
    if (l == 0) return 0.0;
    return std::log(static_cast<double>(p)) * spec.a(p, l);
}

// a_pi(n) at prime powers, 0 elsewhere (n >= 2), 1 at n = 1.
inline cplx a_pi(const SatakeSpec& spec, std::uint64_t n) {
    if (n == 1) return 1.0;
    const auto [p, l] = prime_power_split(n);
    if (l == 0) return 0.0;
    return spec.a(p, l);
}

struct SelbergSumReport {
    cplx sum;
    bool same_spec = false;
    double residual = 0.0;  // Re(sum) - log log x, when same_spec
    double x = 0.0;
};

inline SelbergSumReport selberg_sum(const SatakeSpec& s1, const SatakeSpec& s2, double x) {
    if (!(x >= 3.0)) throw DomainError("selberg_sum: x must be >= 3");
    long double re = 0.0L, im = 0.0L;
    const auto limit = static_cast<std::uint64_t>(std::floor(x)) + 1;
    for_each_prime_below(limit, [&](std::uint64_t p) {
        const cplx v = s1.a(p) * std::conj(s2.a(p)) / static_cast<double>(p);
        re += v.real();
        im += v.imag();
    });
    SelbergSumReport r;
    r.sum = cplx(static_cast<double>(re), static_cast<double>(im));
    r.x = x;
    r.same_spec = s1.label() == s2.label();
    if (r.same_spec) r.residual = r.sum.real() - std::log(std::log(x));
    return r;
}

struct PartialSumReport {
    double value = 0.0;
    double sigma = 0.5;
    std::uint32_t N = 1;
    double sum_k2 = 0.0;
    double sigma_scale = 0.0;  // (sigma - 1/2)^{-sum k^2}; 0 when sigma = 1/2
    double log_scale = 0.0;    // (log N)^{sum k^2}; 0 when N = 1
    double ratio_sigma = 0.0;  // value / sigma_scale
    double ratio_log = 0.0;    // value / log_scale
};

inline double partial_sum_sq(const MultiplicativeSeries& h, std::uint32_t N, double sigma) {
    if (sigma < 0.5) throw DomainError("partial_sum_sq: sigma must be >= 1/2");
    if (N > h.N()) throw DomainError("partial_sum_sq: series shorter than N");
    long double s = 0.0L;
    const auto& c = h.coefficients();
    if (sigma == 0.5) {
        for (std::uint32_t n = 1; n <= N; ++n) s += std::norm(c[n]) / static_cast<long double>(n);
    } else {
        for (std::uint32_t n = 1; n <= N; ++n) s += std::norm(c[n]) * std::pow(static_cast<double>(n), -2.0 * sigma);
    }
    return static_cast<double>(s);
}

inline PartialSumReport partial_sum_sq(const std::vector<double>& k, const std::vector<SatakeSpec>& specs,
                                       std::uint32_t N, double sigma) {
    if (sigma < 0.5) throw DomainError("partial_sum_sq: sigma must be >= 1/2");
    const auto h = bigH_stream(k, specs, N);
    PartialSumReport r;
    r.value = partial_sum_sq(h, N, sigma);
    r.sigma = sigma;
    r.N = N;
    for (double ki : k) r.sum_k2 += ki * ki;
    if (sigma > 0.5) {
        r.sigma_scale = std::pow(sigma - 0.5, -r.sum_k2);
        r.ratio_sigma = r.value / r.sigma_scale;
    }
    if (N > 1) {
        r.log_scale = std::pow(std::log(static_cast<double>(N)), r.sum_k2);
        r.ratio_log = r.value / r.log_scale;
    }
    return r;
}

} // namespace lmlab
