#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "../arith/characters.hpp"
#include "euler_maclaurin.hpp"

namespace lmlab::detail {

// out[j] += sum_n z_n r_n^j for j < count (z is advanced in place).
inline void rotate_accumulate(double* zr, double* zi, const double* rr, const double* ri, std::size_t K,
                              std::size_t count, cplx* out) {
    for (std::size_t j = 0; j < count; ++j) {
        double sr = 0.0, si = 0.0;
#pragma omp simd reduction(+ : sr, si)
        for (std::size_t k = 0; k < K; ++k) {
            sr += zr[k];
            si += zi[k];
            const double a = zr[k] * rr[k] - zi[k] * ri[k];
            const double b = zr[k] * ri[k] + zi[k] * rr[k];
            zr[k] = a;
            zi[k] = b;
        }
        out[j] += cplx(sr, si);
    }
}

inline constexpr std::size_t tile_points = 256;

// out[j] += sum_n coef_n e^{-i (t_start + j delta) lambda_n}, direct summation
// re-seeded every tile_points outputs.
inline void dirichlet_sum_direct(const std::vector<cplx>& coef, const std::vector<long double>& lambda,
                                 long double t_start, long double delta, std::size_t count, cplx* out) {
    const std::size_t K = coef.size();
    std::vector<double> zr(K), zi(K), rr(K), ri(K);
    for (std::size_t k = 0; k < K; ++k) {
        const cplx r = unit_phase(delta * lambda[k]);
        rr[k] = r.real();
        ri[k] = r.imag();
    }
    for (std::size_t j0 = 0; j0 < count; j0 += tile_points) {
        const std::size_t n = std::min(tile_points, count - j0);
        const long double t = t_start + static_cast<long double>(j0) * delta;
        for (std::size_t k = 0; k < K; ++k) {
            const cplx z = coef[k] * unit_phase(t * lambda[k]);
            zr[k] = z.real();
            zi[k] = z.imag();
        }
        rotate_accumulate(zr.data(), zi.data(), rr.data(), ri.data(), K, n, out + j0);
    }
}

// Exponential-of-semicircle spreading kernel, width w grid cells, upsampling 2.
struct NufftKernel {
    static constexpr int width = 16;
    static constexpr double beta = 2.30 * width;
    static double psi(double z) { return std::exp(beta * (std::sqrt(std::max(0.0, 1.0 - z * z)) - 1.0)); }
};

inline std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : size(n), data(fftw_alloc_complex(n)) {}
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    std::size_t size;
    fftw_complex* data;
};

// In-place forward plan of size G, created once under the planner lock.
inline fftw_plan forward_plan(std::size_t G) {
    static std::map<std::size_t, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(fftw_mutex());
    auto it = plans.find(G);
    if (it != plans.end()) return it->second;
    FftwBuffer scratch(G);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(G), scratch.data, scratch.data, FFTW_FORWARD, FFTW_ESTIMATE);
    plans[G] = p;
    return p;
}

inline std::vector<double> gauss_legendre_nodes(int n, std::vector<double>& weights) {
    std::vector<double> x(n);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return x;
}

// h / phi_hat(k) for k = -P/2 .. P/2-1 (index k + P/2), grid G = 2P.
inline const std::vector<double>& deconvolution_factors(std::size_t P) {
    static std::map<std::size_t, std::vector<double>> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(P);
    if (it != cache.end()) return it->second;
    const std::size_t G = 2 * P;
    const double h = 2.0 * M_PI / static_cast<double>(G);
    const double alpha = NufftKernel::width * h / 2.0;
    std::vector<double> w;
    const auto z = gauss_legendre_nodes(120, w);
    std::vector<double> psi(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) psi[i] = NufftKernel::psi(z[i]);
    std::vector<double> f(P);
    for (std::size_t i = 0; i < P; ++i) {
        const double k = static_cast<double>(i) - static_cast<double>(P / 2);
        double s = 0.0;
        for (std::size_t q = 0; q < z.size(); ++q) s += w[q] * psi[q] * std::cos(k * alpha * z[q]);
        f[i] = h / (alpha * s);
    }
    return cache.emplace(P, std::move(f)).first->second;
}

// Type-1 nonuniform FFT form of dirichlet_sum_direct. Phases are referenced
// to the chunk centre so the double-precision frequencies x_n only multiply
// |k| <= P/2.
inline void dirichlet_sum_nufft(const std::vector<cplx>& coef, const std::vector<long double>& lambda,
                                long double t_start, long double delta, std::size_t count, cplx* out) {
    std::size_t P = 64;
    while (P < count) P *= 2;
    const std::size_t G = 2 * P;
    const int w = NufftKernel::width;
    const double h = 2.0 * M_PI / static_cast<double>(G);
    const long double t_c = t_start + static_cast<long double>(P / 2) * delta;

    FftwBuffer grid(G);
    for (std::size_t l = 0; l < G; ++l) grid.data[l][0] = grid.data[l][1] = 0.0;
    const double inv_h = 1.0 / h;
    const double zscale = 2.0 / w;
    double kernel[NufftKernel::width];
    for (std::size_t n = 0; n < coef.size(); ++n) {
        const double x = static_cast<double>(std::fmod(delta * lambda[n], two_pi_ld));
        const cplx c = coef[n] * unit_phase(t_c * lambda[n]);
        const double u = x * inv_h;
        const long l0 = static_cast<long>(std::ceil(u - 0.5 * w));
        for (int i = 0; i < w; ++i) kernel[i] = NufftKernel::psi((static_cast<double>(l0 + i) - u) * zscale);
        const long G_l = static_cast<long>(G);
        long idx = ((l0 % G_l) + G_l) % G_l;
        for (int i = 0; i < w; ++i) {
            grid.data[idx][0] += c.real() * kernel[i];
            grid.data[idx][1] += c.imag() * kernel[i];
            if (++idx == G_l) idx = 0;
        }
    }
    fftw_execute_dft(forward_plan(G), grid.data, grid.data);
    const auto& deconv = deconvolution_factors(P);
    for (std::size_t j = 0; j < count; ++j) {
        const long k = static_cast<long>(j) - static_cast<long>(P / 2);
        const std::size_t idx = static_cast<std::size_t>((k + static_cast<long>(G)) % static_cast<long>(G));
        out[j] += deconv[j] * cplx(grid.data[idx][0], grid.data[idx][1]);
    }
}

inline void dirichlet_sum_grid(const std::vector<cplx>& coef, const std::vector<long double>& lambda,
                               long double t_start, long double delta, std::size_t count, cplx* out) {
    if (coef.empty() || count == 0) return;
    std::size_t P = 64;
    while (P < count) P *= 2;
    const double K = static_cast<double>(coef.size());
    const double direct = K * static_cast<double>(count) + 60.0 * K * std::ceil(count / double(tile_points));
    const double nufft = K * (4.0 * NufftKernel::width + 60.0) + 10.0 * 2.0 * P * std::log2(2.0 * P);
    if (direct <= nufft)
        dirichlet_sum_direct(coef, lambda, t_start, delta, count, out);
    else
        dirichlet_sum_nufft(coef, lambda, t_start, delta, count, out);
}

} // namespace lmlab::detail
