#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "../arith/coefficients.hpp"
#include "../errors.hpp"
#include "../lfunc/evaluate.hpp"
#include "../lfunc/line_eval.hpp"

namespace lmlab {

// S_N(s) = sum_{n <= N} H(n) n^{-s} for H the coefficients of prod_j L_j^{k_j}.
class DirichletPolynomial {
public:
    DirichletPolynomial(std::vector<cplx> coef) : coef_(std::move(coef)) {
        lambda_.resize(coef_.size());
        for (std::size_t n = 1; n <= coef_.size(); ++n) lambda_[n - 1] = std::log(static_cast<long double>(n));
    }

    static DirichletPolynomial from_specs(const std::vector<double>& k, const std::vector<SatakeSpec>& specs,
                                          std::uint32_t N) {
        const auto h = bigH_stream(k, specs, N);
        return DirichletPolynomial(std::vector<cplx>(h.coefficients().begin() + 1, h.coefficients().end()));
    }

    std::size_t length() const { return coef_.size(); }
    const std::vector<cplx>& coefficients() const { return coef_; }  // entry n - 1 holds a_n

    cplx operator()(cplx s) const {
        const long double t = s.imag();
        cplx acc = 0.0;
        for (std::size_t i = 0; i < coef_.size(); ++i) {
            if (coef_[i] == 0.0) continue;
            acc += coef_[i] * std::exp(-s.real() * static_cast<double>(lambda_[i])) * detail::unit_phase(t * lambda_[i]);
        }
        return acc;
    }

    // Values at sigma + i (t0 + j delta), j < count.
    std::vector<cplx> on_line(double sigma, long double t0, long double delta, std::size_t count) const {
        std::vector<cplx> c(coef_.size());
        for (std::size_t i = 0; i < coef_.size(); ++i) c[i] = coef_[i] * std::exp(-sigma * static_cast<double>(lambda_[i]));
        std::vector<cplx> out(count, 0.0);
        detail::dirichlet_sum_grid(c, lambda_, t0, delta, count, out.data());
        return out;
    }

private:
    std::vector<cplx> coef_;
    std::vector<long double> lambda_;
};

inline std::vector<SatakeSpec> expand_specs(const std::vector<LFunctionId>& ids, const std::vector<double>& k,
                                            std::vector<double>& k_out) {
    if (ids.size() != k.size()) throw DomainError("ids and k lengths differ");
    std::vector<SatakeSpec> specs;
    k_out.clear();
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (auto& s : ids[i].satake_specs()) {
            specs.push_back(std::move(s));
            k_out.push_back(k[i]);
        }
    return specs;
}

inline cplx dirichlet_poly_SN(const std::vector<double>& k, const std::vector<SatakeSpec>& specs, std::uint32_t N,
                              cplx s) {
    return DirichletPolynomial::from_specs(k, specs, N)(s);
}

inline bool is_integer_power(double k) { return k == std::floor(k) && std::fabs(k) < 64; }

inline cplx integer_power(cplx z, int k) {
    cplx r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

inline constexpr double log_anchor_sigma = 3.0;

// log L(s, chi) continued horizontally from Re s = 3, where |log L| < 0.21 and the
// principal value is the right one.
inline cplx log_l(const DirichletCharacter& chi, cplx s, double precision = 1e-12) {
    const double t = s.imag();
    if (s.real() >= log_anchor_sigma) return std::log(dirichlet_l(s, chi, precision));
    double x = log_anchor_sigma;
    cplx prev = dirichlet_l(cplx(x, t), chi, precision);
    double arg = std::arg(prev);
    double h = 0.25;
    while (x > s.real()) {
        const double xn = std::max(s.real(), x - h);
        const cplx v = dirichlet_l(cplx(xn, t), chi, precision);
        const double d = std::arg(v / prev);
        if (std::fabs(d) > 0.5 && h > 1e-9) {
            h *= 0.5;
            continue;
        }
        arg += d;
        prev = v;
        x = xn;
        h = std::min(0.25, 2.0 * h);
    }
    return {std::log(std::abs(prev)), arg};
}

// prod_j L(s, pi_j)^{k_j}, with non-integer powers taken on the horizontal branch.
inline cplx powered_product(const std::vector<DirichletCharacter>& chars, const std::vector<double>& k, cplx s,
                            double precision = 1e-12) {
    cplx out = 1.0;
    for (std::size_t i = 0; i < chars.size(); ++i) {
        if (k[i] == 0.0) continue;
        if (is_integer_power(k[i]))
            out *= integer_power(dirichlet_l(s, chars[i], precision), static_cast<int>(k[i]));
        else
            out *= std::exp(k[i] * log_l(chars[i], s, precision));
    }
    return out;
}

// g_N(s) = prod_j L_j(s)^{k_j} - S_N(s) for degree-1 factors given by their characters.
class GTail {
public:
    GTail(std::vector<DirichletCharacter> chars, std::vector<double> k, std::uint32_t N)
        : chars_(std::move(chars)), k_(std::move(k)), S_(DirichletPolynomial::from_specs(k_, specs_of(chars_), N)) {}

    static GTail from_ids(const std::vector<LFunctionId>& ids, const std::vector<double>& k, std::uint32_t N) {
        std::vector<DirichletCharacter> chars;
        std::vector<double> kk;
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (const auto& chi : ids[i].characters()) {
                chars.push_back(chi);
                kk.push_back(k[i]);
            }
        if (chars.empty()) throw DataError("g_N needs an Euler product");
        return GTail(std::move(chars), std::move(kk), N);
    }

    cplx operator()(cplx s, double precision = 1e-12) const { return powered_product(chars_, k_, s, precision) - S_(s); }
    const DirichletPolynomial& S() const { return S_; }
    const std::vector<DirichletCharacter>& characters() const { return chars_; }
    const std::vector<double>& k() const { return k_; }

private:
    static std::vector<SatakeSpec> specs_of(const std::vector<DirichletCharacter>& chars) {
        std::vector<SatakeSpec> out;
        for (const auto& c : chars) out.push_back(satake_from_character(c));
        return out;
    }

    std::vector<DirichletCharacter> chars_;
    std::vector<double> k_;
    DirichletPolynomial S_;
};

namespace detail {

inline LFunctionId character_id(const DirichletCharacter& chi) {
    return chi.modulus() == 1 ? LFunctionId::zeta() : LFunctionId::dirichlet(chi.modulus(), chi.index());
}

inline constexpr std::size_t branch_anchor_spacing = 2048;

} // namespace detail

// prod_j L_j(sigma + i t)^{k_j} on t = t0 + j delta. Non-integer powers follow the
// argument continuously in t from horizontal-branch anchors placed every 2048 samples.
inline std::vector<cplx> powered_product_line(const std::vector<DirichletCharacter>& chars, const std::vector<double>& k,
                                              double sigma, long double t0, long double delta, std::size_t count,
                                              const LineOptions& opt = {}) {
    std::vector<cplx> out(count, 1.0);
    for (std::size_t i = 0; i < chars.size(); ++i) {
        if (k[i] == 0.0) continue;
        const auto vals = evaluate_line(detail::character_id(chars[i]), sigma, t0, delta, count, opt);
        if (is_integer_power(k[i])) {
            const int p = static_cast<int>(k[i]);
            for (std::size_t j = 0; j < count; ++j) out[j] *= integer_power(vals[j], p);
            continue;
        }
        const std::size_t nanchors = (count + detail::branch_anchor_spacing - 1) / detail::branch_anchor_spacing;
        detail::parallel_for(nanchors, opt.par, [&](std::size_t a) {
            const std::size_t j0 = a * detail::branch_anchor_spacing;
            const std::size_t j1 = std::min(count, j0 + detail::branch_anchor_spacing);
            const double t = static_cast<double>(t0 + static_cast<long double>(j0) * delta);
            double arg = log_l(chars[i], cplx(sigma, t)).imag();
            // keep the anchor's branch but the line evaluator's value
            arg += std::remainder(std::arg(vals[j0]) - arg, 2.0 * std::numbers::pi);
            for (std::size_t j = j0; j < j1; ++j) {
                if (j > j0) {
                    double d = std::arg(vals[j] / vals[j - 1]);
                    if (d < -0.5 * std::numbers::pi) d += 2.0 * std::numbers::pi;  // a zero just left of the line turns the argument by +pi
                    arg += d;
                }
                const double la = std::log(std::abs(vals[j]));
                out[j] *= std::exp(k[i] * cplx(la, arg));
            }
        });
    }
    return out;
}

} // namespace lmlab
