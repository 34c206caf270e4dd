#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "../arith/satake.hpp"
#include "../errors.hpp"

namespace lmlab {

struct HarperSchedule {
    double T = 0.0;
    double k_hat = 0.0;
    double beta = 0.01, epsilon = 0.2;
    int J = 0;
    std::vector<double> theta;  // theta[j - 1] = theta_j, j = 1..J
    std::vector<double> Tj;     // Tj[j] = T_j, j = 0..J (T_0 = 1)
    std::vector<double> Kj;     // Kj[j - 1] = K_j

    double theta_at(int j) const { return theta.at(static_cast<std::size_t>(j - 1)); }
    double T_at(int j) const { return Tj.at(static_cast<std::size_t>(j)); }
    double K_at(int j) const { return Kj.at(static_cast<std::size_t>(j - 1)); }

    // log of the largest index in prod_j N_j: sum_j 10 K_j theta_j log T.
    double n_product_log_length() const {
        double s = 0.0;
        for (int j = 1; j <= J; ++j) s += 10.0 * K_at(j) * theta_at(j) * std::log(T);
        return s;
    }
    // Whether that product stays below T^{6/10}, the length used for the coprime mean value step.
    bool n_product_within_six_tenths() const { return n_product_log_length() <= 0.6 * std::log(T); }
};

inline double k_hat(const std::vector<double>& k, const std::vector<SatakeSpec>& specs) {
    if (k.size() != specs.size() || k.empty()) throw DomainError("k and specs lengths differ");
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        a += specs[i].degree() * k[i];
        b += k[i] * k[i];
    }
    return std::max(a, b);
}

namespace detail {

inline HarperSchedule fill_schedule(double T, double kh, double beta, double epsilon) {
    HarperSchedule s;
    s.T = T;
    s.k_hat = kh;
    s.beta = beta;
    s.epsilon = epsilon;
    s.Tj.push_back(1.0);
    for (int j = 1;; ++j) {
        const double th = beta * std::exp(static_cast<double>(j - 1));
        if (!(th <= epsilon)) break;
        s.theta.push_back(th);
        s.Tj.push_back(std::pow(T, th));
        s.Kj.push_back(std::sqrt(kh) * std::pow(th, -0.75));
        s.J = j;
    }
    return s;
}

} // namespace detail

// theta_j = beta e^{j-1}, T_j = T^{theta_j}, K_j = k_hat^{1/2} theta_j^{-3/4}, J = max{j : theta_j <= epsilon}.
inline HarperSchedule build_schedule(double T, const std::vector<double>& k, const std::vector<SatakeSpec>& specs,
                                     double beta = 0.01, double epsilon = 0.2) {
    if (!(T >= 100.0)) throw DomainError("build_schedule requires T >= 100");
    if (!(beta > 0 && beta < epsilon && epsilon < 1)) throw DomainError("build_schedule requires 0 < beta < epsilon < 1");
    return detail::fill_schedule(T, k_hat(k, specs), beta, epsilon);
}

// beta = 1/(log log T)^2 and epsilon = e^{-1000 k_hat}. J >= 1 needs log log T >= e^{500 k_hat}.
inline HarperSchedule asymptotic_schedule(double T, const std::vector<double>& k, const std::vector<SatakeSpec>& specs) {
    if (!(T >= 100.0)) throw DomainError("asymptotic_schedule requires T >= 100");
    const double kh = k_hat(k, specs);
    const double llt = std::log(std::log(T));
    const double beta = 1.0 / (llt * llt);
    const double epsilon = std::exp(-1000.0 * kh);
    auto s = detail::fill_schedule(T, kh, beta, epsilon);
    if (s.J == 0) {
        const double min_llt = std::exp(500.0 * kh);
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "empty schedule: theta_1 = %.4g exceeds the cutoff e^{-1000 k_hat} = %.4g; J >= 1 needs "
                      "log log T >= %.6g",
                      beta, epsilon, min_llt);
        throw EmptyScheduleError(buf, min_llt);
    }
    return s;
}

inline void write_schedule(std::ostream& os, const HarperSchedule& s) {
    char buf[128];
    auto kv = [&](const std::string& key, double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << key << "=" << buf << "\n";
    };
    kv("T", s.T);
    kv("k_hat", s.k_hat);
    kv("beta", s.beta);
    kv("epsilon", s.epsilon);
    os << "J=" << s.J << "\n";
    for (int j = 1; j <= s.J; ++j) {
        const std::string i = std::to_string(j);
        kv("theta_" + i, s.theta_at(j));
        kv("T_" + i, s.T_at(j));
        kv("K_" + i, s.K_at(j));
    }
    kv("n_product_log_length", s.n_product_log_length());
    os << "n_product_within_T_6_10=" << (s.n_product_within_six_tenths() ? "true" : "false") << "\n";
}

} // namespace lmlab
