#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "../harper/truncation.hpp"
#include "../moments/gabriel.hpp"
#include "../moments/mean_value.hpp"

namespace lmlab::cli {

// A verification suite: JSON lines (one per case, then a summary) and the overall verdict.
struct SuiteReport {
    std::string name;
    std::string lines;
    bool pass = true;
    std::size_t cases = 0, failures = 0;
};

namespace detail {

inline void add_case(SuiteReport& r, nlohmann::ordered_json j, bool ok) {
    j["pass"] = ok;
    r.lines += j.dump() + "\n";
    ++r.cases;
    r.failures += !ok;
    r.pass = r.pass && ok;
}

inline void close_suite(SuiteReport& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.name;
    j["cases"] = r.cases;
    j["failures"] = r.failures;
    j["pass"] = r.pass;
    r.lines += j.dump() + "\n";
}

inline std::vector<cplx> prime_powers(std::uint64_t p, std::uint64_t N) {
    std::vector<cplx> c(N, 0.0);
    for (std::uint64_t q = 1; q <= N; q *= p) c[q - 1] = 1.0;
    return c;
}

} // namespace detail

inline constexpr std::size_t truncation_cases = 200;

// Seeded (D, V) with |D| <= V <= 10; each case must satisfy |ratio - 1| <= 2 e^{-9V}.
inline SuiteReport truncation_suite(std::uint64_t seed, std::size_t count = truncation_cases) {
    SuiteReport r;
    r.name = "truncation";
    std::mt19937_64 rng(seed);
    auto u = [&] { return std::generate_canonical<double, 53>(rng); };
    for (std::size_t i = 0; i < count; ++i) {
        const double V = 10.0 * u();
        const double rad = V * std::sqrt(u()), ang = 2.0 * std::numbers::pi * u();
        const std::complex<double> D = std::polar(rad, ang);
        const auto t = truncation(D, V);
        const double bound = 2.0 * std::exp(-9.0 * V);
        nlohmann::ordered_json j;
        j["case"] = i;
        j["D"] = {D.real(), D.imag()};
        j["V"] = V;
        j["terms"] = t.terms;
        j["deviation"] = t.deviation;
        j["bound"] = bound;
        detail::add_case(r, j, std::fabs(t.deviation) <= bound);
    }
    detail::close_suite(r);
    return r;
}

// a = 1 for N = 10 and N = 100 against tolerances 1% and 2%.
inline SuiteReport mv_suite(double T = 1e6) {
    SuiteReport r;
    r.name = "mv";
    for (auto [N, tol] : {std::pair<std::size_t, double>{10, 0.01}, {100, 0.02}}) {
        const auto m = mv_check(std::vector<cplx>(N, 1.0), T);
        nlohmann::ordered_json j;
        j["N"] = N;
        j["T"] = T;
        j["mean"] = m.mean;
        j["diagonal"] = m.diagonal;
        j["deviation"] = m.deviation;
        j["tolerance"] = tol;
        detail::add_case(r, j, m.deviation < tol);
    }
    detail::close_suite(r);
    return r;
}

// Prime-power supports: {2^a}; {2^a} x {3^b}; {2^a} x {3^b} x {5^c}, each up to 50.
inline SuiteReport coprime_suite(double T = 1e6) {
    SuiteReport r;
    r.name = "coprime";
    const std::vector<std::vector<std::uint64_t>> configs = {{2}, {2, 3}, {2, 3, 5}};
    for (const auto& primes : configs) {
        std::vector<std::vector<cplx>> polys;
        for (auto p : primes) polys.push_back(detail::prime_powers(p, 50));
        const auto c = coprime_factorization_check(polys, T);
        nlohmann::ordered_json j;
        j["supports"] = primes;
        j["T"] = T;
        j["N"] = c.N;
        j["ratio"] = c.ratio;
        j["deviation"] = c.deviation;
        j["bound"] = 5.0 * c.scale;
        detail::add_case(r, j, c.within(5.0));
    }
    detail::close_suite(r);
    return r;
}

// a(p) = 1 for p <= 50, ell = 1, 2, 3; ratio <= 10.
inline SuiteReport highmoment_suite(double T = 1e6) {
    SuiteReport r;
    r.name = "highmoment";
    for (int ell = 1; ell <= 3; ++ell) {
        const auto h = high_moment_check(std::vector<cplx>(51, 1.0), ell, T);
        nlohmann::ordered_json j;
        j["N"] = 50;
        j["ell"] = ell;
        j["T"] = T;
        j["lhs"] = h.lhs;
        j["normaliser"] = h.normaliser;
        j["ratio"] = h.ratio;
        detail::add_case(r, j, h.ratio <= 10.0);
    }
    detail::close_suite(r);
    return r;
}

inline constexpr std::size_t gabriel_cases = 20;

// Seeded configurations in 1.001 <= Re z <= 1.5; ratio <= 1 + 1e-6.
inline SuiteReport gabriel_suite(std::uint64_t seed, std::size_t count = gabriel_cases) {
    SuiteReport r;
    r.name = "gabriel";
    std::mt19937_64 rng(seed);
    auto u = [&] { return std::generate_canonical<double, 53>(rng); };
    const std::vector<std::vector<LFunctionId>> families = {
        {LFunctionId::zeta()},
        {LFunctionId::dirichlet(4, 1)},
        {LFunctionId::zeta(), LFunctionId::dirichlet(4, 1)},
        {LFunctionId::dirichlet(5, 1)},
        {LFunctionId::dedekind(5)},
    };
    for (std::size_t i = 0; i < count; ++i) {
        const auto& ids = families[static_cast<std::size_t>(u() * families.size()) % families.size()];
        std::vector<double> k;
        for (std::size_t j = 0; j < ids.size(); ++j) k.push_back(0.5 + 1.5 * u());
        const auto N = static_cast<std::uint32_t>(10 + std::floor(u() * 51));
        const double alpha = gabriel_min_sigma + 0.3 * u();
        const double beta = alpha + 0.05 + (gabriel_max_sigma - alpha - 0.05) * u();
        const double gamma = alpha + (beta - alpha) * u();
        const double tau = 16.0 + 184.0 * u();
        const auto g = gabriel_check(N, ids, k, alpha, gamma, beta, tau);
        nlohmann::ordered_json j;
        j["case"] = i;
        std::vector<std::string> names;
        for (const auto& id : ids) names.push_back(id.canonical());
        j["ids"] = names;
        j["k"] = k;
        j["N"] = N;
        j["alpha"] = alpha;
        j["gamma"] = gamma;
        j["beta"] = beta;
        j["tau"] = tau;
        j["ratio"] = g.ratio;
        detail::add_case(r, j, g.ratio <= 1.0 + 1e-6);
    }
    detail::close_suite(r);
    return r;
}

} // namespace lmlab::cli
