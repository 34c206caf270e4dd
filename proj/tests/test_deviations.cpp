#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lmlab/deviations/fubini.hpp"
#include "lmlab/deviations/statistics.hpp"
#include "lmlab/deviations/tail_grid.hpp"

using namespace lmlab;

namespace {

// r rows of n standard normals, scaled to log-values for normalization at T.
std::vector<std::vector<double>> normal_rows(std::size_t r, std::size_t n, double T, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    const double eta = tail_normalization(T);
    std::vector<std::vector<double>> rows(r, std::vector<double>(n));
    for (auto& row : rows)
        for (auto& v : row) v = eta * g(rng);
    return rows;
}

}  // namespace

TEST(Tail, PhiBasics) {
    auto tg = tail_grid_from_values(normal_rows(2, 20000, 1e5, 1), 1e5);
    EXPECT_EQ(empirical_phi(tg, {-1e3, -1e3}), 1.0);
    const double marg = empirical_phi(tg, {-HUGE_VAL, 0.5});
    std::size_t direct = 0;
    for (double v : tg.z[1]) direct += v >= 0.5;
    EXPECT_EQ(marg, double(direct) / 20000);
    EXPECT_THROW(empirical_phi(tg, {0.0}), DomainError);
}

TEST(Tail, PhiMonotoneInEachCoordinate) {
    auto tg = tail_grid_from_values(normal_rows(2, 5000, 1e5, 2), 1e5);
    for (double a = -3; a <= 3; a += 0.25)
        for (double b = -3; b <= 3; b += 0.25) {
            const double p = empirical_phi(tg, {a, b});
            EXPECT_GE(p, empirical_phi(tg, {a + 0.25, b}));
            EXPECT_GE(p, empirical_phi(tg, {a, b + 0.25}));
        }
}

TEST(Tail, LatticeMatchesDirectCounts) {
    auto tg = tail_grid_from_values(normal_rows(2, 3000, 1e6, 3), 1e6);
    const auto L = tail_lattice(tg, 0.05);
    EXPECT_EQ(L.n % 2, 1u);
    EXPECT_EQ(L.count[0], 3000u);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> pick(0, L.n - 1);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t i = pick(rng), j = pick(rng);
        EXPECT_EQ(L.count[i * L.n + j], tail_count(tg, {L.W(i), L.W(j)})) << i << "," << j;
    }
    EXPECT_EQ(L.count[L.n * L.n - 1], 0u);
    std::ostringstream os;
    write_tail_csv(os, L, 10);
    const std::string csv = os.str();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "V_1,V_2,phi,count");
    const std::size_t kept = (L.n - 1) / 10 + 1;
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(kept * kept + 1));
}

TEST(Tail, CountsIndependentOfWorkers) {
    auto tg = tail_grid_from_values(normal_rows(2, 700000, 1e5, 5), 1e5);
    EXPECT_EQ(tail_count(tg, {0.3, -0.2}, {1}), tail_count(tg, {0.3, -0.2}, {3}));
}

TEST(CLT, SyntheticGaussianSelfCalibration) {
    for (std::size_t n : {10000u, 100000u}) {
        const auto rows = normal_rows(1, n, 1e6, 6);
        const auto r = selberg_clt_test(std::span<const double>(rows[0]), 1e6);
        EXPECT_LT(r.ks, 1.63 / std::sqrt(double(n))) << n;
        EXPECT_GE(r.ks, 0.0);
        EXPECT_NEAR(r.normalized_variance, 1.0, 5.0 / std::sqrt(double(n)));
        EXPECT_NEAR(r.variance, 0.5 * std::log(std::log(1e6)) * r.normalized_variance, 1e-12);
        if (n == 100000u) {
            EXPECT_LT(r.ks, 0.01);
        }
    }
    std::vector<double> few(9999, 0.0);
    EXPECT_THROW(selberg_clt_test(std::span<const double>(few), 1e6), StatisticsError);
}

TEST(CLT, JsonAndDeterminism) {
    const auto rows = normal_rows(1, 600000, 1e5, 7);
    const auto a = selberg_clt_test(std::span<const double>(rows[0]), 1e5, {1});
    const auto b = selberg_clt_test(std::span<const double>(rows[0]), 1e5, {4});
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    const auto j = to_json(a);
    for (const char* key : {"T", "mean", "variance", "ks", "samples"}) EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Joint, TrivialCases) {
    auto one = tail_grid_from_values(normal_rows(1, 10000, 1e5, 8), 1e5);
    EXPECT_EQ(joint_tail_ratio(one, {1.0}), 0.0);
    auto rows = normal_rows(1, 10000, 1e5, 9);
    rows.push_back(rows[0]);
    auto twin = tail_grid_from_values(rows, 1e5);
    const double marginal = empirical_phi(twin, {1.0, -HUGE_VAL});
    const double v = joint_tail_ratio(twin, {1.0, 1.0});
    EXPECT_GT(v, 0.0);
    EXPECT_NEAR(v, -std::log(marginal), 1e-12);
    try {
        joint_tail_ratio(twin, {50.0, 0.0});
        FAIL() << "expected StatisticsError";
    } catch (const StatisticsError& e) {
        EXPECT_NE(std::string(e.what()).find("V = (50, 0)"), std::string::npos) << e.what();
    }
}

TEST(Joint, IndependentPermutationIsNearZero) {
    const std::size_t n = 200000;
    auto rows = normal_rows(1, n, 1e5, 10);
    rows.push_back(rows[0]);
    std::mt19937_64 rng(11);
    std::shuffle(rows[1].begin(), rows[1].end(), rng);
    auto tg = tail_grid_from_values(rows, 1e5);
    for (double V : {0.0, 0.5, 1.0}) {
        const double pj = empirical_phi(tg, {V, V}), pm = empirical_phi(tg, {V, -HUGE_VAL});
        // delta-method standard error of the log ratio
        const double se = std::sqrt((1 - pj) / (n * pj) + 2 * (1 - pm) / (n * pm));
        EXPECT_LE(std::fabs(joint_tail_ratio(tg, {V, V})), 3 * se) << V;
    }
}

TEST(LDP, GuardMonotonicityAndRows) {
    auto tg = tail_grid_from_values(normal_rows(1, 100000, 1e6, 12), 1e6);
    const auto g = large_deviation_profile(tg, {1e-4});
    EXPECT_TRUE(g.guarded);
    EXPECT_TRUE(std::isnan(g.ratio));
    EXPECT_NEAR(g.log_phi, std::log(0.5), 0.02);
    EXPECT_NEAR(g.gaussian_exponent, -0.5 * 1e-8 * std::log(std::log(1e6)), 1e-20);
    double prev = 0.0;
    for (double c : {0.2, 0.5, 1.0, 1.5}) {
        const auto r = large_deviation_profile(tg, {c});
        EXPECT_FALSE(r.guarded);
        EXPECT_LT(r.log_phi, prev);
        EXPECT_NEAR(r.ratio, r.log_phi / r.gaussian_exponent, 1e-15);
        prev = r.log_phi;
    }
    EXPECT_THROW(large_deviation_profile(tg, {10.0}), StatisticsError);
    auto tg2 = tail_grid_from_values(normal_rows(1, 100000, 1e5, 13), 1e5);
    const auto rows = large_deviation_profile({&tg2, &tg}, {1.0});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].T, 1e5);
    EXPECT_EQ(rows[1].T, 1e6);
}

TEST(Fubini, ConstantModulusClosedForm) {
    // |L| = e everywhere: LHS = e^{2k}, the tail is a step at 1/eta
    const double T = 1e5;
    auto tg = tail_grid_from_values({std::vector<double>(1000, 1.0)}, T);
    const auto r = fubini_check(tg, {0.5}, 1e-3);
    EXPECT_NEAR(r.lhs, std::exp(1.0), 1e-12);
    EXPECT_LT(r.gap, 1e-3);
    EXPECT_THROW(fubini_check(tg, {0.5}, 1.5), ResolutionError);
    EXPECT_THROW(fubini_check(tg, {0.0}, 1e-3), DomainError);
}

TEST(Fubini, GapHalvesWithStepOnStepTails) {
    // log|L| = eta so the normalized value 1 is a lattice point for every step below
    const double T = 1e6;
    auto tg = tail_grid_from_values({std::vector<double>(100, tail_normalization(T))}, T);
    double prev = HUGE_VAL;
    for (double h : {0.04, 0.02, 0.01, 0.005}) {
        const double gap = fubini_check(tg, {1.0}, h).gap;
        EXPECT_LE(gap, 0.5 * prev * (1 + 1e-9)) << h;
        prev = gap;
    }
}

TEST(Fubini, GaussianSampleBothSides) {
    auto tg = tail_grid_from_values(normal_rows(2, 200000, 1e5, 14), 1e5);
    const auto r = fubini_check(tg, {0.5, 0.7}, 0.01);
    EXPECT_LT(r.gap, 1e-3);
    EXPECT_LT(r.discretization_error, 1e-2);
    // Gaussian moment: E e^{a z} = e^{a^2 / 2}
    const double a1 = 2 * 0.5 * tg.norm, a2 = 2 * 0.7 * tg.norm;
    EXPECT_NEAR(std::log(r.lhs), 0.5 * (a1 * a1 + a2 * a2), 0.1);
}

TEST(Mass, WindowLimits) {
    const double T = 1e5, k = 2.0;
    const double eta = tail_normalization(T), V = 2 * k * eta;
    // all samples at the concentration point: the integrand is a e^{aW} on (-inf, V]
    auto tg = tail_grid_from_values({std::vector<double>(1000, V * eta)}, T);
    const auto wide = mass_concentration_check(tg, {k}, 1.0, 1e-3);
    EXPECT_NEAR(wide.V[0], V, 1e-14);
    EXPECT_GT(wide.central, 0.999);
    double total = 0.0;
    for (const auto& [label, f] : wide.fractions) total += f;
    EXPECT_NEAR(total, 1.0, 1e-12);
    double prev = wide.central;
    for (double eps : {0.3, 0.1, 0.03, 0.01, 0.001}) {
        const auto m = mass_concentration_check(tg, {k}, eps, 1e-4);
        EXPECT_LT(m.central, prev);
        prev = m.central;
    }
    EXPECT_LT(prev, 0.05);
    auto two = tail_grid_from_values(normal_rows(2, 20000, 1e5, 15), 1e5);
    const auto m2 = mass_concentration_check(two, {0.5, 0.5}, 0.3, 0.02);
    EXPECT_EQ(m2.fractions.size(), 9u);
    EXPECT_TRUE(m2.fractions.count("-+"));
}
