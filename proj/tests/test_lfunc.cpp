#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "lmlab/lfunc/evaluate.hpp"
#include "lmlab/lfunc/lfunction_id.hpp"

using namespace lmlab;

namespace {

// Cohen-Rodriguez Villegas-Zagier acceleration of sum_{k>=0} (-1)^k a(k).
template <class F>
long double alternating_sum(F a, int n = 40) {
    long double d = std::pow(3.0L + std::sqrt(8.0L), n);
    d = (d + 1.0L / d) / 2.0L;
    long double b = -1.0L, c = -d, s = 0.0L;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        s += c * a(k);
        b = (k + n) * (k - n) * b / ((k + 0.5L) * (k + 1.0L));
    }
    return s / d;
}

long double zeta2_oracle() {
    long double s = 0.0L;
    const int N = 1000000;
    for (int n = N - 1; n >= 1; --n) s += 1.0L / ((long double)n * n);
    const long double x = N;
    return s + 1.0L / x + 1.0L / (2.0L * x * x) + 1.0L / (6.0L * x * x * x);
}

std::vector<cplx> random_points(int count, unsigned seed, double smin, double smax, double tmax) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(smin, smax), im(-tmax, tmax);
    std::vector<cplx> out;
    for (int i = 0; i < count; ++i) out.emplace_back(re(rng), im(rng));
    return out;
}

}  // namespace

TEST(Selector, Parsing) {
    auto c = parse_selector("zeta^2,dirichlet:4:1,hurwitz:1/3^0.5,dedekind:4");
    ASSERT_EQ(c.size(), 4u);
    EXPECT_EQ(c[0].k, 2.0);
    EXPECT_EQ(c[1].id.canonical(), "dirichlet:4:1");
    EXPECT_EQ(c[2].k, 0.5);
    EXPECT_EQ(c[3].id.degree(), 2);
    EXPECT_EQ(parse_lfunction("dedekind:5:0+2").degree(), 2);
    EXPECT_EQ(format_selector(c), "zeta^2,dirichlet:4:1,hurwitz:1/3^0.5,dedekind:4");
    EXPECT_THROW(parse_selector("zeta^-1"), DomainError);
    EXPECT_THROW(parse_selector("hurwitz:2/4"), DomainError);
    EXPECT_THROW(parse_selector("dirichlet:4:2"), DomainError);
    EXPECT_THROW(parse_selector("dedekind:5:1+2"), DomainError);
    EXPECT_THROW(parse_selector("zeta,,zeta"), DomainError);
    EXPECT_THROW(parse_selector("eta"), DomainError);
}

TEST(Hurwitz, KnownValues) {
    const double z2 = static_cast<double>(zeta2_oracle());
    EXPECT_NEAR(hurwitz_zeta(2.0, 1, 1).real(), z2, 1e-12);
    EXPECT_NEAR(z2, M_PI * M_PI / 6, 1e-14);
    const cplx half = hurwitz_zeta(2.0, 1, 2);
    const cplx ident = (std::pow(2.0, 2.0) - 1.0) * hurwitz_zeta(2.0, 1, 1);
    EXPECT_LT(std::abs(half - ident), 1e-12);
    EXPECT_NEAR(half.real(), 4.9348022, 1e-7);
    EXPECT_LT(std::abs(riemann_zeta(cplx(0.5, 14.134725))), 1e-5);
    EXPECT_THROW(hurwitz_zeta(1.0, 1, 3), PoleError);
    EXPECT_THROW(hurwitz_zeta(2.0, 4, 3), DomainError);
}

TEST(Hurwitz, FirstZeroBracket) {
    // Z changes sign across the first zero at 14.134725141734693...
    const cplx a = riemann_zeta(cplx(0.5, 14.1347), 1e-13), b = riemann_zeta(cplx(0.5, 14.1348), 1e-13);
    EXPECT_LT(std::abs(a), 1e-4);
    EXPECT_LT(std::abs(b), 1e-4);
    EXPECT_LT(std::abs(riemann_zeta(cplx(0.5, 14.134725141734693), 1e-13)), 1e-12);
}

TEST(Dirichlet, KnownValues) {
    const auto chi4 = character_by_id(4, 1);
    const double catalan = static_cast<double>(
        alternating_sum([](int k) { return 1.0L / ((2.0L * k + 1) * (2.0L * k + 1)); }));
    const double leibniz = static_cast<double>(alternating_sum([](int k) { return 1.0L / (2.0L * k + 1); }));
    EXPECT_NEAR(catalan, 0.9159655941772190, 1e-15);
    EXPECT_NEAR(dirichlet_l(2.0, chi4).real(), catalan, 1e-12);
    EXPECT_NEAR(dirichlet_l(1.0, chi4).real(), leibniz, 1e-12);
    EXPECT_NEAR(leibniz, M_PI / 4, 1e-15);
    EXPECT_THROW(dirichlet_l(1.0, character_by_id(4, 0)), PoleError);
    const auto trivial = character_group(1)[0];
    for (const auto& s : random_points(20, 11, 0.2, 3.0, 60.0))
        EXPECT_LT(std::abs(dirichlet_l(s, trivial) - riemann_zeta(s)), 1e-12);
}

TEST(Dirichlet, HurwitzFromCharacters) {
    EXPECT_LT(std::abs(hurwitz_from_characters(2.0, 1, 4) - hurwitz_zeta(2.0, 1, 4)), 1e-10);
    EXPECT_LT(std::abs(hurwitz_from_characters(cplx(0.5, 10), 5, 12) - hurwitz_zeta(cplx(0.5, 10), 5, 12)), 1e-10);
    for (const auto& s : random_points(10, 3, 0.5, 2.0, 50.0))
        EXPECT_LT(std::abs(hurwitz_from_characters(s, 1, 1) - riemann_zeta(s)), 1e-12);
}

TEST(Dirichlet, Dedekind) {
    const auto id = LFunctionId::dedekind(4);
    const cplx v = dedekind_abelian(2.0, id.characters());
    const double catalan = static_cast<double>(
        alternating_sum([](int k) { return 1.0L / ((2.0L * k + 1) * (2.0L * k + 1)); }));
    EXPECT_NEAR(v.real(), static_cast<double>(zeta2_oracle()) * catalan, 1e-12);
    EXPECT_NEAR(v.real(), 1.5067, 1e-4);
    EXPECT_LT(std::abs(dedekind_abelian(cplx(0.7, 3), {DirichletCharacter{}}) - riemann_zeta(cplx(0.7, 3))), 1e-14);
    EXPECT_THROW(dedekind_abelian(2.0, {}), DomainError);
}

TEST(Dirichlet, ConjugationSymmetry) {
    std::vector<LFunctionId> ids{LFunctionId::zeta(), LFunctionId::dirichlet(4, 1), LFunctionId::dirichlet(5, 2),
                                 LFunctionId::dirichlet(8, 3), LFunctionId::hurwitz(1, 3)};
    for (const auto& id : ids) {
        ASSERT_TRUE(id.real_coefficients()) << id.canonical();
        for (const auto& s : random_points(20, 5, 0.5, 2.5, 200.0))
            EXPECT_LT(std::abs(evaluate(id, std::conj(s), 1e-13) - std::conj(evaluate(id, s, 1e-13))), 1e-12);
    }
    EXPECT_FALSE(LFunctionId::dirichlet(5, 1).real_coefficients());
}

TEST(Zeta, EulerMaclaurinMatchesRiemannSiegel) {
    const auto em = hurwitz_system(1, 1);
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double t = 1e4 + 0.1 * i;
        const cplx a = evaluate_system(cplx(0.5, t), em, {1e-12, 0});
        const cplx b = zeta_critical_rs(t);
        worst = std::max(worst, std::abs(a - b));
    }
    EXPECT_LT(worst, 1e-8);
    // and well above the switch
    const cplx a = evaluate_system(cplx(0.5, 123456.789), em, {1e-10, 0});
    EXPECT_LT(std::abs(a - zeta_critical_rs(123456.789)), 1e-8);
    EXPECT_LT(std::abs(zeta_critical_rs(-2e4) - std::conj(zeta_critical_rs(2e4))), 1e-15);
}

TEST(Zeta, AccuracyErrorCarriesBound) {
    try {
        hurwitz_zeta(cplx(0.6, 5e6), 1, 3, 1e-18);
        FAIL() << "expected AccuracyError";
    } catch (const AccuracyError& e) {
        EXPECT_GT(e.achieved_bound, 1e-18);
    }
}

#include "lmlab/lfunc/grid.hpp"
#include "lmlab/lfunc/line_eval.hpp"

namespace {

double rel_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(Line, DirectAndNufftAgree) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> coef;
    std::vector<long double> lambda;
    for (int n = 1; n <= 3000; ++n) {
        coef.emplace_back(u(rng) - 0.5, u(rng) - 0.5);
        lambda.push_back(std::log(static_cast<long double>(n)));
    }
    const std::size_t count = 5000;
    std::vector<cplx> a(count), b(count);
    detail::dirichlet_sum_direct(coef, lambda, 123456.25L, 0.02L, count, a.data());
    detail::dirichlet_sum_nufft(coef, lambda, 123456.25L, 0.02L, count, b.data());
    double worst = 0.0;
    for (std::size_t j = 0; j < count; ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    EXPECT_LT(worst, 1e-10);
    // reference by plain summation at a few points
    for (std::size_t j : {0ul, 1234ul, 4999ul}) {
        const long double t = 123456.25L + j * 0.02L;
        cplx s = 0.0;
        for (std::size_t n = 0; n < coef.size(); ++n) s += coef[n] * detail::unit_phase(t * lambda[n]);
        EXPECT_LT(std::abs(s - a[j]), 1e-11);
    }
}

TEST(Line, MatchesPointwiseEvaluation) {
    for (const auto& id : {LFunctionId::zeta(), LFunctionId::dirichlet(4, 1), LFunctionId::hurwitz(1, 3),
                           LFunctionId::dedekind(5)}) {
        for (double t0 : {1.0, 5000.0, 9990.0, 30000.0}) {
            const std::size_t n = 2000;
            const auto line = evaluate_line(id, 0.5, t0, 0.01L, n, {});
            std::vector<cplx> ref(n);
            for (std::size_t j = 0; j < n; j += 97) ref[j] = evaluate(id, cplx(0.5, t0 + 0.01 * j), 1e-11);
            double worst = 0.0;
            for (std::size_t j = 0; j < n; j += 97) worst = std::max(worst, rel_diff(line[j], ref[j]));
            EXPECT_LT(worst, 1e-9) << id.canonical() << " t0=" << t0;
        }
    }
    const auto off = evaluate_line(LFunctionId::dirichlet(5, 1), 1.25, 100.0, 0.05L, 500, {});
    EXPECT_LT(std::abs(off[200] - evaluate(LFunctionId::dirichlet(5, 1), cplx(1.25, 110.0), 1e-12)), 1e-10);
}

TEST(Line, DeterministicAcrossWorkersAndChunking) {
    LineOptions one, many;
    one.chunk = many.chunk = 4096;
    many.par.workers = 4;
    for (const auto& id : {LFunctionId::zeta(), LFunctionId::dirichlet(4, 1)}) {
        const auto a = evaluate_line(id, 0.5, 9000.0L, 0.02L, 100000, one);
        const auto b = evaluate_line(id, 0.5, 9000.0L, 0.02L, 100000, many);
        ASSERT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(cplx)), 0) << id.canonical();
    }
}

TEST(Grid, LengthAndClamping) {
    EXPECT_EQ(grid_length(1.0, 2.0, 0.5), 3u);
    EXPECT_EQ(grid_length(1.0, 100.0, 0.01), 9901u);
    const auto g = log_abs_grid(LFunctionId::zeta(), 14.0, 14.3, 1e-3);
    EXPECT_EQ(g.size(), 301u);
    std::size_t low = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        EXPECT_TRUE(std::isfinite(g.values[j]));
        EXPECT_GE(g.values[j], g.clamp_floor);
        if (g.values[j] < g.values[low]) low = j;
    }
    EXPECT_NEAR(g.t(low), 14.134725, 1e-3);
    // The nearest grid point sits 2.75e-4 from the zero, so log|zeta| there is about -8.4:
    // a -40 floor cannot trigger on this grid. A floor of -8 does.
    EXPECT_NEAR(g.values[low], std::log(0.7932 * 2.75e-4), 0.05);
    GridOptions tight;
    tight.clamp_floor = -8.0;
    const auto c = log_abs_grid(LFunctionId::zeta(), 14.0, 14.3, 1e-3, tight);
    ASSERT_GE(c.clamped_count, 1u);
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c.clamped(j)) {
            EXPECT_NEAR(c.t(j), 14.134725, 1e-3);
        }
    }
}

TEST(Grid, BinaryRoundTrip) {
    auto g = log_abs_grid(LFunctionId::dirichlet(4, 1), 1.0, 50.0, 0.1);
    std::stringstream ss;
    write_grid(ss, g);
    auto h = read_grid(ss);
    EXPECT_EQ(h.id, g.id);
    ASSERT_EQ(h.values.size(), g.values.size());
    EXPECT_EQ(std::memcmp(h.values.data(), g.values.data(), g.values.size() * sizeof(double)), 0);
    std::string bytes = ss.str();
    std::stringstream trunc(bytes.substr(0, bytes.size() - 3));
    EXPECT_THROW(read_grid(trunc), DataError);
}
