#include "csq/classical.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace csq;
using std::numbers::pi;

TEST(Lapse, ProperTimeSums) {
    Lapse l{{0.0, 0.5, 1.5, 2.0}, {2.0, -1.0, 4.0}};
    const auto tau = l.proper_times();
    ASSERT_EQ(tau.size(), 4u);
    EXPECT_DOUBLE_EQ(tau[1], 1.0);
    EXPECT_DOUBLE_EQ(tau[2], 0.0);
    EXPECT_DOUBLE_EQ(tau[3], 2.0);
    EXPECT_THROW((Lapse{{0.0, 0.0}, {1.0}}.validate()), std::invalid_argument);
    EXPECT_THROW((Lapse{{0.0, 1.0}, {1.0, 2.0}}.validate()), std::invalid_argument);
}

TEST(Trajectory, QuarterPeriodExample) {
    // E = ½, ω = 1, φ = 0, unit lapse: A = 1 and τ = π/2 gives (q, p) = (0, 1)
    const TrajectorySpec spec{Model::single, 0.5, 1.0, {0.0}, {}};
    const auto traj = classical_trajectory(spec, Lapse::constant(1.0, pi / 2, 100));
    const auto& end = traj.back();
    EXPECT_NEAR(end.q[0], 0.0, 1e-12);
    EXPECT_NEAR(end.p[0], 1.0, 1e-12);
    for (const auto& s : traj) EXPECT_NEAR(constraint_value(s, 1.0, 0.5), 0.0, 1e-12);
}

TEST(Trajectory, ZeroLapseFreezes) {
    const TrajectorySpec spec{Model::single, 2.0, 1.3, {0.4}, {}};
    const auto traj = classical_trajectory(spec, Lapse::constant(0.0, 7.0, 20));
    for (const auto& s : traj) {
        EXPECT_EQ(s.q[0], traj.front().q[0]);
        EXPECT_EQ(s.p[0], traj.front().p[0]);
    }
}

TEST(Trajectory, LapseReparametrizationIsGauge) {
    // the same τ reached through different lapses gives the same phase-space point
    const TrajectorySpec spec{Model::double_, 1.0, 1.0, {0.2, -0.7}, {0.6, std::sqrt(2.0 - 0.36)}};
    const auto a = classical_trajectory(spec, Lapse::constant(1.0, 3.0, 30));
    const auto b = classical_trajectory(spec, Lapse::constant(3.0, 1.0, 30));
    Lapse c{{0.0, 1.0, 1.5, 2.5}, {0.5, 3.0, 1.0}};
    const auto cc = classical_trajectory(spec, c);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_NEAR(a.back().q[k], b.back().q[k], 1e-12);
        EXPECT_NEAR(a.back().q[k], cc.back().q[k], 1e-12);
        EXPECT_NEAR(a.back().p[k], cc.back().p[k], 1e-12);
    }
    for (const auto& s : a) {
        EXPECT_NEAR(relative_phase(s, 1.0), std::remainder(0.9, 2 * pi), 1e-12);
        EXPECT_NEAR(constraint_value(s, 1.0, 1.0), 0.0, 1e-12);
    }
}

TEST(Trajectory, DoubleModelSplitValidated) {
    const TrajectorySpec bad{Model::double_, 1.0, 1.0, {0.0, 0.0}, {1.0, 0.5}};
    EXPECT_THROW(bad.resolved_amplitudes(), std::invalid_argument);
    const TrajectorySpec phases{Model::single, 1.0, 1.0, {0.0, 0.0}, {}};
    EXPECT_THROW(phases.resolved_amplitudes(), std::invalid_argument);
}

TEST(SCoordinates, Examples) {
    // (p1, q1, p2, q2) = (1, 0, 0, 0): S² = 1, s3 = s0 = ¼
    const SCoords a = s_coordinates(Point4{1.0, 0.0, 0.0, 0.0});
    EXPECT_DOUBLE_EQ(a.s1, 0.0);
    EXPECT_DOUBLE_EQ(a.s2, 0.0);
    EXPECT_DOUBLE_EQ(a.s3, 0.25);
    EXPECT_DOUBLE_EQ(a.s0, 0.25);
    // equal split at S² = 2: s1 = ½, s3 = 0
    const SCoords b = s_coordinates(Point4{1.0, 0.0, 1.0, 0.0});
    EXPECT_DOUBLE_EQ(b.s1, 0.5);
    EXPECT_DOUBLE_EQ(b.s3, 0.0);
    EXPECT_DOUBLE_EQ(b.s0, 0.5);
}

// With s0 = S²/4 the sphere radius is s0, so |s|² = S⁴/16; the value ¼S²
// only coincides at S² = 4.
TEST(SCoordinates, SphereRadiusIsS0) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int i = 0; i < 50; ++i) {
        const Point4 x{g(rng), g(rng), g(rng), g(rng)};
        const SCoords s = s_coordinates(x);
        const double s2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
        const double r2 = s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3;
        EXPECT_NEAR(r2, s.s0 * s.s0, 1e-12 * (1 + r2));
        EXPECT_NEAR(r2, s2 * s2 / 16.0, 1e-12 * (1 + r2));
    }
    const SCoords b = s_coordinates(Point4{1.0, 0.0, 1.0, 0.0});
    EXPECT_NEAR(b.s1 * b.s1 + b.s2 * b.s2 + b.s3 * b.s3, 0.25, 1e-15);
}

TEST(SCoordinates, PoissonAlgebra) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto s1 = [](const Point4& x) { return s_coordinates(x).s1; };
    auto s2 = [](const Point4& x) { return s_coordinates(x).s2; };
    auto s3 = [](const Point4& x) { return s_coordinates(x).s3; };
    auto c = [](const Point4& x) { return rescaled_constraint(x, 2.0); };
    for (int i = 0; i < 20; ++i) {
        const Point4 x{u(rng), u(rng), u(rng), u(rng)};
        const SCoords s = s_coordinates(x);
        const double e12 = std::abs(poisson_bracket_fd(s1, s2, x) - s.s3);
        const double e23 = std::abs(poisson_bracket_fd(s2, s3, x) - s.s1);
        const double e31 = std::abs(poisson_bracket_fd(s3, s1, x) - s.s2);
        // cyclic algebra up to an overall sign fixed by the bracket convention
        const double f12 = std::abs(poisson_bracket_fd(s1, s2, x) + s.s3);
        const double f23 = std::abs(poisson_bracket_fd(s2, s3, x) + s.s1);
        const double f31 = std::abs(poisson_bracket_fd(s3, s1, x) + s.s2);
        EXPECT_LE(std::min(std::max({e12, e23, e31}), std::max({f12, f23, f31})), 1e-8);
        EXPECT_LE(std::abs(poisson_bracket_fd(s1, c, x)), 1e-8);
        EXPECT_LE(std::abs(poisson_bracket_fd(s2, c, x)), 1e-8);
        EXPECT_LE(std::abs(poisson_bracket_fd(s3, c, x)), 1e-8);
    }
}

TEST(ReducedMetric, ComponentsAndDomain) {
    const ReducedMetric g(2.0);
    const auto m0 = g.eval(0.0);
    EXPECT_DOUBLE_EQ(m0.g_rr, 1.0);
    EXPECT_DOUBLE_EQ(m0.g_tt, 0.0);
    EXPECT_THROW(g.eval(std::sqrt(2.0)), std::domain_error);
    EXPECT_THROW(g.eval(2.0), std::domain_error);
    EXPECT_THROW(ReducedMetric(0.0), std::invalid_argument);
}

TEST(ReducedMetric, ConstantCurvature) {
    for (double s2 : {1.0, 2.0, 6.0}) {
        const ReducedMetric g(s2);
        const double r = 0.5 * g.radius();
        EXPECT_NEAR(g.scalar_curvature_fd(r), 2.0 / s2, 1e-5 * 2.0 / s2) << "S^2=" << s2;
        EXPECT_DOUBLE_EQ(g.scalar_curvature_exact(), 2.0 / s2);
    }
}

TEST(ReducedMetric, PullbackMatchesClosedForm) {
    const double s2 = 3.0;
    const ReducedMetric g(s2);
    for (int i = 0; i < 10; ++i) {
        const double r = (0.05 + 0.09 * i) * g.radius();
        const double th = 0.37 * i;
        const auto pb = pullback_metric(s2, r, th);
        const auto m = g.eval(r);
        EXPECT_NEAR(pb[0][0], m.g_rr, 1e-8 * m.g_rr);
        EXPECT_NEAR(pb[1][1], m.g_tt, 1e-8 * (1 + m.g_tt));
        EXPECT_NEAR(pb[0][1], 0.0, 1e-8);
    }
}

TEST(AreaQuantization, Patches) {
    for (int n : {1, 3}) {
        const auto a = area_quantization(n);
        EXPECT_DOUBLE_EQ(a.s2, 2.0 * n);
        EXPECT_DOUBLE_EQ(a.energy, n);
        EXPECT_NEAR(a.symplectic_area, pi * a.s2, 1e-10);
        EXPECT_NEAR(a.symplectic_area, 2 * pi * n, 1e-10);
        EXPECT_NEAR(a.metric_area, 2 * pi * a.s2, 1e-10);
    }
    EXPECT_THROW(area_quantization(0), std::invalid_argument);
}

TEST(EnergySpectra, LevelsAgree) {
    const auto s = energy_spectra(6, 2.0, 0.5);
    for (std::size_t k = 0; k < 6; ++k) {
        EXPECT_DOUBLE_EQ(s.dirac[k], k + 1.0);
        EXPECT_DOUBLE_EQ(s.reduced[k], s.dirac[k]);
    }
}
