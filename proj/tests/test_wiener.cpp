#include "csq/wiener.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace csq;
using std::numbers::pi;

TEST(HeatKernel, NormalizationAndVariance) {
    const std::vector<double> x1{0.3, -1.0};
    const HeatKernelParams p{0.7, 0.5, 2.0};
    const auto m = heat_kernel_moments(p, x1);
    EXPECT_NEAR(m.integral, 1.0, 1e-13);
    EXPECT_NEAR(m.variance, 0.7 * 1.5, 1e-13);
    const std::vector<double> a{0.0}, b{1.0};
    EXPECT_NEAR(heat_kernel({1.0, 0.0, 1.0}, a, b), std::exp(-0.5) / std::sqrt(2 * pi), 1e-15);
    EXPECT_THROW(heat_kernel({1.0, 1.0, 1.0}, a, b), std::invalid_argument);
    EXPECT_THROW(heat_kernel({-1.0, 0.0, 1.0}, a, b), std::invalid_argument);
}

TEST(HeatKernel, Semigroup) {
    const auto r = semigroup_check(1.3, 0.0, 0.4, 1.0, 2, 10, 3);
    EXPECT_EQ(r.probes, 10);
    EXPECT_LT(r.max_rel_residual, 1e-12);
    const std::vector<double> x{0.0};
    EXPECT_THROW(semigroup_compose(1.0, 0.0, 1.0, 1.0, x, x), std::invalid_argument);
}

TEST(PinnedPath, EndpointsAndBridgeMoments) {
    Rng rng = make_rng(1, 0);
    const std::vector<double> s{0.5, 0.0}, e{-1.0, 2.0};
    const auto p = sample_pinned_path(1.0, 2.0, s, e, 10, rng);
    ASSERT_EQ(p.samples.size(), 11u);
    EXPECT_EQ(p.samples.front(), s);
    EXPECT_EQ(p.samples.back(), e);
    EXPECT_DOUBLE_EQ(p.times.back(), 2.0);
    const auto m = bridge_moments(0.8, 1.0, s, e, 8, 4000, 17);
    EXPECT_LT(m.max_z_mean, 4.0);
    EXPECT_LT(m.max_z_var, 4.0);
    EXPECT_THROW(sample_pinned_path(1.0, 1.0, s, e, 0, rng), std::invalid_argument);
}

TEST(Rng, StreamsAreReproducible) {
    Rng a = make_rng(42, 3), b = make_rng(42, 3), c = make_rng(42, 4);
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
}

TEST(WorkerCount, HonoursEnvironment) {
    setenv("TOOL_THREADS", "3", 1);
    EXPECT_EQ(worker_count(), 3u);
    setenv("TOOL_THREADS", "junk", 1);
    EXPECT_GE(worker_count(), 1u);
    unsetenv("TOOL_THREADS");
}

TEST(SpectralAmplitudes, ResumAtZeroIsOverlap) {
    const FockSpace s(1, 40);
    const std::vector<cplx> a{cplx(0.6, 0.2)}, b{cplx(-0.3, 0.9)};
    const auto amp = spectral_amplitudes(single_constraint(s, 2.0), a, b);
    EXPECT_LT(std::abs(amp.evolve(0.0) - overlap_alpha(a[0], b[0])), 1e-13);
}

TEST(LambdaAverage, EstimatorsAgreeWithProjector) {
    LambdaAverageSpec spec;
    spec.paths = 40000;
    const auto r = lambda_average_propagator(spec, true);
    EXPECT_NEAR(std::abs(r.spectral - std::exp(-1.0)), 0.0, 1e-14);
    EXPECT_LT(r.quadrature_error, 1e-8);
    EXPECT_TRUE(r.mc_ok);

    spec.model = Model::double_;
    spec.nmax = 14;
    spec.eprime = 2.0;
    spec.probe = {cplx(0.7, 0.1), cplx(0.2, -0.5)};
    spec.state = {cplx(0.4, 0.4), cplx(-0.6, 0.1)};
    const auto d = lambda_average_propagator(spec, true);
    EXPECT_LT(d.quadrature_error, 1e-8);
    EXPECT_TRUE(d.mc_ok);
}

TEST(LambdaAverage, UntailedQuadratureFlagged) {
    LambdaAverageSpec spec;
    spec.paths = 1000;
    spec.sin_kernel.tail_correction = false;
    spec.sin_kernel.lambda_max = 50.0;
    const auto r = lambda_average_propagator(spec);
    EXPECT_FALSE(r.quadrature_ok);
    EXPECT_THROW(lambda_average_propagator(spec, true), EstimatorError);
}

TEST(LambdaAverage, DegenerateWalkIsPlainOverlap) {
    LambdaAverageSpec spec;
    spec.walk.degenerate = true;
    spec.paths = 100;
    const auto r = lambda_average_propagator(spec, true);
    EXPECT_EQ(r.monte_carlo, r.spectral);
    EXPECT_NEAR(std::abs(r.spectral - 1.0), 0.0, 1e-14);
    EXPECT_EQ(r.mc_z, 0.0);
}

// A window with TΛ0 off 2πℤ averages e^{−iτμ} to a nonzero value for μ ≠ 0,
// so the walk no longer reproduces the projector.
TEST(LambdaAverage, OffLatticeWindowBiased) {
    LambdaAverageSpec spec;
    spec.paths = 40000;
    spec.walk.lambda0 = 1.3 * pi;
    spec.walk.nu_prime = 0.0;
    const auto r = lambda_average_propagator(spec);
    EXPECT_FALSE(r.mc_ok);
}

TEST(LambdaMonteCarlo, IndependentOfWorkerCount) {
    const FockSpace s(1, 30);
    const std::vector<cplx> a{cplx(1.0)};
    const auto amp = spectral_amplitudes(single_constraint(s, 1.0), a, a);
    const LambdaWalk w;
    const auto one = lambda_monte_carlo(amp, w, 5000, 9, 1);
    const auto three = lambda_monte_carlo(amp, w, 5000, 9, 3);
    EXPECT_EQ(one.mean, three.mean);
    EXPECT_EQ(one.se_re, three.se_re);
    EXPECT_THROW(lambda_monte_carlo(amp, w, 1, 9, 1), std::invalid_argument);
}
