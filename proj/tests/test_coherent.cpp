#include "csq/coherent.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include <random>

using namespace csq;

TEST(CoherentLabel, RoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const double p = u(rng), q = u(rng);
        const CoherentLabel l = CoherentLabel::from_pq(p, q, 1.7, 0.3);
        EXPECT_NEAR(l.p(), p, 1e-12 * std::max(1.0, std::abs(p)));
        EXPECT_NEAR(l.q(), q, 1e-12 * std::max(1.0, std::abs(q)));
        const CoherentLabel back = CoherentLabel::from_alpha(l.alpha(), 1.7, 0.3);
        EXPECT_NEAR(std::abs(back.alpha() - l.alpha()), 0.0, 1e-15);
    }
    EXPECT_THROW(CoherentLabel::from_pq(0, 0, 0.0, 1.0), std::invalid_argument);
}

TEST(CoherentVector, VacuumAndNormalization) {
    const FockSpace s(1, 40);
    const FockVector v0 = coherent_vector(s, cplx(0.0));
    EXPECT_EQ(v0.amps(0), cplx(1.0));
    EXPECT_EQ(v0.amps.tail(40).cwiseAbs().maxCoeff(), 0.0);
    const cplx a(1.0, 0.5);
    const FockVector v = coherent_vector(s, a);
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    // term-by-term series
    double fact = 1.0;
    for (int n = 0; n <= 40; ++n) {
        if (n > 0) fact *= n;
        const cplx term = std::exp(-0.5 * std::norm(a)) * std::pow(a, n) / std::sqrt(fact);
        EXPECT_NEAR(std::abs(v.amps(n) - term), 0.0, 1e-15);
    }
}

TEST(CoherentVector, LeakageGuard) {
    EXPECT_THROW(coherent_vector(FockSpace(1, 10), cplx(5.0)), std::domain_error);
    EXPECT_LT(coherent_leakage(cplx(2.0), 40), 1e-15);
}

TEST(Overlap, IdentityAndExample) {
    const auto l = CoherentLabel::from_pq(0.3, -1.2);
    EXPECT_EQ(overlap_analytic(l, l).value, cplx(1.0));
    const auto a = CoherentLabel::from_pq(0.0, 0.0), b = CoherentLabel::from_pq(0.0, 2.0);
    EXPECT_NEAR(overlap_analytic(a, b).magnitude(), std::exp(-1.0), 1e-15);
}

TEST(Overlap, AgreesWithTruncatedInnerProduct) {
    const FockSpace s(1, 40);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto [omega, hbar] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
        for (int i = 0; i < 30; ++i) {
            const cplx a1 = std::polar(2.0 * std::sqrt(u(rng)), 6.283185307179586 * u(rng));
            const cplx a2 = std::polar(2.0 * std::sqrt(u(rng)), 6.283185307179586 * u(rng));
            const auto l1 = CoherentLabel::from_alpha(a1, omega, hbar), l2 = CoherentLabel::from_alpha(a2, omega, hbar);
            const cplx num = inner(coherent_vector(s, a1), coherent_vector(s, a2));
            EXPECT_LT(std::abs(overlap_analytic(l1, l2).value - num), 1e-10);
            EXPECT_LT(std::abs(overlap_alpha(a1, a2) - num), 1e-10);
            EXPECT_LE(std::abs(num), 1.0 + 1e-12);
        }
    }
}

// The printed phase (i/2ħ)(p'q − pq') gives the conjugate of the inner product.
TEST(Overlap, PrintedPhaseIsConjugate) {
    const FockSpace s(1, 40);
    const double omega = 1.3, hbar = 0.8;
    const auto l1 = CoherentLabel::from_pq(0.4, -0.9, omega, hbar), l2 = CoherentLabel::from_pq(-1.1, 0.5, omega, hbar);
    const double mag = overlap_analytic(l1, l2).magnitude();
    const cplx printed = std::polar(mag, (l1.p() * l2.q() - l2.p() * l1.q()) / (2.0 * hbar));
    const cplx num = inner(coherent_vector(s, l1.alpha()), coherent_vector(s, l2.alpha()));
    EXPECT_LT(std::abs(printed - std::conj(num)), 1e-10);
    EXPECT_GT(std::abs(printed - num), 1e-3);
}

TEST(Resolution, LargeRadius) {
    const FockSpace s(1, 40);
    const ResolutionReport r = resolution_of_unity_check(s, default_polar_grid(8.0, 40));
    EXPECT_NEAR(r.m(0, 0).real(), 1.0, 1e-6);
    EXPECT_LT(std::abs(r.m(0, 1)), 1e-8);
    EXPECT_LE(r.residual_on(20), 1e-6);
    EXPECT_GE(r.n_keep, 20);
}

TEST(Resolution, FiniteRadiusIsLowerIncompleteGamma) {
    const FockSpace s(1, 12);
    const ResolutionReport r = resolution_of_unity_check(s, default_polar_grid(2.0, 12));
    for (int n = 0; n <= 12; ++n) EXPECT_NEAR(r.m(n, n).real(), boost::math::gamma_p(n + 1.0, 4.0), 1e-6) << n;
}

TEST(Resolution, UnderResolvedGridRejected) {
    PolarGrid g{8.0, 10, 10};
    EXPECT_THROW(g.validate(), std::invalid_argument);
}

// Midpoint rule: the error ratio on doubling tends to 4 from below.
TEST(Resolution, SecondOrderConvergence) {
    const FockSpace s(1, 20);
    double prev = INFINITY;
    for (int rings : {500, 1000, 2000}) {
        const double r = resolution_of_unity_check(s, PolarGrid{8.0, rings, 160}).residual_on(10);
        if (std::isfinite(prev)) {
            EXPECT_NEAR(prev / r, 4.0, 0.01) << rings;
        }
        prev = r;
    }
}

TEST(Reproducing, VacuumAndCoherentState) {
    const PolarGrid g{7.0, 8000, 96};
    const FockSpace s(1, 30);
    const std::vector<cplx> probes{0.0, cplx(0.5, 0.2), cplx(-1.0, 0.7), cplx(1.5, -0.4), cplx(0.0, -2.0)};
    const auto vac = reproducing_propagation(g, sample_on_grid(g, FockVector::basis(s, {0})), probes);
    for (std::size_t i = 0; i < probes.size(); ++i)
        EXPECT_NEAR(std::abs(vac[i] - std::exp(-0.5 * std::norm(probes[i]))), 0.0, 1e-5);
    const cplx a0(0.8, -0.3);
    const auto coh = reproducing_propagation(g, sample_on_grid(g, coherent_vector(s, a0)), probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const cplx k = overlap_analytic(CoherentLabel::from_alpha(probes[i]), CoherentLabel::from_alpha(a0)).value;
        EXPECT_NEAR(std::abs(coh[i] - k), 0.0, 1e-5);
    }
    // K∘K = K: propagate kernel samples K(α, γ) directly
    std::vector<cplx> ks;
    for (const auto& n : g.nodes()) ks.push_back(overlap_alpha(n.alpha, a0));
    const auto kk = reproducing_propagation(g, ks, probes);
    for (std::size_t i = 0; i < probes.size(); ++i) EXPECT_NEAR(std::abs(kk[i] - overlap_alpha(probes[i], a0)), 0.0, 1e-5);
}
