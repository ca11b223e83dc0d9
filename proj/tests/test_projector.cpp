#include "csq/projector.hpp"

#include <gtest/gtest.h>

#include <chrono>

using namespace csq;

namespace {
double fact(int n) { return std::tgamma(n + 1.0); }
}  // namespace

TEST(IntervalWeight, Table) {
    EXPECT_EQ(interval_weight(0.05, 0.1), 1.0);
    EXPECT_EQ(interval_weight(-0.1, 0.1), 0.5);
    EXPECT_EQ(interval_weight(0.2, 0.1), 0.0);
}

TEST(BuildProjector, SingleModelDiagonal) {
    const FockSpace s(1, 10);
    const LinearOperator p = build_projector({single_constraint(s, 3.0), 0.1});
    EXPECT_TRUE(p.is_diagonal());
    for (int n = 0; n <= 10; ++n) EXPECT_EQ(p.mat(n, n).real(), n == 3 ? 1.0 : 0.0);
    const LinearOperator z = build_projector({single_constraint(s, 0.5), 0.1});
    EXPECT_EQ(z.mat.cwiseAbs().maxCoeff(), 0.0);
}

TEST(BuildProjector, EpsilonValidated) {
    const FockSpace s(1, 4);
    ProjectorSpec bad{single_constraint(s, 1.0), 0.6};
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    EXPECT_THROW(build_projector(bad), std::invalid_argument);
}

TEST(SinKernel, WeightsMatchIntervalTable) {
    const SinKernelOptions opt;
    EXPECT_NEAR(sin_kernel_weight(0.0, 0.1, opt), 1.0, 1e-4);
    EXPECT_NEAR(sin_kernel_weight(1.0, 0.1, opt), 0.0, 1e-4);
    EXPECT_NEAR(sin_kernel_weight(0.1, 0.1, opt), 0.5, 1e-4);
    // bare truncation converges only like 1/(εΛ)
    SinKernelOptions bare = opt;
    bare.tail_correction = false;
    EXPECT_GT(std::abs(sin_kernel_weight(0.0, 0.1, bare) - 1.0), 1e-3);
}

TEST(SinKernel, ProjectorMatchesSpectral) {
    const FockSpace s(1, 12);
    const ProjectorSpec spec{single_constraint(s, 2.0), 0.1, Measure::sin_kernel};
    const BuiltProjector b = build_projector_checked(spec);
    EXPECT_LE(b.quadrature_residual, 1e-4);
    const LinearOperator spectral = build_projector({single_constraint(s, 2.0), 0.1});
    EXPECT_LE((b.op.mat - spectral.mat).cwiseAbs().maxCoeff(), 1e-4);
    ProjectorSpec bare = spec;
    bare.sin_kernel.tail_correction = false;
    EXPECT_THROW(build_projector_checked(bare), QuadratureError);
}

TEST(Project, SingleModelExactness) {
    const FockSpace s(1, 40);
    const cplx alpha(0.9, -0.6);
    const FockVector coh = coherent_vector(s, alpha);
    const auto t0 = std::chrono::steady_clock::now();
    for (int m : {0, 1, 2, 3}) {
        const PhysicalState st = project(ProjectorSpec{single_constraint(s, m), 0.1}, coh);
        CVector target = CVector::Zero(41);
        target(m) = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, m) / std::sqrt(fact(m));
        EXPECT_LE((st.vec.amps - target).cwiseAbs().maxCoeff(), 1e-12);
    }
    for (double e : {0.3, 0.5, 1.5}) {
        const PhysicalState st = project(ProjectorSpec{single_constraint(s, e), 0.1}, coh);
        EXPECT_TRUE(st.is_null());
        EXPECT_EQ(st.vec.amps.cwiseAbs().maxCoeff(), 0.0);
    }
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
}

TEST(Project, Examples) {
    const FockSpace s(1, 40);
    const PhysicalState a = project(ProjectorSpec{single_constraint(s, 0.0), 0.1}, coherent_vector(s, cplx(1.0)));
    EXPECT_NEAR(a.norm_in_full_space, std::exp(-0.5), 1e-14);
    const FockVector five = FockVector::basis(s, {5});
    const PhysicalState b = project(ProjectorSpec{single_constraint(s, 5.0), 0.1}, five);
    EXPECT_EQ((b.vec.amps - five.amps).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Project, DoubleModelComponents) {
    const FockSpace s(2, 12);
    const cplx a(0.7, 0.2), b(-0.4, 0.5);
    const int mp = 5;
    const std::vector<cplx> lab{a, b};
    const PhysicalState st = project(ProjectorSpec{double_constraint(s, mp), 0.1}, coherent_vector(s, lab));
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const int n = s.occupation(i, 0), k = s.occupation(i, 1);
        cplx expect = 0.0;
        if (n + k == mp)
            expect = std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b)) * std::pow(a, n) * std::pow(b, k) /
                     std::sqrt(fact(n) * fact(k));
        EXPECT_LT(std::abs(st.vec.amps(static_cast<Eigen::Index>(i)) - expect), 1e-14);
    }
    // mask path equals the dense projector
    const FockVector masked = sector_component(coherent_vector(s, lab), mp);
    EXPECT_LT((masked.amps - st.vec.amps).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(NormalizePhysical, GaugePhase) {
    const FockSpace s(1, 30);
    const double theta = 0.83;
    const int m = 3;
    const PhysicalState st =
        normalize_physical(project(ProjectorSpec{single_constraint(s, m), 0.1}, coherent_vector(s, std::polar(1.2, theta))));
    ASSERT_TRUE(st.gauge_phase);
    EXPECT_NEAR(std::abs(*st.gauge_phase - std::polar(1.0, m * theta)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(st.vec.amps(m) - std::polar(1.0, m * theta)), 0.0, 1e-13);
    const PhysicalState real =
        normalize_physical(project(ProjectorSpec{single_constraint(s, m), 0.1}, coherent_vector(s, cplx(1.2))));
    EXPECT_NEAR(std::abs(*real.gauge_phase - 1.0), 0.0, 1e-15);
    const PhysicalState null = project(ProjectorSpec{single_constraint(s, 0.5), 0.1}, coherent_vector(s, cplx(1.0)));
    EXPECT_THROW(normalize_physical(null), std::domain_error);
    const PhysicalState zero = project(ProjectorSpec{single_constraint(s, 2.0), 0.1}, coherent_vector(s, cplx(0.0)));
    EXPECT_TRUE(zero.is_null());
}

TEST(Identities, BothModelsIntegerEprime) {
    const FockSpace one(1, 14), two(2, 10);
    const LinearOperator h1 = ho_hamiltonian(one, 0);
    const LinearOperator h2 = ho_hamiltonian(two, 0) + ho_hamiltonian(two, 1);
    for (int e = 0; e <= 10; ++e) {
        for (Model m : {Model::single, Model::double_}) {
            const FockSpace& s = m == Model::single ? one : two;
            const ConstraintOp c = make_constraint(m, s, e);
            const LinearOperator p = build_projector({c, 0.1});
            const auto rep = projector_identities(p, c, m == Model::single ? h1 : h2);
            EXPECT_LE(rep.worst(), 1e-10) << to_string(m) << " E'=" << e;
        }
    }
    // null window: ℙ = 0 satisfies every identity trivially
    const ConstraintOp c = single_constraint(one, 0.5);
    EXPECT_EQ(projector_identities(build_projector({c, 0.1}), c, h1).worst(), 0.0);
}

// Inside the window but off an eigenvalue, e^{iσΦ} rotates the selected
// sector by e^{iσμ}, so gauge invariance holds only for integer E′.
TEST(Identities, OffIntegerWindowBreaksGaugeInvariance) {
    const FockSpace s(1, 6);
    const ConstraintOp c = single_constraint(s, 0.95);
    const auto rep = projector_identities(build_projector({c, 0.1}), c, ho_hamiltonian(s, 0));
    EXPECT_GT(rep.gauge.front().second, 1e-3);
    EXPECT_LE(rep.idempotence, 1e-15);
}

TEST(ProjectedPropagator, SingleClosedForm) {
    const FockSpace s(1, 40);
    const LinearOperator p = build_projector({single_constraint(s, 1.0), 0.1});
    const cplx one(1.0);
    EXPECT_NEAR(std::abs(projected_propagator(p, std::span(&one, 1), std::span(&one, 1)).value - std::exp(-1.0)), 0.0,
                1e-14);
    const cplx a1(0.3, 0.8), a2(-0.5, 0.4);
    const int m = 4;
    const LinearOperator p4 = build_projector({single_constraint(s, m), 0.1});
    const cplx expect = std::exp(-0.5 * std::norm(a1) - 0.5 * std::norm(a2)) * std::pow(std::conj(a1) * a2, m) / fact(m);
    EXPECT_LT(std::abs(projected_propagator(p4, std::span(&a1, 1), std::span(&a2, 1)).value - expect), 1e-14);
    const auto self = normalized_projected_propagator(p4, single_constraint(s, m), std::span(&a1, 1), std::span(&a1, 1));
    ASSERT_TRUE(self);
    EXPECT_NEAR(std::abs(self->value - 1.0), 0.0, 1e-14);
}
