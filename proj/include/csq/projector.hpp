/**
 * @file projector.hpp
 * @brief Constraint operators, the interval projection operator and
 *        physical-state construction for the single and double oscillator.
 *
 * Two constructions of ℙ = ∫ e^{iλΦ} dμ(λ):
 *   - spectral interval: eigenvalues μ of Φ get weight 1 (|μ| < ε),
 *     ½ (|μ| = ε) or 0 (|μ| > ε);
 *   - sin kernel: the same integral evaluated with dμ = sin(ελ)/(πλ) dλ by
 *     composite Simpson on [−Λ, Λ] plus the closed-form sine-integral tail.
 * The second exists to check the first; it must agree to 1e-4.
 */
#pragma once

#include "csq/coherent.hpp"
#include "csq/fock.hpp"
#include "csq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csq {

enum class Model { single, double_ };

inline const char* to_string(Model m) { return m == Model::single ? "single" : "double"; }

inline constexpr double kNullNorm = 1e-12;
inline constexpr double kBoundaryTol = 1e-12;
inline constexpr double kSinKernelTol = 1e-4;

struct ConstraintOp {
    LinearOperator op;
    Model model;
    double eprime;
};

/// Φ = a†a − E′ on a one-mode space.
inline ConstraintOp single_constraint(const FockSpace& space, double eprime) {
    if (space.modes() != 1) throw std::invalid_argument("single_constraint: one-mode space required");
    LinearOperator phi = number_op(space, 0);
    for (Eigen::Index i = 0; i < phi.mat.rows(); ++i) phi.mat(i, i) -= eprime;
    return {std::move(phi), Model::single, eprime};
}

/// Φ = a†a + b†b − E′ on a two-mode space.
inline ConstraintOp double_constraint(const FockSpace& space, double eprime) {
    if (space.modes() != 2) throw std::invalid_argument("double_constraint: two-mode space required");
    LinearOperator phi = total_number_op(space);
    for (Eigen::Index i = 0; i < phi.mat.rows(); ++i) phi.mat(i, i) -= eprime;
    return {std::move(phi), Model::double_, eprime};
}

inline ConstraintOp make_constraint(Model model, const FockSpace& space, double eprime) {
    return model == Model::single ? single_constraint(space, eprime) : double_constraint(space, eprime);
}

enum class Measure { spectral_interval, sin_kernel };

struct SinKernelOptions {
    double lambda_max = 200.0;
    /// Simpson resolution: step h satisfies h (|μ| + ε) <= this.
    double phase_per_step = 0.05;
    bool tail_correction = true;
};

struct ProjectorSpec {
    ConstraintOp constraint;
    double epsilon = 0.1;
    Measure measure = Measure::spectral_interval;
    SinKernelOptions sin_kernel{};

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("ProjectorSpec: epsilon must lie in (0, 1/2)");
        if (!constraint.op.is_hermitian(1e-12)) throw std::invalid_argument("ProjectorSpec: constraint is not Hermitian");
        if (measure == Measure::sin_kernel && !(sin_kernel.lambda_max > 0.0))
            throw std::invalid_argument("ProjectorSpec: lambda_max must be > 0");
    }
};

/// Window weight of the exact interval projector for eigenvalue mu.
inline double interval_weight(double mu, double epsilon) {
    const double d = std::abs(mu) - epsilon;
    if (std::abs(d) <= kBoundaryTol) return 0.5;
    return d < 0.0 ? 1.0 : 0.0;
}

/// Interval projector applied as a mask in the occupation basis, where the
/// constraint Σ n_k − E′ is diagonal. Avoids forming the dense operator.
inline FockVector sector_component(const FockVector& v, double eprime, double epsilon = 0.1) {
    FockVector out = v;
    for (std::size_t i = 0; i < v.space.dim(); ++i)
        out.amps(static_cast<Eigen::Index>(i)) *= interval_weight(v.space.total(i) - eprime, epsilon);
    return out;
}

/// ∫_{−Λ}^{Λ} e^{iλμ} sin(ελ)/(πλ) dλ by Simpson, plus the |λ| > Λ tail when
/// requested. The imaginary part vanishes by symmetry, so only [0, Λ] is
/// sampled and doubled.
inline double sin_kernel_weight(double mu, double epsilon, const SinKernelOptions& opt) {
    const double lam = opt.lambda_max;
    const double freq = std::abs(mu) + epsilon;
    int n = static_cast<int>(std::ceil(lam * freq / opt.phase_per_step));
    n = std::max(n + (n % 2), 64);
    auto f = [&](double l) {
        if (l == 0.0) return epsilon / std::numbers::pi;
        return std::cos(mu * l) * std::sin(epsilon * l) / (std::numbers::pi * l);
    };
    double w = 2.0 * quad::simpson(f, 0.0, lam, n);
    if (opt.tail_correction) {
        // 2 sin(ελ)cos(μλ) = sin((ε+μ)λ) + sin((ε−μ)λ); each tail is
        // sign(a) ∫_{|a|Λ}^∞ sin t/t dt.
        for (double a : {epsilon + mu, epsilon - mu}) {
            if (a == 0.0) continue;
            w += (a > 0 ? 1.0 : -1.0) * quad::sine_integral_tail(std::abs(a) * lam) / std::numbers::pi;
        }
    }
    return w;
}

namespace detail {
struct Spectrum {
    Eigen::VectorXd values;
    CMatrix vectors;  ///< empty when the operator is diagonal
    bool diagonal = false;
};

inline Spectrum spectrum(const LinearOperator& op) {
    Spectrum s;
    if (op.is_diagonal()) {
        s.values = op.mat.diagonal().real();
        s.diagonal = true;
        return s;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(op.mat);
    s.values = es.eigenvalues();
    s.vectors = es.eigenvectors();
    return s;
}

inline LinearOperator from_spectrum(const FockSpace& space, const Spectrum& s, const Eigen::VectorXd& w) {
    if (s.diagonal) {
        LinearOperator out = LinearOperator::zero(space);
        for (Eigen::Index i = 0; i < w.size(); ++i) out.mat(i, i) = w(i);
        return out;
    }
    return {space, s.vectors * w.cast<cplx>().asDiagonal() * s.vectors.adjoint()};
}
}  // namespace detail

struct BuiltProjector {
    LinearOperator op;
    /// max |ℙ_sin − ℙ_spectral|; zero for the spectral construction.
    double quadrature_residual = 0.0;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline BuiltProjector build_projector_checked(const ProjectorSpec& spec) {
    spec.validate();
    const auto& op = spec.constraint.op;
    const auto s = detail::spectrum(op);
    Eigen::VectorXd exact(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) exact(i) = interval_weight(s.values(i), spec.epsilon);
    LinearOperator spectral = detail::from_spectrum(op.space, s, exact);
    if (spec.measure == Measure::spectral_interval) return {std::move(spectral), 0.0};

    // Distinct eigenvalues share one scalar quadrature.
    std::map<double, double> cache;
    Eigen::VectorXd w(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        const double mu = s.values(i);
        auto it = cache.find(mu);
        if (it == cache.end()) it = cache.emplace(mu, sin_kernel_weight(mu, spec.epsilon, spec.sin_kernel)).first;
        w(i) = it->second;
    }
    LinearOperator quad_op = detail::from_spectrum(op.space, s, w);
    // The |μ| = ε boundary is measure-zero and excluded from the comparison.
    double resid = 0.0;
    for (Eigen::Index i = 0; i < s.values.size(); ++i)
        if (std::abs(std::abs(s.values(i)) - spec.epsilon) > 1e-6) resid = std::max(resid, std::abs(w(i) - exact(i)));
    if (resid > kSinKernelTol)
        throw QuadratureError("build_projector: sin-kernel quadrature residual " + std::to_string(resid) +
                              " exceeds 1e-4; increase lambda_max or resolution");
    return {std::move(quad_op), resid};
}

inline LinearOperator build_projector(const ProjectorSpec& spec) { return build_projector_checked(spec).op; }

struct PhysicalState {
    FockVector vec;
    double norm_in_full_space = 0.0;
    std::optional<cplx> gauge_phase;
    Model model = Model::single;
    int sector = 0;  ///< integer E′ the window selected (meaningful when not null)

    bool is_null() const { return norm_in_full_space < kNullNorm; }
};

/// Integer sector m′ nearest to E′.
inline int nearest_sector(double eprime) { return static_cast<int>(std::lround(eprime)); }

inline PhysicalState project(const LinearOperator& projector, const ConstraintOp& c, const FockVector& v) {
    projector.require_same(v.space, "project");
    FockVector pv = projector.apply(v);
    PhysicalState s{pv, pv.norm(), std::nullopt, c.model, nearest_sector(c.eprime)};
    return s;
}

inline PhysicalState project(const ProjectorSpec& spec, const FockVector& v) {
    return project(build_projector(spec), spec.constraint, v);
}

/// Basis indices of the gauge reference component. For the single model
/// that is |m⟩; for the double model |n, m′−n⟩ scanned from n = 0, which is
/// the lowest-weight end |j, −j⟩ of the spin multiplet.
inline std::vector<std::size_t> gauge_reference_order(const FockSpace& space, Model model, int sector) {
    std::vector<std::size_t> idx;
    if (sector < 0 || sector > space.nmax()) return idx;
    if (model == Model::single) {
        idx.push_back(space.index_of({sector}));
    } else {
        for (int n = 0; n <= sector; ++n) idx.push_back(space.index_of({n, sector - n}));
    }
    return idx;
}

/// Unit-norm physical state with its gauge phase factored out and reported.
/// The returned vector keeps the phase (e^{imθ}|m⟩ for the single model);
/// see gauge_fixed() for the phase-free version.
inline PhysicalState normalize_physical(const PhysicalState& s) {
    if (s.is_null()) throw std::domain_error("normalize_physical: no physical component");
    PhysicalState out = s;
    out.vec.amps /= s.vec.norm();
    for (std::size_t i : gauge_reference_order(s.vec.space, s.model, s.sector)) {
        const cplx c = out.vec.amps(static_cast<Eigen::Index>(i));
        if (std::abs(c) > 1e-14) {
            out.gauge_phase = c / std::abs(c);
            break;
        }
    }
    return out;
}

/// Normalized state multiplied by the conjugate gauge phase.
inline FockVector gauge_fixed(const PhysicalState& normalized) {
    if (!normalized.gauge_phase) throw std::domain_error("gauge_fixed: gauge phase undefined");
    FockVector v = normalized.vec;
    v.amps *= std::conj(*normalized.gauge_phase);
    return v;
}

struct ProjectorIdentityReport {
    double idempotence = 0.0;  ///< max |ℙ² − ℙ|
    double hermiticity = 0.0;  ///< max |ℙ† − ℙ|
    std::vector<std::pair<double, double>> gauge;      ///< (σ, max |e^{iσΦ}ℙ − ℙ|)
    std::vector<std::pair<double, double>> evolution;  ///< (t, max |[ℙ, e^{−iHt/ħ}]|)

    double worst() const {
        double w = std::max(idempotence, hermiticity);
        for (auto [_, r] : gauge) w = std::max(w, r);
        for (auto [_, r] : evolution) w = std::max(w, r);
        return w;
    }
};

inline ProjectorIdentityReport projector_identities(const LinearOperator& p, const ConstraintOp& c,
                                                    const LinearOperator& h, double hbar = 1.0,
                                                    std::span<const double> sigmas = {},
                                                    std::span<const double> times = {}) {
    static constexpr double kSigmas[] = {0.3, 1.7, std::numbers::pi};
    static constexpr double kTimes[] = {0.5, 2.0};
    if (sigmas.empty()) sigmas = kSigmas;
    if (times.empty()) times = kTimes;
    p.require_same(h.space, "projector_identities");
    ProjectorIdentityReport r;
    r.idempotence = (p.mat * p.mat - p.mat).cwiseAbs().maxCoeff();
    r.hermiticity = p.hermiticity_residual();
    for (double sigma : sigmas) {
        const LinearOperator g = expi_hermitian(c.op, sigma);
        r.gauge.emplace_back(sigma, (g.mat * p.mat - p.mat).cwiseAbs().maxCoeff());
    }
    for (double t : times) {
        const LinearOperator u = expi_hermitian(h, -t / hbar);
        r.evolution.emplace_back(t, (p.mat * u.mat - u.mat * p.mat).cwiseAbs().maxCoeff());
    }
    return r;
}

/// Raw ⟨coherent(l1)| ℙ |coherent(l2)⟩.
inline KernelValue projected_propagator(const LinearOperator& p, std::span<const cplx> l1, std::span<const cplx> l2) {
    const FockVector v1 = coherent_vector(p.space, l1);
    const FockVector v2 = coherent_vector(p.space, l2);
    return {v1.amps.dot(p.mat * v2.amps)};
}

/// Overlap of the two normalized, gauge-fixed physical states. Null when
/// either projection is null.
inline std::optional<KernelValue> normalized_projected_propagator(const LinearOperator& p, const ConstraintOp& c,
                                                                  std::span<const cplx> l1, std::span<const cplx> l2) {
    const PhysicalState s1 = project(p, c, coherent_vector(p.space, l1));
    const PhysicalState s2 = project(p, c, coherent_vector(p.space, l2));
    if (s1.is_null() || s2.is_null()) return std::nullopt;
    const FockVector g1 = gauge_fixed(normalize_physical(s1));
    const FockVector g2 = gauge_fixed(normalize_physical(s2));
    return KernelValue{inner(g1, g2)};
}

}  // namespace csq
