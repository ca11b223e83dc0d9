/**
 * @file classical.hpp
 * @brief Classical reparameterization-invariant oscillators: proper-time
 *        trajectories, gauge-invariant s-coordinates, and the geometry of the
 *        reduced phase space of the double oscillator.
 *
 * Trajectory convention: each oscillator follows
 *   q = A cos(ωτ + φ),  p = Aω sin(ωτ + φ),
 * i.e. the complex label α ∝ e^{i(ωτ+φ)} turns counter-clockwise in proper
 * time. The amplitude satisfies ½(p² + ω²q²) = E exactly, so A = √(2E)/ω.
 *
 * Geometry uses rescaled coordinates q → √(ω/ħ) q, p → p/√(ωħ), in which the
 * constraint surface is r1² + r2² = S² = 2E/(ωħ).
 */
#pragma once

#include "csq/projector.hpp"
#include "csq/quadrature.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace csq {

/// Piecewise-constant lapse: lambda[i] holds on [t[i], t[i+1]).
struct Lapse {
    std::vector<double> t;
    std::vector<double> lambda;

    static Lapse constant(double value, double t_end, int steps) {
        Lapse l;
        for (int i = 0; i <= steps; ++i) l.t.push_back(t_end * i / steps);
        l.lambda.assign(static_cast<std::size_t>(steps), value);
        return l;
    }

    void validate() const {
        if (t.size() < 2 || lambda.size() + 1 != t.size())
            throw std::invalid_argument("Lapse: need t.size() == lambda.size() + 1 >= 2");
        for (std::size_t i = 0; i + 1 < t.size(); ++i)
            if (!(t[i + 1] > t[i])) throw std::invalid_argument("Lapse: time grid must be strictly increasing");
    }

    /// τ(t_k) = Σ_{i<k} λ_i (t_{i+1} − t_i).
    std::vector<double> proper_times() const {
        validate();
        std::vector<double> tau(t.size(), 0.0);
        for (std::size_t i = 0; i + 1 < t.size(); ++i) tau[i + 1] = tau[i] + lambda[i] * (t[i + 1] - t[i]);
        return tau;
    }
};

struct ClassicalState {
    double t = 0.0;
    double tau = 0.0;
    std::vector<double> p;
    std::vector<double> q;
};

struct TrajectorySpec {
    Model model = Model::single;
    double energy = 1.0;
    double omega = 1.0;
    std::vector<double> phases{0.0};
    /// Double model only: (A, B) with ½ω²(A² + B²) = E.
    std::vector<double> amplitudes;

    std::vector<double> resolved_amplitudes() const {
        if (!(energy > 0.0)) throw std::invalid_argument("TrajectorySpec: energy must be > 0");
        if (!(omega > 0.0)) throw std::invalid_argument("TrajectorySpec: omega must be > 0");
        const std::size_t modes = model == Model::single ? 1 : 2;
        if (phases.size() != modes) throw std::invalid_argument("TrajectorySpec: one phase per oscillator");
        if (model == Model::single) return {std::sqrt(2.0 * energy) / omega};
        if (amplitudes.size() != 2) throw std::invalid_argument("TrajectorySpec: double model needs two amplitudes");
        const double e = 0.5 * omega * omega * (amplitudes[0] * amplitudes[0] + amplitudes[1] * amplitudes[1]);
        if (std::abs(e - energy) > 1e-10)
            throw std::invalid_argument("TrajectorySpec: amplitude split violates the energy constraint");
        return amplitudes;
    }
};

/// Σ_k ½(p_k² + ω² q_k²) − E.
inline double constraint_value(const ClassicalState& s, double omega, double energy) {
    double h = 0.0;
    for (std::size_t k = 0; k < s.p.size(); ++k) h += 0.5 * (s.p[k] * s.p[k] + omega * omega * s.q[k] * s.q[k]);
    return h - energy;
}

inline ClassicalState state_at(const TrajectorySpec& spec, const std::vector<double>& amps, double t, double tau) {
    ClassicalState s{t, tau, {}, {}};
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const double ph = spec.omega * tau + spec.phases[k];
        s.q.push_back(amps[k] * std::cos(ph));
        s.p.push_back(amps[k] * spec.omega * std::sin(ph));
    }
    return s;
}

inline std::vector<ClassicalState> classical_trajectory(const TrajectorySpec& spec, const Lapse& lapse) {
    const auto amps = spec.resolved_amplitudes();
    const auto tau = lapse.proper_times();
    std::vector<ClassicalState> out;
    out.reserve(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) out.push_back(state_at(spec, amps, lapse.t[i], tau[i]));
    return out;
}

/// Phase ωτ + φ of oscillator k, recovered from the state.
inline double oscillator_phase(const ClassicalState& s, std::size_t k, double omega) {
    return std::atan2(s.p[k] / omega, s.q[k]);
}

/// Gauge-invariant relative phase of the double oscillator, wrapped to (−π, π].
inline double relative_phase(const ClassicalState& s, double omega) {
    const double d = oscillator_phase(s, 0, omega) - oscillator_phase(s, 1, omega);
    return std::remainder(d, 2.0 * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// s-coordinates

/// Rescaled phase-space point (p1, q1, p2, q2).
using Point4 = std::array<double, 4>;

struct SCoords {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s0 = 0.0;
};

inline SCoords s_coordinates(const Point4& x) {
    const auto [p1, q1, p2, q2] = x;
    return {0.5 * (p1 * p2 + q1 * q2), 0.5 * (p2 * q1 - p1 * q2), 0.25 * (p1 * p1 + q1 * q1 - p2 * p2 - q2 * q2),
            0.25 * (p1 * p1 + q1 * q1 + p2 * p2 + q2 * q2)};
}

inline Point4 rescaled_point(const ClassicalState& s, double omega, double hbar) {
    if (s.p.size() != 2) throw std::invalid_argument("rescaled_point: two-oscillator state required");
    const double sp = 1.0 / std::sqrt(omega * hbar), sq = std::sqrt(omega / hbar);
    return {s.p[0] * sp, s.q[0] * sq, s.p[1] * sp, s.q[1] * sq};
}

inline SCoords s_coordinates(const ClassicalState& s, double omega, double hbar) {
    return s_coordinates(rescaled_point(s, omega, hbar));
}

/// Rescaled double-oscillator constraint ½(r1² + r2²) − ½S².
inline double rescaled_constraint(const Point4& x, double s2) {
    return 0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]) - 0.5 * s2;
}

/// {f, g} = Σ_i ∂f/∂q_i ∂g/∂p_i − ∂f/∂p_i ∂g/∂q_i by central differences.
inline double poisson_bracket_fd(const std::function<double(const Point4&)>& f,
                                 const std::function<double(const Point4&)>& g, const Point4& x, double h = 1e-5) {
    auto d = [&](const std::function<double(const Point4&)>& fn, int i) {
        Point4 a = x, b = x;
        a[static_cast<std::size_t>(i)] += h;
        b[static_cast<std::size_t>(i)] -= h;
        return (fn(a) - fn(b)) / (2.0 * h);
    };
    double r = 0.0;
    // index layout: p1 = 0, q1 = 1, p2 = 2, q2 = 3
    for (int k = 0; k < 2; ++k) {
        const int ip = 2 * k, iq = 2 * k + 1;
        r += d(f, iq) * d(g, ip) - d(f, ip) * d(g, iq);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Reduced phase-space geometry

struct MetricComponents {
    double g_rr = 0.0;
    double g_tt = 0.0;  ///< θθ component
};

/// dσ′² = (1 − r1²/S²)⁻¹ dr1² + r1² dθ1² on the gauge slice θ2 = const.
class ReducedMetric {
public:
    explicit ReducedMetric(double s2) : s2_(s2) {
        if (!(s2 > 0.0)) throw std::invalid_argument("ReducedMetric: S^2 must be > 0");
    }

    double s2() const { return s2_; }
    double radius() const { return std::sqrt(s2_); }

    MetricComponents eval(double r1) const {
        if (!(r1 >= 0.0)) throw std::domain_error("ReducedMetric: r1 must be >= 0");
        if (r1 >= radius()) throw std::domain_error("ReducedMetric: r1 >= S, gauge fixing ill defined");
        return {1.0 / (1.0 - r1 * r1 / s2_), r1 * r1};
    }

    /// Gauss curvature K = −1/(2√(EG)) ∂_r(∂_r G / √(EG)) by nested central
    /// differences of eval().
    double gauss_curvature_fd(double r1, double h_inner = 1e-4, double h_outer = 1e-3) const {
        auto flux = [&](double r) {
            const double gp = (eval(r + h_inner).g_tt - eval(r - h_inner).g_tt) / (2.0 * h_inner);
            const auto m = eval(r);
            return gp / std::sqrt(m.g_rr * m.g_tt);
        };
        const auto m = eval(r1);
        const double dflux = (flux(r1 + h_outer) - flux(r1 - h_outer)) / (2.0 * h_outer);
        return -dflux / (2.0 * std::sqrt(m.g_rr * m.g_tt));
    }

    /// Scalar curvature R = 2K; the closed form is 2/S².
    double scalar_curvature_fd(double r1) const { return 2.0 * gauss_curvature_fd(r1); }
    double scalar_curvature_exact() const { return 2.0 / s2_; }

private:
    double s2_;
};

/// Induced metric of the gauge slice embedded in flat (q1, p1, q2, p2)
/// space, restricted to the constraint, by Richardson-extrapolated central
/// differences of the embedding.
inline std::array<std::array<double, 2>, 2> pullback_metric(double s2, double r1, double theta1, double theta2 = 0.3) {
    auto embed = [&](double r, double th) {
        const double r2 = std::sqrt(s2 - r * r);
        return std::array<double, 4>{r * std::cos(th), r * std::sin(th), r2 * std::cos(theta2), r2 * std::sin(theta2)};
    };
    auto partial = [&](int which) {
        auto diff = [&](double h) {
            const auto a = which == 0 ? embed(r1 + h, theta1) : embed(r1, theta1 + h);
            const auto b = which == 0 ? embed(r1 - h, theta1) : embed(r1, theta1 - h);
            std::array<double, 4> d{};
            for (std::size_t i = 0; i < 4; ++i) d[i] = (a[i] - b[i]) / (2.0 * h);
            return d;
        };
        const double h = 1e-3 * std::max(1e-3, std::min(1.0, std::sqrt(s2) - r1));
        const auto d1 = diff(h), d2 = diff(0.5 * h);
        std::array<double, 4> out{};
        for (std::size_t i = 0; i < 4; ++i) out[i] = (4.0 * d2[i] - d1[i]) / 3.0;
        return out;
    };
    const auto jr = partial(0), jt = partial(1);
    auto dot = [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
    };
    return {{{dot(jr, jr), dot(jr, jt)}, {dot(jt, jr), dot(jt, jt)}}};
}

struct AreaQuantization {
    int n = 0;
    double s2 = 0.0;
    double energy = 0.0;
    double symplectic_area = 0.0;  ///< ∫ dp1 ∧ dq1 over the patch, numerically
    double metric_area = 0.0;      ///< ∫ √g dr1 dθ1, numerically
};

/// S² = 2n and E = ħωn. Both patch areas are integrated with the substitution
/// r1 = S√(1 − t²), which removes the 1/√(1 − r1²/S²) endpoint singularity.
inline AreaQuantization area_quantization(int n, double omega = 1.0, double hbar = 1.0, int nodes = 64) {
    if (n < 1) throw std::invalid_argument("area_quantization: n must be >= 1 (S = 0 is excluded)");
    AreaQuantization a;
    a.n = n;
    a.s2 = 2.0 * n;
    a.energy = 0.5 * hbar * omega * a.s2;
    const ReducedMetric metric(a.s2);
    const double s = metric.radius();
    const auto gl = quad::gauss_legendre(nodes);
    double sym = 0.0, met = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double t = 0.5 * (gl.nodes[i] + 1.0);
        const double w = 0.5 * gl.weights[i];
        const double r = s * std::sqrt(1.0 - t * t);
        const double jac = s * t / std::sqrt(1.0 - t * t);
        const auto g = metric.eval(r);
        sym += w * r * jac;
        met += w * std::sqrt(g.g_rr * g.g_tt) * jac;
    }
    a.symplectic_area = 2.0 * std::numbers::pi * sym;
    a.metric_area = 2.0 * std::numbers::pi * met;
    return a;
}

struct EnergySpectra {
    std::vector<double> dirac;    ///< ħω(m′ + 1), m′ = 0, 1, ...
    std::vector<double> reduced;  ///< ħωn, n = 1, 2, ... (single gauge patch)
};

/// The two quantizations agree level by level on one patch; including the
/// excluded point with a second patch shifts the reduced ground state, which
/// is not modelled here.
inline EnergySpectra energy_spectra(int count, double omega = 1.0, double hbar = 1.0) {
    EnergySpectra s;
    for (int k = 0; k < count; ++k) {
        s.dirac.push_back(hbar * omega * (k + 1));
        s.reduced.push_back(hbar * omega * (k + 1));
    }
    return s;
}

}  // namespace csq
