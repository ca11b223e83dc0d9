/**
 * @file coherent.hpp
 * @brief Canonical coherent states on a truncated Fock space.
 *
 * Labels carry (p, q) together with ω and ħ; the complex coordinate is
 * α = √(ω/2ħ) q + i p / √(2ωħ). The fiducial vector is the oscillator ground
 * state and the free phase in the displacement is fixed to zero, so
 * |α⟩ = e^{-|α|²/2} Σ αⁿ/√(n!) |n⟩.
 *
 * The resolution of unity uses the measure dp dq / (2πħ) = d²α / π and a
 * midpoint product rule over equal-area rings (u = |α|², angle φ).
 */
#pragma once

#include "csq/fock.hpp"
#include "csq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace csq {

class CoherentLabel {
public:
    CoherentLabel() = default;

    static CoherentLabel from_alpha(cplx alpha, double omega = 1.0, double hbar = 1.0) {
        check_units(omega, hbar);
        CoherentLabel l;
        l.alpha_ = alpha;
        l.omega_ = omega;
        l.hbar_ = hbar;
        return l;
    }

    static CoherentLabel from_pq(double p, double q, double omega = 1.0, double hbar = 1.0) {
        check_units(omega, hbar);
        return from_alpha(cplx(std::sqrt(omega / (2.0 * hbar)) * q, p / std::sqrt(2.0 * omega * hbar)), omega, hbar);
    }

    cplx alpha() const noexcept { return alpha_; }
    double q() const noexcept { return alpha_.real() * std::sqrt(2.0 * hbar_ / omega_); }
    double p() const noexcept { return alpha_.imag() * std::sqrt(2.0 * omega_ * hbar_); }
    double omega() const noexcept { return omega_; }
    double hbar() const noexcept { return hbar_; }

private:
    static void check_units(double omega, double hbar) {
        if (!(omega > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("CoherentLabel: omega and hbar must be > 0");
    }

    cplx alpha_{};
    double omega_ = 1.0;
    double hbar_ = 1.0;
};

struct KernelValue {
    cplx value;

    double magnitude() const { return std::abs(value); }
    double phase() const { return std::arg(value); }
};

inline constexpr double kLeakageWarn = 1e-10;
inline constexpr double kLeakageError = 1e-6;

/// Probability weight a single-mode coherent state loses above the cutoff:
/// e^{-|α|²} Σ_{n>nmax} |α|^{2n}/n!.
inline double coherent_leakage(cplx alpha, int nmax) {
    const double x = std::norm(alpha);
    if (x == 0.0) return 0.0;
    double logt = (nmax + 1) * std::log(x) - std::lgamma(nmax + 2.0) - x;
    double sum = 0.0;
    for (int n = nmax + 1; n < nmax + 100000; ++n) {
        const double t = std::exp(logt);
        sum += t;
        if (n > x && t < 1e-18 * std::max(sum, 1e-300)) break;
        logt += std::log(x) - std::log(n + 1.0);
    }
    return sum;
}

/// Combined leakage for a product state over several modes.
inline double coherent_leakage(std::span<const cplx> alphas, int nmax) {
    double kept = 1.0;
    for (cplx a : alphas) kept *= 1.0 - coherent_leakage(a, nmax);
    return 1.0 - kept;
}

/// Amplitudes e^{-|α|²/2} αⁿ/√(n!) for n = 0..nmax.
inline CVector coherent_amplitudes(cplx alpha, int nmax) {
    CVector c(nmax + 1);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= nmax; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
    return c;
}

/// Product coherent state ⊗_k |α_k⟩. Throws if the truncation drops more
/// than 1e-6 of the norm; callers wanting the 1e-10 warning level should
/// query coherent_leakage themselves.
inline FockVector coherent_vector(const FockSpace& space, std::span<const cplx> alphas) {
    if (alphas.size() != static_cast<std::size_t>(space.modes()))
        throw std::invalid_argument("coherent_vector: need one alpha per mode");
    const double leak = coherent_leakage(alphas, space.nmax());
    if (leak > kLeakageError)
        throw std::domain_error("coherent_vector: truncation leakage " + std::to_string(leak) +
                                " exceeds 1e-6; raise nmax");
    std::vector<CVector> per;
    per.reserve(alphas.size());
    for (cplx a : alphas) per.push_back(coherent_amplitudes(a, space.nmax()));
    FockVector v = FockVector::zero(space);
    for (std::size_t i = 0; i < space.dim(); ++i) {
        cplx amp = 1.0;
        for (int k = 0; k < space.modes(); ++k) amp *= per[static_cast<std::size_t>(k)](space.occupation(i, k));
        v.amps(static_cast<Eigen::Index>(i)) = amp;
    }
    return v;
}

inline FockVector coherent_vector(const FockSpace& space, cplx alpha) {
    return coherent_vector(space, std::span<const cplx>(&alpha, 1));
}

/// Closed-form overlap ⟨l1|l2⟩. In dimensionless coordinates u = √ω q,
/// v = p/√ω the value is exp{−[(Δu)² + (Δv)²]/4ħ + (i/2ħ)(u1 v2 − v1 u2)}.
inline KernelValue overlap_analytic(const CoherentLabel& l1, const CoherentLabel& l2) {
    if (l1.hbar() != l2.hbar() || l1.omega() != l2.omega())
        throw std::invalid_argument("overlap_analytic: labels use different hbar/omega");
    const double hbar = l1.hbar();
    const double sw = std::sqrt(l1.omega());
    const double u1 = sw * l1.q(), v1 = l1.p() / sw;
    const double u2 = sw * l2.q(), v2 = l2.p() / sw;
    const double du = u1 - u2, dv = v1 - v2;
    const double re = -(du * du + dv * dv) / (4.0 * hbar);
    const double im = (u1 * v2 - v1 * u2) / (2.0 * hbar);
    return {std::exp(cplx(re, im))};
}

/// Same kernel in α form: exp(−|α1|²/2 − |α2|²/2 + conj(α1) α2).
inline cplx overlap_alpha(cplx a1, cplx a2) {
    return std::exp(-0.5 * std::norm(a1) - 0.5 * std::norm(a2) + std::conj(a1) * a2);
}

/// Polar midpoint grid on the disc |α| <= R. Rings are equally spaced in
/// u = |α|²; angles are uniform.
struct PolarGrid {
    double radius = 8.0;
    int n_radial = 0;  ///< rings in u = |α|²
    int n_angular = 0;

    struct Node {
        cplx alpha;
        double weight;  ///< includes the 1/π of d²α/π
    };

    double du() const { return radius * radius / n_radial; }
    double dphi() const { return 2.0 * std::numbers::pi / n_angular; }

    double u_at(int i) const { return (i + 0.5) * du(); }
    double phi_at(int k) const { return (k + 0.5) * dphi(); }

    /// Points per phase-space unit cell (area 2πħ, i.e. π in the α-plane).
    double points_per_cell() const {
        return static_cast<double>(n_radial) * n_angular / (radius * radius);
    }

    void validate() const {
        if (!(radius > 0.0)) throw std::invalid_argument("PolarGrid: radius must be > 0");
        if (n_radial < 1 || n_angular < 1) throw std::invalid_argument("PolarGrid: node counts must be >= 1");
        if (points_per_cell() < 2.0)
            throw std::invalid_argument("PolarGrid: fewer than 2 points per phase-space unit cell");
    }

    std::vector<Node> nodes() const {
        validate();
        std::vector<Node> out;
        out.reserve(static_cast<std::size_t>(n_radial) * static_cast<std::size_t>(n_angular));
        // d²α/π = du dφ / 2π
        const double w = du() * dphi() / (2.0 * std::numbers::pi);
        for (int i = 0; i < n_radial; ++i) {
            const double r = std::sqrt(u_at(i));
            for (int k = 0; k < n_angular; ++k) out.push_back({std::polar(r, phi_at(k)), w});
        }
        return out;
    }
};

/// Default grid: 256 rings per unit of R² and 8·nmax angles.
inline PolarGrid default_polar_grid(double radius, int nmax) {
    PolarGrid g;
    g.radius = radius;
    g.n_radial = std::max(64, static_cast<int>(std::ceil(256.0 * radius * radius)));
    g.n_angular = std::max(16, 8 * nmax);
    return g;
}

struct ResolutionReport {
    CMatrix m;  ///< quadrature of |α⟩⟨α| d²α/π on the truncated space
    int n_keep = 0;
    double residual = 0.0;  ///< max |M − 1| on the n <= n_keep block

    /// Max |M − 1| restricted to n <= block.
    double residual_on(int block) const {
        const Eigen::Index b = block + 1;
        return (m.topLeftCorner(b, b) - CMatrix::Identity(b, b)).cwiseAbs().maxCoeff();
    }
};

/// Resolution of unity on a single-mode space.
///
/// The sum over the product grid factorizes into an angular factor
/// A_k = Σ_φ e^{ikφ} Δφ and a radial factor per total power, which is
/// algebraically identical to accumulating |α⟩⟨α| node by node.
inline ResolutionReport resolution_of_unity_check(const FockSpace& space, const PolarGrid& grid) {
    if (space.modes() != 1) throw std::invalid_argument("resolution_of_unity_check: single-mode space required");
    grid.validate();
    const int nmax = space.nmax();

    std::vector<cplx> ang(static_cast<std::size_t>(2 * nmax + 1));
    for (int k = -nmax; k <= nmax; ++k) {
        cplx s = 0.0;
        for (int j = 0; j < grid.n_angular; ++j) s += std::exp(cplx(0.0, k * grid.phi_at(j)));
        ang[static_cast<std::size_t>(k + nmax)] = s * grid.dphi();
    }
    // rad[s] = Σ_u e^{-u} u^{s/2} du, s = m + n
    std::vector<double> rad(static_cast<std::size_t>(2 * nmax + 1), 0.0);
    for (int i = 0; i < grid.n_radial; ++i) {
        const double u = grid.u_at(i);
        const double lu = std::log(u);
        for (int s = 0; s <= 2 * nmax; ++s) rad[static_cast<std::size_t>(s)] += std::exp(0.5 * s * lu - u);
    }
    for (double& r : rad) r *= grid.du();

    ResolutionReport rep;
    rep.m = CMatrix::Zero(nmax + 1, nmax + 1);
    for (int m = 0; m <= nmax; ++m)
        for (int n = 0; n <= nmax; ++n) {
            const double norm = std::exp(-0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0)));
            // ⟨m|α⟩⟨α|n⟩ carries e^{i(m−n)φ}
            rep.m(m, n) = rad[static_cast<std::size_t>(m + n)] * norm * ang[static_cast<std::size_t>(m - n + nmax)] /
                          (2.0 * std::numbers::pi);
        }
    // n_keep: largest n whose radial tail beyond R is below 1e-8.
    const double r2 = grid.radius * grid.radius;
    rep.n_keep = -1;
    for (int n = 0; n <= nmax; ++n) {
        if (quad::gamma_q_int(n, r2) < 1e-8) rep.n_keep = n;
        else break;
    }
    rep.residual = rep.n_keep >= 0 ? rep.residual_on(rep.n_keep) : 0.0;
    return rep;
}

/// ψ(β) ≈ Σ_nodes w K(β, α) ψ(α): reproduce function values at probe points
/// from samples on the grid nodes.
inline std::vector<cplx> reproducing_propagation(const PolarGrid& grid, std::span<const cplx> samples,
                                                 std::span<const cplx> probes) {
    const auto nodes = grid.nodes();
    if (samples.size() != nodes.size())
        throw std::invalid_argument("reproducing_propagation: one sample per grid node required");
    std::vector<cplx> out;
    out.reserve(probes.size());
    for (cplx beta : probes) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            acc += nodes[i].weight * overlap_alpha(beta, nodes[i].alpha) * samples[i];
        out.push_back(acc);
    }
    return out;
}

/// Samples ⟨α|ψ⟩ of a single-mode Fock vector at every grid node.
inline std::vector<cplx> sample_on_grid(const PolarGrid& grid, const FockVector& psi) {
    if (psi.space.modes() != 1) throw std::invalid_argument("sample_on_grid: single-mode vector required");
    std::vector<cplx> out;
    for (const auto& node : grid.nodes()) {
        const CVector c = coherent_amplitudes(node.alpha, psi.space.nmax());
        out.push_back(c.dot(psi.amps));
    }
    return out;
}

}  // namespace csq
