/**
 * @file spin.hpp
 * @brief Schwinger spin operators on two modes, the m′-sector ↔ |j, m⟩ map,
 *        and SU(2) coherent states in the stereographic label ξ.
 *
 * Spins are carried as two_j = 2j so half-integers stay exact. Sector m′
 * (total occupation) maps to j = m′/2 with m = n − j, where n is the mode-a
 * occupation; S+ = a†b raises m.
 */
#pragma once

#include "csq/coherent.hpp"
#include "csq/fock.hpp"
#include "csq/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace csq {

struct SpinOperators {
    LinearOperator s1, s2, s3, s0;
};

inline SpinOperators schwinger_operators(const FockSpace& space) {
    if (space.modes() != 2) throw std::invalid_argument("schwinger_operators: two-mode space required");
    auto [a, ad] = ladder(space, 0);
    auto [b, bd] = ladder(space, 1);
    const LinearOperator ab_dag = a * bd;  // a b†
    const LinearOperator a_dag_b = ad * b; // a† b
    return {
        cplx(0.5) * (ab_dag + a_dag_b),
        cplx(0.0, 0.5) * (ab_dag - a_dag_b),
        cplx(0.5) * (number_op(space, 0) - number_op(space, 1)),
        cplx(0.5) * total_number_op(space),
    };
}

/// Fock indices of the m′ sector ordered by m = −j..j.
struct SpinSector {
    int two_j = 0;
    std::vector<std::size_t> fock_index;

    double j() const { return 0.5 * two_j; }
    int size() const { return two_j + 1; }
    /// magnetic number of position k (k = j + m)
    double m_at(int k) const { return k - j(); }
};

inline SpinSector basis_map(const FockSpace& space, int mprime) {
    if (space.modes() != 2) throw std::invalid_argument("basis_map: two-mode space required");
    if (mprime < 0) throw std::invalid_argument("basis_map: m' must be >= 0");
    if (mprime > space.nmax())
        throw std::out_of_range("basis_map: sector m'=" + std::to_string(mprime) + " is truncated (nmax=" +
                                std::to_string(space.nmax()) + ")");
    SpinSector s;
    s.two_j = mprime;
    for (int n = 0; n <= mprime; ++n) s.fock_index.push_back(space.index_of({n, mprime - n}));
    return s;
}

/// Matrix of op restricted to a sector, in the |j, m⟩ basis.
inline CMatrix restrict_to(const LinearOperator& op, const SpinSector& s) {
    CMatrix out(s.size(), s.size());
    for (int r = 0; r < s.size(); ++r)
        for (int c = 0; c < s.size(); ++c)
            out(r, c) = op.mat(static_cast<Eigen::Index>(s.fock_index[static_cast<std::size_t>(r)]),
                               static_cast<Eigen::Index>(s.fock_index[static_cast<std::size_t>(c)]));
    return out;
}

/// Standard spin-j matrices (Jz, J+, J-) in the m = −j..j basis.
struct SpinMatrices {
    CMatrix jz, jp, jm;

    CMatrix jx() const { return 0.5 * (jp + jm); }
    CMatrix jy() const { return cplx(0.0, -0.5) * (jp - jm); }
};

inline SpinMatrices spin_matrices(int two_j) {
    if (two_j < 0) throw std::invalid_argument("spin_matrices: j must be >= 0");
    const int d = two_j + 1;
    const double j = 0.5 * two_j;
    SpinMatrices s{CMatrix::Zero(d, d), CMatrix::Zero(d, d), CMatrix::Zero(d, d)};
    for (int k = 0; k < d; ++k) {
        const double m = k - j;
        s.jz(k, k) = m;
        if (k + 1 < d) s.jp(k + 1, k) = std::sqrt((j - m) * (j + m + 1.0));
        if (k > 0) s.jm(k - 1, k) = std::sqrt((j + m) * (j - m + 1.0));
    }
    return s;
}

struct SpinState {
    int two_j = 0;
    CVector amps;  ///< index k = j + m

    double j() const { return 0.5 * two_j; }
};

/// |ξ⟩ = (1+|ξ|²)^{−j} Σ_m √C(2j, j+m) ξ^{j+m} |j, m⟩.
inline SpinState su2_coherent(int two_j, cplx xi) {
    if (two_j < 0) throw std::invalid_argument("su2_coherent: j must be >= 0");
    const double s = std::sqrt(1.0 + std::norm(xi));
    // amp_k = √C · (ξ/s)^k · (1/s)^{2j−k}; bounded for any ξ.
    SpinState st{two_j, CVector(two_j + 1)};
    for (int k = 0; k <= two_j; ++k) {
        const double logc = std::lgamma(two_j + 1.0) - std::lgamma(k + 1.0) - std::lgamma(two_j - k + 1.0);
        st.amps(k) = std::exp(0.5 * logc) * ipow(xi / s, k) * std::pow(1.0 / s, two_j - k);
    }
    return st;
}

/// ⟨ξ1|ξ2⟩ = (1+|ξ1|²)^{−j}(1+|ξ2|²)^{−j}(1+conj(ξ1)ξ2)^{2j}.
inline KernelValue su2_overlap(int two_j, cplx xi1, cplx xi2) {
    const double j = 0.5 * two_j;
    const cplx v = std::pow(1.0 + std::norm(xi1), -j) * std::pow(1.0 + std::norm(xi2), -j) *
                   ipow(1.0 + std::conj(xi1) * xi2, two_j);
    return {v};
}

/// Embed a spin state into the two-mode Fock space through the basis map.
inline FockVector embed(const FockSpace& space, const SpinState& st) {
    const SpinSector sec = basis_map(space, st.two_j);
    FockVector v = FockVector::zero(space);
    for (int k = 0; k < sec.size(); ++k) v.amps(static_cast<Eigen::Index>(sec.fock_index[static_cast<std::size_t>(k)])) = st.amps(k);
    return v;
}

struct SpinResolutionReport {
    CMatrix m;
    double residual = 0.0;  ///< max |M − 1|
};

/// Minimum node count per direction accepted by su2_resolution_check.
inline int su2_min_nodes(int two_j) { return 2 * two_j + 4; }

/// ∫ (2j+1)/π d²ξ/(1+|ξ|²)² |ξ⟩⟨ξ| with ξ = tan(θ/2) e^{iφ}, which turns the
/// measure into (2j+1)/(4π) sinθ dθ dφ. Gauss-Legendre in cosθ, uniform φ.
inline SpinResolutionReport su2_resolution_check(int two_j, int n_theta, int n_phi) {
    const int need = su2_min_nodes(two_j);
    if (n_theta < need || n_phi < need)
        throw std::invalid_argument("su2_resolution_check: under-resolved grid; use at least " + std::to_string(need) +
                                    " theta nodes and " + std::to_string(need) + " phi nodes");
    const auto gl = quad::gauss_legendre(n_theta);
    const int d = two_j + 1;
    SpinResolutionReport rep{CMatrix::Zero(d, d), 0.0};
    const double dphi = 2.0 * std::numbers::pi / n_phi;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double theta = std::acos(gl.nodes[i]);
        const double t = std::tan(0.5 * theta);
        for (int k = 0; k < n_phi; ++k) {
            const SpinState st = su2_coherent(two_j, std::polar(t, (k + 0.5) * dphi));
            rep.m += (gl.weights[i] * dphi * (two_j + 1.0) / (4.0 * std::numbers::pi)) * (st.amps * st.amps.adjoint());
        }
    }
    rep.residual = (rep.m - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    return rep;
}

struct UncertaintyReport {
    double var_product = 0.0;     ///< Var(S1)·Var(S2)
    double bound_s3 = 0.0;        ///< ¼|⟨S3⟩|²
    double bound_s0 = 0.0;        ///< ¼⟨S0⟩² = j²/4
    double rotated_product = 0.0; ///< Var along two axes ⊥ ⟨S⟩
    double rotated_ratio = 0.0;   ///< rotated_product / (¼|⟨S⟩|²)
    std::array<double, 3> mean{};
};

inline UncertaintyReport uncertainty_product(int two_j, cplx xi) {
    const SpinState st = su2_coherent(two_j, xi);
    const SpinMatrices sm = spin_matrices(two_j);
    const std::array<CMatrix, 3> ops{sm.jx(), sm.jy(), sm.jz};
    auto expect = [&](const CMatrix& o) { return st.amps.dot(o * st.amps).real(); };
    UncertaintyReport r;
    for (int i = 0; i < 3; ++i) r.mean[static_cast<std::size_t>(i)] = expect(ops[static_cast<std::size_t>(i)]);
    auto var = [&](const CMatrix& o) {
        const double m = expect(o);
        return expect(o * o) - m * m;
    };
    r.var_product = var(ops[0]) * var(ops[1]);
    r.bound_s3 = 0.25 * r.mean[2] * r.mean[2];
    r.bound_s0 = 0.25 * st.j() * st.j();

    const Eigen::Vector3d n(r.mean[0], r.mean[1], r.mean[2]);
    const double len = n.norm();
    if (len == 0.0) return r;  // j = 0
    // Two orthonormal axes perpendicular to the mean spin.
    const Eigen::Vector3d u = n / len;
    Eigen::Vector3d e1 = std::abs(u.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    e1 = (e1 - e1.dot(u) * u).normalized();
    const Eigen::Vector3d e2 = u.cross(e1);
    auto along = [&](const Eigen::Vector3d& e) { return CMatrix(e.x() * ops[0] + e.y() * ops[1] + e.z() * ops[2]); };
    r.rotated_product = var(along(e1)) * var(along(e2));
    r.rotated_ratio = r.rotated_product / (0.25 * len * len);
    return r;
}

}  // namespace csq
