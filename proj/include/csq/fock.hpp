/**
 * @file fock.hpp
 * @brief Truncated multi-mode Fock space: basis bookkeeping, ladder and
 *        number operators, and dense operator algebra.
 *
 * Basis ordering is fixed: mode 0 varies fastest, so the occupation tuple
 * (n_0, n_1, ...) sits at index n_0 + (nmax+1) n_1 + (nmax+1)^2 n_2 + ...
 * Every file format and every test in this project relies on that order.
 *
 * Truncation: each mode keeps occupations 0..nmax. The creation operator
 * drops amplitude that would leave the top level, so canonical identities
 * such as [a, a†] = 1 only hold on rows below the cutoff.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csq {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxFockDim = 1'000'000;

/// z^n by repeated squaring; exact at z = 0.
inline cplx ipow(cplx z, int n) {
    if (n < 0) return 1.0 / ipow(z, -n);
    cplx r = 1.0;
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

class FockSpace {
public:
    FockSpace(int modes, int nmax) : modes_(modes), nmax_(nmax) {
        if (modes < 1) throw std::invalid_argument("FockSpace: modes must be >= 1");
        if (nmax < 1) throw std::invalid_argument("FockSpace: nmax must be >= 1");
        std::size_t d = 1;
        for (int k = 0; k < modes; ++k) {
            d *= static_cast<std::size_t>(nmax + 1);
            if (d > kMaxFockDim)
                throw std::invalid_argument("FockSpace: dimension exceeds 1e6 resource guard");
        }
        dim_ = d;
    }

    int modes() const noexcept { return modes_; }
    int nmax() const noexcept { return nmax_; }
    std::size_t dim() const noexcept { return dim_; }

    /// Index stride of a mode in the flattened basis.
    std::size_t stride(int mode) const {
        check_mode(mode);
        std::size_t s = 1;
        for (int k = 0; k < mode; ++k) s *= static_cast<std::size_t>(nmax_ + 1);
        return s;
    }

    std::vector<int> occupation(std::size_t index) const {
        if (index >= dim_) throw std::out_of_range("FockSpace::occupation: index out of range");
        std::vector<int> occ(static_cast<std::size_t>(modes_));
        for (int k = 0; k < modes_; ++k) {
            occ[static_cast<std::size_t>(k)] = static_cast<int>(index % static_cast<std::size_t>(nmax_ + 1));
            index /= static_cast<std::size_t>(nmax_ + 1);
        }
        return occ;
    }

    int occupation(std::size_t index, int mode) const {
        return static_cast<int>((index / stride(mode)) % static_cast<std::size_t>(nmax_ + 1));
    }

    std::size_t index_of(const std::vector<int>& occ) const {
        if (occ.size() != static_cast<std::size_t>(modes_))
            throw std::invalid_argument("FockSpace::index_of: occupation tuple has wrong length");
        std::size_t idx = 0;
        for (int k = modes_ - 1; k >= 0; --k) {
            const int n = occ[static_cast<std::size_t>(k)];
            if (n < 0 || n > nmax_) throw std::out_of_range("FockSpace::index_of: occupation outside [0, nmax]");
            idx = idx * static_cast<std::size_t>(nmax_ + 1) + static_cast<std::size_t>(n);
        }
        return idx;
    }

    /// Total occupation summed over modes.
    int total(std::size_t index) const {
        int s = 0;
        for (int k = 0; k < modes_; ++k) {
            s += static_cast<int>(index % static_cast<std::size_t>(nmax_ + 1));
            index /= static_cast<std::size_t>(nmax_ + 1);
        }
        return s;
    }

    void check_mode(int mode) const {
        if (mode < 0 || mode >= modes_)
            throw std::out_of_range("FockSpace: mode " + std::to_string(mode) + " out of range");
    }

    friend bool operator==(const FockSpace& a, const FockSpace& b) noexcept {
        return a.modes_ == b.modes_ && a.nmax_ == b.nmax_;
    }

private:
    int modes_;
    int nmax_;
    std::size_t dim_ = 0;
};

inline FockSpace make_space(int modes, int nmax) { return FockSpace(modes, nmax); }

struct FockVector {
    FockSpace space;
    CVector amps;

    FockVector(FockSpace s, CVector a) : space(s), amps(std::move(a)) {
        if (static_cast<std::size_t>(amps.size()) != space.dim())
            throw std::invalid_argument("FockVector: amplitude length does not match space dimension");
    }

    static FockVector zero(const FockSpace& s) {
        return {s, CVector::Zero(static_cast<Eigen::Index>(s.dim()))};
    }

    static FockVector basis(const FockSpace& s, const std::vector<int>& occ) {
        FockVector v = zero(s);
        v.amps(static_cast<Eigen::Index>(s.index_of(occ))) = 1.0;
        return v;
    }

    double norm() const { return amps.norm(); }

    /// Normalized means ‖v‖ within 1e-10 of one.
    bool normalized() const {
        const double n = norm();
        return n >= 1.0 - 1e-10 && n <= 1.0 + 1e-10;
    }

    cplx operator[](const std::vector<int>& occ) const {
        return amps(static_cast<Eigen::Index>(space.index_of(occ)));
    }
};

/// ⟨u|v⟩, antilinear in the first argument.
inline cplx inner(const FockVector& u, const FockVector& v) {
    if (!(u.space == v.space)) throw std::invalid_argument("inner: space mismatch");
    return u.amps.dot(v.amps);
}

struct LinearOperator {
    FockSpace space;
    CMatrix mat;

    LinearOperator(FockSpace s, CMatrix m) : space(s), mat(std::move(m)) {
        const auto d = static_cast<Eigen::Index>(space.dim());
        if (mat.rows() != d || mat.cols() != d)
            throw std::invalid_argument("LinearOperator: matrix shape does not match space dimension");
    }

    static LinearOperator identity(const FockSpace& s) {
        const auto d = static_cast<Eigen::Index>(s.dim());
        return {s, CMatrix::Identity(d, d)};
    }
    static LinearOperator zero(const FockSpace& s) {
        const auto d = static_cast<Eigen::Index>(s.dim());
        return {s, CMatrix::Zero(d, d)};
    }

    LinearOperator adjoint() const { return {space, mat.adjoint()}; }

    /// max |A − A†| element-wise.
    double hermiticity_residual() const { return (mat - mat.adjoint()).cwiseAbs().maxCoeff(); }
    bool is_hermitian(double tol) const { return hermiticity_residual() <= tol; }

    bool is_diagonal() const {
        for (Eigen::Index j = 0; j < mat.cols(); ++j)
            for (Eigen::Index i = 0; i < mat.rows(); ++i)
                if (i != j && mat(i, j) != cplx{}) return false;
        return true;
    }

    FockVector apply(const FockVector& v) const {
        require_same(v.space, "apply");
        return {space, mat * v.amps};
    }

    void require_same(const FockSpace& other, const char* what) const {
        if (!(space == other)) throw std::invalid_argument(std::string(what) + ": space mismatch");
    }
};

inline LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
    a.require_same(b.space, "operator*");
    return {a.space, a.mat * b.mat};
}
inline LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
    a.require_same(b.space, "operator+");
    return {a.space, a.mat + b.mat};
}
inline LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) {
    a.require_same(b.space, "operator-");
    return {a.space, a.mat - b.mat};
}
inline LinearOperator operator*(cplx s, const LinearOperator& a) { return {a.space, s * a.mat}; }
inline FockVector operator*(const LinearOperator& a, const FockVector& v) { return a.apply(v); }

inline LinearOperator commutator(const LinearOperator& a, const LinearOperator& b) {
    a.require_same(b.space, "commutator");
    return {a.space, a.mat * b.mat - b.mat * a.mat};
}

/// Annihilation and creation operators (a, a†) acting on one mode.
inline std::pair<LinearOperator, LinearOperator> ladder(const FockSpace& space, int mode) {
    space.check_mode(mode);
    LinearOperator a = LinearOperator::zero(space);
    const std::size_t s = space.stride(mode);
    for (std::size_t i = 0; i < space.dim(); ++i) {
        const int n = space.occupation(i, mode);
        if (n > 0) a.mat(static_cast<Eigen::Index>(i - s), static_cast<Eigen::Index>(i)) = std::sqrt(double(n));
    }
    LinearOperator ad = a.adjoint();
    return {std::move(a), std::move(ad)};
}

/// a†a for one mode, built diagonally so eigenvalues are exact integers.
inline LinearOperator number_op(const FockSpace& space, int mode) {
    space.check_mode(mode);
    LinearOperator n = LinearOperator::zero(space);
    for (std::size_t i = 0; i < space.dim(); ++i)
        n.mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = double(space.occupation(i, mode));
    return n;
}

/// Σ_k a_k† a_k.
inline LinearOperator total_number_op(const FockSpace& space) {
    LinearOperator n = LinearOperator::zero(space);
    for (std::size_t i = 0; i < space.dim(); ++i)
        n.mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = double(space.total(i));
    return n;
}

/// ħω(a†a + ½) on one mode.
inline LinearOperator ho_hamiltonian(const FockSpace& space, int mode, double omega = 1.0, double hbar = 1.0) {
    if (!(omega > 0.0)) throw std::invalid_argument("ho_hamiltonian: omega must be > 0");
    if (!(hbar > 0.0)) throw std::invalid_argument("ho_hamiltonian: hbar must be > 0");
    LinearOperator h = number_op(space, mode);
    for (Eigen::Index i = 0; i < h.mat.rows(); ++i) h.mat(i, i) = hbar * omega * (h.mat(i, i).real() + 0.5);
    return h;
}

/// Q = √(ħ/2ω)(a + a†).
inline LinearOperator position_op(const FockSpace& space, int mode, double omega = 1.0, double hbar = 1.0) {
    auto [a, ad] = ladder(space, mode);
    return cplx(std::sqrt(hbar / (2.0 * omega))) * (a + ad);
}

/// P = i√(ħω/2)(a† − a).
inline LinearOperator momentum_op(const FockSpace& space, int mode, double omega = 1.0, double hbar = 1.0) {
    auto [a, ad] = ladder(space, mode);
    return cplx(0.0, std::sqrt(hbar * omega / 2.0)) * (ad - a);
}

/// exp(i s A) for Hermitian A. Diagonal input takes an exact elementwise path.
inline LinearOperator expi_hermitian(const LinearOperator& a, double s) {
    if (a.is_diagonal()) {
        LinearOperator out = LinearOperator::zero(a.space);
        for (Eigen::Index i = 0; i < a.mat.rows(); ++i) out.mat(i, i) = std::exp(cplx(0.0, s * a.mat(i, i).real()));
        return out;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.mat);
    const CVector phases = (cplx(0.0, s) * es.eigenvalues().cast<cplx>()).array().exp();
    return {a.space, es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint()};
}

/// Largest |entry| over rows and columns whose occupations all satisfy keep(index).
template <class Keep>
double masked_max_abs(const CMatrix& m, const FockSpace& space, Keep keep) {
    double r = 0.0;
    for (std::size_t i = 0; i < space.dim(); ++i) {
        if (!keep(i)) continue;
        for (std::size_t j = 0; j < space.dim(); ++j) {
            if (!keep(j)) continue;
            r = std::max(r, std::abs(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        }
    }
    return r;
}

}  // namespace csq
