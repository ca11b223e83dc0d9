// Quadrature rules and special functions shared by the coherent-state,
// projector, spin and Wiener modules.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace csq::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {
// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
// mu0 times the squared first eigenvector components.
inline Rule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
    const Eigen::Index n = offdiag.size() + 1;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) j(i, i + 1) = j(i + 1, i) = offdiag(i);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    Rule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        r.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        r.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
    }
    return r;
}
}  // namespace detail

/// Gauss-Legendre on [-1, 1].
inline Rule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    if (n == 1) return {{0.0}, {2.0}};
    Eigen::VectorXd b(n - 1);
    for (int k = 1; k < n; ++k) b(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    return detail::golub_welsch(b, 2.0);
}

/// Gauss-Hermite for weight exp(-x^2) on the real line.
inline Rule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
    if (n == 1) return {{0.0}, {std::sqrt(std::numbers::pi)}};
    Eigen::VectorXd b(n - 1);
    for (int k = 1; k < n; ++k) b(k - 1) = std::sqrt(k / 2.0);
    return detail::golub_welsch(b, std::sqrt(std::numbers::pi));
}

/// Composite Simpson on [a, b] with an even number of intervals.
template <class F>
auto simpson(F&& f, double a, double b, int intervals) {
    if (intervals < 2 || intervals % 2 != 0) throw std::invalid_argument("simpson: interval count must be even and >= 2");
    const double h = (b - a) / intervals;
    auto sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    return sum * (h / 3.0);
}

/// Si(x) = ∫_0^x sin t / t dt via its power series (|x| <= ~20).
inline double sine_integral_series(double x) {
    double term = x, sum = x;
    const double x2 = x * x;
    for (int k = 1; k < 200; ++k) {
        term *= -x2 * (2.0 * k - 1.0) / ((2.0 * k) * (2.0 * k + 1.0) * (2.0 * k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

/// ∫_x^∞ sin t / t dt for x > 0.
///
/// Up to x = 2 uses π/2 − Si(x) from the series; above it the continued
/// fraction of E1(ix) evaluated by the modified Lentz method, which keeps full
/// relative precision for large x.
inline double sine_integral_tail(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("sine_integral_tail: x must be > 0");
    if (x <= 2.0) return std::numbers::pi / 2.0 - sine_integral_series(x);
    using C = std::complex<double>;
    constexpr double tiny = 1e-300;
    C b(1.0, x), c(1.0 / tiny, 0.0), d = 1.0 / b, h = d;
    for (int i = 2; i < 100000; ++i) {
        const double a = -static_cast<double>((i - 1) * (i - 1));
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const C del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    // E1(ix) = e^{−ix} h and ∫_x^∞ sin t/t dt = −Im E1(ix)
    return -(C(std::cos(x), -std::sin(x)) * h).imag();
}

/// Regularized upper incomplete gamma Q(n+1, x) = e^{-x} Σ_{k<=n} x^k/k!.
inline double gamma_q_int(int n, double x) {
    if (n < 0 || x < 0.0) throw std::invalid_argument("gamma_q_int: need n >= 0 and x >= 0");
    if (x == 0.0) return 1.0;
    // Sum in log space from the largest term outward to avoid overflow.
    const double logx = std::log(x);
    std::vector<double> logs(static_cast<std::size_t>(n) + 1);
    double mx = -INFINITY;
    for (int k = 0; k <= n; ++k) {
        logs[static_cast<std::size_t>(k)] = k * logx - std::lgamma(k + 1.0) - x;
        mx = std::max(mx, logs[static_cast<std::size_t>(k)]);
    }
    double s = 0.0;
    for (double l : logs) s += std::exp(l - mx);
    return std::min(1.0, s * std::exp(mx));
}

}  // namespace csq::quad
