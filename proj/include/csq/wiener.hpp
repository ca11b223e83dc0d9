/**
 * @file wiener.hpp
 * @brief Discrete-time Wiener-measure tools: heat kernel and its semigroup
 *        rule, pinned (Brownian-bridge) path sampling, and the λ-averaged
 *        projected propagator by quadrature and by Monte Carlo.
 */
#pragma once

#include "csq/coherent.hpp"
#include "csq/fock.hpp"
#include "csq/projector.hpp"
#include "csq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace csq {

/// Worker cap from TOOL_THREADS, else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("TOOL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

using Rng = std::mt19937_64;

/// Independent stream per (seed, stream id).
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

// ---------------------------------------------------------------------------
// Heat kernel

struct HeatKernelParams {
    double nu = 1.0;
    double t1 = 0.0;
    double t2 = 1.0;

    double dt() const { return t2 - t1; }

    void validate() const {
        if (!(nu > 0.0)) throw std::invalid_argument("heat kernel: nu must be > 0");
        if (!(t2 > t1)) throw std::invalid_argument("heat kernel: requires t2 > t1");
    }
};

/// (2πνΔt)^{−d/2} exp(−|x2 − x1|²/2νΔt)
inline double heat_kernel(const HeatKernelParams& p, std::span<const double> x1, std::span<const double> x2) {
    p.validate();
    if (x1.size() != x2.size() || x1.empty()) throw std::invalid_argument("heat kernel: dimension mismatch");
    const double v = p.nu * p.dt();
    double d2 = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) d2 += (x2[i] - x1[i]) * (x2[i] - x1[i]);
    return std::pow(2.0 * std::numbers::pi * v, -0.5 * static_cast<double>(x1.size())) * std::exp(-d2 / (2.0 * v));
}

namespace detail {
/// Tensor Gauss-Hermite sum of f(μ + √(2v) y) (2v)^{d/2} e^{|y|²} w, i.e.
/// ∫ f(x) dx for f close to a Gaussian of variance v centred at μ.
template <class F>
double gh_integrate(std::span<const double> mu, double v, int nodes, F&& f) {
    const auto gh = quad::gauss_hermite(nodes);
    const std::size_t d = mu.size();
    const double s = std::sqrt(2.0 * v);
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> x(d);
    double total = 0.0;
    while (true) {
        double w = 1.0, y2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double y = gh.nodes[idx[k]];
            x[k] = mu[k] + s * y;
            w *= gh.weights[idx[k]];
            y2 += y * y;
        }
        total += w * std::exp(y2) * f(std::span<const double>(x));
        std::size_t k = 0;
        while (k < d && ++idx[k] == gh.nodes.size()) idx[k++] = 0;
        if (k == d) break;
    }
    return total * std::pow(s, static_cast<double>(d));
}
}  // namespace detail

struct KernelMoments {
    double integral = 0.0;  ///< ∫ ρ dx2
    double variance = 0.0;  ///< ∫ (x2 − x1)_0² ρ dx2
};

inline KernelMoments heat_kernel_moments(const HeatKernelParams& p, std::span<const double> x1, int nodes = 20) {
    p.validate();
    const double v = p.nu * p.dt();
    KernelMoments m;
    m.integral = detail::gh_integrate(x1, v, nodes, [&](std::span<const double> x) { return heat_kernel(p, x1, x); });
    m.variance = detail::gh_integrate(x1, v, nodes, [&](std::span<const double> x) {
        return (x[0] - x1[0]) * (x[0] - x1[0]) * heat_kernel(p, x1, x);
    });
    return m;
}

/// ∫ ρ(t3; t2)(x, x3) ρ(t2; t1)(x1, x) dx by Gauss-Hermite centred on the
/// bridge mean, returned with the direct kernel ρ(t3; t1)(x1, x3).
inline std::pair<double, double> semigroup_compose(double nu, double t1, double t2, double t3,
                                                   std::span<const double> x1, std::span<const double> x3,
                                                   int nodes = 16) {
    if (!(t1 < t2 && t2 < t3)) throw std::invalid_argument("semigroup: requires t1 < t2 < t3");
    const HeatKernelParams a{nu, t1, t2}, b{nu, t2, t3}, c{nu, t1, t3};
    const double frac = (t2 - t1) / (t3 - t1);
    std::vector<double> mu(x1.size());
    for (std::size_t k = 0; k < x1.size(); ++k) mu[k] = x1[k] + frac * (x3[k] - x1[k]);
    const double v = nu * (t2 - t1) * (t3 - t2) / (t3 - t1);
    const double composed = detail::gh_integrate(mu, v, nodes, [&](std::span<const double> x) {
        return heat_kernel(b, x, x3) * heat_kernel(a, x1, x);
    });
    return {composed, heat_kernel(c, x1, x3)};
}

struct SemigroupReport {
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;
    int probes = 0;
};

/// Residuals at random endpoint pairs drawn from N(0, 1) per coordinate.
inline SemigroupReport semigroup_check(double nu, double t1, double t2, double t3, int dim = 2, int probes = 10,
                                       std::uint64_t seed = 1, int nodes = 16) {
    if (dim < 1) throw std::invalid_argument("semigroup_check: dim must be >= 1");
    Rng rng = make_rng(seed, 0x5e31);
    std::normal_distribution<double> n01;
    SemigroupReport r;
    r.probes = probes;
    std::vector<double> x1(static_cast<std::size_t>(dim)), x3(static_cast<std::size_t>(dim));
    for (int i = 0; i < probes; ++i) {
        for (auto& x : x1) x = n01(rng);
        for (auto& x : x3) x = n01(rng);
        const auto [comp, direct] = semigroup_compose(nu, t1, t2, t3, x1, x3, nodes);
        r.max_abs_residual = std::max(r.max_abs_residual, std::abs(comp - direct));
        r.max_rel_residual = std::max(r.max_rel_residual, std::abs(comp - direct) / direct);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Pinned paths

struct DiscretePath {
    std::vector<double> times;
    std::vector<std::vector<double>> samples;
    bool pinned_start = true;
    bool pinned_end = true;
};

/// Exact bridge sampling by sequential conditional Gaussians: given x_i at
/// t_i, x_{i+1} ~ N(x_i + h(x_end − x_i)/R, νh(R − h)/R) with R = T − t_i.
inline DiscretePath sample_pinned_path(double nu, double T, std::span<const double> start, std::span<const double> end,
                                       int steps, Rng& rng) {
    if (steps < 1) throw std::invalid_argument("sample_pinned_path: N must be >= 1");
    if (!(nu > 0.0) || !(T > 0.0)) throw std::invalid_argument("sample_pinned_path: nu and T must be > 0");
    if (start.size() != end.size() || start.empty()) throw std::invalid_argument("sample_pinned_path: dimension mismatch");
    std::normal_distribution<double> n01;
    DiscretePath p;
    const double h = T / steps;
    p.samples.reserve(static_cast<std::size_t>(steps) + 1);
    p.samples.emplace_back(start.begin(), start.end());
    p.times.push_back(0.0);
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        p.times.push_back(i + 1 == steps ? T : t + h);
        if (i + 1 == steps) {
            p.samples.emplace_back(end.begin(), end.end());
            break;
        }
        const double rem = T - t;
        const double sd = std::sqrt(nu * h * (rem - h) / rem);
        std::vector<double> next(start.size());
        for (std::size_t k = 0; k < next.size(); ++k) {
            const double x = p.samples.back()[k];
            next[k] = x + h * (end[k] - x) / rem + sd * n01(rng);
        }
        p.samples.push_back(std::move(next));
    }
    return p;
}

struct BridgeMoments {
    std::vector<double> times;
    std::vector<double> mean, mean_target, mean_se;
    std::vector<double> var, var_target, var_se;
    double max_z_mean = 0.0;
    double max_z_var = 0.0;
    int samples = 0;
};

/// Per-time marginal moments of coordinate 0 against the linear interpolant
/// and ν t(T − t)/T.
inline BridgeMoments bridge_moments(double nu, double T, std::span<const double> start, std::span<const double> end,
                                    int steps, int samples, std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("bridge_moments: need >= 2 samples");
    Rng rng = make_rng(seed, 0xb41d);
    const std::size_t n = static_cast<std::size_t>(steps) + 1;
    std::vector<double> s1(n, 0.0), s2(n, 0.0);
    BridgeMoments m;
    m.samples = samples;
    for (int s = 0; s < samples; ++s) {
        const DiscretePath p = sample_pinned_path(nu, T, start, end, steps, rng);
        if (s == 0) m.times = p.times;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = p.samples[i][0] - (start[0] + (end[0] - start[0]) * p.times[i] / T);
            s1[i] += d;
            s2[i] += d * d;
        }
    }
    const double ns = samples;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = m.times[i];
        const double dm = s1[i] / ns;
        const double var = (s2[i] - ns * dm * dm) / (ns - 1.0);
        const double var_t = nu * t * (T - t) / T;
        m.mean.push_back(start[0] + (end[0] - start[0]) * t / T + dm);
        m.mean_target.push_back(start[0] + (end[0] - start[0]) * t / T);
        m.var.push_back(var);
        m.var_target.push_back(var_t);
        const double se_m = std::sqrt(var_t / ns);
        const double se_v = var_t * std::sqrt(2.0 / (ns - 1.0));
        m.mean_se.push_back(se_m);
        m.var_se.push_back(se_v);
        if (var_t > 0.0) {
            m.max_z_mean = std::max(m.max_z_mean, std::abs(dm) / se_m);
            m.max_z_var = std::max(m.max_z_var, std::abs(var - var_t) / se_v);
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// λ-averaged projected propagator

/// Unpinned λ walk over [0, T]: λ_0 ~ Uniform[−Λ0, Λ0], then K − 1 Gaussian
/// increments of variance ν′T/K; τ = Σ λ_i T/K. The averaged kernel is the
/// projector exactly when TΛ0 ∈ 2πℤ (integer and half-integer Φ spectra);
/// the default TΛ0 = 2π is the smallest such window.
struct LambdaWalk {
    double T = 1.0;
    double lambda0 = 2.0 * std::numbers::pi;  ///< Λ0
    double nu_prime = 1.0;
    int steps = 16;
    bool degenerate = false;  ///< τ ≡ 0

    void validate() const {
        if (!(T > 0.0)) throw std::invalid_argument("lambda walk: T must be > 0");
        if (!(lambda0 >= 0.0)) throw std::invalid_argument("lambda walk: lambda0 must be >= 0");
        if (!(nu_prime >= 0.0)) throw std::invalid_argument("lambda walk: nu must be >= 0");
        if (steps < 1) throw std::invalid_argument("lambda walk: steps must be >= 1");
    }

    double sample_tau(Rng& rng) const {
        if (degenerate) return 0.0;
        std::uniform_real_distribution<double> u(-lambda0, lambda0);
        std::normal_distribution<double> n01;
        const double h = T / steps;
        const double sd = std::sqrt(nu_prime * h);
        double lam = u(rng), tau = 0.0;
        for (int i = 0; i < steps; ++i) {
            tau += lam * h;
            lam += sd * n01(rng);
        }
        return tau;
    }
};

/// G(λ) = ⟨α″| e^{−iλΦ} |α′⟩ = Σ_μ C_μ e^{−iλμ}, grouped over the diagonal
/// spectrum of the constraint.
struct SpectralAmplitudes {
    std::vector<double> mu;
    std::vector<cplx> c;

    cplx evolve(double lambda) const {
        cplx s = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) s += c[i] * std::polar(1.0, -lambda * mu[i]);
        return s;
    }
};

inline SpectralAmplitudes spectral_amplitudes(const ConstraintOp& c, std::span<const cplx> probe,
                                              std::span<const cplx> state) {
    if (!c.op.is_diagonal()) throw std::invalid_argument("spectral_amplitudes: constraint must be diagonal");
    const FockVector bra = coherent_vector(c.op.space, probe);
    const FockVector ket = coherent_vector(c.op.space, state);
    std::map<long long, std::pair<double, cplx>> groups;
    for (Eigen::Index i = 0; i < c.op.mat.rows(); ++i) {
        const double mu = c.op.mat(i, i).real();
        auto& g = groups[std::llround(mu * 1e9)];
        g.first = mu;
        g.second += std::conj(bra.amps(i)) * ket.amps(i);
    }
    SpectralAmplitudes a;
    for (const auto& [_, g] : groups) {
        a.mu.push_back(g.first);
        a.c.push_back(g.second);
    }
    return a;
}

struct LambdaAverageResult {
    cplx spectral = 0.0;
    cplx quadrature = 0.0;
    cplx monte_carlo = 0.0;
    double mc_se_re = 0.0;
    double mc_se_im = 0.0;
    double quadrature_error = 0.0;  ///< |quadrature − spectral|
    double mc_z = 0.0;              ///< max over components |mc − spectral| / SE
    bool quadrature_ok = false;
    bool mc_ok = false;
};

class EstimatorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// ∫ sin(ελ)/(πλ) G(λ) dλ: Simpson on [0, Λ] of the even part plus the
/// closed-form sine-integral tail per frequency.
inline cplx lambda_quadrature(const SpectralAmplitudes& a, double epsilon, const SinKernelOptions& opt) {
    double max_mu = epsilon;
    for (double mu : a.mu) max_mu = std::max(max_mu, std::abs(mu) + epsilon);
    const double L = opt.lambda_max;
    int intervals = static_cast<int>(std::ceil(L * max_mu / opt.phase_per_step));
    intervals += intervals % 2;
    auto f = [&](double l, int part) {
        const double k = l == 0.0 ? epsilon / std::numbers::pi : std::sin(epsilon * l) / (std::numbers::pi * l);
        const cplx g = a.evolve(l) + a.evolve(-l);
        return k * (part == 0 ? g.real() : g.imag());
    };
    cplx s(quad::simpson([&](double l) { return f(l, 0); }, 0.0, L, intervals),
           quad::simpson([&](double l) { return f(l, 1); }, 0.0, L, intervals));
    if (opt.tail_correction) {
        for (std::size_t i = 0; i < a.mu.size(); ++i) {
            auto tail = [&](double freq) {
                if (freq == 0.0) return 0.0;
                return (freq > 0 ? 1.0 : -1.0) * quad::sine_integral_tail(std::abs(freq) * L);
            };
            // 2/π ∫_L^∞ sin(ελ)cos(μλ)/λ = (1/π)[tail(ε+μ) + tail(ε−μ)]
            s += a.c[i] * ((tail(epsilon + a.mu[i]) + tail(epsilon - a.mu[i])) / std::numbers::pi);
        }
    }
    return s;
}

struct McEstimate {
    cplx mean = 0.0;
    double se_re = 0.0;
    double se_im = 0.0;
};

/// E_τ[G(τ)] over `paths` walks. Paths are cut into fixed chunks with one
/// RNG stream each, so results do not depend on the worker count.
inline McEstimate lambda_monte_carlo(const SpectralAmplitudes& a, const LambdaWalk& walk, int paths,
                                     std::uint64_t seed, unsigned workers = worker_count()) {
    walk.validate();
    if (paths < 2) throw std::invalid_argument("lambda_monte_carlo: need >= 2 paths");
    constexpr int kChunks = 64;
    struct Acc {
        double re = 0, im = 0, re2 = 0, im2 = 0;
    };
    std::vector<Acc> acc(kChunks);
    auto run_chunk = [&](int c) {
        Rng rng = make_rng(seed, 0x1a3b0000ULL + static_cast<std::uint64_t>(c));
        const int lo = static_cast<int>(static_cast<long long>(paths) * c / kChunks);
        const int hi = static_cast<int>(static_cast<long long>(paths) * (c + 1) / kChunks);
        Acc s;
        for (int i = lo; i < hi; ++i) {
            const cplx g = a.evolve(walk.sample_tau(rng));
            s.re += g.real(), s.im += g.imag();
            s.re2 += g.real() * g.real(), s.im2 += g.imag() * g.imag();
        }
        acc[static_cast<std::size_t>(c)] = s;
    };
    workers = std::max(1u, std::min<unsigned>(workers, kChunks));
    if (workers == 1) {
        for (int c = 0; c < kChunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int c = static_cast<int>(w); c < kChunks; c += static_cast<int>(workers)) run_chunk(c);
            });
        for (auto& t : pool) t.join();
    }
    // pairwise reduction in chunk order
    for (std::size_t width = 1; width < acc.size(); width *= 2)
        for (std::size_t i = 0; i + width < acc.size(); i += 2 * width) {
            acc[i].re += acc[i + width].re, acc[i].im += acc[i + width].im;
            acc[i].re2 += acc[i + width].re2, acc[i].im2 += acc[i + width].im2;
        }
    const double n = paths;
    McEstimate e;
    e.mean = cplx(acc[0].re / n, acc[0].im / n);
    const double vre = std::max(0.0, (acc[0].re2 - n * e.mean.real() * e.mean.real()) / (n - 1.0));
    const double vim = std::max(0.0, (acc[0].im2 - n * e.mean.imag() * e.mean.imag()) / (n - 1.0));
    e.se_re = std::sqrt(vre / n);
    e.se_im = std::sqrt(vim / n);
    return e;
}

struct LambdaAverageSpec {
    Model model = Model::single;
    int nmax = 40;
    double eprime = 1.0;
    double epsilon = 0.1;
    std::vector<cplx> probe{cplx(1.0)};  ///< α″ (, β″)
    std::vector<cplx> state{cplx(1.0)};  ///< α′ (, β′)
    LambdaWalk walk;
    SinKernelOptions sin_kernel;
    int paths = 100000;
    std::uint64_t seed = 1;
    double quadrature_tol = kSinKernelTol;
    double mc_sigmas = 3.0;
};

/// Both estimators against the spectral projected propagator. With
/// `strict`, a failing estimator raises EstimatorError naming it.
inline LambdaAverageResult lambda_average_propagator(const LambdaAverageSpec& s, bool strict = false) {
    const FockSpace space(s.model == Model::single ? 1 : 2, s.nmax);
    ProjectorSpec ps{make_constraint(s.model, space, s.eprime), s.epsilon};
    ps.validate();
    const SpectralAmplitudes a = spectral_amplitudes(ps.constraint, s.probe, s.state);
    LambdaAverageResult r;
    if (s.walk.degenerate) {
        r.spectral = a.evolve(0.0);  // plain overlap
    } else {
        r.spectral = projected_propagator(build_projector(ps), s.probe, s.state).value;
    }
    r.quadrature = s.walk.degenerate ? a.evolve(0.0) : lambda_quadrature(a, s.epsilon, s.sin_kernel);
    r.quadrature_error = std::abs(r.quadrature - r.spectral);
    r.quadrature_ok = r.quadrature_error <= s.quadrature_tol;
    const McEstimate mc = lambda_monte_carlo(a, s.walk, s.paths, s.seed);
    r.monte_carlo = mc.mean;
    r.mc_se_re = mc.se_re;
    r.mc_se_im = mc.se_im;
    auto z = [](double d, double se) { return se > 0.0 ? std::abs(d) / se : (std::abs(d) <= 1e-12 ? 0.0 : INFINITY); };
    const cplx d = mc.mean - r.spectral;
    r.mc_z = std::max(z(d.real(), mc.se_re), z(d.imag(), mc.se_im));
    r.mc_ok = r.mc_z <= s.mc_sigmas;
    if (strict && !r.quadrature_ok)
        throw EstimatorError("lambda_average_propagator: quadrature estimator off by " + std::to_string(r.quadrature_error));
    if (strict && !r.mc_ok)
        throw EstimatorError("lambda_average_propagator: Monte Carlo estimator off by " + std::to_string(r.mc_z) + " SE");
    return r;
}

}  // namespace csq
