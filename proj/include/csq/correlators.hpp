/**
 * @file correlators.hpp
 * @brief Physical-state wavefunctions on the full phase space, correlation
 *        functions of H, Q, P against physical states, peak search, and
 *        classical-limit comparisons.
 *
 * The physical state is the unnormalized projection φ = ℙ|α′⟩ (single) or
 * ℙ|α′, β′⟩ (double) onto the sector m. Correlation values are matrix
 * elements ⟨α″|Ô|φ⟩ in the truncated space; the closed-form brackets are
 * reported next to them for comparison only.
 */
#pragma once

#include "csq/coherent.hpp"
#include "csq/fock.hpp"
#include "csq/projector.hpp"
#include "csq/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csq {

enum class Observable { H, Q1, P1, Q2, P2 };

inline const char* to_string(Observable o) {
    switch (o) {
        case Observable::H: return "H";
        case Observable::Q1: return "Q1";
        case Observable::P1: return "P1";
        case Observable::Q2: return "Q2";
        case Observable::P2: return "P2";
    }
    return "?";
}

inline Observable parse_observable(const std::string& s) {
    if (s == "H") return Observable::H;
    if (s == "Q" || s == "Q1") return Observable::Q1;
    if (s == "P" || s == "P1") return Observable::P1;
    if (s == "Q2") return Observable::Q2;
    if (s == "P2") return Observable::P2;
    throw std::invalid_argument("unknown observable '" + s + "' (expected H, Q1, P1, Q2, P2)");
}

inline std::size_t model_modes(Model m) { return m == Model::single ? 1 : 2; }

namespace detail {
inline void check_labels(Model model, std::span<const cplx> probe, std::span<const cplx> state, int m) {
    if (probe.size() != model_modes(model) || state.size() != model_modes(model))
        throw std::invalid_argument(std::string("labels: ") + to_string(model) + " model needs " +
                                    std::to_string(model_modes(model)) + " label(s) per point");
    if (m < 0) throw std::invalid_argument("mprime must be >= 0");
}

/// Σ_k conj(probe_k) state_k
inline cplx label_product(std::span<const cplx> probe, std::span<const cplx> state) {
    cplx z = 0.0;
    for (std::size_t k = 0; k < probe.size(); ++k) z += std::conj(probe[k]) * state[k];
    return z;
}

inline double label_norm2(std::span<const cplx> l) {
    double s = 0.0;
    for (cplx a : l) s += std::norm(a);
    return s;
}
}  // namespace detail

/// e^{−½Σ|α″|² − ½Σ|α′|²} z^m / m!, z = Σ conj(α″_k) α′_k, in log space.
inline cplx phys_wavefunction_closed(Model model, std::span<const cplx> probe, std::span<const cplx> state, int m) {
    detail::check_labels(model, probe, state, m);
    const cplx z = detail::label_product(probe, state);
    const double gauss = -0.5 * (detail::label_norm2(probe) + detail::label_norm2(state));
    if (m == 0) return std::exp(gauss);
    if (std::abs(z) == 0.0) return 0.0;
    const double logmag = gauss + m * std::log(std::abs(z)) - std::lgamma(m + 1.0);
    return std::polar(std::exp(logmag), m * std::arg(z));
}

/// Spectral projector onto sector m in a space with per-mode cutoff nmax.
inline LinearOperator sector_projector(Model model, const FockSpace& space, int m) {
    ProjectorSpec spec{make_constraint(model, space, m)};
    return build_projector(spec);
}

/// ⟨α″|ℙ|α′⟩ from truncated vectors.
inline cplx phys_wavefunction_numeric(Model model, std::span<const cplx> probe, std::span<const cplx> state, int m,
                                      int nmax) {
    detail::check_labels(model, probe, state, m);
    if (m > nmax) throw std::invalid_argument("mprime exceeds nmax");
    const FockSpace space(static_cast<int>(model_modes(model)), nmax);
    const LinearOperator p = sector_projector(model, space, m);
    return projected_propagator(p, probe, state).value;
}

/// √(2πm)|φ|, which is ≈ 1 − 1/(12m) at the peak.
inline double renormalized_magnitude(Model model, std::span<const cplx> probe, std::span<const cplx> state, int m) {
    return std::sqrt(2.0 * std::numbers::pi * m) * std::abs(phys_wavefunction_closed(model, probe, state, m));
}

/// Labels on the peak manifold: |α″| = |α′|, aligned phases, Σ|α′|² = m.
inline std::vector<cplx> peak_labels(Model model, int m, double energy_fraction = 0.5, double theta = 0.0,
                                     double phi = 0.0) {
    if (model == Model::single) return {std::polar(std::sqrt(static_cast<double>(m)), theta)};
    return {std::polar(std::sqrt(m * energy_fraction), theta), std::polar(std::sqrt(m * (1.0 - energy_fraction)), phi)};
}

struct CorrelationReport {
    Observable observable = Observable::H;
    cplx value = 0.0;
    cplx overlap = 0.0;
    std::optional<cplx> ratio_to_overlap;  ///< empty when |overlap| < 1e-300
    cplx oracle_ratio = 0.0;               ///< ladder-operator bracket
    std::optional<cplx> printed_ratio;     ///< literal closed-form bracket (see printed_bracket)
    std::vector<cplx> peak_location;       ///< probe labels maximizing |overlap| along the state's ray
    std::array<double, 2> classical_prediction{};  ///< (q, p) of the matching trajectory, or (E, 0) for H
    bool null_state = false;
};

inline constexpr double kOverlapFloor = 1e-300;

/// Oracle bracket from ⟨α″|a_k|φ⟩ = m α′_k / z ⟨α″|φ⟩ and ⟨α″|a_k†|φ⟩ = conj(α″_k)⟨α″|φ⟩.
inline cplx oracle_bracket(Observable o, std::span<const cplx> probe, std::span<const cplx> state, int m,
                           double omega, double hbar) {
    const std::size_t modes = probe.size();
    if (o == Observable::H) return hbar * omega * (m + 0.5 * static_cast<double>(modes));
    const std::size_t k = (o == Observable::Q1 || o == Observable::P1) ? 0 : 1;
    if (k >= modes) throw std::invalid_argument("observable needs the double model");
    const cplx z = detail::label_product(probe, state);
    const cplx lower = m == 0 ? cplx(0.0) : static_cast<double>(m) * state[k] / z;
    const cplx raise = std::conj(probe[k]);
    if (o == Observable::Q1 || o == Observable::Q2) return std::sqrt(hbar / (2.0 * omega)) * (lower + raise);
    return cplx(0.0, std::sqrt(hbar * omega / 2.0)) * (raise - lower);
}

/// Bracket exactly as printed: prefactors √(2ħ/ω), √(2ħω); single model
/// with unconjugated α″ and momentum sign (m/α″ − α″).
inline std::optional<cplx> printed_bracket(Observable o, std::span<const cplx> probe, std::span<const cplx> state,
                                           int m, double omega, double hbar) {
    const std::size_t modes = probe.size();
    if (o == Observable::H) {
        if (modes != 1) return std::nullopt;
        return cplx(m + 0.5);
    }
    if (o != Observable::Q1 && o != Observable::P1) return std::nullopt;
    cplx lower, raise;
    if (modes == 1) {
        lower = cplx(m) / probe[0];
        raise = probe[0];
    } else {
        lower = static_cast<double>(m) * state[0] / detail::label_product(probe, state);
        raise = std::conj(probe[0]);
    }
    if (o == Observable::Q1) return std::sqrt(2.0 * hbar / omega) * (lower + raise);
    return cplx(0.0, std::sqrt(2.0 * hbar * omega)) * (lower - raise);
}

/// Correlations of one physical state against arbitrary probes.
class CorrelationEngine {
public:
    CorrelationEngine(Model model, std::vector<cplx> state, int mprime, int nmax, double omega = 1.0,
                      double hbar = 1.0)
        : model_(model), state_(std::move(state)), m_(mprime), omega_(omega), hbar_(hbar),
          space_(static_cast<int>(model_modes(model)), nmax) {
        if (state_.size() != model_modes(model)) throw std::invalid_argument("state labels do not match the model");
        if (m_ < 0) throw std::invalid_argument("mprime must be >= 0");
        if (m_ + 1 > nmax) throw std::invalid_argument("nmax must exceed mprime so Q and P stay inside the space");
        if (!(omega > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("omega and hbar must be > 0");
        phi_ = sector_component(coherent_vector(space_, state_), m_);
    }

    Model model() const { return model_; }
    int mprime() const { return m_; }
    const FockVector& state_vector() const { return phi_; }
    bool null_state() const { return phi_.norm() < kNullNorm; }

    const LinearOperator& op(Observable o) const {
        auto& slot = ops_[static_cast<std::size_t>(o)];
        if (!slot) {
            const int k = (o == Observable::Q1 || o == Observable::P1) ? 0 : 1;
            if (o == Observable::H) {
                LinearOperator h = ho_hamiltonian(space_, 0, omega_, hbar_);
                for (int mode = 1; mode < space_.modes(); ++mode) h = h + ho_hamiltonian(space_, mode, omega_, hbar_);
                slot = h;
            } else if (k >= space_.modes()) {
                throw std::invalid_argument(std::string("observable ") + to_string(o) + " needs the double model");
            } else if (o == Observable::Q1 || o == Observable::Q2) {
                slot = position_op(space_, k, omega_, hbar_);
            } else {
                slot = momentum_op(space_, k, omega_, hbar_);
            }
        }
        return *slot;
    }

    /// ⟨α″|φ⟩ and ⟨α″|Ô|φ⟩ in the truncated space.
    std::pair<cplx, cplx> overlap_and_value(Observable o, std::span<const cplx> probe) const {
        const FockVector bra = coherent_vector(space_, probe);
        return {bra.amps.dot(phi_.amps), bra.amps.dot(op(o).mat * phi_.amps)};
    }

    CorrelationReport correlate(Observable o, std::span<const cplx> probe) const {
        detail::check_labels(model_, probe, state_, m_);
        CorrelationReport r;
        r.observable = o;
        r.null_state = null_state();
        const auto [ov, val] = overlap_and_value(o, probe);
        r.overlap = ov;
        r.value = val;
        if (!r.null_state && std::abs(ov) >= kOverlapFloor) r.ratio_to_overlap = val / ov;
        r.oracle_ratio = oracle_bracket(o, probe, state_, m_, omega_, hbar_);
        r.printed_ratio = printed_bracket(o, probe, state_, m_, omega_, hbar_);
        r.peak_location = peak_location();
        r.classical_prediction = classical_prediction(o, probe);
        return r;
    }

    /// Probe labels t·α′/|α′| maximizing |⟨α″|φ⟩|; golden-section on t after
    /// a coarse scan. The exact answer is t = √m.
    std::vector<cplx> peak_location(double tol = 1e-6) const {
        const double len = std::sqrt(detail::label_norm2(state_));
        if (len == 0.0) return std::vector<cplx>(state_.size(), cplx(0.0));
        auto labels = [&](double t) {
            std::vector<cplx> l;
            for (cplx a : state_) l.push_back(a * (t / len));
            return l;
        };
        auto f = [&](double t) {
            const auto l = labels(t);
            return std::abs(phys_wavefunction_closed(model_, l, state_, m_));
        };
        const double hi = std::sqrt(static_cast<double>(m_)) + 10.0;
        const int coarse = 200;
        double best_t = 0.0, best = -1.0;
        for (int i = 0; i <= coarse; ++i) {
            const double t = hi * i / coarse;
            if (const double v = f(t); v > best) best = v, best_t = t;
        }
        double a = std::max(0.0, best_t - hi / coarse), b = best_t + hi / coarse;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = f(c), fd = f(d);
        while (b - a > tol) {
            if (fc > fd) {
                b = d, d = c, fd = fc, c = b - g * (b - a), fc = f(c);
            } else {
                a = c, c = d, fc = fd, d = a + g * (b - a), fd = f(d);
            }
        }
        return labels(0.5 * (a + b));
    }

    /// Trajectory value at phase arg α″_k in the gauge where the state's
    /// reference phase is zero. Amplitude √(2E_k)/ω with E = ħω(m + ½) for
    /// the single model and E_k = ħω|α′_k|² for the double model.
    std::array<double, 2> classical_prediction(Observable o, std::span<const cplx> probe) const {
        if (o == Observable::H) return {hbar_ * omega_ * (m_ + 0.5 * space_.modes()), 0.0};
        const std::size_t k = (o == Observable::Q1 || o == Observable::P1) ? 0 : 1;
        const double energy =
            model_ == Model::single ? hbar_ * omega_ * (m_ + 0.5) : hbar_ * omega_ * std::norm(state_[k]);
        const double amp = std::sqrt(2.0 * energy) / omega_;
        const double ph = std::arg(probe[k]);
        return {amp * std::cos(ph), amp * omega_ * std::sin(ph)};
    }

private:
    Model model_;
    std::vector<cplx> state_;
    int m_;
    double omega_, hbar_;
    FockSpace space_;
    FockVector phi_{FockVector::zero(FockSpace(1, 1))};
    mutable std::array<std::optional<LinearOperator>, 5> ops_;
};

inline CorrelationReport correlation(Model model, Observable o, std::span<const cplx> probe,
                                     std::span<const cplx> state, int mprime, int nmax, double omega = 1.0,
                                     double hbar = 1.0) {
    const CorrelationEngine eng(model, std::vector<cplx>(state.begin(), state.end()), mprime, nmax, omega, hbar);
    return eng.correlate(o, probe);
}

// ---------------------------------------------------------------------------
// Classical limit

struct ClassicalLimitRow {
    int m = 0;
    double offset = 0.0;
    double weighted_deviation = 0.0;  ///< Husimi-weighted RMS |ratio − q_cl| / A
    double peak_deviation = 0.0;      ///< |ratio − q_cl| / A at |α″| = √m
    double h_ratio = 0.0;             ///< ⟨α″|H|φ⟩/⟨α″|φ⟩ / ħω
};

struct ClassicalLimitTable {
    std::vector<ClassicalLimitRow> rows;
    std::vector<int> ms;
    std::vector<double> deviation;       ///< max over offsets, per m
    std::vector<double> peak_deviation;  ///< max over offsets, per m
    double fit_exponent = 0.0;           ///< least-squares slope of log deviation vs log m
    double peak_fit_exponent = 0.0;
    double max_h_error = 0.0;            ///< max |h_ratio − (m + ½)|
    bool monotone = false;
};

/// Slope of log y against log x.
inline double loglog_slope(std::span<const int> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(static_cast<double>(x[i])), ly = std::log(y[i]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Single model. Along the ray θ″ = offset the Q ratio is compared to the
/// trajectory value A cos(offset), weighted by the physical state's Husimi
/// density, which in u = |α″|² is the Gamma(m + 1) law.
inline ClassicalLimitTable classical_limit_check(std::span<const int> ms, std::span<const double> offsets,
                                                 double omega = 1.0, double hbar = 1.0, int intervals = 400) {
    if (ms.size() < 2) throw std::invalid_argument("classical_limit_check: need at least two m values");
    ClassicalLimitTable t;
    t.ms.assign(ms.begin(), ms.end());
    for (int m : ms) {
        if (m < 1) throw std::invalid_argument("classical_limit_check: m must be >= 1");
        const double mean = m + 1.0, sd = std::sqrt(m + 1.0);
        const double u_lo = std::max(1e-6, mean - 8.0 * sd), u_hi = mean + 8.0 * sd;
        const int nmax = static_cast<int>(std::ceil(u_hi + 10.0 * std::sqrt(u_hi) + 10.0));
        const CorrelationEngine eng(Model::single, {cplx(std::sqrt(static_cast<double>(m)))}, m, nmax, omega, hbar);
        const FockVector qphi = eng.op(Observable::Q1).apply(eng.state_vector());
        const FockVector hphi = eng.op(Observable::H).apply(eng.state_vector());
        const FockSpace& sp = eng.state_vector().space;
        auto q_ratio = [&](cplx a) {
            const FockVector bra = coherent_vector(sp, a);
            return bra.amps.dot(qphi.amps) / bra.amps.dot(eng.state_vector().amps);
        };
        const double amp = std::sqrt(2.0 * hbar * (m + 0.5) / omega);
        double dev_max = 0.0, peak_max = 0.0;
        for (double off : offsets) {
            const double q_cl = amp * std::cos(off);
            auto integrand = [&](double u) {
                const double logpdf = m * std::log(u) - u - std::lgamma(m + 1.0);
                return std::norm(q_ratio(std::polar(std::sqrt(u), off)) - q_cl) * std::exp(logpdf);
            };
            const double mass = quad::simpson(
                [&](double u) { return std::exp(m * std::log(u) - u - std::lgamma(m + 1.0)); }, u_lo, u_hi, intervals);
            const double msd = quad::simpson(integrand, u_lo, u_hi, intervals) / mass;
            ClassicalLimitRow row;
            row.m = m;
            row.offset = off;
            row.weighted_deviation = std::sqrt(msd) / amp;
            const cplx peak = std::polar(std::sqrt(static_cast<double>(m)), off);
            row.peak_deviation = std::abs(q_ratio(peak) - q_cl) / amp;
            const FockVector bra = coherent_vector(sp, peak);
            row.h_ratio = (bra.amps.dot(hphi.amps) / bra.amps.dot(eng.state_vector().amps)).real() / (hbar * omega);
            t.max_h_error = std::max(t.max_h_error, std::abs(row.h_ratio - (m + 0.5)));
            dev_max = std::max(dev_max, row.weighted_deviation);
            peak_max = std::max(peak_max, row.peak_deviation);
            t.rows.push_back(row);
        }
        t.deviation.push_back(dev_max);
        t.peak_deviation.push_back(peak_max);
    }
    t.monotone = true;
    for (std::size_t i = 1; i < t.deviation.size(); ++i)
        if (!(t.deviation[i] < t.deviation[i - 1])) t.monotone = false;
    t.fit_exponent = loglog_slope(t.ms, t.deviation);
    t.peak_fit_exponent = loglog_slope(t.ms, t.peak_deviation);
    return t;
}

struct DoubleLimitReport {
    int m = 0;
    double energy_fraction = 0.5;
    double theta_peak = 0.0;     ///< relative angle maximizing |φ|
    double e_total = 0.0;        ///< ⟨N_a + N_b⟩ on the normalized physical state
    double e1 = 0.0;             ///< ⟨N_a⟩
    double e1_target = 0.0;      ///< r′²
    double fwhm = 0.0;           ///< full width at half maximum of |φ|² in the relative angle
    double peak_renormalized = 0.0;  ///< √(2πm)|φ| at the peak
};

/// Double model on the peak manifold r″ = r′, ρ″ = ρ′, r′² + ρ′² = m.
inline DoubleLimitReport double_limit_check(int m, double energy_fraction = 0.5, int nmax = -1) {
    if (m < 1) throw std::invalid_argument("double_limit_check: m must be >= 1");
    if (!(energy_fraction > 0.0 && energy_fraction < 1.0))
        throw std::invalid_argument("double_limit_check: energy_fraction must lie in (0, 1)");
    DoubleLimitReport r;
    r.m = m;
    r.energy_fraction = energy_fraction;
    const auto state = peak_labels(Model::double_, m, energy_fraction);
    auto mag2 = [&](double theta) {
        const auto probe = peak_labels(Model::double_, m, energy_fraction, theta, 0.0);
        return std::norm(phys_wavefunction_closed(Model::double_, probe, state, m));
    };
    const int coarse = 720;
    double best = -1.0, best_th = 0.0;
    for (int i = 0; i < coarse; ++i) {
        const double th = -std::numbers::pi + 2.0 * std::numbers::pi * i / coarse;
        if (const double v = mag2(th); v > best) best = v, best_th = th;
    }
    double a = best_th - 2.0 * std::numbers::pi / coarse, b = best_th + 2.0 * std::numbers::pi / coarse;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    while (b - a > 1e-9) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (mag2(c) > mag2(d)) b = d; else a = c;
    }
    r.theta_peak = 0.5 * (a + b);
    const double peak = mag2(r.theta_peak);
    // half-maximum crossing on θ > peak by bisection
    double lo = r.theta_peak, hi = r.theta_peak + std::numbers::pi;
    if (mag2(hi) > 0.5 * peak) {
        r.fwhm = 2.0 * std::numbers::pi;
    } else {
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            (mag2(mid) > 0.5 * peak ? lo : hi) = mid;
        }
        r.fwhm = 2.0 * (0.5 * (lo + hi) - r.theta_peak);
    }
    const auto probe = peak_labels(Model::double_, m, energy_fraction, r.theta_peak, 0.0);
    r.peak_renormalized = renormalized_magnitude(Model::double_, probe, state, m);

    if (nmax < 0) {
        const double u = m * std::max(energy_fraction, 1.0 - energy_fraction);
        nmax = std::max(m + 1, static_cast<int>(std::ceil(u + 10.0 * std::sqrt(u) + 10.0)));
    }
    const FockSpace space(2, nmax);
    FockVector phi = sector_component(coherent_vector(space, state), m);
    if (phi.norm() < kNullNorm) throw std::domain_error("double_limit_check: null physical state");
    phi.amps /= phi.norm();
    // number operators are diagonal in the occupation basis
    double et = 0.0, e1 = 0.0;
    for (std::size_t i = 0; i < space.dim(); ++i) {
        const double w = std::norm(phi.amps(static_cast<Eigen::Index>(i)));
        et += w * space.total(i);
        e1 += w * space.occupation(i, 0);
    }
    r.e_total = et;
    r.e1 = e1;
    r.e1_target = std::norm(state[0]);
    return r;
}

// ---------------------------------------------------------------------------
// Gauge phase one-form

struct OneFormReport {
    double shift = 0.0;           ///< Σ_k (arg(e^{iΔf}K_k) − arg K_k)
    double bare_phase = 0.0;      ///< Σ_k arg K_k, K_k = ⟨α_k|α_{k+1}⟩
    double dressed_phase = 0.0;
    double endpoint_difference = 0.0;  ///< f(end) − f(start) as given
    bool closed = false;
    long winding = 0;             ///< round(shift / 2π) for closed paths
    double residual = 0.0;        ///< closed: |shift − 2π·winding|; open: |shift − endpoint_difference|
};

/// Discrete line integral of the one-form shift df produced by dressing the
/// coherent states with e^{if}. Each step's phase increment is taken as the
/// principal value, so a multivalued f with single-valued e^{if} shows up as
/// a winding number on closed paths.
inline OneFormReport gauge_phase_one_form_check(std::span<const cplx> path, std::span<const double> f) {
    if (path.size() < 2 || f.size() != path.size())
        throw std::invalid_argument("gauge_phase_one_form_check: need >= 2 labels and one f sample per label");
    OneFormReport r;
    r.closed = std::abs(path.front() - path.back()) < 1e-12;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const cplx kern = overlap_alpha(path[k], path[k + 1]);
        const cplx dressed = std::polar(1.0, f[k + 1] - f[k]) * kern;
        const double b = std::arg(kern), d = std::arg(dressed);
        r.bare_phase += b;
        r.dressed_phase += d;
        r.shift += std::remainder(d - b, 2.0 * std::numbers::pi);
    }
    r.endpoint_difference = f.back() - f.front();
    if (r.closed) {
        r.winding = std::lround(r.shift / (2.0 * std::numbers::pi));
        r.residual = std::abs(r.shift - 2.0 * std::numbers::pi * static_cast<double>(r.winding));
    } else {
        r.residual = std::abs(r.shift - r.endpoint_difference);
    }
    return r;
}

/// Circle of radius |α| = radius sampled at n + 1 points (closed).
inline std::vector<cplx> circle_path(double radius, int n, double start = 0.0, double sweep = 2.0 * std::numbers::pi) {
    std::vector<cplx> p;
    for (int k = 0; k <= n; ++k) p.push_back(std::polar(radius, start + sweep * k / n));
    if (std::abs(sweep - 2.0 * std::numbers::pi) < 1e-15) p.back() = p.front();
    return p;
}

}  // namespace csq
