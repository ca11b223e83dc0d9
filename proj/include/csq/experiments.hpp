/**
 * @file experiments.hpp
 * @brief Experiment registry, run configuration, and deterministic result
 *        serialization behind the command-line runner.
 */
#pragma once

#include "csq/classical.hpp"
#include "csq/coherent.hpp"
#include "csq/correlators.hpp"
#include "csq/fock.hpp"
#include "csq/projector.hpp"
#include "csq/spin.hpp"
#include "csq/wiener.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csq {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Configuration

class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& msg)
        : std::invalid_argument("field '" + field + "': " + msg), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class UnknownExperiment : public std::runtime_error {
public:
    explicit UnknownExperiment(const std::string& name) : std::runtime_error("unknown experiment '" + name + "'") {}
};

struct RunConfig {
    std::string experiment;
    std::optional<Model> model;
    std::optional<int> nmax, mprime, n, pairs, block, n_radial, n_angular, max_two_j, paths, steps, bridge_samples,
        bridge_steps;
    std::optional<double> eprime, epsilon, hbar, omega, radius, energy, nu, lambda0, T;
    std::optional<std::vector<double>> eprimes, offsets, nus;
    std::optional<std::vector<int>> ms;
    std::optional<cplx> alpha, beta;
    std::uint64_t seed = 1;
    std::optional<std::string> out;
    nlohmann::json source;  ///< parsed input, for hashing

    double w() const { return omega.value_or(1.0); }
    double h() const { return hbar.value_or(1.0); }
};

namespace detail {

inline int get_int(const nlohmann::json& j, const char* key, long lo, long hi) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(key, "must be an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi)
        throw ConfigError(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(x);
}

inline double get_num(const nlohmann::json& j, const char* key, double lo, double hi, bool open_lo = false) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(key, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < lo || x > hi || (open_lo && x == lo))
        throw ConfigError(key, std::string("must lie in ") + (open_lo ? "(" : "[") + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "]");
    return x;
}

inline cplx get_cplx(const nlohmann::json& j, const char* key, double max_abs) {
    const auto& v = j.at(key);
    cplx z;
    if (v.is_number()) {
        z = v.get<double>();
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        z = cplx(v[0].get<double>(), v[1].get<double>());
    } else {
        throw ConfigError(key, "must be a number or a [re, im] pair");
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > max_abs)
        throw ConfigError(key, "magnitude must be finite and <= " + std::to_string(max_abs));
    return z;
}

inline std::vector<double> get_num_array(const nlohmann::json& j, const char* key, double lo, double hi) {
    const auto& v = j.at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(key, "must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(key, "must be a non-empty array of numbers");
        const double x = e.get<double>();
        if (!std::isfinite(x) || x < lo || x > hi)
            throw ConfigError(key, "entries must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        out.push_back(x);
    }
    return out;
}

inline std::vector<int> get_int_array(const nlohmann::json& j, const char* key, long lo, long hi) {
    const auto& v = j.at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(key, "must be a non-empty array of integers");
    std::vector<int> out;
    for (const auto& e : v) {
        if (!e.is_number_integer()) throw ConfigError(key, "must be a non-empty array of integers");
        const long long x = e.get<long long>();
        if (x < lo || x > hi)
            throw ConfigError(key, "entries must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

}  // namespace detail

/// Parses and range-checks every field. Unknown keys are rejected. The
/// experiment name itself is checked against the registry separately.
inline RunConfig parse_config(const nlohmann::json& j) {
    using namespace detail;
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    static const std::set<std::string> known{
        "experiment", "model",    "nmax",    "mprime",  "n",     "pairs",     "block",    "n_radial",
        "n_angular",  "max_two_j", "paths",  "steps",   "bridge_samples", "bridge_steps", "eprime", "epsilon",
        "hbar",       "omega",    "radius",  "energy",  "nu",    "lambda0",   "T",        "eprimes",
        "offsets",    "nus",      "ms",      "alpha",   "beta",  "seed",      "out"};
    for (const auto& [k, _] : j.items())
        if (!known.count(k)) throw ConfigError(k, "unknown field");
    RunConfig c;
    if (!j.contains("experiment")) throw ConfigError("experiment", "missing");
    if (!j["experiment"].is_string()) throw ConfigError("experiment", "must be a string");
    c.experiment = j["experiment"].get<std::string>();
    if (j.contains("model")) {
        const auto& v = j["model"];
        if (!v.is_string() || (v != "single" && v != "double")) throw ConfigError("model", "must be \"single\" or \"double\"");
        c.model = v == "single" ? Model::single : Model::double_;
    }
    auto opt_int = [&](const char* k, std::optional<int>& dst, long lo, long hi) {
        if (j.contains(k)) dst = get_int(j, k, lo, hi);
    };
    auto opt_num = [&](const char* k, std::optional<double>& dst, double lo, double hi, bool open_lo = false) {
        if (j.contains(k)) dst = get_num(j, k, lo, hi, open_lo);
    };
    opt_int("nmax", c.nmax, 1, 400);
    opt_int("mprime", c.mprime, 0, 400);
    opt_int("n", c.n, 1, 10000);
    opt_int("pairs", c.pairs, 1, 10000);
    opt_int("block", c.block, 0, 400);
    opt_int("n_radial", c.n_radial, 1, 1 << 20);
    opt_int("n_angular", c.n_angular, 1, 1 << 16);
    opt_int("max_two_j", c.max_two_j, 0, 200);
    opt_int("paths", c.paths, 2, 100000000);
    opt_int("steps", c.steps, 1, 100000);
    opt_int("bridge_samples", c.bridge_samples, 2, 100000000);
    opt_int("bridge_steps", c.bridge_steps, 1, 100000);
    opt_num("eprime", c.eprime, -1e6, 1e6);
    opt_num("epsilon", c.epsilon, 0.0, 0.5, true);
    if (c.epsilon && *c.epsilon >= 0.5) throw ConfigError("epsilon", "must lie in (0, 0.5)");
    opt_num("hbar", c.hbar, 0.0, 1e6, true);
    opt_num("omega", c.omega, 0.0, 1e6, true);
    opt_num("radius", c.radius, 0.0, 1e3, true);
    opt_num("energy", c.energy, 0.0, 1e12, true);
    opt_num("nu", c.nu, 0.0, 1e6, true);
    opt_num("lambda0", c.lambda0, 0.0, 1e6);
    opt_num("T", c.T, 0.0, 1e6, true);
    if (j.contains("eprimes")) c.eprimes = get_num_array(j, "eprimes", -1e6, 1e6);
    if (j.contains("offsets")) c.offsets = get_num_array(j, "offsets", -100.0, 100.0);
    if (j.contains("nus")) c.nus = get_num_array(j, "nus", 1e-12, 1e6);
    if (j.contains("ms")) c.ms = get_int_array(j, "ms", 1, 4096);
    if (j.contains("alpha")) c.alpha = get_cplx(j, "alpha", 20.0);
    if (j.contains("beta")) c.beta = get_cplx(j, "beta", 20.0);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
            throw ConfigError("seed", "must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("out")) {
        if (!j["out"].is_string() || j["out"].get<std::string>().empty()) throw ConfigError("out", "must be a non-empty string");
        c.out = j["out"].get<std::string>();
    }
    c.source = j;
    return c;
}

/// FNV-1a over the canonical (sorted-key) dump with the effective seed.
inline std::string config_hash(const RunConfig& c) {
    nlohmann::json j = c.source;
    j["seed"] = c.seed;
    j.erase("out");
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

// ---------------------------------------------------------------------------
// Results

struct Check {
    std::string name;
    std::string kind;  ///< abs | le | ge | range | flag | report
    double value = 0.0;
    std::optional<double> target, tolerance, lo, hi;
    bool pass = true;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row) {
        if (row.size() != columns.size()) throw std::logic_error("Table " + name + ": row width mismatch");
        rows.push_back(std::move(row));
    }
};

struct RunResult {
    std::string experiment;
    std::vector<Check> checks;
    std::deque<Table> tables;  // stable references across table()
    std::uint64_t seed = 0;
    std::string config_hash;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    const Check* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }

    /// |value − target| <= tol
    void abs(const std::string& name, double value, double target, double tol) {
        checks.push_back({name, "abs", value, target, tol, {}, {}, std::abs(value - target) <= tol});
    }
    void le(const std::string& name, double value, double bound) {
        checks.push_back({name, "le", value, {}, {}, {}, bound, value <= bound});
    }
    void ge(const std::string& name, double value, double bound) {
        checks.push_back({name, "ge", value, {}, {}, bound, {}, value >= bound});
    }
    void range(const std::string& name, double value, double lo, double hi) {
        checks.push_back({name, "range", value, {}, {}, lo, hi, value >= lo && value <= hi});
    }
    void flag(const std::string& name, bool ok) { checks.push_back({name, "flag", ok ? 1.0 : 0.0, 1.0, {}, {}, {}, ok}); }
    void report(const std::string& name, double value) { checks.push_back({name, "report", value, {}, {}, {}, {}, true}); }

    Table& table(const std::string& name, std::vector<std::string> columns) {
        tables.push_back({name, std::move(columns), {}});
        return tables.back();
    }
};

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string to_csv(const Table& t) {
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + format_g17(row[i]);
        s += "\n";
    }
    return s;
}

inline std::string table_filename(const RunResult& r, const Table& t) { return r.experiment + "_" + t.name + ".csv"; }

inline std::string to_json(const RunResult& r) {
    using oj = nlohmann::ordered_json;
    oj j;
    j["experiment"] = r.experiment;
    j["status"] = r.passed() ? "pass" : "fail";
    oj checks = oj::array();
    for (const auto& c : r.checks) {
        oj e;
        e["name"] = c.name;
        e["kind"] = c.kind;
        e["value"] = c.value;
        if (c.target) e["target"] = *c.target;
        if (c.tolerance) e["tolerance"] = *c.tolerance;
        if (c.lo) e["lo"] = *c.lo;
        if (c.hi) e["hi"] = *c.hi;
        e["pass"] = c.pass;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    oj tables = oj::array();
    for (const auto& t : r.tables) tables.push_back(table_filename(r, t));
    j["tables"] = std::move(tables);
    j["provenance"] = {{"config_hash", r.config_hash}, {"seed", r.seed}, {"version", kVersion}};
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Experiments

namespace experiments {

inline std::vector<cplx> random_disk(Rng& rng, int count, double radius, double min_abs = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> out;
    while (static_cast<int>(out.size()) < count) {
        const cplx z = std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
        if (std::abs(z) >= min_abs) out.push_back(z);
    }
    return out;
}

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

inline constexpr double kOverlapTol = 1e-10;
inline constexpr double kResolutionTol = 1e-6;
inline constexpr double kProjectionTol = 1e-12;
inline constexpr double kIdentityTol = 1e-10;
inline constexpr double kSu2Tol = 1e-10;
inline constexpr double kSpinAlgebraTol = 1e-10;
inline constexpr double kSpinResolutionTol = 1e-8;
inline constexpr double kCurvatureTol = 1e-4;
inline constexpr double kPullbackTol = 1e-8;
inline constexpr double kAreaTol = 1e-4;
inline constexpr double kOneFormTol = 1e-8;
inline constexpr double kKernelTol = 1e-8;
inline constexpr double kMcSigmas = 3.0;

// --- resolution -------------------------------------------------------------

inline void validate_resolution(const RunConfig& c) {
    const int nmax = c.nmax.value_or(40);
    if (c.block.value_or(20) > nmax) throw ConfigError("block", "must not exceed nmax");
    PolarGrid g = default_polar_grid(c.radius.value_or(8.0), nmax);
    if (c.n_radial) g.n_radial = *c.n_radial;
    if (c.n_angular) g.n_angular = *c.n_angular;
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(c.n_radial ? "n_radial" : "n_angular", e.what());
    }
}

inline RunResult run_resolution(const RunConfig& c) {
    RunResult r;
    const int nmax = c.nmax.value_or(40), block = c.block.value_or(20), pairs = c.pairs.value_or(20);
    const FockSpace space(1, nmax);
    Rng rng = make_rng(c.seed, 1);
    const auto labels = random_disk(rng, 2 * pairs, 2.0);
    auto& t = r.table("overlap", {"a1_re", "a1_im", "a2_re", "a2_im", "analytic_re", "analytic_im", "numeric_re",
                                  "numeric_im", "abs_error"});
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const cplx a1 = labels[static_cast<std::size_t>(2 * i)], a2 = labels[static_cast<std::size_t>(2 * i + 1)];
        const cplx an = overlap_analytic(CoherentLabel::from_alpha(a1, c.w(), c.h()),
                                         CoherentLabel::from_alpha(a2, c.w(), c.h())).value;
        const cplx nu = inner(coherent_vector(space, a1), coherent_vector(space, a2));
        const double err = std::abs(an - nu);
        worst = std::max(worst, err);
        t.add({a1.real(), a1.imag(), a2.real(), a2.imag(), an.real(), an.imag(), nu.real(), nu.imag(), err});
    }
    r.le("overlap_max_error", worst, kOverlapTol);

    PolarGrid g = default_polar_grid(c.radius.value_or(8.0), nmax);
    if (c.n_radial) g.n_radial = *c.n_radial;
    if (c.n_angular) g.n_angular = *c.n_angular;
    const ResolutionReport rep = resolution_of_unity_check(space, g);
    r.le("resolution_residual_block", rep.residual_on(block), kResolutionTol);
    r.report("resolution_n_keep", rep.n_keep);
    r.report("grid_points_per_cell", g.points_per_cell());
    auto& d = r.table("resolution", {"n", "diag_re", "row_max_residual"});
    for (int n = 0; n <= nmax; ++n) {
        const CVector row = rep.m.row(n).transpose() - CMatrix::Identity(nmax + 1, nmax + 1).col(n);
        d.add({static_cast<double>(n), rep.m(n, n).real(), row.cwiseAbs().maxCoeff()});
    }
    return r;
}

// --- project-single -------------------------------------------------------

inline const std::vector<double>& default_single_eprimes() {
    static const std::vector<double> v{0, 1, 2, 3, 0.3, 0.5, 1.5};
    return v;
}

inline void validate_project_single(const RunConfig& c) {
    const int nmax = c.nmax.value_or(40);
    const cplx a = c.alpha.value_or(1.0);
    if (coherent_leakage(a, nmax) > kLeakageError) throw ConfigError("alpha", "coherent state leaks past nmax");
    for (double e : c.eprimes.value_or(default_single_eprimes()))
        if (e < -0.5 || e > nmax) throw ConfigError("eprimes", "entries must lie in [-0.5, nmax]");
}

inline RunResult run_project_single(const RunConfig& c) {
    RunResult r;
    const int nmax = c.nmax.value_or(40);
    const double eps = c.epsilon.value_or(0.1);
    const cplx alpha = c.alpha.value_or(1.0);
    const FockSpace space(1, nmax);
    const FockVector coh = coherent_vector(space, alpha);
    auto& t = r.table("projection", {"eprime", "in_window", "sector", "norm", "target_norm", "max_component_error"});
    double worst = 0.0, worst_null = 0.0;
    for (double e : c.eprimes.value_or(default_single_eprimes())) {
        const ProjectorSpec spec{single_constraint(space, e), eps};
        spec.validate();
        const PhysicalState st = project(build_projector(spec), spec.constraint, coh);
        const int m = nearest_sector(e);
        const bool in_window = std::abs(e - m) < eps && m >= 0;
        CVector target = CVector::Zero(static_cast<Eigen::Index>(space.dim()));
        if (in_window)
            target(m) = std::exp(-0.5 * std::norm(alpha) - 0.5 * std::lgamma(m + 1.0)) * ipow(alpha, m);
        const double err = (st.vec.amps - target).cwiseAbs().maxCoeff();
        if (in_window) worst = std::max(worst, err);
        else worst_null = std::max(worst_null, st.norm_in_full_space);
        t.add({e, in_window ? 1.0 : 0.0, static_cast<double>(m), st.norm_in_full_space, target.norm(), err});
        r.abs("norm[E'=" + fmt(e) + "]", st.norm_in_full_space, target.norm(), kProjectionTol);
        if (in_window && !st.is_null()) {
            const PhysicalState ns = normalize_physical(st);
            const double expect = std::remainder(m * std::arg(alpha), 2.0 * std::numbers::pi);
            const double got = std::arg(*ns.gauge_phase);
            r.abs("gauge_phase[E'=" + fmt(e) + "]", std::remainder(got - expect, 2.0 * std::numbers::pi), 0.0, 1e-12);
        }
    }
    r.le("projection_max_error", worst, kProjectionTol);
    r.le("null_projection_max_norm", worst_null, kNullNorm);

    const int id_nmax = std::min(nmax, 16);
    const FockSpace ids(1, id_nmax);
    const LinearOperator h = ho_hamiltonian(ids, 0, c.w(), c.h());
    auto& it = r.table("identities", {"eprime", "idempotence", "hermiticity", "gauge", "evolution"});
    double id_worst = 0.0;
    for (double e : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 0.5}) {
        const ConstraintOp con = single_constraint(ids, e);
        const LinearOperator p = build_projector({con, eps});
        const auto rep = projector_identities(p, con, h, c.h());
        double g = 0.0, ev = 0.0;
        for (auto [_, v] : rep.gauge) g = std::max(g, v);
        for (auto [_, v] : rep.evolution) ev = std::max(ev, v);
        it.add({e, rep.idempotence, rep.hermiticity, g, ev});
        id_worst = std::max(id_worst, rep.worst());
    }
    r.le("identities_max_residual", id_worst, kIdentityTol);

    ProjectorSpec sk{single_constraint(ids, 3.0), eps, Measure::sin_kernel};
    const BuiltProjector bp = build_projector_checked(sk);
    r.le("sin_kernel_residual", bp.quadrature_residual, kSinKernelTol);
    return r;
}

// --- project-double -------------------------------------------------------

inline void validate_project_double(const RunConfig& c) {
    const int nmax = c.nmax.value_or(16), mmax = c.mprime.value_or(8);
    if (mmax > nmax) throw ConfigError("mprime", "must not exceed nmax");
    if (nmax > 40) throw ConfigError("nmax", "two-mode runs are limited to nmax <= 40");
}

inline RunResult run_project_double(const RunConfig& c) {
    RunResult r;
    const int nmax = c.nmax.value_or(16), mmax = c.mprime.value_or(8), pairs = c.pairs.value_or(10);
    const double eps = c.epsilon.value_or(0.1);
    const FockSpace space(2, nmax);
    Rng rng = make_rng(c.seed, 2);
    const auto as = random_disk(rng, 2 * pairs, 1.0);
    const auto bs = random_disk(rng, 2 * pairs, 1.0, 0.2);
    auto& t = r.table("su2_overlap", {"mprime", "pair", "xi1_re", "xi1_im", "xi2_re", "xi2_im", "numeric_re",
                                      "numeric_im", "formula_re", "formula_im", "error", "candidate_error"});
    double worst = 0.0, worst_embed = 0.0;
    double candidate_min = INFINITY;
    for (int m = 0; m <= mmax; ++m) {
        const ConstraintOp con = double_constraint(space, m);
        const LinearOperator p = build_projector({con, eps});
        double cand_max = 0.0;
        for (int i = 0; i < pairs; ++i) {
            const std::size_t i1 = static_cast<std::size_t>(2 * i), i2 = i1 + 1;
            const std::vector<cplx> l1{as[i1], bs[i1]}, l2{as[i2], bs[i2]};
            const auto num = normalized_projected_propagator(p, con, l1, l2);
            if (!num) throw std::runtime_error("project-double: unexpected null projection");
            const cplx xi1 = as[i1] / bs[i1], xi2 = as[i2] / bs[i2];
            const cplx f = su2_overlap(m, xi1, xi2).value;
            const cplx cand = su2_overlap(4 * m, xi1, xi2).value;
            const double err = std::abs(num->value - f), cerr = std::abs(num->value - cand);
            worst = std::max(worst, err);
            cand_max = std::max(cand_max, cerr);
            t.add({double(m), double(i), xi1.real(), xi1.imag(), xi2.real(), xi2.imag(), num->value.real(),
                   num->value.imag(), f.real(), f.imag(), err, cerr});
            const PhysicalState s = normalize_physical(project(p, con, coherent_vector(space, l1)));
            const FockVector e = embed(space, su2_coherent(m, xi1));
            worst_embed = std::max(worst_embed, (gauge_fixed(s).amps - e.amps).cwiseAbs().maxCoeff());
        }
        if (m >= 1) candidate_min = std::min(candidate_min, cand_max);
    }
    r.le("su2_overlap_max_error", worst, kSu2Tol);
    r.le("su2_embedding_max_error", worst_embed, kSu2Tol);
    // the j = 2m' reading must fail the same tolerance in every sector m' >= 1
    if (mmax >= 1) r.ge("candidate_j_eq_2mprime_min_error", candidate_min, kSu2Tol);

    const FockSpace ids(2, 10);
    const LinearOperator h = ho_hamiltonian(ids, 0, c.w(), c.h()) + ho_hamiltonian(ids, 1, c.w(), c.h());
    auto& it = r.table("identities", {"eprime", "idempotence", "hermiticity", "gauge", "evolution"});
    double id_worst = 0.0;
    for (double e : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 0.5}) {
        const ConstraintOp con = double_constraint(ids, e);
        const LinearOperator p = build_projector({con, eps});
        const auto rep = projector_identities(p, con, h, c.h());
        double g = 0.0, ev = 0.0;
        for (auto [_, v] : rep.gauge) g = std::max(g, v);
        for (auto [_, v] : rep.evolution) ev = std::max(ev, v);
        it.add({e, rep.idempotence, rep.hermiticity, g, ev});
        id_worst = std::max(id_worst, rep.worst());
    }
    r.le("identities_max_residual", id_worst, kIdentityTol);
    return r;
}

// --- spin-overlap -----------------------------------------------------------

inline void validate_spin_overlap(const RunConfig& c) {
    if (c.nmax.value_or(10) > 30) throw ConfigError("nmax", "two-mode runs are limited to nmax <= 30");
    if (c.max_two_j.value_or(20) > 60) throw ConfigError("max_two_j", "must be <= 60");
}

inline RunResult run_spin_overlap(const RunConfig& c) {
    RunResult r;
    const int nmax = c.nmax.value_or(10), max_two_j = c.max_two_j.value_or(20);
    const FockSpace space(2, nmax);
    const SpinOperators s = schwinger_operators(space);
    auto& st = r.table("sectors", {"mprime", "commutator_residual", "casimir_residual", "basis_map_residual"});
    double comm = 0.0, cas = 0.0, bmap = 0.0;
    const cplx I(0.0, 1.0);
    for (int mp = 0; mp <= nmax; ++mp) {
        const SpinSector sec = basis_map(space, mp);
        const CMatrix s1 = restrict_to(s.s1, sec), s2 = restrict_to(s.s2, sec), s3 = restrict_to(s.s3, sec),
                      s0 = restrict_to(s.s0, sec);
        auto cm = [](const CMatrix& a, const CMatrix& b) { return CMatrix(a * b - b * a); };
        const double c1 = (cm(s1, s2) - I * s3).cwiseAbs().maxCoeff();
        const double c2 = (cm(s2, s3) - I * s1).cwiseAbs().maxCoeff();
        const double c3 = (cm(s3, s1) - I * s2).cwiseAbs().maxCoeff();
        const double ccomm = std::max({c1, c2, c3});
        const CMatrix casimir = s1 * s1 + s2 * s2 + s3 * s3;
        const CMatrix id = CMatrix::Identity(sec.size(), sec.size());
        const double ccas = (casimir - s0 * (s0 + id)).cwiseAbs().maxCoeff();
        const SpinMatrices sm = spin_matrices(mp);
        const double cb = std::max((s3 - sm.jz).cwiseAbs().maxCoeff(), (s1 + I * s2 - sm.jp).cwiseAbs().maxCoeff());
        comm = std::max(comm, ccomm), cas = std::max(cas, ccas), bmap = std::max(bmap, cb);
        st.add({double(mp), ccomm, ccas, cb});
    }
    r.le("commutator_max_residual", comm, kSpinAlgebraTol);
    r.le("casimir_max_residual", cas, kSpinAlgebraTol);
    r.le("basis_map_max_residual", bmap, kSpinAlgebraTol);

    auto& rt = r.table("resolution", {"two_j", "n_theta", "n_phi", "residual"});
    double res = 0.0;
    for (int tj = 0; tj <= max_two_j; ++tj) {
        const int n = su2_min_nodes(tj);
        const auto rep = su2_resolution_check(tj, n, n);
        res = std::max(res, rep.residual);
        rt.add({double(tj), double(n), double(n), rep.residual});
    }
    r.le("su2_resolution_max_residual", res, kSpinResolutionTol);

    Rng rng = make_rng(c.seed, 4);
    const auto xis = random_disk(rng, c.pairs.value_or(10), 2.0);
    auto& ut = r.table("uncertainty", {"two_j", "xi_re", "xi_im", "var_product", "bound_s3", "bound_s0", "rotated_ratio"});
    double heis = INFINITY, minu = 0.0;
    for (int tj = 1; tj <= max_two_j; ++tj)
        for (cplx xi : xis) {
            const UncertaintyReport u = uncertainty_product(tj, xi);
            heis = std::min(heis, u.var_product - u.bound_s3);
            minu = std::max(minu, std::abs(u.rotated_ratio - 1.0));
            ut.add({double(tj), xi.real(), xi.imag(), u.var_product, u.bound_s3, u.bound_s0, u.rotated_ratio});
        }
    r.ge("heisenberg_margin_min", heis, -1e-12);
    r.le("minimum_uncertainty_max_error", minu, kSpinAlgebraTol);
    return r;
}

// --- correlations -------------------------------------------------------------

inline void validate_correlations(const RunConfig& c) {
    const int nmax = c.nmax.value_or(40), m = c.mprime.value_or(3);
    if (m + 1 > nmax) throw ConfigError("mprime", "must be < nmax");
    if (c.alpha && coherent_leakage(*c.alpha, nmax) > kLeakageError)
        throw ConfigError("alpha", "coherent state leaks past nmax");
}

inline RunResult run_correlations(const RunConfig& c) {
    RunResult r;
    const int nmax = c.nmax.value_or(40), m = c.mprime.value_or(3);
    const double w = c.w(), hb = c.h();
    Rng rng = make_rng(c.seed, 5);
    const int np = c.pairs.value_or(10);

    // single model
    const cplx a1 = c.alpha.value_or(cplx(1.2, 0.5));
    const CorrelationEngine eng(Model::single, {a1}, m, nmax, w, hb);
    const auto probes = random_disk(rng, np, 2.5, 0.05);
    auto& t = r.table("single", {"probe_re", "probe_im", "observable", "ratio_re", "ratio_im", "oracle_re", "oracle_im",
                                 "printed_re", "printed_im", "rel_error"});
    double ratio_err = 0.0, printed_gap = 0.0, wf_err = 0.0, h_err = 0.0;
    for (cplx pr : probes) {
        const std::vector<cplx> pv{pr};
        for (Observable o : {Observable::H, Observable::Q1, Observable::P1}) {
            const CorrelationReport rep = eng.correlate(o, pv);
            const cplx ratio = rep.ratio_to_overlap.value_or(cplx(NAN, NAN));
            const double rel = std::abs(rep.value - rep.oracle_ratio * rep.overlap) /
                               std::max(std::abs(rep.value), std::abs(rep.oracle_ratio * rep.overlap));
            ratio_err = std::max(ratio_err, rel);
            const cplx printed = rep.printed_ratio.value_or(cplx(NAN, NAN));
            if (o != Observable::H) printed_gap = std::max(printed_gap, std::abs(printed - rep.oracle_ratio));
            else h_err = std::max(h_err, std::abs(ratio.real() / (hb * w) - (m + 0.5)) + std::abs(ratio.imag()));
            t.add({pr.real(), pr.imag(), double(static_cast<int>(o)), ratio.real(), ratio.imag(), rep.oracle_ratio.real(),
                   rep.oracle_ratio.imag(), printed.real(), printed.imag(), rel});
        }
        const std::vector<cplx> st{a1};
        wf_err = std::max(wf_err, std::abs(phys_wavefunction_closed(Model::single, pv, st, m) -
                                           phys_wavefunction_numeric(Model::single, pv, st, m, nmax)));
    }
    r.le("single_ratio_vs_oracle_max_rel_error", ratio_err, kOverlapTol);
    r.le("single_h_ratio_max_error", h_err, kOverlapTol);
    r.le("single_wavefunction_closed_vs_numeric", wf_err, kOverlapTol);
    r.report("printed_bracket_max_gap", printed_gap);

    // closed-form examples on the peak
    {
        const std::vector<cplx> rm{cplx(std::sqrt(double(m)))};
        const double expect = std::exp(-m + m * std::log(double(m)) - std::lgamma(m + 1.0));
        r.abs("wavefunction_at_peak", phys_wavefunction_numeric(Model::single, rm, rm, m, nmax).real(), expect,
              kOverlapTol);
        const CorrelationEngine e2(Model::single, rm, m, nmax, w, hb);
        const auto q = e2.correlate(Observable::Q1, rm);
        r.abs("q_ratio_at_peak", q.ratio_to_overlap.value_or(cplx(NAN)).real(), std::sqrt(2.0 * hb * m / w),
              kOverlapTol);
        const auto peak = e2.peak_location();
        r.abs("peak_radius", std::abs(peak[0]), std::sqrt(double(m)), 1e-6);
        // gauge rotation of the state leaves |ratio| unchanged
        const CorrelationEngine e3(Model::single, {a1 * std::polar(1.0, 0.9)}, m, nmax, w, hb);
        double inv = 0.0;
        for (cplx pr : probes) {
            const std::vector<cplx> pv{pr};
            for (Observable o : {Observable::Q1, Observable::P1}) {
                const auto x = eng.correlate(o, pv).ratio_to_overlap, y = e3.correlate(o, pv).ratio_to_overlap;
                inv = std::max(inv, std::abs(std::abs(*x) - std::abs(*y)));
            }
        }
        r.le("gauge_invariance_of_ratio", inv, 1e-12);
        if (m >= 1) {
            const CorrelationEngine e0(Model::single, {cplx(0.0)}, m, nmax, w, hb);
            const auto z = e0.correlate(Observable::Q1, rm);
            r.flag("null_state_flagged", z.null_state && !z.ratio_to_overlap);
        }
    }

    // double model
    {
        const int md = std::min(m, 6);
        const std::vector<cplx> st{c.alpha.value_or(cplx(0.9, 0.3)), c.beta.value_or(cplx(0.6, -0.4))};
        // cutoff covering both the state and unit-disk probes
        const std::vector<cplx> unit{cplx(1.0), cplx(1.0)};
        int dn = md + 6;
        while (coherent_leakage(st, dn) > 1e-12 || coherent_leakage(unit, dn) > 1e-12) ++dn;
        const CorrelationEngine ed(Model::double_, st, md, dn, w, hb);
        const auto pa = random_disk(rng, np, 1.0, 0.05), pb = random_disk(rng, np, 1.0, 0.05);
        double err = 0.0, wfe = 0.0;
        for (int i = 0; i < np; ++i) {
            const std::vector<cplx> pv{pa[static_cast<std::size_t>(i)], pb[static_cast<std::size_t>(i)]};
            // error relative to the absolute-term scale of the binomial sum, which
            // stays meaningful when the terms of z^m cancel
            const double spread = std::abs(pv[0] * st[0]) + std::abs(pv[1] * st[1]);
            const double scale = std::exp(-0.5 * (std::norm(pv[0]) + std::norm(pv[1]) + std::norm(st[0]) +
                                                  std::norm(st[1])) +
                                          md * std::log(spread) - std::lgamma(md + 1.0));
            for (Observable o : {Observable::H, Observable::Q1, Observable::P1, Observable::Q2, Observable::P2}) {
                const auto rep = ed.correlate(o, pv);
                const double mag = std::max({std::abs(rep.value), std::abs(rep.oracle_ratio * rep.overlap),
                                             scale * (1.0 + std::abs(rep.oracle_ratio))});
                err = std::max(err, std::abs(rep.value - rep.oracle_ratio * rep.overlap) / mag);
            }
            wfe = std::max(wfe, std::abs(phys_wavefunction_closed(Model::double_, pv, st, md) -
                                         phys_wavefunction_numeric(Model::double_, pv, st, md, dn)));
        }
        r.le("double_ratio_vs_oracle_max_rel_error", err, kOverlapTol);
        r.le("double_wavefunction_closed_vs_numeric", wfe, kOverlapTol);
        const int mp = 50;
        const auto pk = peak_labels(Model::double_, mp, 0.5);
        const double mag = renormalized_magnitude(Model::double_, pk, pk, mp);
        r.abs("double_peak_renormalized_m50", mag, 1.0, 0.05);
        r.report("double_peak_stirling_prediction", 1.0 - 1.0 / (12.0 * mp));
    }

    // gauge phase one-form
    {
        const int n = 2000;
        const auto circ = circle_path(1.5, n);
        std::vector<double> f0(circ.size(), 0.0), fs, fw;
        const int wind = 3;
        for (int k = 0; k <= n; ++k) {
            const double th = 2.0 * std::numbers::pi * k / n;
            fs.push_back(std::sin(2.0 * th) + 0.3 * std::cos(th));
            fw.push_back(wind * th);
        }
        r.abs("one_form_zero_f", gauge_phase_one_form_check(circ, f0).shift, 0.0, kOneFormTol);
        r.abs("one_form_closed_smooth", gauge_phase_one_form_check(circ, fs).shift, 0.0, kOneFormTol);
        r.abs("one_form_winding", gauge_phase_one_form_check(circ, fw).shift, 2.0 * std::numbers::pi * wind,
              kOneFormTol);
        const auto quarter = circle_path(1.5, 500, 0.0, 0.5 * std::numbers::pi);
        std::vector<double> fq;
        for (int k = 0; k <= 500; ++k) fq.push_back(0.5 * std::numbers::pi * k / 500);
        r.abs("one_form_open_quarter", gauge_phase_one_form_check(quarter, fq).shift, 0.5 * std::numbers::pi,
              kOneFormTol);
    }
    return r;
}

// --- classical-limit ----------------------------------------------------------

inline void validate_classical_limit(const RunConfig& c) {
    const auto ms = c.ms.value_or(std::vector<int>{4, 16, 64});
    if (ms.size() < 2) throw ConfigError("ms", "need at least two values");
    for (std::size_t i = 1; i < ms.size(); ++i)
        if (ms[i] <= ms[i - 1]) throw ConfigError("ms", "must be strictly increasing");
    if (ms.back() > 256) throw ConfigError("ms", "entries must be <= 256");
}

inline RunResult run_classical_limit(const RunConfig& c) {
    RunResult r;
    const auto ms = c.ms.value_or(std::vector<int>{4, 16, 64});
    const auto offsets =
        c.offsets.value_or(std::vector<double>{0.0, 0.25 * std::numbers::pi, 0.5 * std::numbers::pi});
    const ClassicalLimitTable tab = classical_limit_check(ms, offsets, c.w(), c.h());
    auto& t = r.table("single", {"m", "offset", "weighted_deviation", "peak_deviation", "h_ratio"});
    for (const auto& row : tab.rows) t.add({double(row.m), row.offset, row.weighted_deviation, row.peak_deviation, row.h_ratio});
    r.flag("deviation_monotone", tab.monotone);
    r.range("deviation_fit_exponent", tab.fit_exponent, -0.7, -0.3);
    r.report("peak_deviation_fit_exponent", tab.peak_fit_exponent);
    r.le("h_ratio_max_error", tab.max_h_error, kOverlapTol * 100.0 * ms.back());

    auto& d = r.table("double", {"m", "theta_peak", "e_total", "e1", "e1_target", "fwhm", "peak_renormalized"});
    double th = 0.0, et = 0.0, e1 = 0.0;
    bool width_down = true;
    double prev_w = INFINITY;
    for (int m : ms) {
        const DoubleLimitReport dr = double_limit_check(m, 0.5);
        th = std::max(th, std::abs(dr.theta_peak));
        et = std::max(et, std::abs(dr.e_total - m));
        e1 = std::max(e1, std::abs(dr.e1 - dr.e1_target));
        if (!(dr.fwhm < prev_w)) width_down = false;
        prev_w = dr.fwhm;
        d.add({double(m), dr.theta_peak, dr.e_total, dr.e1, dr.e1_target, dr.fwhm, dr.peak_renormalized});
    }
    r.le("double_theta_peak_max", th, 1e-6);
    r.le("double_e_total_max_error", et, 1e-10 * ms.back());
    r.le("double_e1_max_error", e1, 1e-10 * ms.back());
    r.flag("double_width_decreasing", width_down);
    return r;
}

// --- geometry -----------------------------------------------------------------

inline void validate_geometry(const RunConfig&) {}

inline RunResult run_geometry(const RunConfig& c) {
    RunResult r;
    const int n = c.n.value_or(1);
    const double w = c.w(), hb = c.h();
    const AreaQuantization aq = area_quantization(n, w, hb);
    r.abs("s2", aq.s2, 2.0 * n, 0.0);
    r.abs("energy", aq.energy, hb * w * n, 1e-12 * hb * w * n);
    r.abs("symplectic_area", aq.symplectic_area, std::numbers::pi * aq.s2, kAreaTol);
    r.report("metric_area", aq.metric_area);
    r.report("metric_area_over_pi_s2", aq.metric_area / (std::numbers::pi * aq.s2));

    const ReducedMetric g(aq.s2);
    auto& t = r.table("curvature", {"r1", "scalar_curvature_fd", "exact", "pullback_max_error"});
    double curv = 0.0, pull = 0.0;
    for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double r1 = frac * g.radius();
        const double k = g.scalar_curvature_fd(r1);
        const auto pm = pullback_metric(aq.s2, r1, 0.4);
        const auto gm = g.eval(r1);
        const double pe = std::max({std::abs(pm[0][0] - gm.g_rr), std::abs(pm[1][1] - gm.g_tt), std::abs(pm[0][1]),
                                    std::abs(pm[1][0])});
        curv = std::max(curv, std::abs(k - g.scalar_curvature_exact()));
        pull = std::max(pull, pe);
        t.add({r1, k, g.scalar_curvature_exact(), pe});
    }
    r.le("curvature_max_error", curv, kCurvatureTol);
    r.le("pullback_max_error", pull, kPullbackTol);

    // classical trajectories under two lapses with the same final proper time
    const double energy = c.energy.value_or(aq.energy);
    Lapse l1 = Lapse::constant(1.0, 2.0, 40);
    Lapse l2 = l1;
    Rng rng = make_rng(c.seed, 7);
    std::uniform_real_distribution<double> u(0.2, 1.8);
    double tot = 0.0;
    for (auto& v : l2.lambda) tot += (v = u(rng));
    for (auto& v : l2.lambda) v *= static_cast<double>(l2.lambda.size()) / tot;
    const TrajectorySpec ss{Model::single, energy, w, {0.3}, {}};
    const auto t1 = classical_trajectory(ss, l1), t2 = classical_trajectory(ss, l2);
    double cres = 0.0;
    for (const auto& s : t2) cres = std::max(cres, std::abs(constraint_value(s, w, energy)));
    r.le("single_constraint_residual", cres, 1e-12 * std::max(1.0, energy));
    r.le("single_lapse_endpoint_gap",
         std::max(std::abs(t1.back().q[0] - t2.back().q[0]), std::abs(t1.back().p[0] - t2.back().p[0])),
         1e-12 * std::max(1.0, std::sqrt(energy)) * std::max(1.0, 1.0 / w));

    const double a = std::sqrt(0.6 * 2.0 * energy) / w, b = std::sqrt(0.4 * 2.0 * energy) / w;
    const TrajectorySpec ds{Model::double_, energy, w, {0.3, -0.8}, {a, b}};
    const auto d1 = classical_trajectory(ds, l1), d2 = classical_trajectory(ds, l2);
    double rel = 0.0, sinv = 0.0, sphere = 0.0;
    const SCoords s_start = s_coordinates(d2.front(), w, hb);
    const double s2 = 2.0 * energy / (w * hb);
    for (const auto& s : d2) {
        rel = std::max(rel, std::abs(std::remainder(relative_phase(s, w) - relative_phase(d2.front(), w),
                                                    2.0 * std::numbers::pi)));
        const SCoords sc = s_coordinates(s, w, hb);
        sinv = std::max({sinv, std::abs(sc.s1 - s_start.s1), std::abs(sc.s2 - s_start.s2), std::abs(sc.s3 - s_start.s3)});
        sphere = std::max({sphere, std::abs(sc.s0 - 0.25 * s2),
                           std::abs(sc.s0 * sc.s0 - sc.s1 * sc.s1 - sc.s2 * sc.s2 - sc.s3 * sc.s3)});
    }
    r.le("double_relative_phase_drift", rel, 1e-12);
    r.le("double_s_coordinate_drift", sinv, 1e-12 * std::max(1.0, s2));
    r.le("double_s0_sphere_error", sphere, 1e-12 * std::max(1.0, s2 * s2));
    r.le("double_lapse_endpoint_gap",
         std::max({std::abs(d1.back().q[0] - d2.back().q[0]), std::abs(d1.back().q[1] - d2.back().q[1]),
                   std::abs(d1.back().p[0] - d2.back().p[0]), std::abs(d1.back().p[1] - d2.back().p[1])}),
         1e-12 * std::max(1.0, std::sqrt(energy)) * std::max(1.0, 1.0 / w));

    const Point4 x = rescaled_point(d2[7], w, hb);
    auto f1 = [](const Point4& p) { return s_coordinates(p).s1; };
    auto f2 = [](const Point4& p) { return s_coordinates(p).s2; };
    auto f3 = [](const Point4& p) { return s_coordinates(p).s3; };
    auto con = [&](const Point4& p) { return rescaled_constraint(p, s2); };
    const SCoords sx = s_coordinates(x);
    const double pb = std::max({std::abs(poisson_bracket_fd(f1, f2, x) - sx.s3), std::abs(poisson_bracket_fd(f2, f3, x) - sx.s1),
                                std::abs(poisson_bracket_fd(f3, f1, x) - sx.s2)});
    const double pc = std::max({std::abs(poisson_bracket_fd(f1, con, x)), std::abs(poisson_bracket_fd(f2, con, x)),
                                std::abs(poisson_bracket_fd(f3, con, x))});
    r.le("s_algebra_bracket_error", pb, 1e-6 * std::max(1.0, s2));
    r.le("s_constraint_bracket_error", pc, 1e-6 * std::max(1.0, s2));

    const EnergySpectra sp = energy_spectra(6, w, hb);
    auto& st = r.table("spectra", {"level", "dirac", "reduced"});
    for (std::size_t i = 0; i < sp.dirac.size(); ++i) st.add({double(i), sp.dirac[i], sp.reduced[i]});
    return r;
}

// --- wiener -------------------------------------------------------------------

inline void validate_wiener(const RunConfig& c) {
    const int nmax = c.nmax.value_or(40);
    const double e = c.eprime.value_or(1.0);
    if (e < -0.5 || e > nmax) throw ConfigError("eprime", "must lie in [-0.5, nmax]");
    if (coherent_leakage(c.alpha.value_or(1.0), nmax) > kLeakageError)
        throw ConfigError("alpha", "coherent state leaks past nmax");
    if (c.T && c.lambda0) {
        const double k = *c.T * *c.lambda0 / std::numbers::pi;
        if (std::abs(k - std::round(k)) > 1e-9 || std::lround(k) % 2 != 0)
            throw ConfigError("lambda0", "T*lambda0 must be an even multiple of pi");
    }
}

inline RunResult run_wiener(const RunConfig& c) {
    RunResult r;
    const double nu = c.nu.value_or(1.0);
    const std::vector<double> zero2{0.0, 0.0}, x1{0.3, -0.2};

    const HeatKernelParams hk{nu, 0.0, 0.7};
    const KernelMoments km = heat_kernel_moments(hk, x1);
    r.abs("kernel_normalization", km.integral, 1.0, kKernelTol);
    r.abs("kernel_variance", km.variance, nu * hk.dt(), kKernelTol);
    const std::vector<double> x2{-0.5, 1.1};
    r.abs("kernel_symmetry", heat_kernel(hk, x1, x2) - heat_kernel(hk, x2, x1), 0.0, 1e-15);

    double sg = 0.0;
    auto& tg = r.table("semigroup", {"dim", "t1", "t2", "t3", "max_abs_residual", "max_rel_residual"});
    for (int dim : {1, 2})
        for (auto [a, b, d] : {std::tuple{0.0, 0.4, 1.0}, std::tuple{0.0, 0.5, 1.0}, std::tuple{0.2, 1.1, 3.0}}) {
            const SemigroupReport rep = semigroup_check(nu, a, b, d, dim, 10, c.seed);
            sg = std::max(sg, rep.max_abs_residual);
            tg.add({double(dim), a, b, d, rep.max_abs_residual, rep.max_rel_residual});
        }
    r.le("semigroup_max_residual", sg, kKernelTol);
    const auto eq = semigroup_compose(nu, 0.0, 0.5, 1.0, zero2, zero2);
    r.abs("semigroup_equal_halves_origin", eq.first, 1.0 / (2.0 * std::numbers::pi * nu), kKernelTol);

    const int bs = c.bridge_samples.value_or(100000), bsteps = c.bridge_steps.value_or(8);
    const BridgeMoments bm = bridge_moments(1.0, 1.0, zero2, zero2, bsteps, bs, c.seed);
    auto& tb = r.table("bridge", {"t", "mean", "mean_target", "mean_se", "var", "var_target", "var_se"});
    for (std::size_t i = 0; i < bm.times.size(); ++i)
        tb.add({bm.times[i], bm.mean[i], bm.mean_target[i], bm.mean_se[i], bm.var[i], bm.var_target[i], bm.var_se[i]});
    r.le("bridge_mean_max_z", bm.max_z_mean, kMcSigmas);
    r.le("bridge_var_max_z", bm.max_z_var, kMcSigmas);
    if (bsteps % 2 == 0) {
        const std::size_t mid = static_cast<std::size_t>(bsteps / 2);
        r.abs("bridge_midpoint_variance", bm.var[mid], 0.25, kMcSigmas * bm.var_se[mid]);
    }
    {
        Rng a = make_rng(c.seed, 9), b = make_rng(c.seed, 9);
        const std::vector<double> e1{1.0, -2.0};
        const auto pa = sample_pinned_path(1e-8, 1.0, zero2, e1, 16, a);
        const auto pb = sample_pinned_path(1e-8, 1.0, zero2, e1, 16, b);
        double lin = 0.0;
        bool same = true;
        for (std::size_t i = 0; i < pa.samples.size(); ++i)
            for (std::size_t k = 0; k < 2; ++k) {
                lin = std::max(lin, std::abs(pa.samples[i][k] - e1[k] * pa.times[i]));
                same = same && pa.samples[i][k] == pb.samples[i][k];
            }
        r.le("bridge_small_nu_linear_gap", lin, 1e-3);
        r.flag("bridge_seed_reproducible", same);
    }

    LambdaAverageSpec ls;
    ls.nmax = c.nmax.value_or(40);
    ls.eprime = c.eprime.value_or(1.0);
    ls.epsilon = c.epsilon.value_or(0.1);
    ls.probe = {c.alpha.value_or(1.0)};
    ls.state = {c.alpha.value_or(1.0)};
    ls.paths = c.paths.value_or(100000);
    ls.seed = c.seed;
    ls.walk.T = c.T.value_or(1.0);
    ls.walk.lambda0 = c.lambda0.value_or(2.0 * std::numbers::pi / ls.walk.T);
    ls.walk.steps = c.steps.value_or(16);
    auto& tl = r.table("lambda_average", {"eprime", "lambda0", "nu", "spectral_re", "spectral_im", "quadrature_re",
                                          "quadrature_im", "mc_re", "mc_im", "mc_se_re", "mc_se_im", "quadrature_error",
                                          "mc_z"});
    double qerr = 0.0, mcz = 0.0;
    auto run = [&](LambdaAverageSpec s) {
        const LambdaAverageResult x = lambda_average_propagator(s);
        tl.add({s.eprime, s.walk.lambda0, s.walk.nu_prime, x.spectral.real(), x.spectral.imag(), x.quadrature.real(),
                x.quadrature.imag(), x.monte_carlo.real(), x.monte_carlo.imag(), x.mc_se_re, x.mc_se_im,
                x.quadrature_error, x.mc_z});
        qerr = std::max(qerr, x.quadrature_error);
        mcz = std::max(mcz, x.mc_z);
        return x;
    };
    for (double vp : c.nus.value_or(std::vector<double>{0.5, 1.0, 2.0})) {
        LambdaAverageSpec s = ls;
        s.walk.nu_prime = vp;
        s.seed = ls.seed + static_cast<std::uint64_t>(std::llround(vp * 1000.0));
        run(s);
        s.walk.lambda0 *= 2.0;
        run(s);
    }
    LambdaAverageSpec half = ls;
    half.eprime = std::floor(ls.eprime) + 0.5;
    const auto hx = run(half);
    r.le("lambda_quadrature_max_error", qerr, kSinKernelTol);
    r.le("lambda_mc_max_z", mcz, kMcSigmas);
    r.abs("lambda_half_integer_null", std::abs(hx.spectral), 0.0, kNullNorm);
    LambdaAverageSpec deg = ls;
    deg.walk.degenerate = true;
    const auto dx = lambda_average_propagator(deg);
    r.abs("lambda_degenerate_is_overlap",
          std::abs(dx.monte_carlo - overlap_alpha(ls.probe[0], ls.state[0])), 0.0, kOverlapTol);
    if (std::abs(ls.eprime - 1.0) < 1e-15 && std::abs(ls.probe[0] - 1.0) < 1e-15)
        r.abs("lambda_spectral_example", tl.rows.front()[3], std::exp(-1.0), 1e-12);
    return r;
}

}  // namespace experiments

struct ExperimentInfo {
    const char* name;
    const char* description;
    const char* reproduces;  ///< topic of the source material
    void (*validate)(const RunConfig&);
    RunResult (*run)(const RunConfig&);
};

inline const std::vector<ExperimentInfo>& registry() {
    namespace x = experiments;
    static const std::vector<ExperimentInfo> r{
        {"resolution", "coherent-state overlap kernel and resolution of unity", "coherent states",
         x::validate_resolution, x::run_resolution},
        {"project-single", "single-oscillator projection, null windows, projector identities",
         "projection operator; single oscillator", x::validate_project_single, x::run_project_single},
        {"project-double", "double-oscillator projection versus SU(2) coherent overlaps",
         "projection operator; double oscillator", x::validate_project_double, x::run_project_double},
        {"spin-overlap", "Schwinger spin algebra, SU(2) resolution of unity, minimum uncertainty",
         "double oscillator: spin representation", x::validate_spin_overlap, x::run_spin_overlap},
        {"correlations", "physical wavefunctions, H/Q/P correlations, gauge-phase one-form",
         "correlation functions; gauge phase", x::validate_correlations, x::run_correlations},
        {"classical-limit", "correlation ratios versus classical trajectories as m grows", "classical limit",
         x::validate_classical_limit, x::run_classical_limit},
        {"geometry", "reduced phase-space curvature, area quantization, proper-time trajectories",
         "double oscillator: reduced phase space", x::validate_geometry, x::run_geometry},
        {"wiener", "heat-kernel semigroup, Brownian bridges, lambda-averaged propagator",
         "Wiener measure; proper-time reduction", x::validate_wiener, x::run_wiener},
    };
    return r;
}

inline const ExperimentInfo& find_experiment(const std::string& name) {
    for (const auto& e : registry())
        if (name == e.name) return e;
    throw UnknownExperiment(name);
}

/// Validates and runs. ConfigError and UnknownExperiment propagate before any
/// computation starts.
inline RunResult run_experiment(const RunConfig& c) {
    const ExperimentInfo& e = find_experiment(c.experiment);
    e.validate(c);
    RunResult r = e.run(c);
    r.experiment = e.name;
    r.seed = c.seed;
    r.config_hash = config_hash(c);
    return r;
}

}  // namespace csq
