// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include "csq/csq.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace csq;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Cached {
    RunResult result;
    double seconds = 0.0;
};

std::map<std::string, Cached>& cache() {
    static std::map<std::string, Cached> c;
    return c;
}

RunConfig default_config(const std::string& name) { return parse_config(json{{"experiment", name}, {"seed", 1}}); }

const Cached& run_cached(const std::string& name) {
    auto it = cache().find(name);
    if (it == cache().end()) {
        const auto t0 = Clock::now();
        RunResult r = run_experiment(default_config(name));
        it = cache().emplace(name, Cached{std::move(r), seconds_since(t0)}).first;
    }
    return it->second;
}

std::string serialize(const RunResult& r) {
    std::string s = to_json(r);
    for (const auto& t : r.tables) s += table_filename(r, t) + "\n" + to_csv(t);
    return s;
}

/// All named checks exist and pass; detail lists failures and values.
Outcome checks_pass(const std::string& experiment, const std::vector<std::string>& names) {
    const RunResult& r = run_cached(experiment).result;
    Outcome o{true, ""};
    for (const auto& n : names) {
        const Check* c = r.find(n);
        char buf[160];
        if (!c) {
            o.pass = false;
            std::snprintf(buf, sizeof buf, "%s missing; ", n.c_str());
        } else {
            if (!c->pass) o.pass = false;
            std::snprintf(buf, sizeof buf, "%s=%.3g%s; ", n.c_str(), c->value, c->pass ? "" : " (FAIL)");
        }
        o.detail += buf;
    }
    return o;
}

Outcome merge(std::vector<Outcome> parts) {
    Outcome o{true, ""};
    for (auto& p : parts) {
        o.pass = o.pass && p.pass;
        o.detail += p.detail;
    }
    return o;
}

Outcome projection_exactness() {
    const auto t0 = Clock::now();
    const FockSpace space(1, 40);
    const cplx alpha(0.8, -0.6);
    const FockVector coh = coherent_vector(space, alpha);
    double worst = 0.0, worst_null = 0.0;
    for (int m : {0, 1, 2, 3}) {
        const PhysicalState st = project(ProjectorSpec{single_constraint(space, m), 0.1}, coh);
        CVector target = CVector::Zero(41);
        target(m) = std::exp(-0.5 * std::norm(alpha) - 0.5 * std::lgamma(m + 1.0)) * ipow(alpha, m);
        worst = std::max(worst, (st.vec.amps - target).cwiseAbs().maxCoeff());
    }
    for (double e : {0.3, 0.5, 1.5}) {
        const PhysicalState st = project(ProjectorSpec{single_constraint(space, e), 0.1}, coh);
        worst_null = std::max(worst_null, st.vec.amps.cwiseAbs().maxCoeff());
    }
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "max component error %.3g, null max %.3g, %.3f s", worst, worst_null, secs);
    return {worst <= 1e-12 && worst_null == 0.0 && secs < 1.0, buf};
}

Outcome projector_identities_both_models() {
    return merge({checks_pass("project-single", {"identities_max_residual"}),
                  checks_pass("project-double", {"identities_max_residual"})});
}

Outcome overlap_kernel() { return checks_pass("resolution", {"overlap_max_error", "resolution_residual_block"}); }

Outcome su2_equivalence() {
    return checks_pass("project-double",
                       {"su2_overlap_max_error", "su2_embedding_max_error", "candidate_j_eq_2mprime_min_error"});
}

Outcome spin_algebra() {
    return checks_pass("spin-overlap", {"commutator_max_residual", "casimir_max_residual", "basis_map_max_residual",
                                        "su2_resolution_max_residual"});
}

Outcome geometry() {
    return checks_pass("geometry", {"curvature_max_error", "pullback_max_error", "symplectic_area", "energy", "s2"});
}

Outcome classical_limits() {
    return merge({checks_pass("classical-limit", {"deviation_monotone", "deviation_fit_exponent", "h_ratio_max_error"}),
                  checks_pass("correlations", {"single_h_ratio_max_error"})});
}

Outcome wiener_machinery() {
    setenv("TOOL_THREADS", "1", 1);
    Outcome o = checks_pass("wiener", {"semigroup_max_residual", "bridge_mean_max_z", "bridge_var_max_z",
                                       "lambda_quadrature_max_error", "lambda_mc_max_z", "lambda_half_integer_null"});
    unsetenv("TOOL_THREADS");
    const double secs = run_cached("wiener").seconds;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f s single-threaded", secs);
    o.detail += buf;
    o.pass = o.pass && secs < 60.0;
    return o;
}

Outcome one_form() {
    return checks_pass("correlations", {"one_form_zero_f", "one_form_closed_smooth", "one_form_winding"});
}

Outcome determinism() {
    Outcome o{true, ""};
    for (const auto& e : registry()) {
        const std::string first = serialize(run_cached(e.name).result);
        const std::string second = serialize(run_experiment(default_config(e.name)));
        if (first != second) {
            o.pass = false;
            o.detail += std::string(e.name) + " differs; ";
        }
    }
    if (o.pass) o.detail = std::to_string(registry().size()) + " experiments byte-identical on rerun";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"projection exactness", projection_exactness},
        {"projector identities", projector_identities_both_models},
        {"overlap kernel and resolution of unity", overlap_kernel},
        {"SU(2) equivalence", su2_equivalence},
        {"spin algebra", spin_algebra},
        {"reduced phase-space geometry", geometry},
        {"classical limits", classical_limits},
        {"Wiener machinery", wiener_machinery},
        {"gauge-phase one-form", one_form},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s  criterion %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
