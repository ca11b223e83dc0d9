// Command-line runner: `csq list` and `csq run --config <path> [--out <dir>] [--seed <u64>]`.
#include "csq/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

enum Exit { kPass = 0, kAssertFail = 1, kUnknownExperiment = 2, kValidation = 3 };

void print_list(std::ostream& os) {
    for (const auto& e : csq::registry()) {
        char line[256];
        std::snprintf(line, sizeof line, "%-16s %-76s [%s]\n", e.name, e.description, e.reproduces);
        os << line;
    }
}

void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << content;
        f.flush();
        if (!f) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

int run(const std::string& config_path, const std::string& out_opt, const std::optional<std::uint64_t>& seed) {
    csq::RunConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in) throw csq::ConfigError("<file>", "cannot read " + config_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw csq::ConfigError("<file>", std::string("malformed JSON: ") + e.what());
        }
        cfg = csq::parse_config(j);
        if (seed) cfg.seed = *seed;
        const auto& info = csq::find_experiment(cfg.experiment);
        info.validate(cfg);
    } catch (const csq::UnknownExperiment& e) {
        std::cerr << "error: " << e.what() << "\navailable experiments:\n";
        print_list(std::cerr);
        return kUnknownExperiment;
    } catch (const csq::ConfigError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidation;
    }

    const csq::RunResult result = csq::run_experiment(cfg);
    const fs::path out = !out_opt.empty() ? fs::path(out_opt) : fs::path(cfg.out.value_or("results"));
    fs::create_directories(out);
    for (const auto& t : result.tables) write_atomic(out / csq::table_filename(result, t), csq::to_csv(t));
    write_atomic(out / (result.experiment + ".json"), csq::to_json(result));

    for (const auto& c : result.checks) {
        if (c.kind == "report") continue;
        std::printf("%s %-44s %.6g\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value);
    }
    std::printf("%s: %s (%s)\n", result.experiment.c_str(), result.passed() ? "pass" : "fail",
                (out / (result.experiment + ".json")).string().c_str());
    return result.passed() ? kPass : kAssertFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained-quantization numerics runner"};
    app.require_subcommand(1);
    auto* list = app.add_subcommand("list", "List experiments");
    auto* runc = app.add_subcommand("run", "Run one experiment from a JSON config");
    std::string config, out;
    std::uint64_t seed = 0;
    runc->add_option("--config", config, "Path to the JSON config")->required();
    runc->add_option("--out", out, "Output directory (default: config 'out' or ./results)");
    auto* seed_opt = runc->add_option("--seed", seed, "Override the config seed");
    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        print_list(std::cout);
        return kPass;
    }
    try {
        return run(config, out, seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kAssertFail;
    }
}
