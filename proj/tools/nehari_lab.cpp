#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nehari/experiments.hpp"

namespace lab = nehari::lab;
using lab::json;

namespace {

constexpr int exit_invalid = 2;
constexpr int exit_failed_check = 3;
constexpr int exit_io = 4;

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int report(const json& record, int code) {
    std::cerr << record.dump() << '\n';
    return code;
}

int run(const std::string& config_path, std::string out, std::optional<std::uint64_t> seed, int threads) {
    if (out.empty())
        if (const char* env = std::getenv("NEHARI_LAB_OUT")) out = env;
    if (out.empty()) return report({{"error", "validation"}, {"field", "--out"}, {"message", "no output directory; pass --out or set NEHARI_LAB_OUT"}}, exit_invalid);

    json raw;
    try {
        std::ifstream f(config_path);
        if (!f) return report({{"error", "io"}, {"message", "cannot read " + config_path}}, exit_io);
        raw = json::parse(f);
    } catch (const json::parse_error& e) {
        return report({{"error", "validation"}, {"field", "config"}, {"message", e.what()}}, exit_invalid);
    }
    if (seed && raw.is_object()) raw["seed"] = *seed;

    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    lab::RunResult result;
    try {
        result = lab::run_experiment(lab::ExperimentConfig::from_json(raw), threads);
    } catch (const lab::ConfigError& e) {
        return report({{"error", "validation"}, {"field", e.field()}, {"message", e.what()}}, exit_invalid);
    } catch (const nehari::ValidationError& e) {
        return report({{"error", "validation"}, {"field", "config"}, {"message", e.what()}}, exit_invalid);
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // Timing lives apart from the manifest so reruns stay byte-identical.
    try {
        lab::write_outputs(result, out);
        std::ofstream info(std::filesystem::path(out) / "run_info.json", std::ios::binary);
        info << json{{"started", started}, {"finished", utc_now()}, {"elapsed_seconds", elapsed},
                     {"threads", threads}, {"code_version", NEHARI_VERSION}}
                    .dump(2)
             << '\n';
    } catch (const std::exception& e) {
        return report({{"error", "io"}, {"message", e.what()}}, exit_io);
    }

    if (!result.passed()) {
        json failed = json::array();
        for (const auto& c : result.checks)
            if (!c.passed)
                failed.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"bound", c.bound}});
        return report({{"error", "check_failed"}, {"experiment", result.config["experiment"]}, {"checks", failed}}, exit_failed_check);
    }
    std::cout << (std::filesystem::path(out) / "manifest.json").string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Batch driver for the dyadic Hankel and BMO experiments"};
    app.require_subcommand(1);
    int threads = 1;
    std::optional<std::uint64_t> seed;
    app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
    app.add_option("--seed", seed, "overrides the config seed");

    auto* run_cmd = app.add_subcommand("run", "run one experiment from a JSON config");
    std::string config_path, out;
    run_cmd->add_option("--config", config_path, "config JSON")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out, "output directory (default: $NEHARI_LAB_OUT)");

    auto* list_cmd = app.add_subcommand("list", "print the experiment catalog");
    bool as_json = false;
    list_cmd->add_flag("--json", as_json, "machine-readable catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        return report({{"error", "usage"}, {"message", e.what()}}, exit_invalid);
    }

    if (*list_cmd) {
        json all = json::array();
        for (const auto& e : lab::experiment_catalog()) {
            if (as_json)
                all.push_back({{"name", e.name}, {"anchor", e.anchor}, {"summary", e.summary}});
            else
                std::cout << e.name << "\t" << e.anchor << "\t" << e.summary << '\n';
        }
        if (as_json) std::cout << all.dump(2) << '\n';
        return 0;
    }
    return run(config_path, out, seed, threads);
}
