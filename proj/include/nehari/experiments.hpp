#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nehari/types.hpp"

namespace nehari::lab {

using json = nlohmann::ordered_json;

// Invalid configuration; field names the offending key.
class ConfigError : public ValidationError {
public:
    ConfigError(std::string field, const std::string& what) : ValidationError(what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// SplitMix64 keyed by (seed, stream): state = seed ^ (0x9E3779B97F4A7C15 * (stream + 1)).
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next();
    double uniform();  // (0, 1], 53 bits
    double normal();   // Box-Muller, cosine branch only
    double sign();     // +1 or -1 from the top bit
    cplx complex_normal() { const double re = normal(); return {re, normal()}; }

private:
    std::uint64_t state_;
};

struct ExperimentConfig {
    std::string experiment;
    std::optional<int> n;
    std::optional<std::int64_t> M;
    int trials = 1;
    std::uint64_t seed = 0;
    json params = json::object();

    static ExperimentConfig from_json(const json& j);
    json to_json() const;  // echo with every default filled in by the experiment
};

struct CatalogEntry {
    std::string name;
    std::string anchor;  // statement exercised
    std::string summary;
};

const std::vector<CatalogEntry>& experiment_catalog();

using Value = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
};

struct Check {
    std::string name;
    double value = 0;
    std::string relation;  // "<=", "<", ">", ">=", "=="
    double bound = 0;
    bool passed = false;
};

struct RunResult {
    json config;  // normalized echo
    std::vector<Table> tables;
    json summary = json::object();
    std::vector<Check> checks;

    bool passed() const;
    json manifest() const;
};

RunResult run_experiment(const ExperimentConfig& config, int threads = 1);

// manifest.json and one <table>.csv per table; byte-stable for a given result.
void write_outputs(const RunResult& result, const std::filesystem::path& dir);
std::string to_csv(const Table& t);

std::string format_double(double x);  // %.17g

// Runs body(i) for i in [0, count) on up to `threads` workers; results come back in index order.
// The first exception (lowest index) is rethrown after all workers finish.
template <class T>
std::vector<T> parallel_map(std::size_t count, int threads, const std::function<T(std::size_t)>& body) {
    std::vector<std::optional<T>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < count;) {
            try {
                slots[i].emplace(body(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto n = static_cast<std::size_t>(std::max(1, threads));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(n, count); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::vector<T> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

}  // namespace nehari::lab
