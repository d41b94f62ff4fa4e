#pragma once

#include <map>
#include <set>
#include <string>

#include "nehari/experiments.hpp"

namespace nehari::lab::detail {

using Runner = RunResult (*)(const ExperimentConfig&, int);

const std::map<std::string, Runner>& runners();

// Reads experiment parameters with defaults, records the effective values, rejects unknown keys.
class Params {
public:
    explicit Params(const json& given) : given_(given) {}

    double number(const std::string& key, double fallback);
    std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t lo);
    bool flag(const std::string& key, bool fallback);
    std::string choice(const std::string& key, const std::string& fallback, const std::set<std::string>& allowed);
    std::vector<std::int64_t> integers(const std::string& key, std::vector<std::int64_t> fallback, std::int64_t lo);

    // Throws ConfigError on keys that were never read.
    json finish() const;

private:
    const json& given_;
    json used_ = json::object();
};

struct Stats {
    double min = 0, max = 0, mean = 0, median = 0, q10 = 0, q90 = 0;
    std::size_t count = 0;
};

// Quantiles by linear interpolation between order statistics.
Stats stats_of(std::vector<double> v);
json stats_json(const Stats& s);

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

Check make_check(const std::string& name, double value, const std::string& relation, double bound);

RunResult run_nehari1d(const ExperimentConfig& c, int threads);
RunResult run_nehari2d(const ExperimentConfig& c, int threads);
RunResult run_para_bound(const ExperimentConfig& c, int threads);
RunResult run_commutator(const ExperimentConfig& c, int threads);
RunResult run_petermichl(const ExperimentConfig& c, int threads);
RunResult run_aak(const ExperimentConfig& c, int threads);
RunResult run_carleson(const ExperimentConfig& c, int threads);
RunResult run_journe(const ExperimentConfig& c, int threads);
RunResult run_lower_bound(const ExperimentConfig& c, int threads);

}  // namespace nehari::lab::detail
