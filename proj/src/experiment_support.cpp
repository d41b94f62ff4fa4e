#include <algorithm>
#include <cmath>

#include "experiment_runs.hpp"

namespace nehari::lab::detail {

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> r = {
        {"nehari1d", run_nehari1d},      {"nehari2d", run_nehari2d},     {"para-bound", run_para_bound},
        {"commutator-decomp", run_commutator}, {"petermichl", run_petermichl}, {"aak-extend", run_aak},
        {"carleson", run_carleson},      {"journe", run_journe},         {"lower-bound", run_lower_bound},
    };
    return r;
}

double Params::number(const std::string& key, double fallback) {
    double v = fallback;
    if (given_.contains(key)) {
        if (!given_[key].is_number()) throw ConfigError("params." + key, key + " must be a number");
        v = given_[key].get<double>();
        if (!std::isfinite(v)) throw ConfigError("params." + key, key + " must be finite");
    }
    used_[key] = v;
    return v;
}

std::int64_t Params::integer(const std::string& key, std::int64_t fallback, std::int64_t lo) {
    std::int64_t v = fallback;
    if (given_.contains(key)) {
        if (!given_[key].is_number_integer()) throw ConfigError("params." + key, key + " must be an integer");
        v = given_[key].get<std::int64_t>();
    }
    if (v < lo) throw ConfigError("params." + key, key + " must be at least " + std::to_string(lo));
    used_[key] = v;
    return v;
}

bool Params::flag(const std::string& key, bool fallback) {
    bool v = fallback;
    if (given_.contains(key)) {
        if (!given_[key].is_boolean()) throw ConfigError("params." + key, key + " must be true or false");
        v = given_[key].get<bool>();
    }
    used_[key] = v;
    return v;
}

std::string Params::choice(const std::string& key, const std::string& fallback, const std::set<std::string>& allowed) {
    std::string v = fallback;
    if (given_.contains(key)) {
        if (!given_[key].is_string()) throw ConfigError("params." + key, key + " must be a string");
        v = given_[key].get<std::string>();
    }
    if (!allowed.count(v)) {
        std::string names;
        for (const auto& a : allowed) names += (names.empty() ? "" : ", ") + a;
        throw ConfigError("params." + key, key + " must be one of " + names);
    }
    used_[key] = v;
    return v;
}

std::vector<std::int64_t> Params::integers(const std::string& key, std::vector<std::int64_t> fallback, std::int64_t lo) {
    std::vector<std::int64_t> v = std::move(fallback);
    if (given_.contains(key)) {
        const auto& a = given_[key];
        if (!a.is_array() || a.empty()) throw ConfigError("params." + key, key + " must be a nonempty integer list");
        v.clear();
        for (const auto& x : a) {
            if (!x.is_number_integer()) throw ConfigError("params." + key, key + " must hold integers");
            v.push_back(x.get<std::int64_t>());
        }
    }
    for (auto x : v)
        if (x < lo) throw ConfigError("params." + key, key + " entries must be at least " + std::to_string(lo));
    used_[key] = v;
    return v;
}

json Params::finish() const {
    for (const auto& [key, value] : given_.items())
        if (!used_.contains(key)) throw ConfigError("params." + key, "unknown parameter " + key);
    return used_;
}

Stats stats_of(std::vector<double> v) {
    Stats s;
    s.count = v.size();
    if (v.empty()) return s;
    std::sort(v.begin(), v.end());
    auto q = [&](double p) {
        const double pos = p * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    s.min = v.front();
    s.max = v.back();
    double sum = 0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    s.median = q(0.5);
    s.q10 = q(0.1);
    s.q90 = q(0.9);
    return s;
}

json stats_json(const Stats& s) {
    return {{"count", s.count}, {"min", s.min},       {"max", s.max}, {"mean", s.mean},
            {"median", s.median}, {"q10", s.q10}, {"q90", s.q90}};
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxx > 0 ? sxy / sxx : 0;
}

Check make_check(const std::string& name, double value, const std::string& relation, double bound) {
    bool ok = false;
    if (relation == "<=") ok = value <= bound;
    else if (relation == "<") ok = value < bound;
    else if (relation == ">") ok = value > bound;
    else if (relation == ">=") ok = value >= bound;
    else if (relation == "==") ok = value == bound;
    return {name, value, relation, bound, ok};
}

}  // namespace nehari::lab::detail
