#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "nehari/experiments.hpp"

using namespace nehari::lab;

namespace {

// Independent SplitMix64 (the published reference constants).
struct RefSplitMix {
    std::uint64_t x;
    std::uint64_t next() {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("nehari_lab_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::map<std::string, std::string> outputs(const ExperimentConfig& c, int threads, const std::string& tag) {
    const auto dir = scratch(tag);
    write_outputs(run_experiment(c, threads), dir);
    std::map<std::string, std::string> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
    std::filesystem::remove_all(dir);
    return files;
}

const Table& table(const RunResult& r, const std::string& name) {
    for (const auto& t : r.tables)
        if (t.name == name) return t;
    FAIL("missing table " << name);
    return r.tables.front();
}

std::string config_error_field(const json& j) {
    try {
        run_experiment(ExperimentConfig::from_json(j));
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<none>";
}

}  // namespace

TEST_CASE("catalog lists the nine experiments with anchors") {
    const auto& cat = experiment_catalog();
    std::set<std::string> names;
    for (const auto& e : cat) {
        names.insert(e.name);
        CHECK_FALSE(e.anchor.empty());
        CHECK_FALSE(e.summary.empty());
    }
    CHECK(cat.size() == 9);
    CHECK(names == std::set<std::string>{"nehari1d", "nehari2d", "para-bound", "commutator-decomp", "petermichl",
                                         "aak-extend", "carleson", "journe", "lower-bound"});
}

TEST_CASE("unknown experiment names the catalog") {
    try {
        ExperimentConfig::from_json({{"experiment", "nehari3d"}});
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "experiment");
        for (const auto& entry : experiment_catalog()) CHECK(std::string(e.what()).find(entry.name) != std::string::npos);
    }
}

TEST_CASE("invalid config fields are named") {
    CHECK(config_error_field({{"experiment", "nehari1d"}, {"trials", 0}}) == "trials");
    // parsed text stores non-negative integers as unsigned
    CHECK(config_error_field(json::parse(R"({"experiment": "nehari1d", "trials": 0})")) == "trials");
    CHECK(config_error_field(json::parse(R"({"experiment": "nehari1d", "M": 0})")) == "M");
    CHECK(config_error_field({{"experiment", "nehari1d"}, {"seed", -1}}) == "seed");
    CHECK(config_error_field({{"experiment", "nehari1d"}, {"colour", 1}}) == "colour");
    CHECK(config_error_field({{"experiment", "nehari1d"}, {"n", 4}, {"M", 8}}) == "M");
    CHECK(config_error_field({{"experiment", "nehari1d"}, {"M", 2.5}}) == "M");
    CHECK(config_error_field({{"trials", 1}}) == "experiment");
    CHECK(config_error_field(json::array()) == "");
    CHECK(config_error_field({{"experiment", "nehari1d"}, {"params", {{"bogus", 1}}}}) == "params.bogus");
    CHECK(config_error_field({{"experiment", "nehari1d"}, {"params", {{"bmo", "haar"}}}}) == "params.bmo");
    CHECK(config_error_field({{"experiment", "para-bound"}, {"params", {{"n_min", 5}, {"n_max", 4}}}}) == "params.n_max");
    CHECK(config_error_field({{"experiment", "journe"}, {"n", 5}}) == "n");
    // the little Hankel runs on a grid coarser than its degree on purpose
    CHECK(config_error_field({{"experiment", "nehari2d"}, {"n", 1}, {"M", 2}}) == "<none>");
}

TEST_CASE("streams follow SplitMix64 keyed by seed and stream") {
    for (std::uint64_t seed : {0ull, 7ull, 0xdeadbeefull})
        for (std::uint64_t s : {0ull, 1ull, 41ull}) {
            Stream a(seed, s);
            RefSplitMix ref{seed ^ (0x9e3779b97f4a7c15ull * (s + 1))};
            for (int i = 0; i < 5; ++i) CHECK(a.next() == ref.next());
        }
    Stream u(3, 0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK(x > 0);
        CHECK(x <= 1);
    }
    // Box-Muller sample mean and variance
    Stream g(11, 2);
    double m = 0, v = 0;
    const int K = 20000;
    for (int i = 0; i < K; ++i) {
        const double x = g.normal();
        m += x;
        v += x * x;
    }
    CHECK(std::abs(m / K) < 0.03);
    CHECK(std::abs(v / K - 1) < 0.05);
}

TEST_CASE("parallel_map keeps index order and rethrows the first failure") {
    for (int threads : {1, 2, 8}) {
        const auto v = parallel_map<std::size_t>(100, threads, [](std::size_t i) { return i * i; });
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == i * i);
        try {
            parallel_map<int>(50, threads, [](std::size_t i) -> int {
                if (i == 17 || i == 33) throw std::runtime_error(std::to_string(i));
                return 0;
            });
            FAIL("expected a throw");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "17");
        }
    }
}

TEST_CASE("csv format") {
    Table t{"x", {"a", "b", "c", "d"}, {{std::int64_t{3}, 0.1, std::string("exact"), true}, {std::int64_t{-1}, 1e300, std::string("s"), false}}};
    CHECK(to_csv(t) == "a,b,c,d\n3,0.10000000000000001,exact,true\n-1,1.0000000000000001e+300,s,false\n");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
    CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("nehari1d single trial gives one row and reruns byte-identically") {
    const auto c = ExperimentConfig::from_json({{"experiment", "nehari1d"}, {"M", 8}, {"trials", 1}, {"seed", 7}});
    const RunResult r = run_experiment(c);
    REQUIRE(r.tables.size() == 1);
    CHECK(table(r, "ratios").rows.size() == 1);
    CHECK(std::get<std::int64_t>(table(r, "ratios").rows[0][1]) == 8);
    CHECK(r.config["params"]["bmo"] == "dyadic_shifted");
    const auto a = outputs(c, 1, "a"), b = outputs(c, 1, "b");
    CHECK(a == b);
    CHECK(a.count("manifest.json") == 1);
    CHECK(a.count("ratios.csv") == 1);
}

TEST_CASE("para-bound writes one row per depth and trial") {
    const auto c = ExperimentConfig::from_json(
        {{"experiment", "para-bound"}, {"trials", 3}, {"seed", 1}, {"params", {{"n_min", 4}, {"n_max", 6}}}});
    const RunResult r = run_experiment(c);
    const auto& rows = table(r, "ratios").rows;
    REQUIRE(rows.size() == 9);
    for (std::size_t u = 0; u < rows.size(); ++u) {
        CHECK(std::get<std::int64_t>(rows[u][0]) == 4 + static_cast<std::int64_t>(u / 3));
        CHECK(std::get<std::int64_t>(rows[u][1]) == static_cast<std::int64_t>(u % 3));
    }
    const auto csv = to_csv(table(r, "ratios"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("commutator-decomp summary is the record maximum and within tolerance") {
    const RunResult r = run_experiment(ExperimentConfig::from_json({{"experiment", "commutator-decomp"}, {"n", 6}, {"trials", 4}, {"seed", 2}}));
    double worst = 0;
    for (const auto& row : table(r, "residuals").rows) worst = std::max(worst, std::get<double>(row[1]));
    CHECK(r.summary["max_residual"].get<double>() == worst);
    CHECK(worst <= 1e-12);
    CHECK(r.passed());
}

TEST_CASE("summaries are recomputable from records") {
    const RunResult r = run_experiment(ExperimentConfig::from_json(
        {{"experiment", "nehari1d"}, {"trials", 5}, {"seed", 3}, {"params", {{"degrees", {4, 8}}}}}));
    std::vector<double> q;
    for (const auto& row : table(r, "ratios").rows) q.push_back(std::get<double>(row[5]));
    const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
    CHECK(r.summary["ratio"]["min"].get<double>() == *lo);
    CHECK(r.summary["ratio"]["max"].get<double>() == *hi);
    CHECK(r.summary["max_over_min"].get<double>() == *hi / *lo);
    CHECK(r.summary["ratio"]["count"].get<std::size_t>() == q.size());
}

TEST_CASE("outputs do not depend on the thread count") {
    const std::vector<json> configs = {
        {{"experiment", "nehari1d"}, {"trials", 6}, {"seed", 5}, {"params", {{"degrees", {4, 8}}}}},
        {{"experiment", "nehari2d"}, {"trials", 3}, {"seed", 5}, {"M", 2}, {"n", 2}},
        {{"experiment", "para-bound"}, {"trials", 2}, {"seed", 5}, {"params", {{"n_min", 3}, {"n_max", 4}}}},
        {{"experiment", "commutator-decomp"}, {"n", 4}, {"trials", 3}, {"seed", 5}},
        {{"experiment", "petermichl"}, {"n", 6}, {"trials", 2}, {"seed", 5}, {"params", {{"steps", {4, 8}}, {"coarsest_scale", 2}}}},
        {{"experiment", "aak-extend"}, {"trials", 2}, {"seed", 5}, {"params", {{"parrott_problems", 5}, {"sizes", {2, 4}}}}},
        {{"experiment", "carleson"}, {"trials", 2}, {"seed", 5}, {"params", {{"n_max", 2}}}},
        {{"experiment", "journe"}, {"n", 1}, {"trials", 3}, {"seed", 5}},
    };
    for (const auto& j : configs) {
        CAPTURE(j.dump());
        const auto c = ExperimentConfig::from_json(j);
        const auto one = outputs(c, 1, "t1");
        CHECK(one == outputs(c, 2, "t2"));
        CHECK(one == outputs(c, 8, "t8"));
    }
}

TEST_CASE("seed changes the records") {
    auto j = json{{"experiment", "nehari1d"}, {"M", 4}, {"trials", 2}, {"seed", 1}};
    const auto a = run_experiment(ExperimentConfig::from_json(j));
    j["seed"] = 2;
    const auto b = run_experiment(ExperimentConfig::from_json(j));
    CHECK(to_csv(a.tables[0]) != to_csv(b.tables[0]));
}

TEST_CASE("manifest shape") {
    const RunResult r = run_experiment(ExperimentConfig::from_json({{"experiment", "carleson"}, {"params", {{"n_max", 2}}}}));
    const json m = r.manifest();
    std::vector<std::string> keys;
    for (const auto& [k, v] : m.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"config", "code_version", "summary", "checks", "passed", "records"});
    CHECK(m["config"]["params"]["layout"] == "staircase");
    CHECK(m["records"]["ratios"]["columns"].size() == m["records"]["ratios"]["rows"][0].size());
    // nan cells (exact enumeration unavailable) are written as strings, never as bare JSON
    CHECK(m.dump().find("NaN") == std::string::npos);
}
