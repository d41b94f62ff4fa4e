#include "nehari/experiments.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "experiment_runs.hpp"

namespace nehari::lab {

Stream::Stream(std::uint64_t seed, std::uint64_t stream) : state_(seed ^ (0x9E3779B97F4A7C15ull * (stream + 1))) {}

std::uint64_t Stream::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double Stream::uniform() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

double Stream::normal() {
    const double u = uniform(), v = uniform();
    return std::sqrt(-2 * std::log(u)) * std::cos(2 * std::numbers::pi * v);
}

double Stream::sign() { return (next() >> 63) ? 1.0 : -1.0; }

namespace {

template <class T>
T get_integer(const json& j, const std::string& field, T lo) {
    if (!j.is_number_integer()) throw ConfigError(field, field + " must be an integer");
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint64_t>();
        if (v > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) throw ConfigError(field, field + " is too large");
        if (lo > 0 && v < static_cast<std::uint64_t>(lo)) throw ConfigError(field, field + " is below its minimum");
        return static_cast<T>(v);
    }
    const auto v = j.get<std::int64_t>();
    if (v < static_cast<std::int64_t>(lo)) throw ConfigError(field, field + " is below its minimum");
    if (std::is_unsigned_v<T> ? false : v > static_cast<std::int64_t>(std::numeric_limits<T>::max()))
        throw ConfigError(field, field + " is too large");
    return static_cast<T>(v);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
    ExperimentConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "experiment") {
            if (!value.is_string()) throw ConfigError(key, "experiment must be a string");
            c.experiment = value.get<std::string>();
        } else if (key == "n") {
            c.n = get_integer<int>(value, key, 0);
        } else if (key == "M") {
            c.M = get_integer<std::int64_t>(value, key, 1);
        } else if (key == "trials") {
            c.trials = get_integer<int>(value, key, 1);
        } else if (key == "seed") {
            c.seed = get_integer<std::uint64_t>(value, key, 0);
        } else if (key == "params") {
            if (!value.is_object()) throw ConfigError(key, "params must be an object");
            c.params = value;
        } else {
            throw ConfigError(key, "unknown config field " + key);
        }
    }
    if (c.experiment.empty()) throw ConfigError("experiment", "experiment is required");
    bool known = false;
    std::string names;
    for (const auto& e : experiment_catalog()) {
        known = known || e.name == c.experiment;
        names += (names.empty() ? "" : ", ") + e.name;
    }
    if (!known) throw ConfigError("experiment", "unknown experiment " + c.experiment + "; catalog: " + names);
    if (c.n && *c.n > 30) throw ConfigError("n", "n is too large");
    // The 2D BMO grid is deliberately coarser than the symbol degree (exact enumeration).
    if (c.n && c.M && c.experiment != "nehari2d" && (std::int64_t{1} << *c.n) < 4 * *c.M)
        throw ConfigError("M", "need 2^n >= 4M");
    return c;
}

json ExperimentConfig::to_json() const {
    json j;
    j["experiment"] = experiment;
    j["n"] = n ? json(*n) : json(nullptr);
    j["M"] = M ? json(*M) : json(nullptr);
    j["trials"] = trials;
    j["seed"] = seed;
    j["params"] = params;
    return j;
}

const std::vector<CatalogEntry>& experiment_catalog() {
    static const std::vector<CatalogEntry> catalog = {
        {"nehari1d", "Nehari: ||H_b|| is comparable to the BMO norm of P_+ b",
         "ratio ||H_b|| / bmo over random analytic symbols and truncations M"},
        {"nehari2d", "little Hankel operators and product BMO",
         "ratio ||little H_b|| / exact product BMO at desk scale"},
        {"para-bound", "the Haar paraproduct is bounded by dyadic BMO", "||pi_b|| / bmo_dyadic(b) over depths"},
        {"commutator-decomp", "[M_b, G_left] splits into paraproduct pieces by cases of I and J",
         "residual of the exact case split against the commutator matrix"},
        {"petermichl", "the Hilbert transform is an average of dyadic shifts",
         "fit of the averaged shift to c H and its quadrature convergence"},
        {"aak-extend", "Parrott completion and the one-step Hankel extension",
         "achieved completion norm against max of the row and column blocks"},
        {"carleson", "rectangular BMO is weaker than product BMO",
         "bmo_product / bmo_rect on the Carleson staircase family"},
        {"journe", "embeddedness-damped projections are controlled by the rectangular norm",
         "damped product/rectangular ratio over unions of reflected staircase rectangles"},
        {"lower-bound", "the lower bound for little Hankel norms via the alpha, beta, gamma split",
         "chain of norms for alpha, the beta estimate and the embeddedness slices"},
    };
    return catalog;
}

bool RunResult::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

json value_json(const Value& v) {
    return std::visit([](const auto& x) -> json { return x; }, v);
}

json number_json(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }

}  // namespace

json RunResult::manifest() const {
    json m;
    m["config"] = config;
    m["code_version"] = NEHARI_VERSION;
    m["summary"] = summary;
    json cs = json::array();
    for (const auto& c : checks)
        cs.push_back({{"name", c.name}, {"value", number_json(c.value)}, {"relation", c.relation},
                      {"bound", number_json(c.bound)}, {"passed", c.passed}});
    m["checks"] = cs;
    m["passed"] = passed();
    json ts = json::object();
    for (const auto& t : tables) {
        json rows = json::array();
        for (const auto& r : t.rows) {
            json row = json::array();
            for (const auto& v : r) {
                if (const auto* d = std::get_if<double>(&v)) row.push_back(number_json(*d));
                else row.push_back(value_json(v));
            }
            rows.push_back(row);
        }
        ts[t.name] = {{"columns", t.columns}, {"rows", rows}};
    }
    m["records"] = ts;
    return m;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ",";
            std::visit(
                [&](const auto& x) {
                    using X = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<X, double>) out += format_double(x);
                    else if constexpr (std::is_same_v<X, bool>) out += x ? "true" : "false";
                    else if constexpr (std::is_same_v<X, std::string>) out += x;
                    else out += std::to_string(x);
                },
                r[i]);
        }
        out += "\n";
    }
    return out;
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto put = [&](const std::string& name, const std::string& text) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        f << text;
    };
    put("manifest.json", result.manifest().dump(2) + "\n");
    for (const auto& t : result.tables) put(t.name + ".csv", to_csv(t));
}

RunResult run_experiment(const ExperimentConfig& config, int threads) {
    const auto& runs = detail::runners();
    const auto it = runs.find(config.experiment);
    if (it == runs.end()) throw ConfigError("experiment", "no runner for " + config.experiment);
    return it->second(config, threads);
}

}  // namespace nehari::lab
