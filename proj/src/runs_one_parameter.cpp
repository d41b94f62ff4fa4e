#include <cmath>

#include "experiment_runs.hpp"
#include "nehari/hankel.hpp"
#include "nehari/paraproducts.hpp"

namespace nehari::lab::detail {

namespace {

Signal random_signal(const Grid& g, Stream& rng, bool complex) {
    Signal f(g);
    for (auto& x : f.samples()) x = complex ? rng.complex_normal() : cplx(rng.normal(), 0);
    return f;
}

}  // namespace

RunResult run_nehari1d(const ExperimentConfig& c, int threads) {
    Params P(c.params);
    const auto degrees = P.integers("degrees", c.M ? std::vector<std::int64_t>{*c.M} : std::vector<std::int64_t>{8, 16, 32}, 2);
    const auto variant_name = P.choice("bmo", "dyadic_shifted", {"dyadic", "dyadic_shifted", "meyer"});
    const auto extra = P.integer("depth_extra", 2, 0);
    RunResult r;
    r.config = c.to_json();
    r.config["params"] = P.finish();
    const BmoVariant variant = variant_name == "dyadic" ? BmoVariant::dyadic
                               : variant_name == "meyer" ? BmoVariant::meyer
                                                         : BmoVariant::dyadic_shifted;
    const std::int64_t top = *std::max_element(degrees.begin(), degrees.end());
    std::vector<int> depth;
    for (auto M : degrees) {
        depth.push_back(c.n ? *c.n : depth_for_degree(M) + static_cast<int>(extra));
        if ((std::int64_t{1} << depth.back()) < 4 * M) throw ConfigError("n", "need 2^n >= 4M for every degree");
    }

    // Each trial draws one symbol of the top degree; smaller M read its leading coefficients.
    using Rows = std::vector<std::vector<Value>>;
    const auto per_trial = parallel_map<Rows>(static_cast<std::size_t>(c.trials), threads, [&](std::size_t t) {
        Stream rng(c.seed, t);
        std::vector<cplx> coef(static_cast<std::size_t>(top));
        for (auto& x : coef) x = rng.complex_normal();
        Rows rows;
        for (std::size_t i = 0; i < degrees.size(); ++i) {
            const auto M = degrees[i];
            const NehariRatio q = nehari_ratio(SymbolCoefficients::one_d({coef.begin(), coef.begin() + M}), variant, depth[i]);
            rows.push_back({static_cast<std::int64_t>(t), M, static_cast<std::int64_t>(depth[i]), q.hankel_norm, q.bmo_value, q.ratio});
        }
        return rows;
    });
    Table t{"ratios", {"trial", "M", "depth", "hankel_norm", "bmo", "ratio"}, {}};
    std::vector<double> ratios, x, y;
    std::map<std::int64_t, std::vector<double>> logs;
    for (const auto& rows : per_trial)
        for (const auto& row : rows) {
            t.rows.push_back(row);
            const double q = std::get<double>(row[5]);
            ratios.push_back(q);
            logs[std::get<std::int64_t>(row[1])].push_back(std::log(q));
        }
    const Stats s = stats_of(ratios);
    r.summary["ratio"] = stats_json(s);
    r.summary["max_over_min"] = s.max / s.min;
    json per = json::object();
    for (const auto& [M, v] : logs) {
        const double mean = stats_of(v).mean;
        per[std::to_string(M)] = mean;
        x.push_back(std::log2(static_cast<double>(M)));
        y.push_back(mean);
    }
    r.summary["mean_log_ratio_by_M"] = per;
    r.checks.push_back(make_check("max_over_min", s.max / s.min, "<", 10));
    if (logs.size() > 1) {
        const double slope = ls_slope(x, y);
        r.summary["log_ratio_slope"] = slope;
        r.checks.push_back(make_check("abs_log_ratio_slope", std::abs(slope), "<=", 0.1));
    }
    r.tables.push_back(std::move(t));
    return r;
}

RunResult run_nehari2d(const ExperimentConfig& c, int threads) {
    Params P(c.params);
    const auto mode = P.choice("bmo", "product_exact", {"product_exact", "product_heuristic"});
    RunResult r;
    r.config = c.to_json();
    r.config["params"] = P.finish();
    const std::int64_t M = c.M.value_or(4);
    const int n = c.n.value_or(2);
    r.config["M"] = M;
    r.config["n"] = n;
    const BmoVariant variant = mode == "product_exact" ? BmoVariant::product_exact : BmoVariant::product_heuristic;
    const auto rows = parallel_map<std::vector<Value>>(static_cast<std::size_t>(c.trials), threads, [&](std::size_t t) {
        Stream rng(c.seed, t);
        std::vector<cplx> coef(static_cast<std::size_t>(M * M));
        for (auto& x : coef) x = rng.complex_normal();
        const NehariRatio q = nehari_ratio(SymbolCoefficients::two_d(M, coef), variant, n);
        return std::vector<Value>{static_cast<std::int64_t>(t), q.hankel_norm, q.bmo_value, q.ratio,
                                  std::string(q.exactness == Exactness::exact ? "exact" : "lower_bound")};
    });
    Table t{"ratios", {"trial", "hankel_norm", "product_bmo", "ratio", "exactness"}, rows};
    std::vector<double> ratios;
    for (const auto& row : rows) ratios.push_back(std::get<double>(row[3]));
    const Stats s = stats_of(ratios);
    r.summary["ratio"] = stats_json(s);
    r.summary["max_over_min"] = s.max / s.min;
    r.summary["exactness"] = mode == "product_exact" ? "exact" : "lower_bound";
    r.checks.push_back(make_check("max_over_min", s.max / s.min, "<", 10));
    r.tables.push_back(std::move(t));
    return r;
}

RunResult run_para_bound(const ExperimentConfig& c, int threads) {
    Params P(c.params);
    const auto lo = P.integer("n_min", c.n.value_or(4), 1);
    const auto hi = P.integer("n_max", c.n.value_or(6), lo);
    RunResult r;
    r.config = c.to_json();
    r.config["params"] = P.finish();
    if (hi > 10) throw ConfigError("params.n_max", "n_max above 10 makes dense matrices too large");
    const auto depths = static_cast<std::size_t>(hi - lo + 1), trials = static_cast<std::size_t>(c.trials);
    // Unit u is depth lo + u / trials, trial u % trials, with stream u.
    const auto rows = parallel_map<std::vector<Value>>(depths * trials, threads, [&](std::size_t u) {
        Stream rng(c.seed, u);
        const int n = static_cast<int>(lo) + static_cast<int>(u / trials);
        const ParaNorm q = para_norm_ratio(random_signal(Grid(n, 1), rng, true));
        return std::vector<Value>{static_cast<std::int64_t>(n), static_cast<std::int64_t>(u % trials), q.norm, q.bmo, q.ratio, q.skipped};
    });
    Table t{"ratios", {"n", "trial", "norm", "bmo", "ratio", "skipped"}, rows};
    std::vector<double> all;
    json per = json::object();
    for (std::size_t d = 0; d < depths; ++d) {
        std::vector<double> v;
        for (std::size_t k = 0; k < trials; ++k) {
            const auto& row = rows[d * trials + k];
            if (!std::get<bool>(row[5])) v.push_back(std::get<double>(row[4]));
        }
        all.insert(all.end(), v.begin(), v.end());
        per[std::to_string(lo + static_cast<std::int64_t>(d))] = stats_json(stats_of(v));
    }
    r.summary["ratio"] = stats_json(stats_of(all));
    r.summary["ratio_by_n"] = per;
    r.tables.push_back(std::move(t));
    return r;
}

RunResult run_commutator(const ExperimentConfig& c, int threads) {
    Params P(c.params);
    const double tol = P.number("tolerance", 1e-12);
    RunResult r;
    r.config = c.to_json();
    r.config["params"] = P.finish();
    const int n = c.n.value_or(6);
    r.config["n"] = n;
    if (n < 2 || n > 9) throw ConfigError("n", "commutator-decomp needs 2 <= n <= 9");
    const auto rows = parallel_map<std::vector<Value>>(static_cast<std::size_t>(c.trials), threads, [&](std::size_t t) {
        Stream rng(c.seed, t);
        const DecompositionReport d = decompose_commutator_Gleft(random_signal(Grid(n, 1), rng, true));
        return std::vector<Value>{static_cast<std::int64_t>(t), d.residual, d.printed_table_residual};
    });
    Table t{"residuals", {"trial", "residual", "printed_table_residual"}, rows};
    double worst = 0, printed = 1e300;
    for (const auto& row : rows) {
        worst = std::max(worst, std::get<double>(row[1]));
        printed = std::min(printed, std::get<double>(row[2]));
    }
    r.summary["max_residual"] = worst;
    r.summary["min_printed_table_residual"] = printed;
    r.checks.push_back(make_check("max_residual", worst, "<=", tol));
    r.tables.push_back(std::move(t));
    return r;
}

RunResult run_petermichl(const ExperimentConfig& c, int threads) {
    Params P(c.params);
    PetermichlParams base;
    base.Y = P.number("Y", 8);
    const auto steps = P.integers("steps", {16, 32, 64}, 1);
    const auto measure = P.choice("measure", "uniform", {"uniform", "logarithmic"});
    base.coarsest_scale = static_cast<int>(P.integer("coarsest_scale", 6, 0));
    const double target = P.number("max_error", 0.05);
    RunResult r;
    r.config = c.to_json();
    r.config["params"] = P.finish();
    const int n = c.n.value_or(10);
    r.config["n"] = n;
    if (n < 2 || n > 14) throw ConfigError("n", "petermichl needs 2 <= n <= 14");
    base.measure = measure == "uniform" ? TranslationMeasure::uniform : TranslationMeasure::logarithmic;
    const std::size_t S = steps.size();
    // Unit u is trial u / S at step count steps[u % S]; every unit of a trial uses the trial's stream.
    const auto rows = parallel_map<std::vector<Value>>(static_cast<std::size_t>(c.trials) * S, threads, [&](std::size_t u) {
        Stream rng(c.seed, u / S);
        const Signal f = random_signal(Grid(n, 1), rng, false);
        PetermichlParams p = base;
        p.s_steps = p.y_steps = static_cast<int>(steps[u % S]);
        const PetermichlFit fit = petermichl_fit(f, p);
        return std::vector<Value>{static_cast<std::int64_t>(u / S), steps[u % S], fit.c.real(), fit.c.imag(), fit.relative_error};
    });
    Table t{"fits", {"trial", "steps", "c_re", "c_im", "relative_error"}, rows};
    double worst_final = 0;
    std::int64_t increases = 0;
    json per = json::object();
    for (std::size_t k = 0; k < S; ++k) {
        std::vector<double> v;
        for (std::size_t tr = 0; tr < static_cast<std::size_t>(c.trials); ++tr) v.push_back(std::get<double>(rows[tr * S + k][4]));
        per[std::to_string(steps[k])] = stats_json(stats_of(v));
    }
    for (std::size_t tr = 0; tr < static_cast<std::size_t>(c.trials); ++tr) {
        worst_final = std::max(worst_final, std::get<double>(rows[tr * S + S - 1][4]));
        for (std::size_t k = 1; k < S; ++k)
            if (std::get<double>(rows[tr * S + k][4]) >= std::get<double>(rows[tr * S + k - 1][4])) ++increases;
    }
    r.summary["relative_error_by_steps"] = per;
    r.summary["max_final_error"] = worst_final;
    r.summary["non_decreasing_steps"] = increases;
    r.checks.push_back(make_check("max_final_error", worst_final, "<", target));
    r.checks.push_back(make_check("non_decreasing_steps", static_cast<double>(increases), "==", 0));
    r.tables.push_back(std::move(t));
    return r;
}

}  // namespace nehari::lab::detail
