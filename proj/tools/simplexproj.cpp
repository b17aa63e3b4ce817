// Command-line front end: simplex projection under an SPD metric,
// minimum-variance portfolios from price CSVs, fixed-weight backtests.
//
// Exit codes: 0 success, 2 input/validation error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "simplexproj/simplexproj.hpp"

namespace sp = simplexproj;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string pct(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
    return buf;
}

int env_max_dim() {
    const char* s = std::getenv("SIMPLEXPROJ_MAX_DIM");
    if (!s || !*s) return 24;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 1 || v > 64)
        throw sp::ValidationError("SIMPLEXPROJ_MAX_DIM must be an integer in [1, 64], got '" +
                                  std::string(s) + "'");
    return static_cast<int>(v);
}

sp::Matrix read_matrix_csv(const std::string& path) {
    const auto lines = sp::csv::read_lines(path);
    std::vector<sp::Vec> rows;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (sp::csv::trim(lines[i]).empty()) continue;
        sp::Vec row;
        for (const auto& f : sp::csv::split_line(lines[i]))
            row.push_back(sp::csv::parse_number(f, i + 1));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw sp::ParseError("'" + path + "' holds no numeric rows");
    return sp::Matrix::from_rows(rows);
}

sp::Vec read_vector_csv(const std::string& path) {
    const auto lines = sp::csv::read_lines(path);
    sp::Vec v;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (sp::csv::trim(lines[i]).empty()) continue;
        for (const auto& f : sp::csv::split_line(lines[i]))
            v.push_back(sp::csv::parse_number(f, i + 1));
    }
    if (v.empty()) throw sp::ParseError("'" + path + "' holds no numbers");
    return v;
}

// Header asset_id,weight; ids must match the panel's assets exactly.
sp::Vec read_weights_csv(const std::string& path, const std::vector<std::string>& asset_ids) {
    const auto lines = sp::csv::read_lines(path);
    if (lines.empty() ||
        sp::csv::split_line(lines[0]) != std::vector<std::string>{"asset_id", "weight"})
        throw sp::ParseError("'" + path + "' must start with header asset_id,weight");
    std::map<std::string, double> by_id;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (sp::csv::trim(lines[i]).empty()) continue;
        const auto fields = sp::csv::split_line(lines[i]);
        if (fields.size() != 2)
            throw sp::ParseError("row " + std::to_string(i + 1) + ": expected 2 fields");
        if (!by_id.emplace(fields[0], sp::csv::parse_number(fields[1], i + 1)).second)
            throw sp::ParseError("duplicate weight for asset '" + fields[0] + "'");
    }
    sp::Vec w;
    for (const auto& id : asset_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw sp::InvalidWeights("weights file is missing asset '" + id + "'");
        w.push_back(it->second);
        by_id.erase(it);
    }
    if (!by_id.empty())
        throw sp::InvalidWeights("weights file names asset '" + by_id.begin()->first +
                                 "' that is not in the panel");
    return w;
}

// Header date,return; rows must align one-to-one with the panel periods.
sp::Vec read_benchmark_csv(const std::string& path, const std::vector<std::string>& periods) {
    const auto lines = sp::csv::read_lines(path);
    if (lines.empty() ||
        sp::csv::split_line(lines[0]) != std::vector<std::string>{"date", "return"})
        throw sp::ParseError("'" + path + "' must start with header date,return");
    std::vector<std::pair<std::string, double>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (sp::csv::trim(lines[i]).empty()) continue;
        const auto fields = sp::csv::split_line(lines[i]);
        if (fields.size() != 2)
            throw sp::ParseError("row " + std::to_string(i + 1) + ": expected 2 fields");
        rows.emplace_back(fields[0], sp::csv::parse_number(fields[1], i + 1));
    }
    if (rows.size() != periods.size())
        throw sp::MisalignedBenchmark("benchmark has " + std::to_string(rows.size()) +
                                      " rows, panel has " + std::to_string(periods.size()) +
                                      " periods");
    sp::Vec v;
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].first != periods[t])
            throw sp::MisalignedBenchmark("benchmark date " + rows[t].first +
                                          " does not match panel period " + periods[t]);
        v.push_back(rows[t].second);
    }
    return v;
}

std::vector<sp::Date> read_breakpoints(const std::string& path) {
    const auto lines = sp::csv::read_lines(path);
    std::vector<sp::Date> dates;
    for (const auto& line : lines) {
        const std::string t = sp::csv::trim(line);
        if (t.empty()) continue;
        dates.push_back(sp::parse_date(t));
    }
    if (dates.empty()) throw sp::ParseError("'" + path + "' holds no dates");
    return dates;
}

struct WindowArgs {
    std::string prices;
    std::string format = "long";
    std::string start;
    std::string end;
    std::string period = "monthly";
    std::string breakpoints;
    double min_coverage = 1.0;
    int ddof = 1;
};

void add_window_flags(CLI::App* cmd, WindowArgs& w) {
    cmd->add_option("--prices", w.prices, "Price CSV path")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--format", w.format, "Price CSV layout: long or wide")
        ->check(CLI::IsMember({"long", "wide"}));
    cmd->add_option("--start", w.start, "Window start date (YYYY-MM-DD)")->required();
    cmd->add_option("--end", w.end, "Window end date (YYYY-MM-DD)")->required();
    auto* period = cmd->add_option("--period", w.period,
                                   "Boundary rule: monthly, or every:K observation dates");
    cmd->add_option("--breakpoints", w.breakpoints,
                    "File of explicit boundary dates, one per line")
        ->check(CLI::ExistingFile)
        ->excludes(period);
    cmd->add_option("--min-coverage", w.min_coverage,
                    "Drop assets covering less than this fraction of boundaries");
    cmd->add_option("--ddof", w.ddof, "Covariance denominator T - ddof (0 or 1)");
}

sp::PeriodSpec parse_period(const WindowArgs& w) {
    if (!w.breakpoints.empty()) return sp::PeriodSpec::at(read_breakpoints(w.breakpoints));
    if (w.period == "monthly") return sp::PeriodSpec::monthly();
    if (w.period.rfind("every:", 0) == 0) {
        const std::string num = w.period.substr(6);
        char* end = nullptr;
        const long k = std::strtol(num.c_str(), &end, 10);
        if (num.empty() || *end != '\0' || k < 1)
            throw sp::ValidationError("--period every:K needs a positive integer, got '" +
                                      w.period + "'");
        return sp::PeriodSpec::every_k(static_cast<int>(k));
    }
    throw sp::ValidationError("--period must be 'monthly' or 'every:K', got '" + w.period + "'");
}

struct BuiltPanel {
    sp::PanelBuildResult result;
    int unsorted_warnings = 0;
};

BuiltPanel build_panel(const WindowArgs& w) {
    const sp::PriceFormat fmt =
        w.format == "wide" ? sp::PriceFormat::wide_csv : sp::PriceFormat::long_csv;
    auto loaded = sp::load_prices(w.prices, fmt);
    if (loaded.unsorted_date_warnings > 0)
        std::cerr << "warning: " << loaded.unsorted_date_warnings
                  << " out-of-order price rows were sorted\n";
    auto built = sp::build_return_panel(loaded.series, sp::parse_date(w.start),
                                        sp::parse_date(w.end), parse_period(w),
                                        w.min_coverage);
    return BuiltPanel{std::move(built), loaded.unsorted_date_warnings};
}

ordered_json window_json(const WindowArgs& w) {
    ordered_json j;
    j["start"] = w.start;
    j["end"] = w.end;
    j["period"] = w.breakpoints.empty() ? w.period : std::string("breakpoints");
    j["min_coverage"] = w.min_coverage;
    return j;
}

ordered_json weights_json(const std::vector<std::string>& ids, const sp::Vec& w) {
    ordered_json j;
    for (std::size_t i = 0; i < ids.size(); ++i) j[ids[i]] = w[i];
    return j;
}

ordered_json weights_pct_json(const std::vector<std::string>& ids, const sp::Vec& w) {
    ordered_json j;
    for (std::size_t i = 0; i < ids.size(); ++i) j[ids[i]] = pct(w[i]);
    return j;
}

struct MinvarOutcome {
    sp::WeightVector weights;
    bool closed_form_feasible = false;
    std::string method;
    std::vector<std::string> zero_weight_assets;
};

// Short selling allowed: hyperplane closed form. Otherwise project the origin
// onto the simplex under the covariance metric; both minimize x^T C x.
MinvarOutcome solve_minvar(const sp::MetricMatrix& cov, const std::vector<std::string>& ids,
                           bool short_selling, int max_dim) {
    MinvarOutcome out;
    const auto closed = sp::minvar_closed_form(cov);
    out.closed_form_feasible = closed.weights.feasible_simplex;
    if (short_selling) {
        out.weights = closed.weights;
        out.method = "closed_form";
        return out;
    }
    sp::ProjectionOptions opt;
    opt.max_recursion_dim = max_dim;
    auto res = sp::project_onto_simplex(cov, sp::Vec(cov.dim(), 0.0), opt);
    std::set<int> active(res.active_face.indices().begin(), res.active_face.indices().end());
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (!active.count(static_cast<int>(i))) out.zero_weight_assets.push_back(ids[i]);
    out.weights = std::move(res.point);
    out.method = "simplex_projection";
    return out;
}

int cmd_project(const std::string& cov_path, const std::string& point_path, bool with_oracle) {
    const sp::MetricMatrix cov = sp::build_metric(read_matrix_csv(cov_path));
    const sp::Vec a = read_vector_csv(point_path);

    sp::ProjectionOptions opt;
    opt.max_recursion_dim = env_max_dim();
    const auto res = sp::project_onto_simplex(cov, a, opt);

    ordered_json out;
    out["command"] = "project";
    out["dimension"] = cov.dim();
    out["point"] = res.point.coords;
    out["sq_dist"] = res.sq_dist;
    out["distance"] = std::sqrt(res.sq_dist);
    out["active_face"] = res.active_face.indices();
    out["method"] = "recursive_sweep";
    if (with_oracle) {
        const auto ref = sp::oracle_project(cov, a);
        ordered_json o;
        o["point"] = ref.point.coords;
        o["sq_dist"] = ref.sq_dist;
        o["active_face"] = ref.active_face.indices();
        o["method"] = "exhaustive_faces";
        out["oracle"] = o;
        double dev = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            dev = std::max(dev, std::abs(res.point.coords[i] - ref.point.coords[i]));
        out["max_deviation"] = dev;
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_minvar(const WindowArgs& w, bool no_short_selling) {
    const BuiltPanel built = build_panel(w);
    const sp::ReturnPanel& panel = built.result.panel;
    const auto est = sp::estimate_moments(panel, w.ddof);
    const auto mv = solve_minvar(est.cov, panel.asset_ids, !no_short_selling, env_max_dim());
    const auto [mean, stddev] = sp::portfolio_moments(est, mv.weights);

    ordered_json out;
    out["command"] = "minvar";
    out["window"] = window_json(w);
    out["assets"] = panel.asset_ids;
    out["excluded_assets"] = built.result.excluded;
    out["period_count"] = panel.period_count();
    out["ddof"] = w.ddof;
    out["short_selling"] = !no_short_selling;
    out["method"] = mv.method;
    out["closed_form_feasible"] = mv.closed_form_feasible;
    out["weights"] = weights_json(panel.asset_ids, mv.weights.coords);
    out["weights_percent"] = weights_pct_json(panel.asset_ids, mv.weights.coords);
    out["zero_weight_assets"] = mv.zero_weight_assets;
    ordered_json port;
    port["mean"] = mean;
    port["stddev"] = stddev;
    port["variance"] = stddev * stddev;
    port["mean_percent"] = pct(mean);
    port["stddev_percent"] = pct(stddev);
    out["portfolio"] = port;
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_backtest(const WindowArgs& w, const std::string& weights_arg,
                 const std::string& benchmark_path, const std::string& out_dir,
                 bool no_short_selling) {
    const BuiltPanel built = build_panel(w);
    const sp::ReturnPanel& panel = built.result.panel;

    sp::WeightVector weights;
    std::string weights_source;
    if (weights_arg == "minvar") {
        const auto est = sp::estimate_moments(panel, w.ddof);
        weights = solve_minvar(est.cov, panel.asset_ids, !no_short_selling, env_max_dim())
                      .weights;
        weights_source = "minvar";
    } else {
        weights = sp::make_weight_vector(read_weights_csv(weights_arg, panel.asset_ids));
        weights_source = "file";
    }

    std::optional<sp::Vec> benchmark;
    if (!benchmark_path.empty())
        benchmark = read_benchmark_csv(benchmark_path, panel.periods);

    const auto rep = sp::run_backtest(panel, weights, benchmark);
    sp::write_backtest_csv(rep, out_dir);

    ordered_json out;
    out["command"] = "backtest";
    out["window"] = window_json(w);
    out["assets"] = panel.asset_ids;
    out["excluded_assets"] = built.result.excluded;
    out["weights_source"] = weights_source;
    out["weights"] = weights_json(panel.asset_ids, rep.weights.coords);
    out["weights_percent"] = weights_pct_json(panel.asset_ids, rep.weights.coords);
    ordered_json summary;
    summary["period_count"] = rep.per_period_returns.size();
    summary["year_count"] = rep.yearly.size();
    summary["mean_yearly"] = rep.summary.mean_yearly;
    summary["stddev_yearly"] = rep.summary.stddev_yearly;
    summary["mean_yearly_percent"] = pct(rep.summary.mean_yearly);
    summary["stddev_yearly_percent"] = pct(rep.summary.stddev_yearly);
    summary["final_index"] = rep.cumulative.back().portfolio_index;
    if (rep.summary.benchmark_mean_yearly) {
        summary["benchmark_mean_yearly"] = *rep.summary.benchmark_mean_yearly;
        summary["benchmark_stddev_yearly"] = *rep.summary.benchmark_stddev_yearly;
        summary["benchmark_final_index"] = *rep.cumulative.back().benchmark_index;
    } else {
        summary["benchmark_mean_yearly"] = nullptr;
        summary["benchmark_stddev_yearly"] = nullptr;
        summary["benchmark_final_index"] = nullptr;
    }
    out["summary"] = summary;
    ordered_json yearly = ordered_json::array();
    for (const auto& row : rep.yearly) {
        ordered_json r;
        r["year"] = row.year;
        r["portfolio_return"] = row.portfolio;
        if (row.benchmark)
            r["benchmark_return"] = *row.benchmark;
        else
            r["benchmark_return"] = nullptr;
        yearly.push_back(r);
    }
    out["yearly"] = yearly;
    ordered_json cumulative = ordered_json::array();
    for (const auto& pt : rep.cumulative) {
        ordered_json r;
        r["label"] = pt.label;
        r["portfolio_index"] = pt.portfolio_index;
        if (pt.benchmark_index)
            r["benchmark_index"] = *pt.benchmark_index;
        else
            r["benchmark_index"] = nullptr;
        cumulative.push_back(r);
    }
    out["cumulative"] = cumulative;
    ordered_json per_period = ordered_json::array();
    for (std::size_t t = 0; t < rep.per_period_returns.size(); ++t) {
        ordered_json r;
        r["date"] = rep.period_labels[t];
        r["portfolio_return"] = rep.per_period_returns[t];
        if (benchmark)
            r["benchmark_return"] = (*benchmark)[t];
        else
            r["benchmark_return"] = nullptr;
        per_period.push_back(r);
    }
    out["per_period"] = per_period;

    const std::filesystem::path json_path = std::filesystem::path(out_dir) /
                                            "backtest_report.json";
    std::ofstream jf(json_path);
    if (!jf) throw sp::ParseError("cannot open '" + json_path.string() + "' for writing");
    jf << out.dump(2) << '\n';

    std::cout << "backtest: " << rep.per_period_returns.size() << " periods, "
              << rep.yearly.size() << " years, mean yearly " << pct(rep.summary.mean_yearly)
              << "%, stddev " << pct(rep.summary.stddev_yearly) << "%, final index "
              << rep.cumulative.back().portfolio_index;
    if (rep.cumulative.back().benchmark_index)
        std::cout << ", benchmark final index " << *rep.cumulative.back().benchmark_index;
    std::cout << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simplex projection under an SPD metric, minimum-variance portfolios, "
                 "and fixed-weight backtests"};
    app.require_subcommand(1);

    std::string cov_path, point_path;
    bool with_oracle = false;
    auto* project = app.add_subcommand("project", "Project a point onto the standard simplex");
    project->add_option("--cov", cov_path, "CSV of the SPD metric matrix, no header")
        ->required()
        ->check(CLI::ExistingFile);
    project->add_option("--point", point_path, "CSV of the point coordinates")
        ->required()
        ->check(CLI::ExistingFile);
    project->add_flag("--oracle", with_oracle,
                      "Also run the exhaustive reference and report the deviation");

    WindowArgs mv_args;
    bool mv_no_short = false;
    bool deterministic = false;
    auto* minvar = app.add_subcommand("minvar", "Minimum-variance portfolio from price data");
    add_window_flags(minvar, mv_args);
    minvar->add_flag("--no-short-selling", mv_no_short,
                     "Constrain weights to the standard simplex");
    minvar->add_flag("--deterministic", deterministic,
                     "Force single-threaded evaluation (already the default)");

    WindowArgs bt_args;
    bool bt_no_short = false;
    std::string weights_arg, benchmark_path, out_dir = ".";
    auto* backtest = app.add_subcommand("backtest", "Backtest fixed weights over the panel");
    add_window_flags(backtest, bt_args);
    backtest->add_option("--weights", weights_arg,
                         "Weights CSV (asset_id,weight) or the literal 'minvar'")
        ->required();
    backtest->add_option("--benchmark", benchmark_path,
                         "Benchmark return CSV (date,return) aligned to the panel")
        ->check(CLI::ExistingFile);
    backtest->add_option("--out", out_dir, "Directory for report files");
    backtest->add_flag("--no-short-selling", bt_no_short,
                       "Constrain minvar weights to the simplex");
    backtest->add_flag("--deterministic", deterministic,
                       "Force single-threaded evaluation (already the default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(project)) return cmd_project(cov_path, point_path, with_oracle);
        if (app.got_subcommand(minvar)) return cmd_minvar(mv_args, mv_no_short);
        if (weights_arg != "minvar" && !std::filesystem::exists(weights_arg))
            throw sp::ValidationError("--weights must be 'minvar' or an existing file, got '" +
                                      weights_arg + "'");
        return cmd_backtest(bt_args, weights_arg, benchmark_path, out_dir, bt_no_short);
    } catch (const sp::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const sp::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
