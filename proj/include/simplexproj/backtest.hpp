#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simplexproj/csv.hpp"
#include "simplexproj/errors.hpp"
#include "simplexproj/metric.hpp"
#include "simplexproj/stats.hpp"

namespace simplexproj {

struct YearlyReturn {
    std::string year;
    double portfolio = 0.0;
    std::optional<double> benchmark;
};

struct CumulativePoint {
    std::string label; // "start" for the initial row, then period labels
    double portfolio_index = 0.0;
    std::optional<double> benchmark_index;
};

struct BacktestSummary {
    double mean_yearly = 0.0;
    double stddev_yearly = 0.0; // sample stddev over yearly returns, 0 for one year
    std::optional<double> benchmark_mean_yearly;
    std::optional<double> benchmark_stddev_yearly;
};

struct BacktestReport {
    std::vector<std::string> asset_ids;
    WeightVector weights;
    std::vector<std::string> period_labels;
    Vec per_period_returns;
    std::optional<Vec> benchmark_returns;
    std::vector<YearlyReturn> yearly;
    BacktestSummary summary;
    std::vector<CumulativePoint> cumulative; // indexed to 100 before the first period
};

namespace detail {

inline std::pair<double, double> mean_stddev(const Vec& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

inline std::string year_of(const std::string& period_label) {
    return period_label.substr(0, std::min<std::size_t>(4, period_label.size()));
}

} // namespace detail

/// Evaluates a fixed-weight portfolio over a return panel.
///
/// Weights are reapplied each period (periodic rebalancing to target), so the
/// period return is the weighted sum of asset returns. Yearly rows compound
/// the periods sharing a year label; the cumulative track multiplies (1 + r)
/// from an index of 100. A benchmark return series, when given, must align
/// one-to-one with the panel periods.
inline BacktestReport run_backtest(const ReturnPanel& panel, const WeightVector& w,
                                   const std::optional<Vec>& benchmark = std::nullopt) {
    validate_panel(panel);
    if (w.coords.size() != panel.asset_count())
        throw DimensionMismatch("backtest: " + std::to_string(w.coords.size()) +
                                " weights for " + std::to_string(panel.asset_count()) +
                                " assets");
    double wsum = 0.0;
    for (double x : w.coords) wsum += x;
    if (std::abs(wsum - 1.0) > kWeightSumTol)
        throw InvalidWeights("backtest weights sum to " + csv::format_full(wsum) +
                             ", expected 1 within " + csv::format_full(kWeightSumTol));
    if (benchmark && benchmark->size() != panel.period_count())
        throw MisalignedBenchmark("benchmark has " + std::to_string(benchmark->size()) +
                                  " periods, panel has " +
                                  std::to_string(panel.period_count()));

    BacktestReport rep;
    rep.asset_ids = panel.asset_ids;
    rep.weights = w;
    rep.period_labels = panel.periods;
    rep.benchmark_returns = benchmark;

    const std::size_t t_count = panel.period_count();
    rep.per_period_returns.resize(t_count);
    for (std::size_t t = 0; t < t_count; ++t) {
        double r = 0.0;
        for (std::size_t j = 0; j < panel.asset_count(); ++j)
            r += w.coords[j] * panel.returns(t, j);
        if (r <= -1.0)
            throw ValidationError("period " + panel.periods[t] + " return " +
                                  csv::format_full(r) + " wipes out the portfolio");
        rep.per_period_returns[t] = r;
    }

    rep.cumulative.push_back({"start", 100.0, benchmark ? std::optional<double>(100.0)
                                                        : std::nullopt});
    double port_index = 100.0;
    double bench_index = 100.0;
    for (std::size_t t = 0; t < t_count; ++t) {
        port_index *= 1.0 + rep.per_period_returns[t];
        CumulativePoint pt{panel.periods[t], port_index, std::nullopt};
        if (benchmark) {
            bench_index *= 1.0 + (*benchmark)[t];
            pt.benchmark_index = bench_index;
        }
        rep.cumulative.push_back(std::move(pt));
    }

    // Period labels are strictly increasing, so equal-year runs are contiguous.
    Vec port_yearly, bench_yearly;
    std::size_t t = 0;
    while (t < t_count) {
        const std::string year = detail::year_of(panel.periods[t]);
        double port_growth = 1.0;
        double bench_growth = 1.0;
        while (t < t_count && detail::year_of(panel.periods[t]) == year) {
            port_growth *= 1.0 + rep.per_period_returns[t];
            if (benchmark) bench_growth *= 1.0 + (*benchmark)[t];
            ++t;
        }
        YearlyReturn row{year, port_growth - 1.0, std::nullopt};
        port_yearly.push_back(row.portfolio);
        if (benchmark) {
            row.benchmark = bench_growth - 1.0;
            bench_yearly.push_back(*row.benchmark);
        }
        rep.yearly.push_back(std::move(row));
    }

    const auto [pm, ps] = detail::mean_stddev(port_yearly);
    rep.summary.mean_yearly = pm;
    rep.summary.stddev_yearly = ps;
    if (benchmark) {
        const auto [bm, bs] = detail::mean_stddev(bench_yearly);
        rep.summary.benchmark_mean_yearly = bm;
        rep.summary.benchmark_stddev_yearly = bs;
    }
    return rep;
}

namespace detail {

inline std::ofstream open_table(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw ParseError("cannot open '" + p.string() + "' for writing");
    return out;
}

} // namespace detail

/// Writes the report as four CSV tables into dir: backtest_returns.csv,
/// backtest_yearly.csv, backtest_summary.csv, backtest_cumulative.csv.
/// Benchmark columns appear only when the report carries a benchmark.
inline void write_backtest_csv(const BacktestReport& rep, const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path base(dir);
    fs::create_directories(base);
    const bool bench = rep.benchmark_returns.has_value();

    {
        auto out = detail::open_table(base / "backtest_returns.csv");
        out << "date,portfolio_return" << (bench ? ",benchmark_return" : "") << '\n';
        for (std::size_t t = 0; t < rep.per_period_returns.size(); ++t) {
            out << rep.period_labels[t] << ',' << csv::format_full(rep.per_period_returns[t]);
            if (bench) out << ',' << csv::format_full((*rep.benchmark_returns)[t]);
            out << '\n';
        }
    }
    {
        auto out = detail::open_table(base / "backtest_yearly.csv");
        out << "year,portfolio_return" << (bench ? ",benchmark_return" : "") << '\n';
        for (const auto& row : rep.yearly) {
            out << row.year << ',' << csv::format_full(row.portfolio);
            if (bench) out << ',' << csv::format_full(*row.benchmark);
            out << '\n';
        }
    }
    {
        auto out = detail::open_table(base / "backtest_summary.csv");
        out << "mean_yearly,stddev_yearly";
        if (bench) out << ",benchmark_mean_yearly,benchmark_stddev_yearly";
        out << '\n'
            << csv::format_full(rep.summary.mean_yearly) << ','
            << csv::format_full(rep.summary.stddev_yearly);
        if (bench)
            out << ',' << csv::format_full(*rep.summary.benchmark_mean_yearly) << ','
                << csv::format_full(*rep.summary.benchmark_stddev_yearly);
        out << '\n';
    }
    {
        auto out = detail::open_table(base / "backtest_cumulative.csv");
        out << "label,portfolio_index" << (bench ? ",benchmark_index" : "") << '\n';
        for (const auto& pt : rep.cumulative) {
            out << pt.label << ',' << csv::format_full(pt.portfolio_index);
            if (bench) out << ',' << csv::format_full(*pt.benchmark_index);
            out << '\n';
        }
    }
}

} // namespace simplexproj
