#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "simplexproj/csv.hpp"
#include "simplexproj/dates.hpp"
#include "simplexproj/errors.hpp"
#include "simplexproj/stats.hpp"

namespace simplexproj {

struct PriceObservation {
    Date date;
    double price = 0.0; // > 0, currency-agnostic, assumed already adjusted
};

struct PriceSeries {
    std::string asset_id;
    std::vector<PriceObservation> observations; // dates strictly increasing
};

struct LoadResult {
    std::vector<PriceSeries> series;
    int unsorted_date_warnings = 0; // out-of-order rows fixed up during load
};

enum class PriceFormat { long_csv, wide_csv };

namespace detail {

struct RawObservation {
    Date date;
    double price;
    std::size_t file_order;
};

// Sorts by date, resolves duplicate dates by keeping the row latest in the
// file, and counts how many rows were out of order.
inline PriceSeries finalize_series(std::string id, std::vector<RawObservation> raw,
                                   int& warnings) {
    for (std::size_t i = 1; i < raw.size(); ++i)
        if (raw[i].date < raw[i - 1].date) ++warnings;
    std::stable_sort(raw.begin(), raw.end(),
                     [](const RawObservation& a, const RawObservation& b) {
                         return a.date < b.date;
                     });
    PriceSeries s{std::move(id), {}};
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const bool last_of_date = i + 1 == raw.size() || raw[i + 1].date != raw[i].date;
        if (!last_of_date) continue; // stable sort keeps file order within a date
        s.observations.push_back({raw[i].date, raw[i].price});
    }
    return s;
}

inline double parse_price(const std::string& field, std::size_t row) {
    const double v = csv::parse_number(field, row);
    if (v <= 0.0)
        throw NonPositivePrice("row " + std::to_string(row) + ": price " +
                               csv::format_full(v) + " must be positive");
    return v;
}

} // namespace detail

/// Loads price history from CSV.
///
/// long_csv: header columns asset_id,date,close (any order); one observation
/// per row. wide_csv: a date column followed by one column per asset; blank
/// cells are missing observations. Duplicate (asset, date) rows keep the last
/// occurrence; out-of-order dates are sorted, counted in the result.
inline LoadResult load_prices(const std::string& path, PriceFormat format) {
    const auto lines = csv::read_lines(path);
    if (lines.empty()) throw ParseError("'" + path + "' is empty; a header row is required");

    LoadResult result;
    const auto header = csv::split_line(lines[0]);

    if (format == PriceFormat::long_csv) {
        auto find_col = [&](const std::string& name) {
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == name) return i;
            throw ParseError("long_csv header must contain column '" + name + "'");
        };
        const std::size_t col_asset = find_col("asset_id");
        const std::size_t col_date = find_col("date");
        const std::size_t col_close = find_col("close");

        std::vector<std::string> order;
        std::map<std::string, std::vector<detail::RawObservation>> by_asset;
        for (std::size_t row = 1; row < lines.size(); ++row) {
            if (csv::trim(lines[row]).empty()) continue;
            const auto fields = csv::split_line(lines[row]);
            if (fields.size() <= std::max({col_asset, col_date, col_close}))
                throw ParseError("row " + std::to_string(row + 1) + ": expected at least " +
                                 std::to_string(std::max({col_asset, col_date, col_close}) + 1) +
                                 " fields");
            const std::string& id = fields[col_asset];
            if (id.empty())
                throw ParseError("row " + std::to_string(row + 1) + ": empty asset_id");
            if (fields[col_close].empty()) continue; // missing observation
            Date d;
            try {
                d = parse_date(fields[col_date]);
            } catch (const ParseError& e) {
                throw ParseError("row " + std::to_string(row + 1) + ": " + e.what());
            }
            const double price = detail::parse_price(fields[col_close], row + 1);
            if (!by_asset.count(id)) order.push_back(id);
            by_asset[id].push_back({d, price, row});
        }
        for (const auto& id : order)
            result.series.push_back(detail::finalize_series(id, std::move(by_asset[id]),
                                                            result.unsorted_date_warnings));
    } else {
        if (header.size() < 2)
            throw ParseError("wide_csv header needs a date column plus at least one asset");
        std::set<std::string> seen;
        for (std::size_t j = 1; j < header.size(); ++j) {
            if (header[j].empty())
                throw ParseError("wide_csv header has an empty asset name in column " +
                                 std::to_string(j + 1));
            if (!seen.insert(header[j]).second)
                throw ParseError("wide_csv header repeats asset '" + header[j] + "'");
        }
        std::vector<std::vector<detail::RawObservation>> cols(header.size() - 1);
        for (std::size_t row = 1; row < lines.size(); ++row) {
            if (csv::trim(lines[row]).empty()) continue;
            const auto fields = csv::split_line(lines[row]);
            if (fields.size() != header.size())
                throw ParseError("row " + std::to_string(row + 1) + ": expected " +
                                 std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
            Date d;
            try {
                d = parse_date(fields[0]);
            } catch (const ParseError& e) {
                throw ParseError("row " + std::to_string(row + 1) + ": " + e.what());
            }
            for (std::size_t j = 1; j < fields.size(); ++j) {
                if (fields[j].empty()) continue; // blank cell, missing observation
                cols[j - 1].push_back({d, detail::parse_price(fields[j], row + 1), row});
            }
        }
        for (std::size_t j = 0; j < cols.size(); ++j)
            result.series.push_back(detail::finalize_series(header[j + 1], std::move(cols[j]),
                                                            result.unsorted_date_warnings));
    }
    return result;
}

/// Period boundary policy for resampling prices into returns.
struct PeriodSpec {
    enum class Kind { monthly_calendar, every_k_rows, explicit_breakpoints };
    Kind kind = Kind::monthly_calendar;
    int k = 1;                          // every_k_rows step
    std::vector<Date> breakpoints;      // explicit boundary dates

    static PeriodSpec monthly() { return {Kind::monthly_calendar, 1, {}}; }
    static PeriodSpec every_k(int k) {
        if (k < 1) throw ValidationError("every_k_rows step must be >= 1");
        return {Kind::every_k_rows, k, {}};
    }
    static PeriodSpec at(std::vector<Date> dates) {
        return {Kind::explicit_breakpoints, 1, std::move(dates)};
    }
};

struct PanelBuildResult {
    ReturnPanel panel;
    std::vector<std::string> excluded; // assets dropped for insufficient coverage
};

namespace detail {

inline std::vector<Date> period_boundaries(const std::vector<PriceSeries>& series, Date start,
                                           Date end, const PeriodSpec& spec) {
    std::vector<Date> bounds;
    switch (spec.kind) {
    case PeriodSpec::Kind::monthly_calendar: {
        Date b = month_end(start.year, start.month);
        while (b <= end) {
            if (b >= start) bounds.push_back(b);
            b = next_month_end(b);
        }
        break;
    }
    case PeriodSpec::Kind::every_k_rows: {
        std::set<Date> dates;
        for (const auto& s : series)
            for (const auto& obs : s.observations)
                if (obs.date >= start && obs.date <= end) dates.insert(obs.date);
        std::size_t i = 0;
        for (const Date& d : dates) {
            if (i % static_cast<std::size_t>(spec.k) == 0) bounds.push_back(d);
            ++i;
        }
        break;
    }
    case PeriodSpec::Kind::explicit_breakpoints: {
        std::set<Date> dates;
        for (const Date& d : spec.breakpoints)
            if (d >= start && d <= end) dates.insert(d);
        bounds.assign(dates.begin(), dates.end());
        break;
    }
    }
    return bounds;
}

} // namespace detail

/// Resamples price series into an aligned return panel over [start, end].
///
/// Each asset is sampled at the last available price at or before every
/// period boundary; per-period return is p_k / p_{k-1} - 1. Assets whose
/// boundary coverage falls below min_coverage (default 1.0, full history)
/// are excluded and reported. Boundaries every included asset cannot cover
/// (a prefix, by the at-or-before rule) are trimmed so the panel is complete.
inline PanelBuildResult build_return_panel(const std::vector<PriceSeries>& series, Date start,
                                           Date end, const PeriodSpec& spec,
                                           double min_coverage = 1.0) {
    if (!(start < end)) throw ValidationError("panel window start must precede end");
    if (min_coverage < 0.0 || min_coverage > 1.0)
        throw ValidationError("min_coverage must lie in [0, 1]");

    const std::vector<Date> bounds = detail::period_boundaries(series, start, end, spec);
    if (bounds.size() < 3)
        throw EmptyPanel("window yields " +
                         std::to_string(bounds.empty() ? 0 : bounds.size() - 1) +
                         " return periods; at least 2 are required");

    struct Sampled {
        const PriceSeries* s;
        std::vector<std::optional<double>> price_at; // per boundary
        std::size_t covered = 0;
    };
    std::vector<Sampled> included;
    std::vector<std::string> excluded;

    for (const auto& s : series) {
        Sampled smp{&s, std::vector<std::optional<double>>(bounds.size()), 0};
        std::size_t pos = 0;
        std::optional<double> last;
        for (std::size_t b = 0; b < bounds.size(); ++b) {
            while (pos < s.observations.size() && s.observations[pos].date <= bounds[b]) {
                last = s.observations[pos].price;
                ++pos;
            }
            smp.price_at[b] = last;
            if (last) ++smp.covered;
        }
        const double coverage =
            static_cast<double>(smp.covered) / static_cast<double>(bounds.size());
        if (coverage + 1e-12 < min_coverage)
            excluded.push_back(s.asset_id);
        else
            included.push_back(std::move(smp));
    }

    if (included.empty()) throw EmptyPanel("no asset meets the coverage requirement");

    // Missing samples form a prefix per asset, so the first boundary everyone
    // covers makes everything after it complete.
    std::size_t first = 0;
    for (const auto& smp : included) {
        std::size_t k = 0;
        while (k < bounds.size() && !smp.price_at[k]) ++k;
        first = std::max(first, k);
    }
    if (bounds.size() - first < 3)
        throw EmptyPanel("after trimming to common coverage, fewer than 2 return periods remain");

    const std::size_t t_count = bounds.size() - first - 1;
    ReturnPanel panel;
    panel.returns = Matrix(t_count, included.size());
    for (std::size_t j = 0; j < included.size(); ++j) {
        panel.asset_ids.push_back(included[j].s->asset_id);
        for (std::size_t t = 0; t < t_count; ++t) {
            const double prev = *included[j].price_at[first + t];
            const double cur = *included[j].price_at[first + t + 1];
            panel.returns(t, j) = cur / prev - 1.0;
        }
    }
    for (std::size_t t = 0; t < t_count; ++t)
        panel.periods.push_back(to_string(bounds[first + t + 1]));

    validate_panel(panel);
    return PanelBuildResult{std::move(panel), std::move(excluded)};
}

/// Writes a panel as long CSV (asset_id,date,return) at full precision, so
/// reloading reproduces the exact doubles.
inline void save_return_panel(const ReturnPanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << "asset_id,date,return\n";
    for (std::size_t j = 0; j < panel.asset_count(); ++j)
        for (std::size_t t = 0; t < panel.period_count(); ++t)
            out << panel.asset_ids[j] << ',' << panel.periods[t] << ','
                << csv::format_full(panel.returns(t, j)) << '\n';
}

inline ReturnPanel load_return_panel(const std::string& path) {
    const auto lines = csv::read_lines(path);
    if (lines.empty() || csv::split_line(lines[0]) !=
                             std::vector<std::string>{"asset_id", "date", "return"})
        throw ParseError("'" + path + "' must start with header asset_id,date,return");

    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<std::string, double>>> by_asset;
    for (std::size_t row = 1; row < lines.size(); ++row) {
        if (csv::trim(lines[row]).empty()) continue;
        const auto fields = csv::split_line(lines[row]);
        if (fields.size() != 3)
            throw ParseError("row " + std::to_string(row + 1) + ": expected 3 fields");
        parse_date(fields[1]); // label must be a valid ISO day
        if (!by_asset.count(fields[0])) order.push_back(fields[0]);
        by_asset[fields[0]].emplace_back(fields[1], csv::parse_number(fields[2], row + 1));
    }
    if (order.empty()) throw EmptyPanel("'" + path + "' contains no return rows");

    ReturnPanel panel;
    panel.asset_ids = order;
    const auto& ref = by_asset[order[0]];
    for (const auto& [label, value] : ref) panel.periods.push_back(label);
    panel.returns = Matrix(ref.size(), order.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
        const auto& rows = by_asset[order[j]];
        if (rows.size() != ref.size())
            throw ParseError("asset '" + order[j] + "' has " + std::to_string(rows.size()) +
                             " rows but '" + order[0] + "' has " + std::to_string(ref.size()));
        for (std::size_t t = 0; t < rows.size(); ++t) {
            if (rows[t].first != panel.periods[t])
                throw ParseError("asset '" + order[j] + "' period " + rows[t].first +
                                 " does not align with '" + panel.periods[t] + "'");
            panel.returns(t, j) = rows[t].second;
        }
    }
    validate_panel(panel);
    return panel;
}

} // namespace simplexproj
