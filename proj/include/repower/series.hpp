#pragma once

#include <algorithm>
#include <fstream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "repower/common.hpp"

namespace repower {

enum class SeriesUnit { NormalizedCf, Megawatt };

/// Fixed-step hourly values. `NormalizedCf` values live in [0,1],
/// `Megawatt` values are nonnegative. Years are 8760 hours (no leap days).
struct HourlySeries {
    std::vector<double> values;
    SeriesUnit unit = SeriesUnit::NormalizedCf;
    int hours_per_year = kHoursPerYear;
    std::string label;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

inline void check_value_range(double v, SeriesUnit unit, std::size_t line_1based, const std::string& where) {
    if (!std::isfinite(v))
        throw Error(where + ": non-finite value at line " + std::to_string(line_1based));
    if (v < 0.0)
        throw Error(where + ": negative value " + format_double(v) + " at line " + std::to_string(line_1based));
    if (unit == SeriesUnit::NormalizedCf && v > 1.0)
        throw Error(where + ": capacity factor " + format_double(v) + " above 1 at line " + std::to_string(line_1based));
}

inline void check_series(const HourlySeries& s, const std::string& where = "series") {
    if (s.values.empty()) throw Error(where + ": empty series");
    if (s.hours_per_year <= 0) throw Error(where + ": hours_per_year must be positive");
    for (std::size_t i = 0; i < s.values.size(); ++i) check_value_range(s.values[i], s.unit, i + 1, where);
}

inline HourlySeries make_series(std::vector<double> values, SeriesUnit unit, std::string label = {},
                                int hours_per_year = kHoursPerYear) {
    HourlySeries s{std::move(values), unit, hours_per_year, std::move(label)};
    check_series(s, s.label.empty() ? "series" : s.label);
    return s;
}

/// Number of whole years; throws when multi-year semantics do not apply.
inline std::size_t series_years(const HourlySeries& s) {
    if (s.values.empty() || s.values.size() % static_cast<std::size_t>(s.hours_per_year) != 0)
        throw Error("series length " + std::to_string(s.values.size()) + " is not a multiple of " +
                    std::to_string(s.hours_per_year) + " hours");
    return s.values.size() / static_cast<std::size_t>(s.hours_per_year);
}

/// Co-located solar and wind resource at one site, equal lengths.
struct ResourceSet {
    HourlySeries solar;
    HourlySeries wind;
    std::string site_label;
};

inline void check_resource_set(const ResourceSet& r) {
    check_series(r.solar, "solar");
    check_series(r.wind, "wind");
    if (r.solar.size() != r.wind.size())
        throw Error("resource set '" + r.site_label + "': solar length " + std::to_string(r.solar.size()) +
                    " != wind length " + std::to_string(r.wind.size()));
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

// "YYYY-MM-DD..." -> true when the date is February 29.
inline bool is_leap_day(const std::string& date) {
    return date.size() >= 10 && date.compare(5, 5, "02-29") == 0;
}

}  // namespace detail

/// Reads one column of an hourly CSV. Recognised layouts carry a `hour`
/// column plus named value columns (`solar_cf`, `wind_cf`, `target_mw`, ...).
/// An optional leading `date` column is used only to drop Feb-29 rows.
/// The unit is inferred from the column name: `*_mw` is megawatts,
/// anything else is a normalized capacity factor.
inline HourlySeries load_series(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(path + ": empty file");
    auto header = detail::split_csv_line(line);
    for (auto& h : header) h = detail::trim(h);
    int col = -1, date_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == column) col = static_cast<int>(i);
        if (header[i] == "date") date_col = static_cast<int>(i);
    }
    if (col < 0) throw Error(path + ": no column named '" + column + "'");

    SeriesUnit unit = SeriesUnit::NormalizedCf;
    if (column.size() >= 3 && column.compare(column.size() - 3, 3, "_mw") == 0) unit = SeriesUnit::Megawatt;

    HourlySeries out;
    out.unit = unit;
    out.label = column;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size())
            throw Error(path + ": malformed row at line " + std::to_string(line_no) + " (expected " +
                        std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()) + ")");
        if (date_col >= 0 && detail::is_leap_day(detail::trim(fields[date_col]))) continue;
        double v;
        try {
            v = parse_double(fields[col]);
        } catch (const Error& e) {
            throw Error(path + ": line " + std::to_string(line_no) + ": " + e.what());
        }
        check_value_range(v, unit, line_no, path);
        out.values.push_back(v);
    }
    if (out.values.empty()) throw Error(path + ": no data rows");
    return out;
}

inline void write_resource_csv(const std::string& path, const HourlySeries& solar, const HourlySeries& wind) {
    if (solar.size() != wind.size()) throw Error("write_resource_csv: length mismatch");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "hour,solar_cf,wind_cf\n";
    for (std::size_t h = 0; h < solar.size(); ++h)
        out << h << ',' << format_double(solar[h]) << ',' << format_double(wind[h]) << '\n';
}

inline void write_target_csv(const std::string& path, const HourlySeries& target) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "hour,target_mw\n";
    for (std::size_t h = 0; h < target.size(); ++h) out << h << ',' << format_double(target[h]) << '\n';
}

/// Mean of one year's hourly values.
inline double annual_cf(const HourlySeries& s, std::size_t year_index) {
    std::size_t years = series_years(s);
    if (year_index >= years)
        throw Error("year_index " + std::to_string(year_index) + " out of range (have " + std::to_string(years) + " years)");
    auto begin = s.values.begin() + static_cast<std::ptrdiff_t>(year_index * static_cast<std::size_t>(s.hours_per_year));
    return std::accumulate(begin, begin + s.hours_per_year, 0.0) / static_cast<double>(s.hours_per_year);
}

inline std::vector<double> annual_cfs(const HourlySeries& s) {
    std::vector<double> out(series_years(s));
    for (std::size_t y = 0; y < out.size(); ++y) out[y] = annual_cf(s, y);
    return out;
}

/// Lower median of the per-year capacity factors. Deterministic for even
/// year counts and within noise of the mean over 20 years.
inline double median_annual_cf(const HourlySeries& s) {
    std::vector<double> cfs = annual_cfs(s);
    std::sort(cfs.begin(), cfs.end());
    return cfs[(cfs.size() - 1) / 2];
}

struct ScaledSeries {
    HourlySeries series;
    double scale_factor = 1.0;
    std::size_t clipped_hours = 0;
};

/// Rescales a multi-year normalized series so its median annual CF matches
/// an observed CF. Values that would exceed nameplate are clipped to 1 and
/// counted.
inline ScaledSeries scale_to_observed(const HourlySeries& multi_year, double target_cf) {
    if (multi_year.unit != SeriesUnit::NormalizedCf) throw Error("scale_to_observed: series must be normalized-cf");
    if (!(target_cf > 0.0 && target_cf <= 1.0)) throw Error("scale_to_observed: target_cf must be in (0,1]");
    double med = median_annual_cf(multi_year);
    if (med <= 0.0) throw Error("scale_to_observed: median annual CF is zero");
    ScaledSeries out;
    out.scale_factor = target_cf / med;
    out.series = multi_year;
    out.series.label = multi_year.label;
    for (double& v : out.series.values) {
        v *= out.scale_factor;
        if (v > 1.0) {
            v = 1.0;
            ++out.clipped_hours;
        }
    }
    return out;
}

/// Monsoon-window production divided by production over the rest of the
/// year; +inf when everything falls inside the window. 2000/6760 ~ 0.296
/// for a uniform resource.
inline double seasonality_ratio(const HourlySeries& s, std::size_t year_index = 0) {
    std::size_t years = series_years(s);
    if (year_index >= years) throw Error("seasonality_ratio: year_index out of range");
    if (s.hours_per_year != kHoursPerYear)
        throw Error("seasonality_ratio: defined for 8760-hour years");
    std::size_t base = year_index * static_cast<std::size_t>(s.hours_per_year);
    double window = 0.0, rest = 0.0;
    for (int h = 0; h < s.hours_per_year; ++h) {
        double v = s.values[base + static_cast<std::size_t>(h)];
        if (h >= kMonsoonBeginHour && h < kMonsoonEndHour)
            window += v;
        else
            rest += v;
    }
    if (rest == 0.0) return kInfinity;
    return window / rest;
}

/// Flexible coal profile: peak less the statewide wind/solar production at
/// their capacity shares. Bounded in [0, peak] for valid inputs.
inline HourlySeries synth_flexible_profile(const HourlySeries& solar, const HourlySeries& wind, double solar_share,
                                           double wind_share, double peak_mw) {
    if (std::abs(solar_share + wind_share - 1.0) > 1e-9)
        throw Error("synth_flexible_profile: shares must sum to 1");
    if (solar.size() != wind.size()) throw Error("synth_flexible_profile: length mismatch");
    if (!(peak_mw >= 0.0)) throw Error("synth_flexible_profile: peak must be nonnegative");
    HourlySeries out;
    out.unit = SeriesUnit::Megawatt;
    out.hours_per_year = solar.hours_per_year;
    out.label = "flexible";
    out.values.resize(solar.size());
    for (std::size_t h = 0; h < solar.size(); ++h) {
        double c = peak_mw - peak_mw * solar_share * solar[h] - peak_mw * wind_share * wind[h];
        out.values[h] = std::clamp(c, 0.0, peak_mw);
    }
    return out;
}

/// Element-wise mean across sites per technology.
inline ResourceSet average_sites(std::span<const ResourceSet> sites) {
    if (sites.empty()) throw Error("average_sites: empty site list");
    std::size_t n = sites.front().solar.size();
    for (const auto& s : sites) {
        check_resource_set(s);
        if (s.solar.size() != n) throw Error("average_sites: length mismatch across sites");
    }
    ResourceSet out;
    out.site_label = "average";
    out.solar = sites.front().solar;
    out.wind = sites.front().wind;
    out.solar.label = "solar_avg";
    out.wind.label = "wind_avg";
    const double inv = 1.0 / static_cast<double>(sites.size());
    for (std::size_t h = 0; h < n; ++h) {
        double sa = 0.0, wa = 0.0;
        for (const auto& s : sites) {
            sa += s.solar[h];
            wa += s.wind[h];
        }
        out.solar.values[h] = sa * inv;
        out.wind.values[h] = wa * inv;
    }
    return out;
}

/// Repeats one 8760-hour year n times.
inline HourlySeries tile_years(const HourlySeries& one_year, std::size_t n_years) {
    if (one_year.size() != static_cast<std::size_t>(one_year.hours_per_year))
        throw Error("tile_years: input must be exactly one year long");
    if (n_years < 1) throw Error("tile_years: n_years must be >= 1");
    HourlySeries out = one_year;
    out.values.reserve(one_year.size() * n_years);
    for (std::size_t k = 1; k < n_years; ++k)
        out.values.insert(out.values.end(), one_year.values.begin(), one_year.values.end());
    return out;
}

}  // namespace repower
