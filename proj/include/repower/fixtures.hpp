#pragma once

#include <cmath>
#include <cstdint>

#include "repower/series.hpp"

namespace repower {

namespace detail {

// splitmix64; used instead of <random> distributions so fixtures are
// bit-identical across platforms
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace detail

/// Synthetic monsoon-climate resource fixtures: diurnal solar with a wet
/// season dip, strongly seasonal wind (high inside hours [4000,6000)), and
/// an optional multi-day calm-and-overcast lull that stresses storage
/// sizing. Multi-year series add deterministic per-year jitter and two
/// deeper lulls in later years, so designs tuned on year 0 see harder
/// hours downstream.
struct SyntheticOptions {
    int years = 1;
    std::uint64_t seed = 7777;
    bool with_lull = true;
};

inline ResourceSet synthetic_resources(const SyntheticOptions& opt = {}) {
    if (opt.years < 1) throw Error("synthetic_resources: years must be >= 1");
    detail::SplitMix64 rng(opt.seed);
    const int T = kHoursPerYear;
    ResourceSet out;
    out.site_label = "synthetic";
    out.solar.unit = SeriesUnit::NormalizedCf;
    out.wind.unit = SeriesUnit::NormalizedCf;
    out.solar.label = "solar_cf";
    out.wind.label = "wind_cf";
    out.solar.values.reserve(static_cast<std::size_t>(T) * opt.years);
    out.wind.values.reserve(static_cast<std::size_t>(T) * opt.years);

    for (int year = 0; year < opt.years; ++year) {
        double wind_jitter = 1.0 + 0.16 * (rng.uniform() - 0.5);
        double solar_jitter = 1.0 + 0.06 * (rng.uniform() - 0.5);
        if (year == 0) {
            wind_jitter = 1.0;
            solar_jitter = 1.0;
        }
        // lull placement: a 36 h event in year 0, deeper 60 h events in
        // years 7 and 13 at other calendar positions
        int lull_begin = -1, lull_len = 0;
        double lull_depth_solar = 1.0, lull_depth_wind = 1.0;
        if (opt.with_lull) {
            if (year == 0) {
                lull_begin = 460;
                lull_len = 36;
                lull_depth_solar = 0.10;
                lull_depth_wind = 0.05;
            } else if (year % 20 == 7) {
                lull_begin = 7000;
                lull_len = 60;
                lull_depth_solar = 0.05;
                lull_depth_wind = 0.03;
            } else if (year % 20 == 13) {
                lull_begin = 1200;
                lull_len = 60;
                lull_depth_solar = 0.04;
                lull_depth_wind = 0.03;
            }
        }
        for (int h = 0; h < T; ++h) {
            int hod = h % 24;
            int doy = h / 24;
            bool monsoon = h >= kMonsoonBeginHour && h < kMonsoonEndHour;

            double s = 0.0;
            if (hod >= 6 && hod < 18) {
                double x = std::sin(M_PI * (hod - 6) / 12.0);
                s = 0.85 * x * std::sqrt(x);
                if (monsoon) s *= 0.75;
                s *= solar_jitter;
            }
            double w = 0.08 + 0.02 * std::sin(2.0 * M_PI * doy / 91.0);
            if (monsoon) w = 0.50 + 0.10 * std::sin(2.0 * M_PI * doy / 30.0);
            w *= wind_jitter;

            if (lull_begin >= 0 && h >= lull_begin && h < lull_begin + lull_len) {
                s *= lull_depth_solar;
                w *= lull_depth_wind;
            }
            out.solar.values.push_back(std::clamp(s, 0.0, 1.0));
            out.wind.values.push_back(std::clamp(w, 0.0, 1.0));
        }
    }
    return out;
}

inline HourlySeries baseload_target(double peak_mw, std::int64_t hours) {
    if (!(peak_mw >= 0) || hours < 1) throw Error("baseload_target: invalid parameters");
    HourlySeries t;
    t.unit = SeriesUnit::Megawatt;
    t.label = "baseload";
    t.values.assign(static_cast<std::size_t>(hours), peak_mw);
    return t;
}

}  // namespace repower
