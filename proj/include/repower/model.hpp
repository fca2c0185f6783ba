#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "repower/common.hpp"
#include "repower/economics.hpp"
#include "repower/series.hpp"

namespace repower {

/// Battery parameters. Charge and discharge efficiency are both sqrt of the
/// roundtrip efficiency.
struct StorageParams {
    double roundtrip_efficiency = 0.75;
    int duration_hours = 4;
    double initial_soc_fraction = 0.5;

    double charge_efficiency() const { return std::sqrt(roundtrip_efficiency); }
    double discharge_efficiency() const { return std::sqrt(roundtrip_efficiency); }
};

inline void check_storage(const StorageParams& s) {
    if (!(s.roundtrip_efficiency > 0.0 && s.roundtrip_efficiency <= 1.0))
        throw Error("storage: roundtrip efficiency must be in (0,1]");
    if (s.duration_hours < 1) throw Error("storage: duration must be >= 1 hour");
    if (s.initial_soc_fraction < 0.0 || s.initial_soc_fraction > 1.0)
        throw Error("storage: initial SOC fraction must be in [0,1]");
}

struct PlantDesign {
    double solar_mw = 0;
    double wind_mw = 0;
    double battery_mwh = 0;
    double battery_power_mw = 0;  // battery_mwh / duration
};

inline PlantDesign make_design(double solar_mw, double wind_mw, double battery_mwh, int duration_hours) {
    if (solar_mw < 0 || wind_mw < 0 || battery_mwh < 0) throw Error("design: capacities must be nonnegative");
    if (duration_hours < 1) throw Error("design: duration must be >= 1 hour");
    return PlantDesign{solar_mw, wind_mw, battery_mwh, battery_mwh / duration_hours};
}

inline double design_cost_usd(const PlantDesign& d, const CostParams& c) {
    return system_cost_usd(d.solar_mw, d.wind_mw, d.battery_mwh, d.battery_power_mw, c);
}

/// Everything a sizing run needs besides the series themselves.
struct ScenarioConfig {
    CostParams costs;
    EconomicParams econ;
    StorageParams storage;
    double availability = 1.0;
    double epsilon_mw = 0.0;
    std::int64_t horizon_hours = 0;
    double annual_target_energy_mwh = 0;

    // solver-facing knobs
    std::int64_t milp_horizon_cap = 2190;
    double slack_penalty_factor = 10.0;
};

inline void check_scenario(const ScenarioConfig& c) {
    check_costs(c.costs);
    check_econ(c.econ);
    check_storage(c.storage);
    if (!(c.availability > 0.0 && c.availability <= 1.0)) throw Error("availability must be in (0,1]");
    if (c.epsilon_mw < 0) throw Error("epsilon must be nonnegative");
    if (c.horizon_hours < 1) throw Error("horizon must be positive");
    if (!(c.annual_target_energy_mwh > 0)) throw Error("annual target energy must be positive");
}

/// Fractional years represented by the horizon; short desk horizons
/// annualize pro rata.
inline double horizon_years(std::int64_t horizon_hours) {
    return static_cast<double>(horizon_hours) / static_cast<double>(kHoursPerYear);
}

/// Derives horizon and annualized target energy from a target profile.
inline ScenarioConfig make_scenario(const HourlySeries& target, CostParams costs = {}, EconomicParams econ = {},
                                    StorageParams storage = {}, double availability = 1.0, double epsilon_mw = 0.0) {
    ScenarioConfig cfg;
    cfg.costs = costs;
    cfg.econ = econ;
    cfg.storage = storage;
    cfg.availability = availability;
    cfg.epsilon_mw = epsilon_mw;
    cfg.horizon_hours = static_cast<std::int64_t>(target.size());
    double total = 0;
    for (double v : target.values) total += v;
    cfg.annual_target_energy_mwh = total / horizon_years(cfg.horizon_hours);
    check_scenario(cfg);
    return cfg;
}

/// Hour-by-hour battery operation for one design over one horizon.
/// soc_mwh[t] is the state of charge after hour t's charge/discharge;
/// the state before hour 0 is initial_soc_fraction * battery_mwh.
struct DispatchSchedule {
    std::vector<double> charge_mw;
    std::vector<double> discharge_mw;
    std::vector<double> soc_mwh;
    std::vector<double> curtailment_mw;
    std::vector<double> shortfall_mw;
    std::vector<double> renewable_mw;  // contemporaneous solar+wind output
    std::set<std::int64_t> exempt_hours;

    std::size_t size() const { return charge_mw.size(); }
};

}  // namespace repower
