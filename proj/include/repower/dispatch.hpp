#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "repower/model.hpp"

namespace repower {

/// Serve the target from renewables first; surplus charges the battery
/// within rate, headroom and charge-efficiency limits; deficits discharge
/// within rate, stored energy and discharge-efficiency limits. Leftover
/// surplus is curtailed, leftover deficit is shortfall (data, not an
/// error). Never discharges into curtailment, never charges during a
/// shortfall hour.
inline DispatchSchedule greedy_dispatch(const PlantDesign& design, const ResourceSet& resources,
                                        const HourlySeries& target, const ScenarioConfig& config) {
    check_resource_set(resources);
    if (resources.solar.size() != target.size())
        throw Error("greedy_dispatch: resource and target lengths differ");
    const std::size_t T = target.size();
    const double eta_ch = config.storage.charge_efficiency();
    const double eta_dch = config.storage.discharge_efficiency();
    const double cap = design.battery_mwh;
    const double rate = design.battery_power_mw;

    DispatchSchedule s;
    s.charge_mw.resize(T);
    s.discharge_mw.resize(T);
    s.soc_mwh.resize(T);
    s.curtailment_mw.resize(T);
    s.shortfall_mw.resize(T);
    s.renewable_mw.resize(T);

    double soc = config.storage.initial_soc_fraction * cap;
    for (std::size_t t = 0; t < T; ++t) {
        double renew = resources.solar[t] * design.solar_mw + resources.wind[t] * design.wind_mw;
        s.renewable_mw[t] = renew;
        double need = target[t];
        double charge = 0, discharge = 0, curtail = 0, shortfall = 0;
        if (renew >= need) {
            double surplus = renew - need;
            charge = std::min({surplus, rate, (cap - soc) / eta_ch});
            charge = std::max(0.0, charge);
            soc += eta_ch * charge;
            curtail = surplus - charge;
        } else {
            double deficit = need - renew;
            discharge = std::min({deficit, rate, soc * eta_dch});
            discharge = std::max(0.0, discharge);
            soc -= discharge / eta_dch;
            shortfall = deficit - discharge;
        }
        s.charge_mw[t] = charge;
        s.discharge_mw[t] = discharge;
        s.soc_mwh[t] = soc;
        s.curtailment_mw[t] = curtail;
        s.shortfall_mw[t] = shortfall;
    }
    return s;
}

/// Fraction of hours whose shortfall is within tolerance.
inline double availability(const DispatchSchedule& schedule, const HourlySeries& target, double tolerance_mw = 1e-6) {
    if (schedule.size() != target.size()) throw Error("availability: schedule and target lengths differ");
    if (schedule.size() == 0) throw Error("availability: empty schedule");
    std::size_t ok = 0;
    for (std::size_t t = 0; t < schedule.size(); ++t)
        if (schedule.shortfall_mw[t] <= tolerance_mw) ++ok;
    return static_cast<double>(ok) / static_cast<double>(schedule.size());
}

struct ScheduleViolation {
    std::int64_t hour;
    std::string kind;
    double amount;
};

/// Empty iff SOC bounds, rate limits, the charge-from-renewables limit,
/// the SOC recurrence and end-SOC conservation all hold within tol.
/// Exempt hours are excluded from the delivery check only; physics still
/// applies to them.
inline std::vector<ScheduleViolation> validate_schedule(const DispatchSchedule& s, const PlantDesign& design,
                                                        const ResourceSet& resources, const HourlySeries& target,
                                                        const ScenarioConfig& config, double tol = 1e-6) {
    std::vector<ScheduleViolation> out;
    const std::size_t T = s.size();
    if (T != target.size() || T != resources.solar.size()) {
        out.push_back({-1, "length-mismatch", 0});
        return out;
    }
    const double eta_ch = config.storage.charge_efficiency();
    const double eta_dch = config.storage.discharge_efficiency();
    const double cap = design.battery_mwh;
    const double rate = design.battery_power_mw;
    double prev = config.storage.initial_soc_fraction * cap;
    for (std::size_t t = 0; t < T; ++t) {
        auto hour = static_cast<std::int64_t>(t);
        double renew = resources.solar[t] * design.solar_mw + resources.wind[t] * design.wind_mw;
        if (s.charge_mw[t] < -tol) out.push_back({hour, "negative-charge", -s.charge_mw[t]});
        if (s.discharge_mw[t] < -tol) out.push_back({hour, "negative-discharge", -s.discharge_mw[t]});
        if (s.soc_mwh[t] < -tol) out.push_back({hour, "soc-below-zero", -s.soc_mwh[t]});
        if (s.soc_mwh[t] > cap + tol) out.push_back({hour, "soc-above-capacity", s.soc_mwh[t] - cap});
        if (s.charge_mw[t] > rate + tol) out.push_back({hour, "charge-rate", s.charge_mw[t] - rate});
        if (s.discharge_mw[t] > rate + tol) out.push_back({hour, "discharge-rate", s.discharge_mw[t] - rate});
        if (s.charge_mw[t] > renew + tol) out.push_back({hour, "charge-source", s.charge_mw[t] - renew});
        double expect = prev + eta_ch * s.charge_mw[t] - s.discharge_mw[t] / eta_dch;
        if (std::abs(s.soc_mwh[t] - expect) > tol)
            out.push_back({hour, "soc-recurrence", std::abs(s.soc_mwh[t] - expect)});
        if (!s.exempt_hours.count(hour)) {
            double delivered = renew + s.discharge_mw[t] - s.charge_mw[t];
            double gap = target[t] - delivered - s.shortfall_mw[t];
            if (gap > tol) out.push_back({hour, "delivery", gap});
        }
        prev = s.soc_mwh[t];
    }
    return out;
}

/// End SOC below the initial state is reported, not enforced: conservation
/// is an optimization boundary condition, not a physical one.
inline bool end_soc_conserved(const DispatchSchedule& s, const PlantDesign& design, const ScenarioConfig& config,
                              double tol = 1e-6) {
    if (s.size() == 0) return true;
    return s.soc_mwh.back() >= config.storage.initial_soc_fraction * design.battery_mwh - tol;
}

}  // namespace repower
