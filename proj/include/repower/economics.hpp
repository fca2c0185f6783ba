#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "repower/common.hpp"

namespace repower {

/// Capital costs. Capacities are carried in MW/MWh, so each $/kW rate is
/// applied at 1000x.
struct CostParams {
    double solar_usd_per_kw = 700.0;
    double wind_usd_per_kw = 1100.0;
    double battery_energy_usd_per_kwh = 200.0;
    double battery_power_usd_per_kw = 800.0;
    double fx_rs_per_usd = 70.0;
};

struct EconomicParams {
    double wacc = 0.025;
    int lifetime_years = 20;
};

struct AbatementParams {
    double coal_cost_usd_per_mwh = 43.0;
    double ef_coal_t_per_mwh = 0.92;
    double ef_hybrid_t_per_mwh = 0.02;
};

inline void check_costs(const CostParams& c) {
    if (c.solar_usd_per_kw < 0 || c.wind_usd_per_kw < 0 || c.battery_energy_usd_per_kwh < 0 ||
        c.battery_power_usd_per_kw < 0 || c.fx_rs_per_usd <= 0)
        throw Error("invalid cost parameters");
}

inline void check_econ(const EconomicParams& e) {
    if (e.lifetime_years < 1 || e.wacc < 0) throw Error("invalid economic parameters");
}

/// Capital recovery factor r(1+r)^n / ((1+r)^n - 1); 1/n in the zero-rate
/// limit.
inline double crf(double r, int n_years) {
    if (n_years < 1) throw Error("crf: lifetime must be >= 1 year");
    if (r < 0) throw Error("crf: negative rate");
    if (r == 0.0) return 1.0 / static_cast<double>(n_years);
    double g = std::pow(1.0 + r, n_years);
    return r * g / (g - 1.0);
}

/// Installed capital cost of a (solar MW, wind MW, battery MWh, battery MW)
/// system in dollars.
inline double system_cost_usd(double solar_mw, double wind_mw, double battery_mwh, double battery_power_mw,
                              const CostParams& c) {
    return 1000.0 * (solar_mw * c.solar_usd_per_kw + wind_mw * c.wind_usd_per_kw +
                     battery_mwh * c.battery_energy_usd_per_kwh + battery_power_mw * c.battery_power_usd_per_kw);
}

/// Annualized capital cost per MWh of delivered target energy.
inline double lcoe_usd_per_mwh(double system_cost, const EconomicParams& e, double annual_energy_mwh) {
    if (!(annual_energy_mwh > 0)) throw Error("lcoe: annual energy must be positive");
    return crf(e.wacc, e.lifetime_years) * system_cost / annual_energy_mwh;
}

inline double to_rs_per_kwh(double usd_per_mwh, double fx_rs_per_usd) {
    if (!(fx_rs_per_usd > 0)) throw Error("to_rs_per_kwh: fx must be positive");
    return usd_per_mwh * fx_rs_per_usd / 1000.0;
}

inline double from_rs_per_kwh(double rs_per_kwh, double fx_rs_per_usd) {
    if (!(fx_rs_per_usd > 0)) throw Error("from_rs_per_kwh: fx must be positive");
    return rs_per_kwh * 1000.0 / fx_rs_per_usd;
}

/// Cost per tonne of CO2 avoided relative to the displaced coal generation.
inline double abatement_cost_usd_per_tco2(double lcoe_hybrid_usd_per_mwh, const AbatementParams& p) {
    if (!(p.ef_coal_t_per_mwh > p.ef_hybrid_t_per_mwh) || p.ef_hybrid_t_per_mwh < 0)
        throw Error("abatement: emission factors must satisfy ef_coal > ef_hybrid >= 0");
    return (lcoe_hybrid_usd_per_mwh - p.coal_cost_usd_per_mwh) / (p.ef_coal_t_per_mwh - p.ef_hybrid_t_per_mwh);
}

/// LCOE when curtailed energy sells at `value_fraction` of the delivered
/// price: the self-consistent price annualized_cost / (E_target + a*E_curt).
inline double lcoe_with_curtailment_value(double annualized_cost_usd, double annual_target_mwh,
                                          double annual_curtailed_mwh, double value_fraction) {
    if (value_fraction < 0.0 || value_fraction > 1.0)
        throw Error("curtailment value fraction must be in [0,1]");
    if (annual_curtailed_mwh < 0.0) throw Error("negative curtailed energy");
    double denom = annual_target_mwh + value_fraction * annual_curtailed_mwh;
    if (!(denom > 0)) throw Error("curtailment valuation: zero denominator");
    return annualized_cost_usd / denom;
}

/// Non-self-consistent variant: curtailed energy is credited at a fixed
/// $/MWh price instead of a fraction of the (resulting) delivered price.
inline double lcoe_with_fixed_curtailment_credit(double annualized_cost_usd, double annual_target_mwh,
                                                 double annual_curtailed_mwh, double credit_usd_per_mwh) {
    if (!(annual_target_mwh > 0)) throw Error("curtailment credit: zero target energy");
    return (annualized_cost_usd - credit_usd_per_mwh * annual_curtailed_mwh) / annual_target_mwh;
}

struct ReplacementParams {
    int year_of_replacement = 15;           // years of service before the swap
    double future_system_usd_per_kwh = 250; // full storage system cost at purchase
    double discount_rate = 0.08;
};

/// Base LCOE plus the annualized present value of re-buying the storage
/// system after `year_of_replacement` years of service. The outlay is
/// discounted over year_of_replacement + 1 periods: under the end-of-year
/// annuity convention the purchase books with the first year the new
/// system serves.
inline double lcoe_with_replacement_usd_per_mwh(double base_lcoe_usd_per_mwh, double battery_mwh,
                                                const EconomicParams& e, double annual_energy_mwh,
                                                const ReplacementParams& r) {
    if (r.year_of_replacement < 1 || r.year_of_replacement >= e.lifetime_years)
        throw Error("replacement year must lie inside the plant lifetime");
    if (!(annual_energy_mwh > 0)) throw Error("replacement: annual energy must be positive");
    double outlay = battery_mwh * 1000.0 * r.future_system_usd_per_kwh;
    double present = outlay / std::pow(1.0 + r.discount_rate, r.year_of_replacement + 1);
    return base_lcoe_usd_per_mwh + crf(e.wacc, e.lifetime_years) * present / annual_energy_mwh;
}

inline double health_adjusted_rs_per_kwh(double lcoe_rs_per_kwh, double benefit_rs_per_kwh) {
    if (benefit_rs_per_kwh < 0) throw Error("health benefit must be nonnegative");
    return lcoe_rs_per_kwh - benefit_rs_per_kwh;
}

enum class Ownership { Private, State, Central };

inline Ownership parse_ownership(const std::string& s) {
    if (s == "private") return Ownership::Private;
    if (s == "state") return Ownership::State;
    if (s == "central") return Ownership::Central;
    throw Error("unknown ownership '" + s + "' (expected private|state|central)");
}

inline const char* ownership_name(Ownership o) {
    switch (o) {
        case Ownership::Private: return "private";
        case Ownership::State: return "state";
        default: return "central";
    }
}

struct CoalPlantRecord {
    std::string name;
    std::string state;
    double capacity_mw = 0;
    int commission_year = 0;
    Ownership ownership = Ownership::Private;
};

inline void check_plant(const CoalPlantRecord& p) {
    if (!(p.capacity_mw > 0)) throw Error("plant '" + p.name + "': capacity must be positive");
    if (p.commission_year < 1950 || p.commission_year > 2030)
        throw Error("plant '" + p.name + "': implausible commission year " + std::to_string(p.commission_year));
}

struct RetirementTimeline {
    // year -> retiring capacity by ownership {private, state, central}
    std::map<int, std::array<double, 3>> retiring_mw;
    double total_capacity_mw = 0;
    double stranded_fraction = 0;  // capacity retiring after the phaseout year
};

/// Plants retire at commission_year + lifetime; capacity still alive after
/// the phaseout year is stranded.
inline RetirementTimeline retirement_timeline(const std::vector<CoalPlantRecord>& fleet, int lifetime_years,
                                              int phaseout_year) {
    if (fleet.empty()) throw Error("retirement_timeline: empty fleet");
    RetirementTimeline out;
    double stranded = 0;
    for (const auto& p : fleet) {
        check_plant(p);
        int retire = p.commission_year + lifetime_years;
        out.retiring_mw[retire][static_cast<std::size_t>(p.ownership)] += p.capacity_mw;
        out.total_capacity_mw += p.capacity_mw;
        if (retire > phaseout_year) stranded += p.capacity_mw;
    }
    out.stranded_fraction = stranded / out.total_capacity_mw;
    return out;
}

/// Fleet CSV: name,state,capacity_mw,commission_year,ownership
inline std::vector<CoalPlantRecord> load_fleet_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(path + ": empty file");
    std::vector<CoalPlantRecord> fleet;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> f;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                f.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        f.push_back(cur);
        if (f.size() != 5)
            throw Error(path + ": malformed fleet row at line " + std::to_string(line_no));
        CoalPlantRecord p;
        p.name = f[0];
        p.state = f[1];
        try {
            p.capacity_mw = parse_double(f[2]);
            p.commission_year = static_cast<int>(parse_int(f[3]));
            p.ownership = parse_ownership(f[4]);
            check_plant(p);
        } catch (const Error& e) {
            throw Error(path + ": line " + std::to_string(line_no) + ": " + e.what());
        }
        fleet.push_back(std::move(p));
    }
    if (fleet.empty()) throw Error(path + ": no fleet rows");
    return fleet;
}

}  // namespace repower
