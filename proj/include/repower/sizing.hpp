#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "repower/dispatch.hpp"
#include "repower/milp.hpp"
#include "repower/model.hpp"
#include "repower/solver.hpp"

namespace repower {

/// Variable layout of a sizing LP: capacities first, then per-hour charge,
/// discharge and state of charge. soc(t) is the state after hour t.
struct SizingVars {
    std::int64_t T = 0;
    static constexpr int solar = 0;
    static constexpr int wind = 1;
    static constexpr int battery = 2;
    int charge(std::int64_t t) const { return static_cast<int>(3 + t); }
    int discharge(std::int64_t t) const { return static_cast<int>(3 + T + t); }
    int soc(std::int64_t t) const { return static_cast<int>(3 + 2 * T + t); }
    int count() const { return static_cast<int>(3 + 3 * T); }
};

/// Row layout: delivery, charge source, charge rate, discharge rate, SOC
/// cap (each T rows), then the recurrence chain (T rows: hour-0 row pins
/// the initial state, the closing row returns the end state to the initial
/// fraction), the end-state equality, and the end-state cap.
struct SizingRows {
    std::int64_t T = 0;
    int delivery(std::int64_t t) const { return static_cast<int>(t); }
    int source(std::int64_t t) const { return static_cast<int>(T + t); }
    int charge_rate(std::int64_t t) const { return static_cast<int>(2 * T + t); }
    int discharge_rate(std::int64_t t) const { return static_cast<int>(3 * T + t); }
    int soc_cap(std::int64_t t) const { return static_cast<int>(4 * T + t); }
    int recurrence(std::int64_t t) const { return static_cast<int>(5 * T + t); }
    int end_equality() const { return static_cast<int>(6 * T); }
    int end_cap() const { return static_cast<int>(6 * T + 1); }
    int count() const { return static_cast<int>(6 * T + 2); }
};

namespace detail {

inline void check_sizing_inputs(const ResourceSet& resources, const HourlySeries& target,
                                const ScenarioConfig& config) {
    check_resource_set(resources);
    check_scenario(config);
    if (target.unit != SeriesUnit::Megawatt) throw Error("sizing: target series must be in megawatts");
    if (static_cast<std::int64_t>(target.size()) != config.horizon_hours ||
        resources.solar.size() != target.size())
        throw Error("sizing: resource/target lengths must equal the configured horizon");
}

}  // namespace detail

/// Objective value is the LCOE in $/MWh: annualized capital cost divided by
/// the annual target energy.
inline LPProblem build_lp(const ResourceSet& resources, const HourlySeries& target, const ScenarioConfig& config) {
    detail::check_sizing_inputs(resources, target, config);
    const std::int64_t T = config.horizon_hours;
    const SizingVars v{T};
    const double eta_ch = config.storage.charge_efficiency();
    const double eta_dch = config.storage.discharge_efficiency();
    const double f0 = config.storage.initial_soc_fraction;
    const double inv_d = 1.0 / config.storage.duration_hours;
    const double annualize = crf(config.econ.wacc, config.econ.lifetime_years) / config.annual_target_energy_mwh;

    LPProblem p;
    p.add_var(0, kInfinity, annualize * 1000.0 * config.costs.solar_usd_per_kw);
    p.add_var(0, kInfinity, annualize * 1000.0 * config.costs.wind_usd_per_kw);
    p.add_var(0, kInfinity,
              annualize * 1000.0 * (config.costs.battery_energy_usd_per_kwh +
                                    config.costs.battery_power_usd_per_kw * inv_d));
    for (std::int64_t t = 0; t < 3 * T; ++t) p.add_var(0, kInfinity, 0.0);

    for (std::int64_t t = 0; t < T; ++t)
        p.add_row({{v.solar, resources.solar[t]}, {v.wind, resources.wind[t]}, {v.discharge(t), 1.0},
                   {v.charge(t), -1.0}},
                  RowSense::Ge, target[t] + config.epsilon_mw);
    for (std::int64_t t = 0; t < T; ++t)
        p.add_row({{v.charge(t), 1.0}, {v.solar, -resources.solar[t]}, {v.wind, -resources.wind[t]}},
                  RowSense::Le, 0.0);
    for (std::int64_t t = 0; t < T; ++t)
        p.add_row({{v.charge(t), 1.0}, {v.battery, -inv_d}}, RowSense::Le, 0.0);
    for (std::int64_t t = 0; t < T; ++t)
        p.add_row({{v.discharge(t), 1.0}, {v.battery, -inv_d}}, RowSense::Le, 0.0);
    for (std::int64_t t = 0; t < T; ++t)
        p.add_row({{v.soc(t), 1.0}, {v.battery, -1.0}}, RowSense::Le, 0.0);
    for (std::int64_t t = 0; t < T; ++t) {
        if (t == 0)
            p.add_row({{v.soc(0), 1.0}, {v.battery, -f0}, {v.charge(0), -eta_ch}, {v.discharge(0), 1.0 / eta_dch}},
                      RowSense::Eq, 0.0);
        else
            p.add_row({{v.soc(t), 1.0}, {v.soc(t - 1), -1.0}, {v.charge(t), -eta_ch},
                       {v.discharge(t), 1.0 / eta_dch}},
                      RowSense::Eq, 0.0);
    }
    p.add_row({{v.soc(T - 1), 1.0}, {v.battery, -f0}}, RowSense::Eq, 0.0);
    p.add_row({{v.soc(T - 1), 1.0}, {v.battery, -1.0}}, RowSense::Le, 0.0);
    return p;
}

/// build_lp plus the mix constraint solar = rho * (solar + wind).
inline LPProblem build_mix_constrained_lp(const ResourceSet& resources, const HourlySeries& target,
                                          const ScenarioConfig& config, double solar_share) {
    if (solar_share < 0.0 || solar_share > 1.0) throw Error("mix: solar share must be in [0,1]");
    LPProblem p = build_lp(resources, target, config);
    p.add_row({{SizingVars::solar, 1.0 - solar_share}, {SizingVars::wind, -solar_share}}, RowSense::Eq, 0.0);
    return p;
}

enum class RelaxationMode { ExactMilp, SlackHeuristic };

inline std::int64_t exemption_budget(const ScenarioConfig& config) {
    return static_cast<std::int64_t>(std::floor((1.0 - config.availability) * static_cast<double>(config.horizon_hours) + 1e-9));
}

/// Exact availability relaxation: one binary per hour deactivates that
/// hour's delivery row through a big-M term, with the exemption count
/// capped by the availability budget. Only sized for desk horizons.
inline LPProblem build_relaxed_milp(const ResourceSet& resources, const HourlySeries& target,
                                    const ScenarioConfig& config) {
    if (config.horizon_hours > config.milp_horizon_cap)
        throw Error("exact availability relaxation is capped at " + std::to_string(config.milp_horizon_cap) +
                    " hours; use the slack heuristic");
    LPProblem p = build_lp(resources, target, config);
    if (config.availability >= 1.0) return p;
    const std::int64_t T = config.horizon_hours;
    const SizingRows rows{T};
    double max_target = 0;
    for (double x : target.values) max_target = std::max(max_target, x);
    const double big_m = max_target + config.epsilon_mw;
    std::vector<std::pair<int, double>> budget;
    for (std::int64_t t = 0; t < T; ++t) {
        int b = p.add_var(0.0, 1.0, 0.0);
        p.integer_vars.push_back(b);
        budget.emplace_back(b, 1.0);
        // append the big-M coefficient to the delivery row
        int r = rows.delivery(t);
        // delivery rows were added first, so their entries are contiguous;
        // easiest is to rebuild the row coefficient list via push
        p.col_index.push_back(b);
        p.value.push_back(big_m);
        // keep CSR consistent: move the new entry into the row's range
        std::int64_t from = static_cast<std::int64_t>(p.value.size()) - 1;
        std::int64_t to = p.row_start[r + 1];
        for (std::int64_t k = from; k > to; --k) {
            std::swap(p.col_index[k], p.col_index[k - 1]);
            std::swap(p.value[k], p.value[k - 1]);
        }
        for (int q = r + 1; q <= p.num_rows(); ++q) ++p.row_start[q];
    }
    p.add_row(std::span<const std::pair<int, double>>(budget), RowSense::Le,
              static_cast<double>(exemption_budget(config)));
    return p;
}

struct SlackRelaxedLP {
    LPProblem lp;
    int first_slack_var = 0;
};

/// Pass 1 of the slack heuristic: nonnegative delivery slack per hour,
/// penalized at slack_penalty_factor times the largest capacity objective
/// coefficient.
inline SlackRelaxedLP build_relaxed_slack_lp(const ResourceSet& resources, const HourlySeries& target,
                                             const ScenarioConfig& config) {
    SlackRelaxedLP out;
    out.lp = build_lp(resources, target, config);
    const std::int64_t T = config.horizon_hours;
    const SizingRows rows{T};
    double penalty = 0;
    for (int j = 0; j < 3; ++j) penalty = std::max(penalty, out.lp.objective[j]);
    penalty *= config.slack_penalty_factor;
    out.first_slack_var = out.lp.num_vars;
    for (std::int64_t t = 0; t < T; ++t) {
        int s = out.lp.add_var(0.0, kInfinity, penalty);
        int r = rows.delivery(t);
        out.lp.col_index.push_back(s);
        out.lp.value.push_back(1.0);
        std::int64_t from = static_cast<std::int64_t>(out.lp.value.size()) - 1;
        std::int64_t to = out.lp.row_start[r + 1];
        for (std::int64_t k = from; k > to; --k) {
            std::swap(out.lp.col_index[k], out.lp.col_index[k - 1]);
            std::swap(out.lp.value[k], out.lp.value[k - 1]);
        }
        for (int q = r + 1; q <= out.lp.num_rows(); ++q) ++out.lp.row_start[q];
    }
    return out;
}

/// Ranks hours by pass-1 slack and keeps at most the availability budget.
inline std::vector<std::int64_t> choose_exempt_hours(const LPSolution& pass1, int first_slack_var, std::int64_t T,
                                                     std::int64_t budget) {
    std::vector<std::pair<double, std::int64_t>> ranked;
    for (std::int64_t t = 0; t < T; ++t) {
        double s = pass1.x[static_cast<std::size_t>(first_slack_var) + static_cast<std::size_t>(t)];
        if (s > 1e-6) ranked.emplace_back(s, t);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (static_cast<std::int64_t>(ranked.size()) > budget) ranked.resize(static_cast<std::size_t>(budget));
    std::vector<std::int64_t> hours;
    hours.reserve(ranked.size());
    for (auto& [s, t] : ranked) hours.push_back(t);
    std::sort(hours.begin(), hours.end());
    return hours;
}

/// build_lp with the given hours' delivery requirement dropped. The rows
/// stay in place with a zero requirement, which the charge-source limit
/// already implies, so the structure (and any warm basis) is preserved.
inline LPProblem build_exempted_lp(const ResourceSet& resources, const HourlySeries& target,
                                   const ScenarioConfig& config, const std::vector<std::int64_t>& exempt_hours) {
    LPProblem p = build_lp(resources, target, config);
    const SizingRows rows{config.horizon_hours};
    for (std::int64_t t : exempt_hours) {
        if (t < 0 || t >= config.horizon_hours) throw Error("exempt hour out of range");
        p.rhs[rows.delivery(t)] = 0.0;
    }
    return p;
}

struct SolveStats {
    SolveStatus status = SolveStatus::IterationLimit;
    std::int64_t iterations = 0;
    double kkt_primal = 0;
    double kkt_dual = 0;
    double kkt_complementarity = 0;
    double duality_gap = 0;
    std::int64_t exempt_count = 0;
    std::int64_t lp_rows = 0;
    std::int64_t lp_cols = 0;
};

struct SizingResult {
    PlantDesign design;
    DispatchSchedule dispatch;
    double objective_usd_per_mwh = 0;
    double curtailed_energy_mwh_per_year = 0;
    SolveStats stats;
};

/// Reads a solved sizing LP back into a design and schedule.
inline SizingResult extract_solution(const LPProblem& problem, const LPSolution& solution,
                                     const ResourceSet& resources, const HourlySeries& target,
                                     const ScenarioConfig& config,
                                     const std::vector<std::int64_t>& exempt_hours = {}) {
    if (solution.status != SolveStatus::Optimal) throw Error("extract_solution: solution is not optimal");
    const std::int64_t T = config.horizon_hours;
    const SizingVars v{T};
    SizingResult out;
    auto nneg = [](double x) { return x < 0 ? 0.0 : x; };
    out.design = make_design(nneg(solution.x[SizingVars::solar]), nneg(solution.x[SizingVars::wind]),
                             nneg(solution.x[SizingVars::battery]), config.storage.duration_hours);
    DispatchSchedule& d = out.dispatch;
    d.charge_mw.resize(T);
    d.discharge_mw.resize(T);
    d.soc_mwh.resize(T);
    d.curtailment_mw.resize(T);
    d.shortfall_mw.resize(T);
    d.renewable_mw.resize(T);
    d.exempt_hours.insert(exempt_hours.begin(), exempt_hours.end());
    double curtailed = 0;
    for (std::int64_t t = 0; t < T; ++t) {
        d.charge_mw[t] = nneg(solution.x[v.charge(t)]);
        d.discharge_mw[t] = nneg(solution.x[v.discharge(t)]);
        d.soc_mwh[t] = nneg(solution.x[v.soc(t)]);
        double renew = resources.solar[t] * out.design.solar_mw + resources.wind[t] * out.design.wind_mw;
        d.renewable_mw[t] = renew;
        double delivered = renew + d.discharge_mw[t] - d.charge_mw[t];
        d.curtailment_mw[t] = std::max(0.0, delivered - target[t]);
        d.shortfall_mw[t] = std::max(0.0, target[t] - delivered);
        curtailed += d.curtailment_mw[t];
    }
    out.curtailed_energy_mwh_per_year = curtailed / horizon_years(T);
    out.objective_usd_per_mwh = solution.objective;
    out.stats.status = solution.status;
    out.stats.iterations = solution.iterations;
    out.stats.kkt_primal = solution.residuals.primal;
    out.stats.kkt_dual = solution.residuals.dual;
    out.stats.kkt_complementarity = solution.residuals.complementarity;
    out.stats.duality_gap = solution.residuals.duality_gap;
    out.stats.exempt_count = static_cast<std::int64_t>(exempt_hours.size());
    out.stats.lp_rows = problem.num_rows();
    out.stats.lp_cols = problem.num_vars;

    double recomputed = lcoe_usd_per_mwh(design_cost_usd(out.design, config.costs), config.econ,
                                         config.annual_target_energy_mwh);
    double scale = std::max(1.0, std::abs(out.objective_usd_per_mwh));
    if (std::abs(recomputed - out.objective_usd_per_mwh) > 1e-6 * scale)
        throw Error("extract_solution: objective does not match the recomputed LCOE");
    return out;
}

/// Removes simultaneous charge/discharge hour by hour, preserving each
/// hour's net SOC transition exactly. Delivery can only increase, so all
/// constraints keep holding; capacities and cost are untouched.
inline DispatchSchedule net_dispatch(const DispatchSchedule& schedule, const ScenarioConfig& config) {
    DispatchSchedule out = schedule;
    const double eta_ch = config.storage.charge_efficiency();
    const double eta_dch = config.storage.discharge_efficiency();
    for (std::size_t t = 0; t < out.size(); ++t) {
        double c = out.charge_mw[t], d = out.discharge_mw[t];
        if (c <= 0.0 || d <= 0.0) continue;
        double delta = eta_ch * c - d / eta_dch;  // net SOC transition
        if (delta >= 0) {
            out.charge_mw[t] = delta / eta_ch;
            out.discharge_mw[t] = 0.0;
        } else {
            out.charge_mw[t] = 0.0;
            out.discharge_mw[t] = -delta * eta_dch;
        }
        double delivered = out.renewable_mw[t] + out.discharge_mw[t] - out.charge_mw[t];
        // the hour's target, recovered from the pre-netting accounting
        double target_t = out.renewable_mw[t] + schedule.discharge_mw[t] - schedule.charge_mw[t] -
                          schedule.curtailment_mw[t] + schedule.shortfall_mw[t];
        out.curtailment_mw[t] = std::max(0.0, delivered - target_t);
        out.shortfall_mw[t] = std::max(0.0, target_t - delivered);
    }
    return out;
}

/// One full sizing run. Availability below 1 uses the exact MILP when the
/// horizon is inside the cap and `prefer_exact`, otherwise the three-pass
/// slack heuristic: penalized-slack solve, exempt the worst hours within
/// budget, re-solve with those delivery requirements dropped.
struct SizingRun {
    SizingResult result;
    LPSolution solution;   // of the final LP/MILP
    LPProblem problem;     // the final problem solved
    std::vector<std::int64_t> exempt_hours;
};

inline SizingRun solve_sizing(const ResourceSet& resources, const HourlySeries& target, const ScenarioConfig& config,
                              SolveOptions options = {}, bool prefer_exact = false) {
    SizingRun run;
    if (config.availability >= 1.0) {
        run.problem = build_lp(resources, target, config);
        run.solution = solve_lp(run.problem, options);
        if (run.solution.status != SolveStatus::Optimal) return run;
        run.result = extract_solution(run.problem, run.solution, resources, target, config);
        return run;
    }

    if (prefer_exact && config.horizon_hours <= config.milp_horizon_cap) {
        run.problem = build_relaxed_milp(resources, target, config);
        MilpOptions mopt;
        mopt.lp = options;
        mopt.lp.warm_start = nullptr;
        run.solution = solve_milp(run.problem, mopt);
        if (run.solution.status != SolveStatus::Optimal) return run;
        const SizingVars v{config.horizon_hours};
        for (std::int64_t t = 0; t < config.horizon_hours; ++t)
            if (run.solution.x[static_cast<std::size_t>(v.count()) + static_cast<std::size_t>(t)] > 0.5)
                run.exempt_hours.push_back(t);
        // re-read through the plain-LP lens: binaries only tag exempt hours
        LPProblem base = build_exempted_lp(resources, target, config, run.exempt_hours);
        LPSolution trimmed = run.solution;
        trimmed.x.resize(static_cast<std::size_t>(v.count()));
        trimmed.y.resize(static_cast<std::size_t>(base.num_rows()));
        trimmed.objective = 0;
        for (int j = 0; j < base.num_vars; ++j) trimmed.objective += base.objective[j] * trimmed.x[j];
        run.result = extract_solution(base, trimmed, resources, target, config, run.exempt_hours);
        return run;
    }

    // pass 1: penalized slack
    SlackRelaxedLP pass1 = build_relaxed_slack_lp(resources, target, config);
    SolveOptions p1opt = options;
    LPSolution s1 = solve_lp(pass1.lp, p1opt);
    if (s1.status != SolveStatus::Optimal) {
        run.problem = std::move(pass1.lp);
        run.solution = std::move(s1);
        return run;
    }
    // pass 2: rank
    run.exempt_hours = choose_exempt_hours(s1, pass1.first_slack_var, config.horizon_hours, exemption_budget(config));
    // pass 3: re-solve without those delivery requirements
    run.problem = build_exempted_lp(resources, target, config, run.exempt_hours);
    SolveOptions p3opt = options;
    std::vector<VarStatus> warm;
    if (!s1.basis.empty()) {
        // pass-1 basis restricted to the shared columns; a basic slack hands
        // its slot to the logical of its (now non-binding) delivery row
        const SizingVars v{config.horizon_hours};
        const SizingRows rows{config.horizon_hours};
        warm.assign(s1.basis.begin(), s1.basis.begin() + v.count());
        std::size_t logical_base = static_cast<std::size_t>(pass1.lp.num_vars);
        warm.insert(warm.end(), s1.basis.begin() + static_cast<std::ptrdiff_t>(logical_base), s1.basis.end());
        for (std::int64_t t = 0; t < config.horizon_hours; ++t) {
            auto slack_state = s1.basis[static_cast<std::size_t>(pass1.first_slack_var) + static_cast<std::size_t>(t)];
            if (slack_state == VarStatus::Basic) {
                auto& logical = warm[static_cast<std::size_t>(v.count() + rows.delivery(t))];
                if (logical != VarStatus::Basic) logical = VarStatus::Basic;
            }
        }
        int basics = 0;
        for (auto st : warm)
            if (st == VarStatus::Basic) ++basics;
        if (basics == run.problem.num_rows()) {
            p3opt.warm_start = &warm;
            p3opt.presolve = false;
        }
    }
    run.solution = solve_lp(run.problem, p3opt);
    if (run.solution.status != SolveStatus::Optimal && p3opt.warm_start) {
        p3opt.warm_start = nullptr;  // cold retry
        run.solution = solve_lp(run.problem, options);
    }
    if (run.solution.status != SolveStatus::Optimal) return run;
    run.result = extract_solution(run.problem, run.solution, resources, target, config, run.exempt_hours);
    return run;
}

/// Sizing with the wind/solar mix pinned to a given solar share.
inline SizingRun solve_mix_sizing(const ResourceSet& resources, const HourlySeries& target,
                                  const ScenarioConfig& config, double solar_share, SolveOptions options = {}) {
    SizingRun run;
    run.problem = build_mix_constrained_lp(resources, target, config, solar_share);
    run.solution = solve_lp(run.problem, options);
    if (run.solution.status != SolveStatus::Optimal) return run;
    run.result = extract_solution(run.problem, run.solution, resources, target, config);
    return run;
}

}  // namespace repower
