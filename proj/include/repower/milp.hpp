#pragma once

#include <cmath>
#include <vector>

#include "repower/solver.hpp"

namespace repower {

struct MilpOptions {
    SolveOptions lp;
    double absolute_gap = 1e-6;
    double integrality_tol = 1e-6;
    std::int64_t node_limit = 200000;
};

/// Branch and bound over LP relaxations. Branching variable: most
/// fractional, lowest index on ties. Node order: depth-first while the
/// last node branched, otherwise the open node with the best bound.
/// Sequential and deterministic.
inline LPSolution solve_milp(const LPProblem& problem, const MilpOptions& options = {}) {
    check_problem(problem);
    if (problem.integer_vars.empty()) throw Error("solve_milp: no integer variables, use solve_lp");

    struct Node {
        std::vector<std::pair<int, double>> fixings;  // (var, value)
        double bound;
        int depth;
        std::int64_t seq;
    };

    SolveOptions lp_opt = options.lp;
    lp_opt.presolve = false;

    auto solve_node = [&](const Node& node) {
        LPProblem sub = problem;
        sub.integer_vars.clear();
        for (auto& [j, v] : node.fixings) {
            sub.lower[j] = v;
            sub.upper[j] = v;
        }
        return solve_lp(sub, lp_opt);
    };

    std::vector<Node> open;
    open.push_back(Node{{}, -kInfinity, 0, 0});
    std::int64_t seq = 1, nodes = 0, total_iterations = 0;
    double incumbent_obj = kInfinity;
    LPSolution incumbent;
    bool have_incumbent = false;
    bool hit_limit = false;
    bool dive = true;  // take the newest child while the last node branched

    while (!open.empty()) {
        if (++nodes > options.node_limit) {
            hit_limit = true;
            break;
        }
        std::size_t pick = open.size() - 1;
        if (!dive) {
            for (std::size_t i = 0; i < open.size(); ++i) {
                const Node& a = open[i];
                const Node& b = open[pick];
                if (a.bound < b.bound - 1e-15) pick = i;
                else if (a.bound <= b.bound + 1e-15 && (a.depth > b.depth || (a.depth == b.depth && a.seq < b.seq)))
                    pick = i;
            }
        }
        Node node = std::move(open[pick]);
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
        dive = false;

        if (node.bound >= incumbent_obj - options.absolute_gap) continue;

        LPSolution rel = solve_node(node);
        total_iterations += rel.iterations;
        if (rel.status == SolveStatus::Infeasible) continue;
        if (rel.status == SolveStatus::Unbounded) throw Error("solve_milp: relaxation is unbounded");
        if (rel.status == SolveStatus::IterationLimit) {
            hit_limit = true;
            continue;
        }
        if (rel.objective >= incumbent_obj - options.absolute_gap) continue;

        int branch_var = -1;
        double branch_frac = -1, branch_val = 0;
        for (int j : problem.integer_vars) {
            double v = rel.x[j];
            double frac = v - std::floor(v);
            double dist = std::min(frac, 1.0 - frac);
            if (dist > options.integrality_tol && dist > branch_frac + 1e-15) {
                branch_frac = dist;
                branch_var = j;
                branch_val = v;
            }
        }
        if (branch_var < 0) {
            for (int j : problem.integer_vars) rel.x[j] = std::round(rel.x[j]);
            double obj = 0;
            for (int j = 0; j < problem.num_vars; ++j) obj += problem.objective[j] * rel.x[j];
            rel.objective = obj;
            if (!have_incumbent || obj < incumbent_obj) {
                incumbent_obj = obj;
                incumbent = rel;
                have_incumbent = true;
            }
            continue;
        }

        Node down{node.fixings, rel.objective, node.depth + 1, seq++};
        down.fixings.emplace_back(branch_var, std::floor(branch_val));
        Node up{node.fixings, rel.objective, node.depth + 1, seq++};
        up.fixings.emplace_back(branch_var, std::ceil(branch_val));
        // dive into the nearer side first: it is pushed last
        if (branch_val - std::floor(branch_val) <= 0.5) std::swap(down, up);
        open.push_back(std::move(down));
        open.push_back(std::move(up));
        dive = true;
    }

    double best_open = have_incumbent ? incumbent_obj : kInfinity;
    for (const Node& nd : open) best_open = std::min(best_open, nd.bound);

    if (have_incumbent) {
        incumbent.status = SolveStatus::Optimal;
        incumbent.best_bound = (open.empty() && !hit_limit) ? incumbent_obj : best_open;
        incumbent.iterations = total_iterations;
        if (hit_limit && incumbent_obj - best_open > options.absolute_gap)
            incumbent.status = SolveStatus::IterationLimit;
        return incumbent;
    }
    LPSolution out;
    out.status = hit_limit ? SolveStatus::IterationLimit : SolveStatus::Infeasible;
    out.best_bound = best_open;
    out.iterations = total_iterations;
    return out;
}

}  // namespace repower
