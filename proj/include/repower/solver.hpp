#pragma once

#include <optional>

#include "repower/lp.hpp"
#include "repower/presolve.hpp"
#include "repower/simplex.hpp"

namespace repower {

/// Solves an LP (no integer variables) with the bounded-variable revised
/// simplex. Presolve and geometric scaling run by default; tolerances are
/// applied in the scaled space. Identical inputs produce bit-identical
/// solutions.
inline LPSolution solve_lp(const LPProblem& problem, const SolveOptions& options = {}) {
    check_problem(problem);
    if (!problem.integer_vars.empty()) throw Error("solve_lp: problem has integer variables, use solve_milp");

    const LPProblem* work = &problem;
    std::optional<detail::Presolve> pre;
    SolveOptions opt = options;
    if (options.presolve && !options.warm_start) {
        pre.emplace(problem);
        if (pre->infeasible) {
            // re-solve the original so the caller gets a proper certificate
            opt.presolve = false;
            return solve_lp(problem, opt);
        }
        work = &pre->reduced;
    }

    LPProblem scaled = *work;
    detail::Scaling sc;
    if (options.scaling)
        sc = detail::equilibrate(scaled);
    else {
        sc.row.assign(scaled.num_rows(), 1.0);
        sc.col.assign(scaled.num_vars, 1.0);
    }

    detail::Simplex simplex(scaled, opt);
    LPSolution sol = simplex.run();

    // back to the unscaled space
    for (int j = 0; j < scaled.num_vars; ++j) sol.x[j] *= sc.col[j];
    for (int i = 0; i < scaled.num_rows(); ++i) sol.y[i] *= sc.row[i];
    for (std::size_t i = 0; i < sol.residuals.farkas.size(); ++i) sol.residuals.farkas[i] *= sc.row[i];

    if (pre) {
        std::vector<double> x, y;
        pre->postsolve(sol.x, sol.y, x, y);
        sol.x = std::move(x);
        sol.y = std::move(y);
        sol.basis.clear();  // basis indices refer to the reduced problem
    }

    sol.objective = 0;
    for (int j = 0; j < problem.num_vars; ++j) sol.objective += problem.objective[j] * sol.x[j];
    if (sol.status == SolveStatus::Optimal) {
        auto farkas = std::move(sol.residuals.farkas);
        sol.residuals = check_kkt(problem, sol);
        sol.residuals.farkas = std::move(farkas);
        sol.best_bound = sol.objective;
    }
    return sol;
}

}  // namespace repower
