#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "repower/lp.hpp"

namespace repower {
namespace detail {

/// Conservative presolve: empty rows, fixed variables, singleton rows
/// turned into bounds. Every reduction is invertible for both primal and
/// dual values.
class Presolve {
public:
    bool infeasible = false;
    std::string reason;
    LPProblem reduced;

    explicit Presolve(const LPProblem& orig) : orig_(&orig) {
        int m = orig.num_rows();
        int n = orig.num_vars;
        lower_ = orig.lower;
        upper_ = orig.upper;
        row_alive_.assign(m, true);
        var_alive_.assign(n, true);
        rhs_ = orig.rhs;

        // row entry counts ignoring removed variables
        row_count_.assign(m, 0);
        for (int i = 0; i < m; ++i) row_count_[i] = static_cast<int>(orig.row_start[i + 1] - orig.row_start[i]);

        bool changed = true;
        int passes = 0;
        while (changed && ++passes <= 5 && !infeasible) {
            changed = false;
            for (int i = 0; i < m && !infeasible; ++i) {
                if (!row_alive_[i]) continue;
                int cnt = 0, last_j = -1;
                double last_a = 0, act_fixed = 0;
                for (std::int64_t k = orig.row_start[i]; k < orig.row_start[i + 1]; ++k) {
                    int j = orig.col_index[k];
                    if (!var_alive_[j]) {
                        act_fixed += orig.value[k] * lower_[j];
                        continue;
                    }
                    if (orig.value[k] == 0.0) continue;
                    ++cnt;
                    last_j = j;
                    last_a = orig.value[k];
                }
                double b = rhs_[i] - act_fixed;
                if (cnt == 0) {
                    bool ok = true;
                    switch (orig.sense[i]) {
                        case RowSense::Le: ok = b >= -kFeasTol; break;
                        case RowSense::Ge: ok = b <= kFeasTol; break;
                        case RowSense::Eq: ok = std::abs(b) <= kFeasTol; break;
                    }
                    if (!ok) {
                        infeasible = true;
                        reason = "empty row " + std::to_string(i) + " is inconsistent";
                        break;
                    }
                    row_alive_[i] = false;
                    empty_rows_.push_back(i);
                    changed = true;
                } else if (cnt == 1) {
                    // a * x {<=,=,>=} b  ->  bound on x
                    double v = b / last_a;
                    RowSense s = orig.sense[i];
                    bool implies_upper = (s == RowSense::Le && last_a > 0) || (s == RowSense::Ge && last_a < 0);
                    bool implies_lower = (s == RowSense::Ge && last_a > 0) || (s == RowSense::Le && last_a < 0);
                    if (s == RowSense::Eq) implies_upper = implies_lower = true;
                    SingletonRow rec{i, last_j, last_a, s, implies_upper, implies_lower, false, false};
                    if (implies_upper && v < upper_[last_j]) {
                        upper_[last_j] = v;
                        rec.tightened_upper = true;
                    }
                    if (implies_lower && v > lower_[last_j]) {
                        lower_[last_j] = v;
                        rec.tightened_lower = true;
                    }
                    if (lower_[last_j] > upper_[last_j] + kFeasTol) {
                        infeasible = true;
                        reason = "singleton row " + std::to_string(i) + " crosses bounds of variable " +
                                 std::to_string(last_j);
                        break;
                    }
                    row_alive_[i] = false;
                    singleton_rows_.push_back(rec);
                    changed = true;
                }
            }
            if (infeasible) break;
            for (int j = 0; j < n; ++j) {
                if (!var_alive_[j]) continue;
                if (std::isfinite(lower_[j]) && std::isfinite(upper_[j]) && upper_[j] - lower_[j] <= kFixTol) {
                    // pin to the midpoint and substitute into every live row
                    lower_[j] = upper_[j] = 0.5 * (lower_[j] + upper_[j]);
                    var_alive_[j] = false;
                    fixed_vars_.push_back(j);
                    changed = true;
                }
            }
        }
        if (infeasible) return;
        build_reduced();
    }

    /// Maps a solution of the reduced problem back to the original space.
    void postsolve(const std::vector<double>& xr, const std::vector<double>& yr, std::vector<double>& x,
                   std::vector<double>& y) const {
        const LPProblem& p = *orig_;
        x.assign(p.num_vars, 0.0);
        for (int j = 0; j < p.num_vars; ++j) {
            if (var_alive_[j])
                x[j] = xr[var_map_[j]];
            else
                x[j] = lower_[j];  // fixed value
        }
        y.assign(p.num_rows(), 0.0);
        for (int i = 0; i < p.num_rows(); ++i)
            if (row_alive_[i]) y[i] = yr[row_map_[i]];

        // reduced costs against the duals assigned so far
        std::vector<double> z(p.objective.begin(), p.objective.end());
        for (int i = 0; i < p.num_rows(); ++i) {
            if (y[i] == 0.0) continue;
            for (std::int64_t k = p.row_start[i]; k < p.row_start[i + 1]; ++k) z[p.col_index[k]] -= y[i] * p.value[k];
        }
        // dropped singleton rows absorb the reduced cost of a variable that
        // ended on the bound the row implied; latest drops resolve first
        for (auto it = singleton_rows_.rbegin(); it != singleton_rows_.rend(); ++it) {
            int j = it->var;
            double zj = z[j];
            if (std::abs(zj) < 1e-12) continue;
            double bound_val = rhs_at(*it);
            if (std::abs(x[j] - bound_val) > 1e-7 * (1.0 + std::abs(bound_val))) continue;
            bool supports_upper = zj < 0 && it->tightened_upper;
            bool supports_lower = zj > 0 && it->tightened_lower;
            if (!supports_upper && !supports_lower && it->sense != RowSense::Eq) continue;
            y[it->row] = zj / it->coef;
            for (std::int64_t k = p.row_start[it->row]; k < p.row_start[it->row + 1]; ++k)
                z[p.col_index[k]] -= y[it->row] * p.value[k];
        }
    }

    int reduced_var(int j) const { return var_map_[j]; }

private:
    struct SingletonRow {
        int row;
        int var;
        double coef;
        RowSense sense;
        bool implies_upper;
        bool implies_lower;
        bool tightened_upper;
        bool tightened_lower;
    };

    static constexpr double kFeasTol = 1e-9;
    static constexpr double kFixTol = 1e-11;

    double rhs_at(const SingletonRow& r) const {
        const LPProblem& p = *orig_;
        double act_fixed = 0;
        for (std::int64_t k = p.row_start[r.row]; k < p.row_start[r.row + 1]; ++k) {
            int j = p.col_index[k];
            if (!var_alive_[j] && j != r.var) act_fixed += p.value[k] * lower_[j];
        }
        return (p.rhs[r.row] - act_fixed) / r.coef;
    }

    void build_reduced() {
        const LPProblem& p = *orig_;
        var_map_.assign(p.num_vars, -1);
        row_map_.assign(p.num_rows(), -1);
        for (int j = 0; j < p.num_vars; ++j)
            if (var_alive_[j]) var_map_[j] = reduced.add_var(lower_[j], upper_[j], p.objective[j]);
        std::vector<std::pair<int, double>> entries;
        for (int i = 0; i < p.num_rows(); ++i) {
            if (!row_alive_[i]) continue;
            entries.clear();
            double b = p.rhs[i];
            for (std::int64_t k = p.row_start[i]; k < p.row_start[i + 1]; ++k) {
                int j = p.col_index[k];
                if (var_alive_[j])
                    entries.emplace_back(var_map_[j], p.value[k]);
                else
                    b -= p.value[k] * lower_[j];
            }
            row_map_[i] = reduced.num_rows();
            reduced.add_row(std::span<const std::pair<int, double>>(entries), p.sense[i], b);
        }
        for (int j : p.integer_vars)
            if (var_alive_[j]) reduced.integer_vars.push_back(var_map_[j]);
    }

    const LPProblem* orig_;
    std::vector<double> lower_, upper_, rhs_;
    std::vector<bool> row_alive_, var_alive_;
    std::vector<int> row_count_;
    std::vector<int> var_map_, row_map_;
    std::vector<int> empty_rows_;
    std::vector<int> fixed_vars_;
    std::vector<SingletonRow> singleton_rows_;
};

}  // namespace detail
}  // namespace repower
