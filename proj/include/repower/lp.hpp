#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "repower/common.hpp"

namespace repower {

enum class RowSense : char { Le = 'L', Eq = 'E', Ge = 'G' };

/// Sparse linear program in computational standard form:
///   min c'x  s.t.  row_lhs {<=,=,>=} rhs,  lower <= x <= upper,
/// with an optional set of integer-constrained variables.
/// Rows are stored CSR.
struct LPProblem {
    int num_vars = 0;
    std::vector<double> objective;  // dense, length num_vars

    std::vector<std::int64_t> row_start{0};
    std::vector<int> col_index;
    std::vector<double> value;
    std::vector<RowSense> sense;
    std::vector<double> rhs;

    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<int> integer_vars;  // sorted

    int num_rows() const { return static_cast<int>(rhs.size()); }
    std::int64_t num_nonzeros() const { return static_cast<std::int64_t>(value.size()); }

    int add_var(double lb, double ub, double obj) {
        lower.push_back(lb);
        upper.push_back(ub);
        objective.push_back(obj);
        return num_vars++;
    }

    void add_row(std::span<const std::pair<int, double>> entries, RowSense s, double b) {
        for (auto& [j, v] : entries) {
            col_index.push_back(j);
            value.push_back(v);
        }
        row_start.push_back(static_cast<std::int64_t>(value.size()));
        sense.push_back(s);
        rhs.push_back(b);
    }

    void add_row(std::initializer_list<std::pair<int, double>> entries, RowSense s, double b) {
        add_row(std::span<const std::pair<int, double>>(entries.begin(), entries.size()), s, b);
    }

    double row_activity(int i, std::span<const double> x) const {
        double a = 0;
        for (std::int64_t k = row_start[i]; k < row_start[i + 1]; ++k) a += value[k] * x[col_index[k]];
        return a;
    }
};

inline void check_problem(const LPProblem& p) {
    if (p.num_vars != static_cast<int>(p.objective.size()) || p.num_vars != static_cast<int>(p.lower.size()) ||
        p.num_vars != static_cast<int>(p.upper.size()))
        throw Error("lp: inconsistent variable arrays");
    if (p.row_start.size() != p.rhs.size() + 1 || p.sense.size() != p.rhs.size() ||
        p.col_index.size() != p.value.size() ||
        p.row_start.back() != static_cast<std::int64_t>(p.value.size()))
        throw Error("lp: inconsistent row arrays");
    for (double v : p.value)
        if (!std::isfinite(v)) throw Error("lp: non-finite matrix coefficient");
    for (double v : p.objective)
        if (!std::isfinite(v)) throw Error("lp: non-finite objective coefficient");
    for (double v : p.rhs)
        if (!std::isfinite(v)) throw Error("lp: non-finite right-hand side");
    for (int j = 0; j < p.num_vars; ++j)
        if (!(p.lower[j] <= p.upper[j])) throw Error("lp: crossed bounds on variable " + std::to_string(j));
    for (int k : p.col_index)
        if (k < 0 || k >= p.num_vars) throw Error("lp: column index out of range");
    for (int j : p.integer_vars)
        if (j < 0 || j >= p.num_vars) throw Error("lp: integer index out of range");
}

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        default: return "iteration-limit";
    }
}

/// Scaled KKT residuals of a (primal, dual) pair, plus a Farkas certificate
/// when the problem was declared infeasible.
struct ResidualReport {
    double primal = 0;
    double dual = 0;
    double complementarity = 0;
    double duality_gap = 0;
    std::vector<std::string> flags;
    std::vector<double> farkas;

    bool certified(double tol = 1e-7) const { return primal <= tol && dual <= tol && complementarity <= tol; }
};

enum class VarStatus : signed char { AtLower = 0, AtUpper = 1, Basic = 2, FreeAtZero = 3 };

struct LPSolution {
    SolveStatus status = SolveStatus::IterationLimit;
    std::vector<double> x;  // primal values, length num_vars
    std::vector<double> y;  // row duals, length num_rows
    double objective = 0;
    double best_bound = -kInfinity;  // lower bound (minimization); used by MILP
    std::int64_t iterations = 0;
    ResidualReport residuals;

    // basis snapshot (structural then logical), reusable as a warm start
    std::vector<VarStatus> basis;
};

/// Recomputes scaled primal/dual/complementarity residuals of a solution
/// against the problem data. Independent of any solver internals.
/// Convention: minimize c'x with Lagrangian c'x - y'(Ax - b); at optimality
/// z = c - A'y, y >= 0 on >= rows, y <= 0 on <= rows, z >= 0 at lower
/// bounds, z <= 0 at upper bounds.
inline ResidualReport check_kkt(const LPProblem& p, const LPSolution& s, double tol = 1e-7) {
    ResidualReport r;
    if (s.x.size() != static_cast<std::size_t>(p.num_vars) || s.y.size() != static_cast<std::size_t>(p.num_rows()))
        throw Error("check_kkt: solution dimensions do not match problem");

    std::vector<double> z(p.objective.begin(), p.objective.end());
    for (int i = 0; i < p.num_rows(); ++i)
        for (std::int64_t k = p.row_start[i]; k < p.row_start[i + 1]; ++k)
            z[p.col_index[k]] -= s.y[i] * p.value[k];

    double primal_obj = 0;
    for (int j = 0; j < p.num_vars; ++j) primal_obj += p.objective[j] * s.x[j];

    for (int i = 0; i < p.num_rows(); ++i) {
        double act = p.row_activity(i, s.x);
        double scale = 1.0 + std::abs(p.rhs[i]);
        double viol = 0;
        switch (p.sense[i]) {
            case RowSense::Le: viol = std::max(0.0, act - p.rhs[i]); break;
            case RowSense::Ge: viol = std::max(0.0, p.rhs[i] - act); break;
            case RowSense::Eq: viol = std::abs(act - p.rhs[i]); break;
        }
        r.primal = std::max(r.primal, viol / scale);
        if (viol / scale > tol) r.flags.push_back("primal row " + std::to_string(i));

        double dual_viol = 0;
        if (p.sense[i] == RowSense::Ge) dual_viol = std::max(0.0, -s.y[i]);
        if (p.sense[i] == RowSense::Le) dual_viol = std::max(0.0, s.y[i]);
        r.dual = std::max(r.dual, dual_viol / (1.0 + std::abs(s.y[i])));
        if (dual_viol / (1.0 + std::abs(s.y[i])) > tol) r.flags.push_back("dual sign row " + std::to_string(i));

        double slack = act - p.rhs[i];
        double comp = std::abs(s.y[i] * slack) / (1.0 + std::abs(primal_obj));
        if (p.sense[i] != RowSense::Eq) {
            r.complementarity = std::max(r.complementarity, comp);
            if (comp > tol) r.flags.push_back("complementarity row " + std::to_string(i));
        }
    }

    for (int j = 0; j < p.num_vars; ++j) {
        double scale = 1.0 + std::abs(s.x[j]);
        double bviol = std::max(std::max(0.0, p.lower[j] - s.x[j]), std::max(0.0, s.x[j] - p.upper[j]));
        r.primal = std::max(r.primal, bviol / scale);
        if (bviol / scale > tol) r.flags.push_back("bound var " + std::to_string(j));

        double zscale = 1.0 + std::abs(p.objective[j]);
        double dist_l = s.x[j] - p.lower[j];
        double dist_u = p.upper[j] - s.x[j];
        double dual_viol = 0;
        if (z[j] > 0) {
            // positive reduced cost supports only a variable at its lower bound
            dual_viol = std::isfinite(p.lower[j]) ? 0.0 : z[j];
            double comp = std::abs(z[j]) * std::min(std::abs(dist_l), 1.0 + std::abs(s.x[j])) / (1.0 + std::abs(primal_obj));
            if (std::isfinite(p.lower[j])) {
                r.complementarity = std::max(r.complementarity, comp);
                if (comp > tol) r.flags.push_back("complementarity var " + std::to_string(j));
            }
        } else if (z[j] < 0) {
            dual_viol = std::isfinite(p.upper[j]) ? 0.0 : -z[j];
            double comp = std::abs(z[j]) * std::min(std::abs(dist_u), 1.0 + std::abs(s.x[j])) / (1.0 + std::abs(primal_obj));
            if (std::isfinite(p.upper[j])) {
                r.complementarity = std::max(r.complementarity, comp);
                if (comp > tol) r.flags.push_back("complementarity var " + std::to_string(j));
            }
        }
        r.dual = std::max(r.dual, dual_viol / zscale);
        if (dual_viol / zscale > tol) r.flags.push_back("dual var " + std::to_string(j));
    }

    // strong duality: y'b plus the bound terms of the active reduced costs
    double dual_obj = 0;
    for (int i = 0; i < p.num_rows(); ++i) dual_obj += s.y[i] * p.rhs[i];
    for (int j = 0; j < p.num_vars; ++j) {
        if (z[j] > 0 && std::isfinite(p.lower[j])) dual_obj += z[j] * p.lower[j];
        if (z[j] < 0 && std::isfinite(p.upper[j])) dual_obj += z[j] * p.upper[j];
    }
    r.duality_gap = std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj));
    return r;
}

/// Verifies a Farkas certificate y for an infeasible problem: even with
/// every variable at its most favorable bound, y'(Ax) cannot reach y'b.
inline bool verify_farkas(const LPProblem& p, std::span<const double> y, double tol = 1e-7) {
    if (y.size() != static_cast<std::size_t>(p.num_rows())) return false;
    for (int i = 0; i < p.num_rows(); ++i) {
        if (p.sense[i] == RowSense::Le && y[i] > tol) return false;   // <= rows need y <= 0
        if (p.sense[i] == RowSense::Ge && y[i] < -tol) return false;  // >= rows need y >= 0
    }
    std::vector<double> z(p.num_vars, 0.0);
    for (int i = 0; i < p.num_rows(); ++i)
        for (std::int64_t k = p.row_start[i]; k < p.row_start[i + 1]; ++k)
            z[p.col_index[k]] += y[i] * p.value[k];
    double best = 0;
    double ynorm = 0;
    for (int i = 0; i < p.num_rows(); ++i) {
        best -= y[i] * p.rhs[i];
        ynorm = std::max(ynorm, std::abs(y[i]));
    }
    for (int j = 0; j < p.num_vars; ++j) {
        if (z[j] > tol * ynorm) {
            if (!std::isfinite(p.upper[j])) return false;
            best += z[j] * p.upper[j];
        } else if (z[j] < -tol * ynorm) {
            if (!std::isfinite(p.lower[j])) return false;
            best += z[j] * p.lower[j];
        }
    }
    return best < -tol * (1.0 + ynorm);
}

// ---------------------------------------------------------------------------
// Plain-text interchange format, one record per line:
//   REPOWERLP 1
//   SIZE <rows> <cols>
//   C    <j> <coef>          only nonzero objective entries
//   B    <j> <lower> <upper> only bounds differing from [0, +inf)
//   R    <i> <L|E|G> <rhs>
//   A    <i> <j> <value>
//   I    <j>                 integer-constrained variable
//   END
// Infinities are written as `inf`/`-inf`; all numbers round-trip exactly.
// ---------------------------------------------------------------------------

inline std::string format_bound(double v) {
    if (v == kInfinity) return "inf";
    if (v == -kInfinity) return "-inf";
    return format_double(v);
}

inline double parse_bound(const std::string& s) {
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    return parse_double(s);
}

inline void dump_lp(const LPProblem& p, std::ostream& out) {
    out << "REPOWERLP 1\n";
    out << "SIZE " << p.num_rows() << ' ' << p.num_vars << '\n';
    for (int j = 0; j < p.num_vars; ++j)
        if (p.objective[j] != 0.0) out << "C " << j << ' ' << format_double(p.objective[j]) << '\n';
    for (int j = 0; j < p.num_vars; ++j)
        if (p.lower[j] != 0.0 || p.upper[j] != kInfinity)
            out << "B " << j << ' ' << format_bound(p.lower[j]) << ' ' << format_bound(p.upper[j]) << '\n';
    for (int i = 0; i < p.num_rows(); ++i)
        out << "R " << i << ' ' << static_cast<char>(p.sense[i]) << ' ' << format_double(p.rhs[i]) << '\n';
    for (int i = 0; i < p.num_rows(); ++i)
        for (std::int64_t k = p.row_start[i]; k < p.row_start[i + 1]; ++k)
            out << "A " << i << ' ' << p.col_index[k] << ' ' << format_double(p.value[k]) << '\n';
    for (int j : p.integer_vars) out << "I " << j << '\n';
    out << "END\n";
}

inline LPProblem load_lp(std::istream& in) {
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "REPOWERLP" || version != 1) throw Error("load_lp: bad header");
    int rows = 0, cols = 0;
    if (!(in >> tag >> rows >> cols) || tag != "SIZE") throw Error("load_lp: missing SIZE record");
    LPProblem p;
    for (int j = 0; j < cols; ++j) p.add_var(0.0, kInfinity, 0.0);
    p.sense.assign(rows, RowSense::Eq);
    p.rhs.assign(rows, 0.0);
    std::vector<std::vector<std::pair<int, double>>> entries(rows);
    while (in >> tag) {
        if (tag == "END") break;
        if (tag == "C") {
            int j;
            std::string v;
            in >> j >> v;
            p.objective.at(j) = parse_double(v);
        } else if (tag == "B") {
            int j;
            std::string lo, hi;
            in >> j >> lo >> hi;
            p.lower.at(j) = parse_bound(lo);
            p.upper.at(j) = parse_bound(hi);
        } else if (tag == "R") {
            int i;
            char s;
            std::string v;
            in >> i >> s >> v;
            if (s != 'L' && s != 'E' && s != 'G') throw Error("load_lp: bad sense");
            p.sense.at(i) = static_cast<RowSense>(s);
            p.rhs.at(i) = parse_double(v);
        } else if (tag == "A") {
            int i, j;
            std::string v;
            in >> i >> j >> v;
            entries.at(i).emplace_back(j, parse_double(v));
        } else if (tag == "I") {
            int j;
            in >> j;
            p.integer_vars.push_back(j);
        } else {
            throw Error("load_lp: unknown record '" + tag + "'");
        }
    }
    if (tag != "END") throw Error("load_lp: missing END record");
    p.row_start.assign(1, 0);
    p.col_index.clear();
    p.value.clear();
    p.sense.resize(rows);
    p.rhs.resize(rows);
    std::vector<RowSense> senses = p.sense;
    std::vector<double> rhs = p.rhs;
    p.sense.clear();
    p.rhs.clear();
    for (int i = 0; i < rows; ++i)
        p.add_row(std::span<const std::pair<int, double>>(entries[i]), senses[i], rhs[i]);
    std::sort(p.integer_vars.begin(), p.integer_vars.end());
    check_problem(p);
    return p;
}

}  // namespace repower
