#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "repower/lp.hpp"

namespace repower {

struct SolveOptions {
    std::int64_t iteration_limit = -1;  // -1: generous automatic limit
    double time_limit_seconds = 0;      // 0: none
    bool presolve = true;
    bool scaling = true;
    double feasibility_tol = 1e-9;  // applied in the scaled space
    double optimality_tol = 1e-9;
    std::int64_t refactor_interval = 100;
    std::int64_t bland_threshold = 1000;  // degenerate pivots before Bland's rule
    const std::vector<VarStatus>* warm_start = nullptr;  // structural then logical
};

namespace detail {

/// Sparse LU of a basis matrix, left-looking with partial pivoting.
/// Columns are processed sparsest-first; pivots are chosen by maximum
/// magnitude with lowest-row tie-breaking, so refactorization is
/// deterministic.
class BasisLU {
public:
    bool factorize(int m, const std::vector<std::vector<std::pair<int, double>>>& cols) {
        m_ = m;
        lcol_.assign(m, {});
        ucol_.assign(m, {});
        udiag_.assign(m, 0.0);
        pivot_row_.assign(m, -1);
        row_pivot_.assign(m, -1);
        slot_of_step_.assign(m, -1);

        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return cols[a].size() < cols[b].size(); });

        std::vector<double> work(m, 0.0);
        std::vector<int> touched;
        touched.reserve(256);

        for (int step = 0; step < m_; ++step) {
            int slot = order[step];
            touched.clear();
            for (auto& [r, v] : cols[slot]) {
                work[r] = v;
                touched.push_back(r);
            }
            for (int k = 0; k < step; ++k) {
                double t = work[pivot_row_[k]];
                if (t == 0.0) continue;
                for (auto& [r, mult] : lcol_[k]) {
                    if (work[r] == 0.0) touched.push_back(r);
                    work[r] -= mult * t;
                }
            }
            int prow = -1;
            double pmax = 0.0;
            for (int r : touched) {
                if (row_pivot_[r] >= 0) continue;
                double a = std::abs(work[r]);
                if (a > pmax || (a == pmax && prow >= 0 && r < prow)) {
                    pmax = a;
                    prow = r;
                }
            }
            if (prow < 0 || pmax < 1e-12) {
                for (int r : touched) work[r] = 0.0;
                return false;  // numerically singular basis
            }
            double diag = work[prow];
            for (int r : touched) {
                double v = work[r];
                work[r] = 0.0;
                if (v == 0.0 || r == prow) continue;
                if (row_pivot_[r] >= 0)
                    ucol_[step].emplace_back(row_pivot_[r], v);
                else
                    lcol_[step].emplace_back(r, v / diag);
            }
            udiag_[step] = diag;
            pivot_row_[step] = prow;
            row_pivot_[prow] = step;
            slot_of_step_[step] = slot;
        }
        return true;
    }

    /// Solves B x = v. v is indexed by row and is zeroed on return;
    /// the solution lands in slot_out indexed by basis slot.
    void solve(std::vector<double>& v, std::vector<double>& slot_out) const {
        for (int k = 0; k < m_; ++k) {
            double t = v[pivot_row_[k]];
            if (t == 0.0) continue;
            for (auto& [r, mult] : lcol_[k]) v[r] -= mult * t;
        }
        for (int k = m_ - 1; k >= 0; --k) {
            double t = v[pivot_row_[k]] / udiag_[k];
            v[pivot_row_[k]] = 0.0;
            slot_out[slot_of_step_[k]] = t;
            if (t == 0.0) continue;
            for (auto& [j, u] : ucol_[k]) v[pivot_row_[j]] -= u * t;
        }
    }

    /// Solves B^T y = c. c is indexed by basis slot, y by row.
    void solve_transposed(const std::vector<double>& slot_in, std::vector<double>& y) const {
        tmp_.assign(m_, 0.0);
        for (int k = 0; k < m_; ++k) {
            double t = slot_in[slot_of_step_[k]];
            for (auto& [j, u] : ucol_[k]) t -= u * tmp_[j];
            tmp_[k] = t / udiag_[k];
        }
        for (int k = 0; k < m_; ++k) y[pivot_row_[k]] = tmp_[k];
        for (int k = m_ - 1; k >= 0; --k) {
            double acc = y[pivot_row_[k]];
            for (auto& [r, mult] : lcol_[k]) acc -= mult * y[r];
            y[pivot_row_[k]] = acc;
        }
    }

private:
    int m_ = 0;
    std::vector<std::vector<std::pair<int, double>>> lcol_;
    std::vector<std::vector<std::pair<int, double>>> ucol_;
    std::vector<double> udiag_;
    std::vector<int> pivot_row_;
    std::vector<int> row_pivot_;
    std::vector<int> slot_of_step_;
    mutable std::vector<double> tmp_;
};

struct Scaling {
    std::vector<double> row;
    std::vector<double> col;
};

/// Geometric-mean row/column equilibration, two passes, in place.
inline Scaling equilibrate(LPProblem& p) {
    int m = p.num_rows();
    Scaling s;
    s.row.assign(m, 1.0);
    s.col.assign(p.num_vars, 1.0);
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < m; ++i) {
            double lo = kInfinity, hi = 0.0;
            for (std::int64_t k = p.row_start[i]; k < p.row_start[i + 1]; ++k) {
                double a = std::abs(p.value[k]);
                if (a == 0.0) continue;
                lo = std::min(lo, a);
                hi = std::max(hi, a);
            }
            if (hi == 0.0) continue;
            double f = 1.0 / std::sqrt(lo * hi);
            if (f != 1.0) {
                for (std::int64_t k = p.row_start[i]; k < p.row_start[i + 1]; ++k) p.value[k] *= f;
                p.rhs[i] *= f;
                s.row[i] *= f;
            }
        }
        std::vector<double> clo(p.num_vars, kInfinity), chi(p.num_vars, 0.0);
        for (std::size_t k = 0; k < p.value.size(); ++k) {
            double a = std::abs(p.value[k]);
            if (a == 0.0) continue;
            int j = p.col_index[k];
            clo[j] = std::min(clo[j], a);
            chi[j] = std::max(chi[j], a);
        }
        std::vector<double> f(p.num_vars, 1.0);
        for (int j = 0; j < p.num_vars; ++j)
            if (chi[j] > 0.0) f[j] = 1.0 / std::sqrt(clo[j] * chi[j]);
        bool any = false;
        for (int j = 0; j < p.num_vars; ++j) any = any || f[j] != 1.0;
        if (!any) continue;
        for (std::size_t k = 0; k < p.value.size(); ++k) p.value[k] *= f[p.col_index[k]];
        for (int j = 0; j < p.num_vars; ++j) {
            if (f[j] == 1.0) continue;
            s.col[j] *= f[j];
            p.objective[j] *= f[j];
            if (std::isfinite(p.lower[j])) p.lower[j] /= f[j];
            if (std::isfinite(p.upper[j])) p.upper[j] /= f[j];
        }
    }
    return s;
}

/// Bounded-variable two-phase revised simplex over rows converted to
/// equalities with one logical column per row. Deterministic: fixed
/// tie-breaking everywhere, no concurrency inside a solve.
class Simplex {
public:
    Simplex(const LPProblem& p, const SolveOptions& opt) : opt_(opt) {
        m_ = p.num_rows();
        n_ = p.num_vars;
        total_ = n_ + m_;
        b_ = p.rhs;
        cost_.assign(total_, 0.0);
        lb_.assign(total_, 0.0);
        ub_.assign(total_, 0.0);
        for (int j = 0; j < n_; ++j) {
            cost_[j] = p.objective[j];
            lb_[j] = p.lower[j];
            ub_[j] = p.upper[j];
        }
        for (int i = 0; i < m_; ++i) {
            int j = n_ + i;
            switch (p.sense[i]) {
                case RowSense::Le: lb_[j] = 0.0; ub_[j] = kInfinity; break;
                case RowSense::Eq: lb_[j] = 0.0; ub_[j] = 0.0; break;
                case RowSense::Ge: lb_[j] = -kInfinity; ub_[j] = 0.0; break;
            }
        }
        cstart_.assign(n_ + 1, 0);
        for (std::size_t k = 0; k < p.value.size(); ++k) ++cstart_[p.col_index[k] + 1];
        for (int j = 0; j < n_; ++j) cstart_[j + 1] += cstart_[j];
        crow_.resize(p.value.size());
        cval_.resize(p.value.size());
        std::vector<std::int64_t> fill(cstart_.begin(), cstart_.end() - 1);
        for (int i = 0; i < m_; ++i)
            for (std::int64_t k = p.row_start[i]; k < p.row_start[i + 1]; ++k) {
                std::int64_t pos = fill[p.col_index[k]]++;
                crow_[pos] = i;
                cval_[pos] = p.value[k];
            }
        bnorm_ = 0;
        for (double v : b_) bnorm_ = std::max(bnorm_, std::abs(v));
    }

    LPSolution run() {
        LPSolution out;
        start_ = std::chrono::steady_clock::now();
        iter_limit_ = opt_.iteration_limit >= 0 ? opt_.iteration_limit
                                                : 2000 + 40 * static_cast<std::int64_t>(m_ + n_);
        init_basis();
        if (!refactorize()) {
            reset_to_slack_basis();
            if (!refactorize()) throw Error("simplex: slack basis is singular");
        }

        bool feasible = run_phase(true);
        if (stop_ == Stop::IterLimit || stop_ == Stop::TimeLimit) {
            out.status = SolveStatus::IterationLimit;
            fill_solution(out);
            return out;
        }
        if (!feasible) {
            out.status = SolveStatus::Infeasible;
            std::vector<double> g(m_);
            phase1_gradient(g);
            out.y.assign(m_, 0.0);
            btran_cost(g, out.y);
            out.residuals.farkas = out.y;
            fill_primal(out);
            out.iterations = iterations_;
            return out;
        }
        run_phase(false);
        if (stop_ == Stop::Unbounded) {
            out.status = SolveStatus::Unbounded;
            fill_primal(out);
            out.y.assign(m_, 0.0);
            out.iterations = iterations_;
            return out;
        }
        out.status = (stop_ == Stop::None) ? SolveStatus::Optimal : SolveStatus::IterationLimit;
        fill_solution(out);
        return out;
    }

private:
    enum class Stop { None, IterLimit, TimeLimit, Unbounded };

    struct Eta {
        int slot;
        double pivot;
        std::vector<std::pair<int, double>> entries;  // excludes the pivot slot
    };

    void init_basis() {
        if (opt_.warm_start && opt_.warm_start->size() == static_cast<std::size_t>(total_)) {
            int count = 0;
            for (auto s : *opt_.warm_start)
                if (s == VarStatus::Basic) ++count;
            if (count == m_) {
                vstat_ = *opt_.warm_start;
                basic_.clear();
                for (int j = 0; j < total_; ++j) {
                    if (vstat_[j] == VarStatus::Basic) {
                        basic_.push_back(j);
                        continue;
                    }
                    // coerce a status pointing at an infinite bound
                    if (vstat_[j] == VarStatus::AtLower && !std::isfinite(lb_[j]))
                        vstat_[j] = std::isfinite(ub_[j]) ? VarStatus::AtUpper : VarStatus::FreeAtZero;
                    else if (vstat_[j] == VarStatus::AtUpper && !std::isfinite(ub_[j]))
                        vstat_[j] = std::isfinite(lb_[j]) ? VarStatus::AtLower : VarStatus::FreeAtZero;
                }
                xval_.assign(total_, 0.0);
                for (int j = 0; j < total_; ++j) set_nonbasic_value(j);
                return;
            }
        }
        reset_to_slack_basis();
    }

    void reset_to_slack_basis() {
        vstat_.assign(total_, VarStatus::AtLower);
        xval_.assign(total_, 0.0);
        basic_.assign(static_cast<std::size_t>(m_), 0);
        for (int i = 0; i < m_; ++i) {
            basic_[i] = n_ + i;
            vstat_[n_ + i] = VarStatus::Basic;
        }
        for (int j = 0; j < n_; ++j) {
            if (std::isfinite(lb_[j]))
                vstat_[j] = VarStatus::AtLower;
            else if (std::isfinite(ub_[j]))
                vstat_[j] = VarStatus::AtUpper;
            else
                vstat_[j] = VarStatus::FreeAtZero;
            set_nonbasic_value(j);
        }
    }

    void set_nonbasic_value(int j) {
        switch (vstat_[j]) {
            case VarStatus::AtLower: xval_[j] = std::isfinite(lb_[j]) ? lb_[j] : 0.0; break;
            case VarStatus::AtUpper: xval_[j] = std::isfinite(ub_[j]) ? ub_[j] : 0.0; break;
            case VarStatus::FreeAtZero: xval_[j] = 0.0; break;
            case VarStatus::Basic: break;
        }
    }

    void column_entries(int j, std::vector<std::pair<int, double>>& out) const {
        out.clear();
        if (j >= n_) {
            out.emplace_back(j - n_, 1.0);
            return;
        }
        for (std::int64_t k = cstart_[j]; k < cstart_[j + 1]; ++k) out.emplace_back(crow_[k], cval_[k]);
    }

    bool refactorize() {
        std::vector<std::vector<std::pair<int, double>>> cols(m_);
        for (int k = 0; k < m_; ++k) column_entries(basic_[k], cols[k]);
        if (!lu_.factorize(m_, cols)) return false;
        etas_.clear();
        pivots_since_refactor_ = 0;
        compute_basic_values();
        return true;
    }

    void compute_basic_values() {
        std::vector<double> r = b_;
        for (int j = 0; j < total_; ++j) {
            if (vstat_[j] == VarStatus::Basic || xval_[j] == 0.0) continue;
            if (j >= n_) {
                r[j - n_] -= xval_[j];
            } else {
                for (std::int64_t k = cstart_[j]; k < cstart_[j + 1]; ++k) r[crow_[k]] -= cval_[k] * xval_[j];
            }
        }
        std::vector<double> xb(m_, 0.0);
        ftran(r, xb);
        for (int k = 0; k < m_; ++k) xval_[basic_[k]] = xb[k];
    }

    void ftran(std::vector<double>& v, std::vector<double>& slot_out) {
        lu_.solve(v, slot_out);
        for (const Eta& e : etas_) {
            double t = slot_out[e.slot];
            if (t == 0.0) continue;
            double piv = t / e.pivot;
            for (auto& [k, w] : e.entries) slot_out[k] -= w * piv;
            slot_out[e.slot] = piv;
        }
    }

    void btran_cost(const std::vector<double>& cb_slots, std::vector<double>& y) {
        btmp_ = cb_slots;
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double dot = 0.0;
            for (auto& [k, w] : it->entries) dot += btmp_[k] * w;
            btmp_[it->slot] = (btmp_[it->slot] - dot) / it->pivot;
        }
        lu_.solve_transposed(btmp_, y);
    }

    void phase1_gradient(std::vector<double>& g) const {
        for (int k = 0; k < m_; ++k) {
            int j = basic_[k];
            double v = xval_[j];
            if (v < lb_[j] - opt_.feasibility_tol)
                g[k] = -1.0;
            else if (v > ub_[j] + opt_.feasibility_tol)
                g[k] = 1.0;
            else
                g[k] = 0.0;
        }
    }

    double total_infeasibility() const {
        double s = 0;
        for (int k = 0; k < m_; ++k) {
            int j = basic_[k];
            if (xval_[j] < lb_[j]) s += lb_[j] - xval_[j];
            if (xval_[j] > ub_[j]) s += xval_[j] - ub_[j];
        }
        return s;
    }

    double reduced_cost(int j, const std::vector<double>& y, double cj) const {
        double d = cj;
        if (j >= n_) return d - y[j - n_];
        for (std::int64_t k = cstart_[j]; k < cstart_[j + 1]; ++k) d -= y[crow_[k]] * cval_[k];
        return d;
    }

    struct Candidate {
        int var = -1;
        double score = 0;
        int direction = 0;  // +1 increase, -1 decrease
    };

    Candidate price(const std::vector<double>& y, bool phase1, bool bland) {
        Candidate best;
        const double tol = opt_.optimality_tol;
        auto consider = [&](int j) -> bool {
            if (vstat_[j] == VarStatus::Basic) return false;
            if (ub_[j] - lb_[j] <= 0.0) return false;  // fixed
            double d = reduced_cost(j, y, phase1 ? 0.0 : cost_[j]);
            int dir = 0;
            double score = 0;
            switch (vstat_[j]) {
                case VarStatus::AtLower:
                    if (d < -tol) { dir = 1; score = -d; }
                    break;
                case VarStatus::AtUpper:
                    if (d > tol) { dir = -1; score = d; }
                    break;
                case VarStatus::FreeAtZero:
                    if (d < -tol) { dir = 1; score = -d; }
                    else if (d > tol) { dir = -1; score = d; }
                    break;
                case VarStatus::Basic: break;
            }
            if (dir == 0) return false;
            if (score > best.score) best = Candidate{j, score, dir};
            return true;
        };

        if (bland) {
            for (int j = 0; j < total_; ++j)
                if (consider(j)) return best;  // first improving index
            best = Candidate{};
            return best;
        }

        const int block = std::max(512, total_ / 64);
        const int blocks = (total_ + block - 1) / block;
        int found_at = -1;
        for (int scanned = 0; scanned < blocks; ++scanned) {
            if (found_at >= 0 && scanned > found_at + 1) break;  // one extra block for quality
            int bidx = (price_cursor_ + scanned) % blocks;
            int lo = bidx * block, hi = std::min(total_, lo + block);
            bool any = false;
            for (int j = lo; j < hi; ++j) any = consider(j) || any;
            if (any && found_at < 0) found_at = scanned;
        }
        price_cursor_ = (price_cursor_ + 1) % blocks;
        return best;
    }

    struct RatioResult {
        double step = kInfinity;
        int slot = -1;  // -1: bound flip of the entering variable
        double bound = 0;
        bool to_upper = false;
    };

    RatioResult ratio_test(const std::vector<double>& w, int enter, int dir, bool phase1, bool bland) const {
        RatioResult res;
        const double piv_tol = 1e-11;
        const double ftol = opt_.feasibility_tol;
        double best_piv = 0.0;
        for (int k = 0; k < m_; ++k) {
            double wk = w[k];
            if (std::abs(wk) <= piv_tol) continue;
            int j = basic_[k];
            double rate = -dir * wk;  // movement of this basic per unit step
            double x = xval_[j];
            double limit, bnd;
            bool to_upper;
            if (rate > 0) {
                if (x < lb_[j] - ftol) {
                    // infeasible below, moving up: blocks when it reaches lb
                    limit = (lb_[j] - x) / rate;
                    bnd = lb_[j];
                    to_upper = false;
                } else if (x > ub_[j] + ftol) {
                    continue;  // already beyond ub and moving away from it
                } else if (std::isfinite(ub_[j])) {
                    limit = (ub_[j] - x) / rate;
                    bnd = ub_[j];
                    to_upper = true;
                } else {
                    continue;
                }
            } else {
                if (x > ub_[j] + ftol) {
                    limit = (ub_[j] - x) / rate;
                    bnd = ub_[j];
                    to_upper = true;
                } else if (x < lb_[j] - ftol) {
                    continue;  // already beyond lb and moving away from it
                } else if (std::isfinite(lb_[j])) {
                    limit = (lb_[j] - x) / rate;
                    bnd = lb_[j];
                    to_upper = false;
                } else {
                    continue;
                }
            }
            if (limit < 0) limit = 0;
            bool take;
            if (res.slot < 0) {
                take = limit < res.step;
            } else if (limit < res.step - 1e-12) {
                take = true;
            } else if (limit <= res.step + 1e-12) {
                double a = std::abs(wk);
                take = bland ? j < basic_[res.slot]
                             : (a > best_piv || (a == best_piv && j < basic_[res.slot]));
            } else {
                take = false;
            }
            if (take) {
                res.step = res.slot < 0 ? limit : std::min(res.step, limit);
                res.slot = k;
                res.bound = bnd;
                res.to_upper = to_upper;
                best_piv = std::abs(wk);
            }
        }
        double flip = ub_[enter] - lb_[enter];
        if (std::isfinite(flip) && flip < res.step - 1e-12) {
            res.step = flip;
            res.slot = -1;
        }
        return res;
    }

    bool run_phase(bool phase1) {
        std::vector<double> y(m_), cb(m_), wslots(m_, 0.0), colvec(m_, 0.0);
        std::vector<std::pair<int, double>> centries;
        std::int64_t degenerate_run = 0;
        const double inf_tol = opt_.feasibility_tol * (1.0 + bnorm_);
        while (true) {
            if (phase1 && total_infeasibility() <= inf_tol) return true;
            if (iterations_ >= iter_limit_) {
                stop_ = Stop::IterLimit;
                return !phase1;
            }
            if (opt_.time_limit_seconds > 0 && (iterations_ & 0xff) == 0) {
                double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
                if (el > opt_.time_limit_seconds) {
                    stop_ = Stop::TimeLimit;
                    return !phase1;
                }
            }

            if (phase1) {
                phase1_gradient(cb);
            } else {
                for (int k = 0; k < m_; ++k) cb[k] = cost_[basic_[k]];
            }
            btran_cost(cb, y);

            bool bland = degenerate_run >= opt_.bland_threshold;
            Candidate cand = price(y, phase1, bland);
            if (cand.var < 0) {
                if (phase1) return total_infeasibility() <= 1e-7 * (1.0 + bnorm_);
                return true;  // optimal
            }
#ifdef REPOWER_TRACE
            std::fprintf(stderr, "it=%lld ph%d inf=%.6g enter=%d dir=%d score=%.3g\n",
                         (long long)iterations_, phase1 ? 1 : 2, total_infeasibility(), cand.var,
                         cand.direction, cand.score);
#endif

            column_entries(cand.var, centries);
            for (auto& [r, v] : centries) colvec[r] = v;
            ftran(colvec, wslots);

            RatioResult rr = ratio_test(wslots, cand.var, cand.direction, phase1, bland);
#ifdef REPOWER_TRACE
            std::fprintf(stderr, "   ratio: step=%.6g slot=%d leave=%d bound=%.6g\n", rr.step, rr.slot,
                         rr.slot >= 0 ? basic_[rr.slot] : -1, rr.bound);
#endif
            if (rr.step == kInfinity) {
                std::fill(wslots.begin(), wslots.end(), 0.0);
                if (phase1) throw Error("simplex: unbounded phase-1 direction");
                stop_ = Stop::Unbounded;
                return true;
            }
            if (rr.slot >= 0 && std::abs(wslots[rr.slot]) < 1e-11) {
                std::fill(wslots.begin(), wslots.end(), 0.0);
                if (!refactorize()) {
                    reset_to_slack_basis();
                    if (!refactorize()) throw Error("simplex: basis became singular");
                }
                continue;
            }

            ++iterations_;
            double step = rr.step;
            degenerate_run = (step <= 1e-12) ? degenerate_run + 1 : 0;

            if (step > 0) {
                for (int k = 0; k < m_; ++k) {
                    double wk = wslots[k];
                    if (wk != 0.0) xval_[basic_[k]] -= cand.direction * step * wk;
                }
            }
            if (rr.slot < 0) {
                vstat_[cand.var] = cand.direction > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
                set_nonbasic_value(cand.var);
                std::fill(wslots.begin(), wslots.end(), 0.0);
                continue;
            }

            int leave = basic_[rr.slot];
            double piv = wslots[rr.slot];
            xval_[cand.var] = xval_[cand.var] + cand.direction * step;
            xval_[leave] = rr.bound;
            vstat_[leave] = rr.to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
            vstat_[cand.var] = VarStatus::Basic;
            basic_[rr.slot] = cand.var;

            Eta e;
            e.slot = rr.slot;
            e.pivot = piv;
            e.entries.reserve(64);
            for (int k = 0; k < m_; ++k) {
                if (k != rr.slot && wslots[k] != 0.0) e.entries.emplace_back(k, wslots[k]);
                wslots[k] = 0.0;
            }
            etas_.push_back(std::move(e));

            bool need_refactor = ++pivots_since_refactor_ >= opt_.refactor_interval;
            if (!need_refactor && (iterations_ & 0x3f) == 0) need_refactor = residual_drift() > 1e-9 * (1.0 + bnorm_);
            if (need_refactor) {
                if (!refactorize()) {
                    reset_to_slack_basis();
                    if (!refactorize()) throw Error("simplex: basis became singular");
                }
            }
        }
    }

    /// || b - A x ||_inf with logicals included.
    double residual_drift() const {
        std::vector<double> r = b_;
        for (int j = 0; j < n_; ++j) {
            double v = xval_[j];
            if (v == 0.0) continue;
            for (std::int64_t k = cstart_[j]; k < cstart_[j + 1]; ++k) r[crow_[k]] -= cval_[k] * v;
        }
        double worst = 0.0;
        for (int i = 0; i < m_; ++i) worst = std::max(worst, std::abs(r[i] - xval_[n_ + i]));
        return worst;
    }

    void fill_primal(LPSolution& out) const {
        out.x.assign(xval_.begin(), xval_.begin() + n_);
        out.basis.assign(vstat_.begin(), vstat_.end());
    }

    void fill_solution(LPSolution& out) {
        if (!refactorize()) {
            reset_to_slack_basis();
            refactorize();
        }
        std::vector<double> cb(m_);
        for (int k = 0; k < m_; ++k) cb[k] = cost_[basic_[k]];
        out.y.assign(m_, 0.0);
        btran_cost(cb, out.y);
        fill_primal(out);
        out.objective = 0;
        for (int j = 0; j < n_; ++j) out.objective += cost_[j] * xval_[j];
        out.iterations = iterations_;
        if (out.status == SolveStatus::Optimal) out.best_bound = out.objective;
    }

    SolveOptions opt_;
    int m_ = 0, n_ = 0, total_ = 0;
    double bnorm_ = 0;
    std::vector<double> b_;
    std::vector<double> cost_, lb_, ub_;
    std::vector<std::int64_t> cstart_;
    std::vector<int> crow_;
    std::vector<double> cval_;

    std::vector<int> basic_;
    std::vector<VarStatus> vstat_;
    std::vector<double> xval_;
    BasisLU lu_;
    std::vector<Eta> etas_;
    std::vector<double> btmp_;
    std::int64_t pivots_since_refactor_ = 0;
    std::int64_t iterations_ = 0;
    std::int64_t iter_limit_ = 0;
    int price_cursor_ = 0;
    Stop stop_ = Stop::None;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace detail
}  // namespace repower
