#include "qdesign/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qdesign {

void LpProblem::validate() const {
    const size_t n = objective.size();
    if (n == 0) throw std::invalid_argument("LP has no variables");
    if (eq_a.size() != eq_b.size() || le_a.size() != le_b.size())
        throw std::invalid_argument("constraint matrix/rhs size mismatch");
    for (const auto& row : eq_a)
        if (row.size() != n) throw std::invalid_argument("equality row width mismatch");
    for (const auto& row : le_a)
        if (row.size() != n) throw std::invalid_argument("inequality row width mismatch");
    if (!var_names.empty() && var_names.size() != n)
        throw std::invalid_argument("variable catalog size mismatch");
    if (!nonneg.empty() && nonneg.size() != n)
        throw std::invalid_argument("nonneg mask size mismatch");
    for (double c : objective)
        if (!std::isfinite(c)) throw std::invalid_argument("non-finite objective coefficient");
    for (const auto* mat : {&eq_a, &le_a})
        for (const auto& row : *mat)
            for (double a : row)
                if (!std::isfinite(a)) throw std::invalid_argument("non-finite coefficient");
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

double ResidualReport::worst() const {
    return std::max({max_eq_residual, max_ineq_violation, max_negativity});
}

ResidualReport check_solution(const LpProblem& problem, std::span<const double> values) {
    if (values.size() != problem.objective.size())
        throw std::invalid_argument("solution size does not match variable count");
    ResidualReport rep;
    for (size_t r = 0; r < problem.eq_a.size(); ++r) {
        double lhs = 0.0;
        for (size_t j = 0; j < values.size(); ++j) lhs += problem.eq_a[r][j] * values[j];
        rep.max_eq_residual = std::max(rep.max_eq_residual, std::abs(lhs - problem.eq_b[r]));
    }
    for (size_t r = 0; r < problem.le_a.size(); ++r) {
        double lhs = 0.0;
        for (size_t j = 0; j < values.size(); ++j) lhs += problem.le_a[r][j] * values[j];
        rep.max_ineq_violation = std::max(rep.max_ineq_violation, lhs - problem.le_b[r]);
    }
    rep.max_ineq_violation = std::max(rep.max_ineq_violation, 0.0);
    for (size_t j = 0; j < values.size(); ++j)
        if (problem.var_nonneg(static_cast<int>(j)))
            rep.max_negativity = std::max(rep.max_negativity, -values[j]);
    rep.max_negativity = std::max(rep.max_negativity, 0.0);
    return rep;
}

namespace {

// The designer LP chains flow-balance rows whose basis inverses compound
// lambda^x factors; at x_max ~ 200 that approaches 1/eps for doubles. The
// solver core therefore runs in 80-bit extended precision.
using Scalar = long double;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Dense LU with partial pivoting; factors in place, returns false when a
// pivot falls below the drop tolerance.
class LuFactors {
public:
    bool factor(std::vector<Scalar> a, int n) {
        n_ = n;
        a_ = std::move(a);
        perm_.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) perm_[static_cast<size_t>(i)] = i;
        // Basis matrices of the designer LP are legitimately ill conditioned
        // (flow chains compound lambda^x), so the singularity cutoff is
        // relative to the matrix scale rather than absolute.
        Scalar amax = 0.0;
        for (const Scalar& v : a_) amax = std::max(amax, std::abs(v));
        const Scalar drop = std::max<Scalar>(amax * 1e-17L, 1e-300L);
        for (int k = 0; k < n; ++k) {
            int piv = k;
            Scalar best = std::abs(at(k, k));
            for (int i = k + 1; i < n; ++i) {
                const Scalar cand = std::abs(at(i, k));
                if (cand > best) { best = cand; piv = i; }
            }
            if (best < drop) return false;
            if (piv != k) {
                for (int j = 0; j < n; ++j) std::swap(at(piv, j), at(k, j));
                std::swap(perm_[static_cast<size_t>(piv)], perm_[static_cast<size_t>(k)]);
            }
            const Scalar inv = 1.0L / at(k, k);
            for (int i = k + 1; i < n; ++i) {
                const Scalar f = at(i, k) * inv;
                at(i, k) = f;
                if (f == 0.0) continue;
                for (int j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
            }
        }
        return true;
    }

    // Solves A x = b; b holds x on return.
    void solve(std::vector<Scalar>& b) const {
        std::vector<Scalar> y(static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i) y[static_cast<size_t>(i)] = b[static_cast<size_t>(perm_[static_cast<size_t>(i)])];
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < i; ++j) y[static_cast<size_t>(i)] -= at(i, j) * y[static_cast<size_t>(j)];
        for (int i = n_ - 1; i >= 0; --i) {
            for (int j = i + 1; j < n_; ++j) y[static_cast<size_t>(i)] -= at(i, j) * y[static_cast<size_t>(j)];
            y[static_cast<size_t>(i)] /= at(i, i);
        }
        b = std::move(y);
    }

private:
    Scalar& at(int i, int j) { return a_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)]; }
    Scalar at(int i, int j) const { return a_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)]; }
    int n_ = 0;
    std::vector<Scalar> a_;
    std::vector<int> perm_;
};

class SimplexSolver {
public:
    SimplexSolver(const LpProblem& problem, const SimplexOptions& options)
        : prob_(problem), opt_(options) {
        build();
    }

    LpSolution run() {
        LpSolution sol;
        if (needs_phase1()) {
            const bool feasible = phase1();
            if (!feasible) {
                sol.status = LpStatus::infeasible;
                sol.objective = -std::numeric_limits<double>::infinity();
                sol.iterations = iterations_;
                return sol;
            }
            cleanup_artificials();
        }
        const bool bounded = phase2(sol);
        refactorize();
        extract_values(sol);
        sol.iterations = iterations_;
        if (!bounded) {
            sol.status = LpStatus::unbounded;
            sol.objective = std::numeric_limits<double>::infinity();
            return sol;
        }
        sol.status = LpStatus::optimal;
        sol.objective = 0.0;
        for (int j = 0; j < prob_.n_vars(); ++j)
            sol.objective += prob_.objective[static_cast<size_t>(j)] * sol.values[static_cast<size_t>(j)];
        sol.max_residual = check_solution(prob_, sol.values).worst();
        return sol;
    }

private:
    // Column ids: [0, n_struct) structural (free vars contribute a negated
    // twin), [n_struct, n_struct + n_slack) slacks, then one artificial per
    // row as needed. Artificial columns are unit vectors and never re-enter,
    // so the working tableau only stores structural + slack columns + rhs.
    void build() {
        prob_.validate();
        const int n = prob_.n_vars();
        split_of_.assign(static_cast<size_t>(n), -1);
        n_struct_ = n;
        for (int j = 0; j < n; ++j)
            if (!prob_.var_nonneg(j)) split_of_[static_cast<size_t>(j)] = n_struct_++;

        m_ = static_cast<int>(prob_.eq_a.size() + prob_.le_a.size());
        n_slack_ = static_cast<int>(prob_.le_a.size());
        width_ = n_struct_ + n_slack_ + 1;  // + rhs
        art_base_ = n_struct_ + n_slack_;

        orig_.assign(static_cast<size_t>(m_) * static_cast<size_t>(width_), 0.0);
        row_flip_.assign(static_cast<size_t>(m_), 1.0);
        const int m_eq = static_cast<int>(prob_.eq_a.size());
        for (int r = 0; r < m_; ++r) {
            const bool is_eq = r < m_eq;
            const auto& a = is_eq ? prob_.eq_a[static_cast<size_t>(r)] : prob_.le_a[static_cast<size_t>(r - m_eq)];
            const double b = is_eq ? prob_.eq_b[static_cast<size_t>(r)] : prob_.le_b[static_cast<size_t>(r - m_eq)];
            const double flip = (b < 0.0) ? -1.0 : 1.0;
            row_flip_[static_cast<size_t>(r)] = flip;
            for (int j = 0; j < n; ++j) {
                orig_at(r, j) = flip * a[static_cast<size_t>(j)];
                if (split_of_[static_cast<size_t>(j)] >= 0)
                    orig_at(r, split_of_[static_cast<size_t>(j)]) = -flip * a[static_cast<size_t>(j)];
            }
            if (!is_eq) orig_at(r, n_struct_ + (r - m_eq)) = flip;
            orig_at(r, width_ - 1) = flip * b;
        }

        cost_.assign(static_cast<size_t>(n_struct_ + n_slack_), 0.0);
        for (int j = 0; j < n; ++j) {
            cost_[static_cast<size_t>(j)] = prob_.objective[static_cast<size_t>(j)];
            if (split_of_[static_cast<size_t>(j)] >= 0)
                cost_[static_cast<size_t>(split_of_[static_cast<size_t>(j)])] = -prob_.objective[static_cast<size_t>(j)];
        }

        tab_ = orig_;
        basis_.assign(static_cast<size_t>(m_), -1);
        dead_.assign(static_cast<size_t>(m_), false);
        for (int r = 0; r < m_; ++r) {
            const bool slack_ok = r >= m_eq && row_flip_[static_cast<size_t>(r)] > 0.0;
            basis_[static_cast<size_t>(r)] = slack_ok ? n_struct_ + (r - m_eq) : art_base_ + r;
        }
    }

    bool needs_phase1() const {
        for (int r = 0; r < m_; ++r)
            if (is_artificial(basis_[static_cast<size_t>(r)])) return true;
        return false;
    }

    bool is_artificial(int col) const { return col >= art_base_; }

    Scalar& tab_at(int r, int j) { return tab_[static_cast<size_t>(r) * static_cast<size_t>(width_) + static_cast<size_t>(j)]; }
    Scalar tab_at(int r, int j) const { return tab_[static_cast<size_t>(r) * static_cast<size_t>(width_) + static_cast<size_t>(j)]; }
    Scalar& orig_at(int r, int j) { return orig_[static_cast<size_t>(r) * static_cast<size_t>(width_) + static_cast<size_t>(j)]; }
    Scalar orig_at(int r, int j) const { return orig_[static_cast<size_t>(r) * static_cast<size_t>(width_) + static_cast<size_t>(j)]; }

    void pivot(int row, int col) {
        const Scalar inv = 1.0L / tab_at(row, col);
        Scalar* prow = &tab_[static_cast<size_t>(row) * static_cast<size_t>(width_)];
        for (int j = 0; j < width_; ++j) prow[j] *= inv;
        prow[col] = 1.0;
        for (int r = 0; r < m_; ++r) {
            if (r == row) continue;
            const Scalar f = tab_at(r, col);
            if (f == 0.0) continue;
            Scalar* target = &tab_[static_cast<size_t>(r) * static_cast<size_t>(width_)];
            for (int j = 0; j < width_; ++j) target[j] -= f * prow[j];
            target[col] = 0.0;
        }
        const Scalar df = reduced_[static_cast<size_t>(col)];
        if (df != 0.0) {
            for (int j = 0; j < width_ - 1; ++j) reduced_[static_cast<size_t>(j)] -= df * prow[j];
            obj_value_ += df * prow[width_ - 1];
            reduced_[static_cast<size_t>(col)] = 0.0;
        }
        basis_[static_cast<size_t>(row)] = col;
#ifdef QD_SIMPLEX_DEBUG
        last_pivots_.push_back({row, col, static_cast<double>(1.0L / inv)});
        if (last_pivots_.size() > 12) last_pivots_.erase(last_pivots_.begin());
#endif
        ++iterations_;
    }

    // Entering column, or -1 at optimality. Bland's rule takes over after
    // opt_.bland_after pivots, which guarantees termination on the
    // degenerate optima this LP family exhibits.
    int choose_entering() const {
        const int ncols = n_struct_ + n_slack_;
        if (iterations_ >= opt_.bland_after) {
            for (int j = 0; j < ncols; ++j)
                if (reduced_[static_cast<size_t>(j)] > opt_.pivot_tol && !basic_mask_[static_cast<size_t>(j)])
                    return j;
            return -1;
        }
        int best = -1;
        Scalar best_val = opt_.pivot_tol;
        for (int j = 0; j < ncols; ++j) {
            const Scalar d = reduced_[static_cast<size_t>(j)];
            if (d > best_val && !basic_mask_[static_cast<size_t>(j)]) {
                best_val = d;
                best = j;
            }
        }
        return best;
    }

    // Minimum-ratio row, or -1 when the column is unbounded. Two-pass
    // Harris-style test: a relaxed first pass bounds the step, the second
    // picks the largest pivot element among the near-ties. Repeated pivots
    // on tiny elements of degenerate rows would otherwise drive the basis
    // singular. Bland mode keeps the strict lowest-index rule instead,
    // which is what guarantees termination.
    int choose_leaving(int col) const {
        constexpr Scalar kFeasTol = 1e-9L;
        if (iterations_ >= opt_.bland_after) {
            int best = -1;
            Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
            for (int r = 0; r < m_; ++r) {
                if (dead_[static_cast<size_t>(r)]) continue;
                const Scalar a = tab_at(r, col);
                if (a <= opt_.pivot_tol) continue;
                const Scalar ratio = std::max<Scalar>(tab_at(r, width_ - 1), 0.0L) / a;
                if (ratio < best_ratio - 1e-12L ||
                    (ratio < best_ratio + 1e-12L && best >= 0 &&
                     basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(best)])) {
                    best_ratio = ratio;
                    best = r;
                }
            }
            return best;
        }
        Scalar bound = std::numeric_limits<Scalar>::infinity();
        for (int r = 0; r < m_; ++r) {
            if (dead_[static_cast<size_t>(r)]) continue;
            const Scalar a = tab_at(r, col);
            if (a <= opt_.pivot_tol) continue;
            bound = std::min(bound, (std::max<Scalar>(tab_at(r, width_ - 1), 0.0L) + kFeasTol) / a);
        }
        if (bound == std::numeric_limits<Scalar>::infinity()) return -1;
        int best = -1;
        Scalar best_elem = 0.0;
        for (int r = 0; r < m_; ++r) {
            if (dead_[static_cast<size_t>(r)]) continue;
            const Scalar a = tab_at(r, col);
            if (a <= opt_.pivot_tol) continue;
            const Scalar ratio = std::max<Scalar>(tab_at(r, width_ - 1), 0.0L) / a;
            if (ratio <= bound && a > best_elem) {
                best_elem = a;
                best = r;
            }
        }
        return best;
    }

    void rebuild_basic_mask() {
        basic_mask_.assign(static_cast<size_t>(n_struct_ + n_slack_), false);
        for (int r = 0; r < m_; ++r) {
            const int b = basis_[static_cast<size_t>(r)];
            if (!is_artificial(b)) basic_mask_[static_cast<size_t>(b)] = true;
        }
    }

    // Rebuilds the tableau and reduced costs from the basis by LU-solving
    // against the original rows; bounds the error drift of long pivot runs.
    void refactorize() {
        std::vector<Scalar> bmat(static_cast<size_t>(m_) * static_cast<size_t>(m_), 0.0);
        for (int r = 0; r < m_; ++r) {
            const int col = basis_[static_cast<size_t>(r)];
            for (int i = 0; i < m_; ++i) {
                Scalar value;
                if (is_artificial(col))
                    value = (i == col - art_base_) ? 1.0 : 0.0;
                else
                    value = orig_at(i, col);
                bmat[static_cast<size_t>(i) * static_cast<size_t>(m_) + static_cast<size_t>(r)] = value;
            }
        }
        LuFactors lu;
        if (!lu.factor(std::move(bmat), m_)) {
#ifdef QD_SIMPLEX_DEBUG
            std::fprintf(stderr, "[dbg] singular refactor: phase=%d iters=%ld m=%d\n", phase_, iterations_, m_);
            for (const auto& lp : last_pivots_)
                std::fprintf(stderr, "[dbg]   pivot row=%d col=%d elem=%.6e\n", lp.row, lp.col, lp.elem);
            if (std::FILE* f = std::fopen("/tmp/basis_dump.txt", "w")) {
                std::fprintf(f, "%d\n", m_);
                for (int r = 0; r < m_; ++r) std::fprintf(f, "%d ", basis_[static_cast<size_t>(r)]);
                std::fprintf(f, "\n%d %d %d\n", n_struct_, n_slack_, art_base_);
                for (int i = 0; i < m_; ++i) {
                    for (int r = 0; r < m_; ++r) {
                        const int col = basis_[static_cast<size_t>(r)];
                        double v = is_artificial(col) ? (i == col - art_base_ ? 1.0 : 0.0)
                                                      : static_cast<double>(orig_at(i, col));
                        std::fprintf(f, "%.17g ", v);
                    }
                    std::fprintf(f, "\n");
                }
                std::fclose(f);
            }
            {
                std::vector<int> sorted(basis_);
                std::sort(sorted.begin(), sorted.end());
                int dups = 0;
                for (size_t i = 1; i < sorted.size(); ++i) if (sorted[i] == sorted[i-1]) ++dups;
                std::fprintf(stderr, "[dbg] duplicate basis cols: %d\n", dups);
                int n_art = 0; for (int b : basis_) if (is_artificial(b)) ++n_art;
                std::fprintf(stderr, "[dbg] artificials in basis: %d\n", n_art);
            }
#endif
            throw std::runtime_error("simplex: numerically singular basis after refactorization");
        }

        std::vector<Scalar> colbuf(static_cast<size_t>(m_));
        for (int j = 0; j < width_; ++j) {
            for (int i = 0; i < m_; ++i) colbuf[static_cast<size_t>(i)] = orig_at(i, j);
            lu.solve(colbuf);
            for (int i = 0; i < m_; ++i) tab_at(i, j) = colbuf[static_cast<size_t>(i)];
        }
#ifdef QD_SIMPLEX_DEBUG
        {
            // verify B * T_col == orig_col on a few columns
            Scalar worst = 0.0;
            for (int probe = 0; probe < 7; ++probe) {
                const int j = (probe * 131) % width_;
                for (int i = 0; i < m_; ++i) {
                    Scalar acc = 0.0;
                    for (int r = 0; r < m_; ++r) {
                        const int col = basis_[static_cast<size_t>(r)];
                        const Scalar bval = is_artificial(col) ? (i == col - art_base_ ? 1.0L : 0.0L)
                                                               : orig_at(i, col);
                        acc += bval * tab_at(r, j);
                    }
                    worst = std::max(worst, std::abs(acc - orig_at(i, j)));
                }
            }
            std::fprintf(stderr, "[dbg] refactor check at iter %ld: worst |B*T - A| = %.3Le\n", iterations_, worst);
        }
#endif
        rebuild_reduced();
    }

    void rebuild_reduced() {
        const int ncols = n_struct_ + n_slack_;
        reduced_.assign(static_cast<size_t>(ncols), 0.0);
        obj_value_ = 0.0;
        if (phase_ == 1) {
            // Phase-1 objective: maximize minus the sum of artificials, whose
            // reduced costs are the column sums over artificial-basic rows.
            for (int r = 0; r < m_; ++r) {
                if (!is_artificial(basis_[static_cast<size_t>(r)])) continue;
                for (int j = 0; j < ncols; ++j) reduced_[static_cast<size_t>(j)] += tab_at(r, j);
                obj_value_ -= tab_at(r, width_ - 1);
            }
        } else {
            for (int j = 0; j < ncols; ++j) reduced_[static_cast<size_t>(j)] = cost_[static_cast<size_t>(j)];
            for (int r = 0; r < m_; ++r) {
                const int b = basis_[static_cast<size_t>(r)];
                const Scalar cb = is_artificial(b) ? 0.0L : cost_[static_cast<size_t>(b)];
                if (cb == 0.0) continue;
                for (int j = 0; j < ncols; ++j) reduced_[static_cast<size_t>(j)] -= cb * tab_at(r, j);
                obj_value_ += cb * tab_at(r, width_ - 1);
            }
            for (int r = 0; r < m_; ++r) {
                const int b = basis_[static_cast<size_t>(r)];
                if (!is_artificial(b)) reduced_[static_cast<size_t>(b)] = 0.0;
            }
        }
        rebuild_basic_mask();
    }

    // Returns false on infeasibility.
    bool phase1() {
        phase_ = 1;
        rebuild_reduced();
        long since_refactor = 0;
        while (true) {
            if (iterations_ >= opt_.max_iters) throw_iteration_limit();
            const int col = choose_entering();
            if (col < 0) break;
            const int row = choose_leaving(col);
            if (row < 0)
                throw std::runtime_error("simplex: phase-1 objective unbounded (numerical failure)");
            pivot(row, col);
            rebuild_basic_mask();
            if (++since_refactor >= opt_.refactor_every) {
                refactorize();
                since_refactor = 0;
            }
        }
        Scalar infeasibility = 0.0;
        for (int r = 0; r < m_; ++r)
            if (is_artificial(basis_[static_cast<size_t>(r)]))
                infeasibility += std::max<Scalar>(tab_at(r, width_ - 1), 0.0L);
        Scalar scale = 1.0;
        for (int r = 0; r < m_; ++r) scale = std::max(scale, std::abs(orig_at(r, width_ - 1)));
        return infeasibility <= 1e-7 * scale;
    }

    // Pivots zero-level artificials out of the basis; rows reduced to all
    // zeros are redundant and get retired from the ratio tests.
    void cleanup_artificials() {
        for (int r = 0; r < m_; ++r) {
            if (!is_artificial(basis_[static_cast<size_t>(r)])) continue;
            int col = -1;
            for (int j = 0; j < n_struct_ + n_slack_; ++j) {
                if (basic_mask_[static_cast<size_t>(j)]) continue;
                if (std::abs(tab_at(r, j)) > 1e-7) { col = j; break; }
            }
            if (col >= 0) {
                pivot(r, col);
                rebuild_basic_mask();
            } else {
                dead_[static_cast<size_t>(r)] = true;
            }
        }
    }

    // Returns false when unbounded.
    bool phase2(LpSolution& sol) {
        phase_ = 2;
        rebuild_reduced();
        long since_refactor = 0;
        while (true) {
            if (iterations_ >= opt_.max_iters) throw_iteration_limit();
            const int col = choose_entering();
            if (col < 0) return true;
            const int row = choose_leaving(col);
            if (row < 0) return false;
            pivot(row, col);
            rebuild_basic_mask();
            if (opt_.record_trace) sol.phase2_objectives.push_back(static_cast<double>(obj_value_));
            if (++since_refactor >= opt_.refactor_every) {
                refactorize();
                since_refactor = 0;
            }
        }
    }

    void extract_values(LpSolution& sol) const {
        std::vector<Scalar> full(static_cast<size_t>(n_struct_ + n_slack_), 0.0);
        for (int r = 0; r < m_; ++r) {
            const int b = basis_[static_cast<size_t>(r)];
            if (!is_artificial(b)) full[static_cast<size_t>(b)] = tab_at(r, width_ - 1);
        }
        sol.values.assign(static_cast<size_t>(prob_.n_vars()), 0.0);
        for (int j = 0; j < prob_.n_vars(); ++j) {
            Scalar v = full[static_cast<size_t>(j)];
            if (split_of_[static_cast<size_t>(j)] >= 0)
                v -= full[static_cast<size_t>(split_of_[static_cast<size_t>(j)])];
            sol.values[static_cast<size_t>(j)] = static_cast<double>(v);
        }
    }

    [[noreturn]] void throw_iteration_limit() const {
        std::ostringstream os;
        os << "simplex: iteration limit " << opt_.max_iters << " exceeded in phase "
           << phase_ << " (basis size " << m_ << ", " << iterations_ << " pivots)";
        throw std::runtime_error(os.str());
    }

    LpProblem prob_;
    SimplexOptions opt_;
    int m_ = 0;
    int n_struct_ = 0;
    int n_slack_ = 0;
    int width_ = 0;
    int art_base_ = 0;
    int phase_ = 1;
    long iterations_ = 0;
    Scalar obj_value_ = 0.0;
    std::vector<Scalar> orig_;
    std::vector<Scalar> tab_;
    std::vector<Scalar> cost_;
    std::vector<Scalar> reduced_;
    std::vector<Scalar> row_flip_;
    std::vector<int> basis_;
    std::vector<int> split_of_;
    std::vector<bool> dead_;
    std::vector<bool> basic_mask_;
#ifdef QD_SIMPLEX_DEBUG
    struct PivotTrace { int row; int col; double elem; };
    mutable std::vector<PivotTrace> last_pivots_;
#endif
};

}  // namespace

LpSolution solve(const LpProblem& problem, const SimplexOptions& options) {
    SimplexSolver solver(problem, options);
    return solver.run();
}

std::string LpProblem::to_tableau_text() const {
    validate();
    std::ostringstream os;
    os << n_vars() << ' ' << eq_a.size() << ' ' << le_a.size() << '\n';
    auto emit_row = [&os](const std::vector<double>& row) {
        for (size_t j = 0; j < row.size(); ++j) {
            if (j) os << ' ';
            os << fmt_double(row[j]);
        }
    };
    emit_row(objective);
    os << '\n';
    for (size_t r = 0; r < eq_a.size(); ++r) {
        emit_row(eq_a[r]);
        os << ' ' << fmt_double(eq_b[r]) << '\n';
    }
    for (size_t r = 0; r < le_a.size(); ++r) {
        emit_row(le_a[r]);
        os << ' ' << fmt_double(le_b[r]) << '\n';
    }
    for (int j = 0; j < n_vars(); ++j) os << (j ? " " : "") << (var_nonneg(j) ? 1 : 0);
    os << '\n';
    if (!var_names.empty()) {
        for (size_t j = 0; j < var_names.size(); ++j) os << (j ? " " : "") << var_names[j];
        os << '\n';
    }
    return os.str();
}

LpProblem LpProblem::from_tableau_text(const std::string& text) {
    std::istringstream is(text);
    int n = 0, m_eq = 0, m_le = 0;
    if (!(is >> n >> m_eq >> m_le) || n <= 0 || m_eq < 0 || m_le < 0)
        throw std::invalid_argument("bad tableau header");
    LpProblem p;
    p.objective.resize(static_cast<size_t>(n));
    for (auto& c : p.objective)
        if (!(is >> c)) throw std::invalid_argument("truncated objective row");
    auto read_rows = [&](std::vector<std::vector<double>>& a, std::vector<double>& b, int rows) {
        a.assign(static_cast<size_t>(rows), std::vector<double>(static_cast<size_t>(n)));
        b.assign(static_cast<size_t>(rows), 0.0);
        for (int r = 0; r < rows; ++r) {
            for (auto& v : a[static_cast<size_t>(r)])
                if (!(is >> v)) throw std::invalid_argument("truncated constraint row");
            if (!(is >> b[static_cast<size_t>(r)])) throw std::invalid_argument("truncated rhs");
        }
    };
    read_rows(p.eq_a, p.eq_b, m_eq);
    read_rows(p.le_a, p.le_b, m_le);
    p.nonneg.resize(static_cast<size_t>(n));
    for (auto& f : p.nonneg) {
        int v = 0;
        if (!(is >> v)) throw std::invalid_argument("truncated nonneg mask");
        f = static_cast<unsigned char>(v != 0);
    }
    std::string name;
    while (is >> name) p.var_names.push_back(name);
    if (!p.var_names.empty() && p.var_names.size() != static_cast<size_t>(n))
        throw std::invalid_argument("variable name count mismatch");
    p.validate();
    return p;
}

}  // namespace qdesign
