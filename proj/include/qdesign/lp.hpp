#pragma once

#include <span>
#include <string>
#include <vector>

namespace qdesign {

// Dense linear program: maximize objective . z subject to
//   eq_a z = eq_b,  le_a z <= le_b,  z_j >= 0 where nonneg[j] (all, if empty).
// Row and variable catalogs are carried alongside so that residual reports
// can name the offending constraint.
struct LpProblem {
    std::vector<double> objective;
    std::vector<std::vector<double>> eq_a;
    std::vector<double> eq_b;
    std::vector<std::vector<double>> le_a;
    std::vector<double> le_b;
    std::vector<std::string> var_names;  // optional, size n_vars when present
    std::vector<std::string> eq_names;   // optional row labels
    std::vector<std::string> le_names;
    std::vector<unsigned char> nonneg;   // optional, size n_vars when present

    int n_vars() const { return static_cast<int>(objective.size()); }
    bool var_nonneg(int j) const {
        return nonneg.empty() || nonneg[static_cast<size_t>(j)] != 0;
    }
    void validate() const;  // throws std::invalid_argument on shape mismatch

    // Plain-text dense tableau: header with dimensions, then the objective
    // row, equality rows, inequality rows (rhs last on each row), the
    // nonnegativity mask, and optionally variable names.
    std::string to_tableau_text() const;
    static LpProblem from_tableau_text(const std::string& text);
};

enum class LpStatus { optimal, infeasible, unbounded };
const char* to_string(LpStatus status);

struct ResidualReport {
    double max_eq_residual = 0.0;
    double max_ineq_violation = 0.0;
    double max_negativity = 0.0;
    double worst() const;
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> values;  // empty unless optimal/unbounded
    double objective = 0.0;
    long iterations = 0;
    double max_residual = 0.0;
    std::vector<double> phase2_objectives;  // filled when record_trace is set
};

struct SimplexOptions {
    double pivot_tol = 1e-9;
    long bland_after = 2000;   // switch from Dantzig to Bland's rule
    long max_iters = 200000;
    long refactor_every = 100;  // rebuild the tableau from the basis
    bool record_trace = false;
};

// Two-phase primal simplex on a dense tableau. Throws std::runtime_error
// on iteration exhaustion or a numerically singular basis.
LpSolution solve(const LpProblem& problem, const SimplexOptions& options = {});

// Residuals of an arbitrary point, computed directly from the problem data
// (independent of the solver path).
ResidualReport check_solution(const LpProblem& problem, std::span<const double> values);

}  // namespace qdesign
