#pragma once

#include <stdexcept>

#include "qdesign/incentives.hpp"
#include "qdesign/lp.hpp"
#include "qdesign/model.hpp"
#include "qdesign/stationary.hpp"

namespace qdesign {

// Stationary joint probability gamma(s,i,x) of (signal, type, backlog).
// The LP's decision variable; recommendation policy and backlog marginals
// are recovered from it after the solve.
struct OccupationMeasure {
    int x_max = 0;
    std::vector<double> g;  // layout: ((x * 2 + (i-1)) * 2 + s)

    OccupationMeasure() = default;
    explicit OccupationMeasure(int x_max_)
        : x_max(x_max_), g(4 * (static_cast<size_t>(x_max_) + 1), 0.0) {}

    double& at(int s, int i, int x) { return g[flat(s, i, x)]; }
    double at(int s, int i, int x) const { return g[flat(s, i, x)]; }
    double state_marginal(int x) const {
        return at(0, 1, x) + at(1, 1, x) + at(0, 2, x) + at(1, 2, x);
    }
    double total() const;

    size_t flat(int s, int i, int x) const {
        return (static_cast<size_t>(x) * 2 + static_cast<size_t>(i - 1)) * 2 +
               static_cast<size_t>(s);
    }
};

// Index of gamma(s,i,x) in the LP variable vector; the tax-offset slot
// u = -t0 comes last.
int lp_var_index(int s, int i, int x);
int lp_offset_index(int x_max);

struct SolveDiagnostics {
    ResidualReport residuals;
    long iterations = 0;
    double tail_mass = 0.0;
    double recursion_residual = 0.0;
    std::vector<int> degenerate_states;   // mu(x) <= tol
    std::vector<int> unreachable_states;  // policy left at 0 by convention
};

struct DesignSolution {
    ModelConfig config;
    Policy policy;
    StationaryDist mu;
    TaxSchedule taxes;
    OccupationMeasure occupation;
    double objective_value = 0.0;
    IncentiveReport incentives;
    SolveDiagnostics diagnostics;
};

// Emits the designer's linear program over (gamma, u): maximize
// lambda*(-u) + 2*lambda*sum_x v(x)*gamma(1,2,x) subject to the four
// linearized participation inequalities, allocation monotonicity, flow
// balance with a no-admission closure at x_max, per-type marginal
// equalities, unit mass, and nonnegativity. Requires the uniform type
// prior; other priors throw std::invalid_argument.
LpProblem build_lp(const ModelConfig& config);

struct PolicyRecovery {
    Policy policy;
    std::vector<int> unreachable_states;
};

// sigma(1|x,i) = gamma(1,i,x) / (gamma(0,i,x) + gamma(1,i,x)) where the
// denominator exceeds tol; unreachable states get sigma = 0 and are listed.
PolicyRecovery recover_policy(const OccupationMeasure& gamma, double tol);

// Backlog marginal mu(x) = sum_{s,i} gamma(s,i,x). Throws when the
// recovered pair (mu, sigma) violates the stationary recursion by more
// than 100*tol, which signals a solver failure rather than model noise.
StationaryDist recover_marginals(const OccupationMeasure& gamma, double lambda,
                                 const RewardFn& reward, double tol);

OccupationMeasure occupation_from_values(std::span<const double> values, int x_max);

// Maps a policy and its stationary law to the occupation measure they
// induce under the uniform prior. Used as a feasibility witness generator.
OccupationMeasure embed_policy(const Policy& policy, const StationaryDist& dist);

// Thrown when the LP terminates without an optimum.
struct SolverFailure : std::runtime_error {
    SolverFailure(LpStatus status_, ResidualReport residuals_, const std::string& msg)
        : std::runtime_error(msg), status(status_), residuals(residuals_) {}
    LpStatus status;
    ResidualReport residuals;
};

// Bundles policy, marginals, taxes (t0 = -u), incentive verification and
// solver diagnostics for an optimal LP solution.
DesignSolution assemble_solution(const LpProblem& problem, const LpSolution& solution,
                                 const ModelConfig& config);

}  // namespace qdesign
