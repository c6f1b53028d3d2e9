#include "qdesign/lp_builder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qdesign {

namespace {

std::string gamma_name(int s, int i, int x) {
    std::ostringstream os;
    os << "g(s=" << s << ",i=" << i << ",x=" << x << ")";
    return os.str();
}

}  // namespace

double OccupationMeasure::total() const {
    double acc = 0.0;
    for (double v : g) acc += v;
    return acc;
}

int lp_var_index(int s, int i, int x) { return 4 * x + 2 * (i - 1) + s; }

int lp_offset_index(int x_max) { return 4 * (x_max + 1); }

LpProblem build_lp(const ModelConfig& config) {
    config.validate();
    if (std::abs(config.type_prior - 0.5) > 1e-12)
        throw std::invalid_argument(
            "the occupation-measure LP requires the uniform type prior "
            "(type_prior = 0.5); got " + std::to_string(config.type_prior));

    const int X = config.x_max;
    const double lam = config.lambda;
    const int n = 4 * (X + 1) + 1;
    const int u = lp_offset_index(X);
    std::vector<double> v(static_cast<size_t>(X) + 1);
    for (int x = 0; x <= X; ++x) v[static_cast<size_t>(x)] = config.reward(x);

    LpProblem p;
    p.objective.assign(static_cast<size_t>(n), 0.0);
    p.objective[static_cast<size_t>(u)] = -lam;
    for (int x = 0; x <= X; ++x)
        p.objective[static_cast<size_t>(lp_var_index(1, 2, x))] = 2.0 * lam * v[static_cast<size_t>(x)];

    p.var_names.assign(static_cast<size_t>(n), {});
    for (int x = 0; x <= X; ++x)
        for (int i = 1; i <= 2; ++i)
            for (int s = 0; s <= 1; ++s)
                p.var_names[static_cast<size_t>(lp_var_index(s, i, x))] = gamma_name(s, i, x);
    p.var_names[static_cast<size_t>(u)] = "u";

    auto zero_row = [n] { return std::vector<double>(static_cast<size_t>(n), 0.0); };

    // Participation, low type: sum_x v(x) * mu(x) - p <= u.
    {
        auto row = zero_row();
        for (int x = 0; x <= X; ++x)
            for (int i = 1; i <= 2; ++i)
                for (int s = 0; s <= 1; ++s)
                    row[static_cast<size_t>(lp_var_index(s, i, x))] = v[static_cast<size_t>(x)];
        row[static_cast<size_t>(u)] = -1.0;
        p.le_a.push_back(std::move(row));
        p.le_b.push_back(config.price);
        p.le_names.push_back("ir_outside_1");
    }
    // Participation, high type: 2*vbar - p <= 2*sum v*gamma(1,1,.) + u.
    {
        auto row = zero_row();
        for (int x = 0; x <= X; ++x) {
            for (int i = 1; i <= 2; ++i)
                for (int s = 0; s <= 1; ++s)
                    row[static_cast<size_t>(lp_var_index(s, i, x))] += 2.0 * v[static_cast<size_t>(x)];
            row[static_cast<size_t>(lp_var_index(1, 1, x))] -= 2.0 * v[static_cast<size_t>(x)];
        }
        row[static_cast<size_t>(u)] = -1.0;
        p.le_a.push_back(std::move(row));
        p.le_b.push_back(config.price);
        p.le_names.push_back("ir_outside_2");
    }
    // Nonnegative utility for the low type: -u <= 0.
    {
        auto row = zero_row();
        row[static_cast<size_t>(u)] = -1.0;
        p.le_a.push_back(std::move(row));
        p.le_b.push_back(0.0);
        p.le_names.push_back("ir_zero_1");
    }
    // Nonnegative utility for the high type: -2*sum v*gamma(1,1,.) - u <= 0.
    {
        auto row = zero_row();
        for (int x = 0; x <= X; ++x)
            row[static_cast<size_t>(lp_var_index(1, 1, x))] = -2.0 * v[static_cast<size_t>(x)];
        row[static_cast<size_t>(u)] = -1.0;
        p.le_a.push_back(std::move(row));
        p.le_b.push_back(0.0);
        p.le_names.push_back("ir_zero_2");
    }
    // Allocation monotonicity: sum v*gamma(1,1,.) <= sum v*gamma(1,2,.).
    {
        auto row = zero_row();
        for (int x = 0; x <= X; ++x) {
            row[static_cast<size_t>(lp_var_index(1, 1, x))] = v[static_cast<size_t>(x)];
            row[static_cast<size_t>(lp_var_index(1, 2, x))] = -v[static_cast<size_t>(x)];
        }
        p.le_a.push_back(std::move(row));
        p.le_b.push_back(0.0);
        p.le_names.push_back("monotone_q");
    }

    // Flow balance: mu(x+1) = lambda * sum_i gamma(1,i,x).
    for (int x = 0; x < X; ++x) {
        auto row = zero_row();
        for (int i = 1; i <= 2; ++i)
            for (int s = 0; s <= 1; ++s)
                row[static_cast<size_t>(lp_var_index(s, i, x + 1))] = 1.0;
        row[static_cast<size_t>(lp_var_index(1, 1, x))] -= lam;
        row[static_cast<size_t>(lp_var_index(1, 2, x))] -= lam;
        p.eq_a.push_back(std::move(row));
        p.eq_b.push_back(0.0);
        p.eq_names.push_back("flow[" + std::to_string(x) + "]");
    }
    // Truncation closure: no admission weight may leave the top state.
    {
        auto row = zero_row();
        row[static_cast<size_t>(lp_var_index(1, 1, X))] = 1.0;
        row[static_cast<size_t>(lp_var_index(1, 2, X))] = 1.0;
        p.eq_a.push_back(std::move(row));
        p.eq_b.push_back(0.0);
        p.eq_names.push_back("closure");
    }
    // Type marginals: sum_s gamma(s,i,x) = mu(x)/2 for both types. The two
    // rows per state are linearly dependent; both are emitted to keep the
    // constraint catalog aligned with the formulation.
    for (int x = 0; x <= X; ++x) {
        for (int i = 1; i <= 2; ++i) {
            auto row = zero_row();
            for (int s = 0; s <= 1; ++s) {
                row[static_cast<size_t>(lp_var_index(s, i, x))] += 0.5;
                row[static_cast<size_t>(lp_var_index(s, 3 - i, x))] -= 0.5;
            }
            p.eq_a.push_back(std::move(row));
            p.eq_b.push_back(0.0);
            p.eq_names.push_back("marginal[i=" + std::to_string(i) + ",x=" + std::to_string(x) + "]");
        }
    }
    // Unit mass.
    {
        auto row = zero_row();
        for (int x = 0; x <= X; ++x)
            for (int i = 1; i <= 2; ++i)
                for (int s = 0; s <= 1; ++s)
                    row[static_cast<size_t>(lp_var_index(s, i, x))] = 1.0;
        p.eq_a.push_back(std::move(row));
        p.eq_b.push_back(1.0);
        p.eq_names.push_back("mass");
    }

    p.validate();
    return p;
}

PolicyRecovery recover_policy(const OccupationMeasure& gamma, double tol) {
    PolicyRecovery out;
    out.policy = Policy(gamma.x_max, 0.0, 0.0);
    for (int x = 0; x <= gamma.x_max; ++x) {
        bool unreachable = false;
        for (int i = 1; i <= 2; ++i) {
            const double denom = gamma.at(0, i, x) + gamma.at(1, i, x);
            if (denom > tol) {
                const double sigma = gamma.at(1, i, x) / denom;
                out.policy.set_admit(i, x, std::clamp(sigma, 0.0, 1.0));
            } else {
                unreachable = true;  // sigma left at 0 by convention
            }
        }
        if (unreachable) out.unreachable_states.push_back(x);
    }
    return out;
}

StationaryDist recover_marginals(const OccupationMeasure& gamma, double lambda,
                                 const RewardFn& reward, double tol) {
    StationaryDist dist;
    dist.mu.resize(static_cast<size_t>(gamma.x_max) + 1);
    for (int x = 0; x <= gamma.x_max; ++x)
        dist.mu[static_cast<size_t>(x)] = std::max(gamma.state_marginal(x), 0.0);
    dist.tail_mass = dist.mu.back();
    dist.vbar = expected_reward(dist.mu, reward);

    const PolicyRecovery rec = recover_policy(gamma, tol);
    const double residual = recursion_residual(dist.mu, rec.policy, lambda, 0.5);
    if (residual > 100.0 * tol) {
        std::ostringstream os;
        os << "recovered marginals violate the stationary recursion (residual "
           << residual << " > " << 100.0 * tol << "); solver output is inconsistent";
        throw std::runtime_error(os.str());
    }
    return dist;
}

OccupationMeasure occupation_from_values(std::span<const double> values, int x_max) {
    if (static_cast<int>(values.size()) < 4 * (x_max + 1))
        throw std::invalid_argument("solution vector shorter than occupation measure");
    OccupationMeasure gamma(x_max);
    for (int x = 0; x <= x_max; ++x)
        for (int i = 1; i <= 2; ++i)
            for (int s = 0; s <= 1; ++s)
                gamma.at(s, i, x) = std::max(values[static_cast<size_t>(lp_var_index(s, i, x))], 0.0);
    return gamma;
}

OccupationMeasure embed_policy(const Policy& policy, const StationaryDist& dist) {
    if (static_cast<int>(dist.mu.size()) != policy.x_max + 1)
        throw std::invalid_argument("policy and distribution sizes differ");
    OccupationMeasure gamma(policy.x_max);
    for (int x = 0; x <= policy.x_max; ++x) {
        const double half_mu = 0.5 * dist.mu[static_cast<size_t>(x)];
        for (int i = 1; i <= 2; ++i) {
            const double sigma = policy.admit(i, x);
            gamma.at(1, i, x) = half_mu * sigma;
            gamma.at(0, i, x) = half_mu * (1.0 - sigma);
        }
    }
    return gamma;
}

DesignSolution assemble_solution(const LpProblem& problem, const LpSolution& solution,
                                 const ModelConfig& config) {
    if (solution.status != LpStatus::optimal) {
        ResidualReport rep;
        if (!solution.values.empty()) rep = check_solution(problem, solution.values);
        std::ostringstream os;
        os << "designer LP did not reach an optimum (status " << to_string(solution.status)
           << ", max residual " << rep.worst() << ")";
        throw SolverFailure(solution.status, rep, os.str());
    }

    DesignSolution out;
    out.config = config;
    out.occupation = occupation_from_values(solution.values, config.x_max);
    const double u = solution.values[static_cast<size_t>(lp_offset_index(config.x_max))];
    const double t0 = -u;

    PolicyRecovery rec = recover_policy(out.occupation, config.tol);
    out.policy = std::move(rec.policy);
    out.mu = recover_marginals(out.occupation, config.lambda, config.reward, config.tol);

    const auto [q1, q2] = allocations(out.policy, out.mu, config.reward);
    out.taxes = build_taxes(t0, q1, q2);
    out.incentives =
        verify_incentives(out.taxes, q1, q2, out.mu.vbar, config.price, kIncentiveTol);
    out.objective_value = solution.objective;

    out.diagnostics.residuals = check_solution(problem, solution.values);
    out.diagnostics.iterations = solution.iterations;
    out.diagnostics.tail_mass = out.mu.tail_mass;
    out.diagnostics.recursion_residual =
        recursion_residual(out.mu.mu, out.policy, config.lambda, config.type_prior);
    out.diagnostics.unreachable_states = std::move(rec.unreachable_states);
    for (int x = 0; x <= config.x_max; ++x)
        if (out.mu.mu[static_cast<size_t>(x)] <= config.tol)
            out.diagnostics.degenerate_states.push_back(x);
    return out;
}

}  // namespace qdesign
