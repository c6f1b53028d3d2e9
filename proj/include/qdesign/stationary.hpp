#pragma once

#include <span>

#include "qdesign/model.hpp"

namespace qdesign {

// Stationary law of the queue backlog under a recommendation policy,
// truncated to 0..x_max. Satisfies the birth-death balance
//   mu(x+1) = lambda * mu(x) * (P1*sigma(1|x,1) + P2*sigma(1|x,2))
// on the truncated range, with state x_max reflecting from above.
struct StationaryDist {
    std::vector<double> mu;
    double tail_mass = 0.0;  // mu[x_max]
    double vbar = 0.0;       // sum_x v(x) mu(x)
};

// Forward recursion from mu(0)=1 followed by normalization. Weights are
// accumulated in scaled arithmetic (power-of-two rescaling, which keeps
// ratios exact) so lambda > 1 cannot overflow below the blocking state.
StationaryDist stationary_distribution(const Policy& policy, double lambda,
                                       double type_prior, int x_max, double tol,
                                       const RewardFn& reward);

double expected_reward(std::span<const double> mu, const RewardFn& reward);
double expected_reward(const StationaryDist& dist, const RewardFn& reward);

// Largest balance-equation violation |mu(x+1) - lambda*mu(x)*mean_admit(x)|
// over x < x_max. Used by solution validation and file-level verification.
double recursion_residual(std::span<const double> mu, const Policy& policy,
                          double lambda, double type_prior);

}  // namespace qdesign
