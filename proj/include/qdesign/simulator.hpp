#pragma once

#include <array>
#include <cstdint>

#include "qdesign/incentives.hpp"
#include "qdesign/model.hpp"
#include "qdesign/stationary.hpp"

namespace qdesign {

// Continuous-time event simulation of the queue under a committed
// mechanism. Serves as an independent oracle for the stationary law and
// the realized revenue stream.
struct SimStats {
    std::vector<double> empirical_mu;  // time-weighted occupancy, sums to 1
    std::array<long, 2> arrivals{};    // index 0 <-> type 1
    std::array<long, 2> joins{};
    std::array<long, 2> balks{};
    std::array<long, 2> services{};
    long truncation_balks = 0;  // joins forced to balk at the capacity cap
    double taxes_collected = 0.0;
    double revenue_rate = 0.0;
    std::uint64_t seed = 0;
    double sim_time = 0.0;
};

// Poisson arrivals at rate lambda, unit-rate service. Each arrival draws a
// type from the prior; types whose participation constraint holds (judged
// against the analytic stationary law of the committed policy) report
// truthfully, pay t(type) whether or not they are told to join, and follow
// the recommendation. Non-participants join on their own exactly when
// type*vbar >= price. The backlog is capped at x_max; a join at the cap is
// counted and balked.
SimStats simulate(const ModelConfig& config, const Policy& policy,
                  const TaxSchedule& taxes, double horizon, std::uint64_t seed);

double empirical_revenue(const SimStats& stats);

// Time-weighted average of replicas, in the given (seed) order.
SimStats merge_replicas(std::span<const SimStats> replicas);

// Half the L1 distance between two probability vectors of equal length.
double tv_distance(std::span<const double> a, std::span<const double> b);

// Standard error of the revenue-rate estimator when every arrival pays:
// the tax stream is compound Poisson, so var = lambda E[t^2] / horizon.
double revenue_rate_stderr(const TaxSchedule& taxes, double lambda, double type_prior,
                           double horizon);

}  // namespace qdesign
