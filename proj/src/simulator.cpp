#include "qdesign/simulator.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>

namespace qdesign {

namespace {

// Hand-rolled uniform/exponential draws so replicas are reproducible
// independent of the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

private:
    std::mt19937_64 eng_;
};

}  // namespace

SimStats simulate(const ModelConfig& config, const Policy& policy,
                  const TaxSchedule& taxes, double horizon, std::uint64_t seed) {
    if (!std::isfinite(horizon) || horizon <= 0.0)
        throw std::invalid_argument("simulation horizon must be finite and > 0");
    config.validate();
    policy.validate();

    // Best responses against the committed mechanism: the participation
    // decision uses the analytic stationary law, not simulated beliefs.
    const StationaryDist analytic = stationary_distribution(
        policy, config.lambda, config.type_prior, config.x_max, config.tol, config.reward);
    const auto [q1, q2] = allocations(policy, analytic, config.reward);
    (void)q2;
    const IrReport ir = verify_ir(taxes, q1, analytic.vbar, config.price, kIncentiveTol);
    const std::array<bool, 2> participates = {ir.slack_1 >= -kIncentiveTol,
                                              ir.slack_2 >= -kIncentiveTol};
    const std::array<int, 2> self_join = {outside_option(1, analytic.vbar, config.price),
                                          outside_option(2, analytic.vbar, config.price)};

    Rng rng(seed);
    SimStats stats;
    stats.seed = seed;
    stats.empirical_mu.assign(static_cast<size_t>(config.x_max) + 1, 0.0);

    int backlog = 0;
    std::deque<int> queue_types;
    double now = 0.0;
    double next_arrival = rng.exponential(config.lambda);
    double next_service = std::numeric_limits<double>::infinity();

    auto dwell = [&](double until) {
        stats.empirical_mu[static_cast<size_t>(backlog)] += until - now;
        now = until;
    };

    while (true) {
        const double next_event = std::min(next_arrival, next_service);
        if (next_event >= horizon) {
            dwell(horizon);
            break;
        }
        dwell(next_event);

        if (next_arrival <= next_service) {
            const int type = (rng.uniform() < config.type_prior) ? 1 : 2;
            const size_t ti = static_cast<size_t>(type - 1);
            ++stats.arrivals[ti];

            bool wants_join = false;
            if (participates[ti]) {
                stats.taxes_collected += taxes.tax(type);
                wants_join = rng.uniform() < policy.admit(type, backlog);
            } else {
                wants_join = self_join[ti] == 1;
            }

            if (wants_join && backlog >= config.x_max) {
                ++stats.truncation_balks;
                wants_join = false;
            }
            if (wants_join) {
                ++stats.joins[ti];
                if (backlog == 0) next_service = now + rng.exponential(1.0);
                ++backlog;
                queue_types.push_back(type);
            } else {
                ++stats.balks[ti];
            }
            next_arrival = now + rng.exponential(config.lambda);
        } else {
            ++stats.services[static_cast<size_t>(queue_types.front() - 1)];
            queue_types.pop_front();
            --backlog;
            next_service = (backlog > 0) ? now + rng.exponential(1.0)
                                         : std::numeric_limits<double>::infinity();
        }
    }

    stats.sim_time = horizon;
    double weight = 0.0;
    for (double w : stats.empirical_mu) weight += w;
    for (double& w : stats.empirical_mu) w /= weight;
    stats.revenue_rate = stats.taxes_collected / horizon;
    return stats;
}

double empirical_revenue(const SimStats& stats) {
    if (!(stats.sim_time > 0.0)) throw std::invalid_argument("sim_time must be > 0");
    return stats.taxes_collected / stats.sim_time;
}

SimStats merge_replicas(std::span<const SimStats> replicas) {
    if (replicas.empty()) throw std::invalid_argument("no replicas to merge");
    SimStats out;
    out.seed = replicas.front().seed;
    out.empirical_mu.assign(replicas.front().empirical_mu.size(), 0.0);
    for (const auto& r : replicas) {
        if (r.empirical_mu.size() != out.empirical_mu.size())
            throw std::invalid_argument("replica state spaces differ");
        for (size_t x = 0; x < r.empirical_mu.size(); ++x)
            out.empirical_mu[x] += r.empirical_mu[x] * r.sim_time;
        for (size_t t = 0; t < 2; ++t) {
            out.arrivals[t] += r.arrivals[t];
            out.joins[t] += r.joins[t];
            out.balks[t] += r.balks[t];
            out.services[t] += r.services[t];
        }
        out.truncation_balks += r.truncation_balks;
        out.taxes_collected += r.taxes_collected;
        out.sim_time += r.sim_time;
    }
    for (double& w : out.empirical_mu) w /= out.sim_time;
    out.revenue_rate = out.taxes_collected / out.sim_time;
    return out;
}

double tv_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector lengths differ");
    double l1 = 0.0;
    for (size_t i = 0; i < a.size(); ++i) l1 += std::abs(a[i] - b[i]);
    return 0.5 * l1;
}

double revenue_rate_stderr(const TaxSchedule& taxes, double lambda, double type_prior,
                           double horizon) {
    const double second_moment =
        type_prior * taxes.t1 * taxes.t1 + (1.0 - type_prior) * taxes.t2 * taxes.t2;
    return std::sqrt(lambda * second_moment / horizon);
}

}  // namespace qdesign
