#include "qdesign/stationary.hpp"

#include <cmath>
#include <stdexcept>

namespace qdesign {

namespace {
// 2^332 ~ 8.7e99. Rescaling by a power of two is exact in binary floating
// point, so the normalized distribution is identical to what unbounded
// arithmetic would give.
constexpr double kRescaleAbove = 0x1p332;
constexpr double kRescaleFactor = 0x1p-332;
}  // namespace

StationaryDist stationary_distribution(const Policy& policy, double lambda,
                                       double type_prior, int x_max, double tol,
                                       const RewardFn& reward) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    if (policy.x_max != x_max) throw std::invalid_argument("policy does not cover 0..x_max");
    policy.validate();

    const size_t n = static_cast<size_t>(x_max) + 1;
    std::vector<double> w(n, 0.0);
    w[0] = 1.0;
    for (int x = 0; x < x_max; ++x) {
        const double next = lambda * w[static_cast<size_t>(x)] * policy.mean_admit(x, type_prior);
        if (!std::isfinite(next))
            throw std::runtime_error("non-finite weight in stationary recursion");
        w[static_cast<size_t>(x) + 1] = next;
        if (next > kRescaleAbove)
            for (int y = 0; y <= x + 1; ++y) w[static_cast<size_t>(y)] *= kRescaleFactor;
    }

    double total = 0.0;
    for (double wx : w) total += wx;
    // w[0] seeds at 1, so total >= the (possibly rescaled) seed > 0.
    StationaryDist out;
    out.mu.resize(n);
    for (size_t x = 0; x < n; ++x) out.mu[x] = w[x] / total;
    out.tail_mass = out.mu[n - 1];
    out.vbar = expected_reward(out.mu, reward);
    (void)tol;
    return out;
}

double expected_reward(std::span<const double> mu, const RewardFn& reward) {
    double acc = 0.0;
    for (size_t x = 0; x < mu.size(); ++x) acc += reward(static_cast<int>(x)) * mu[x];
    return acc;
}

double expected_reward(const StationaryDist& dist, const RewardFn& reward) {
    return expected_reward(dist.mu, reward);
}

double recursion_residual(std::span<const double> mu, const Policy& policy,
                          double lambda, double type_prior) {
    double worst = 0.0;
    for (size_t x = 0; x + 1 < mu.size(); ++x) {
        const double predicted =
            lambda * mu[x] * policy.mean_admit(static_cast<int>(x), type_prior);
        worst = std::max(worst, std::abs(mu[x + 1] - predicted));
    }
    return worst;
}

}  // namespace qdesign
