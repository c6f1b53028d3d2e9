#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qdesign {

// Per-state reward v(x) earned by a joining user, weighted by her type.
// Either the quadratic family v(x) = 1 - (x/scale)^2 or an explicit table.
// v is expected to be decreasing in x and may go negative.
struct RewardFn {
    enum class Kind { quadratic, table };

    Kind kind = Kind::quadratic;
    double scale = 50.0;
    std::vector<double> values;  // table form only, indexed by state

    static RewardFn quadratic(double scale);
    static RewardFn table(std::vector<double> values);

    // v(x). Table form throws std::out_of_range for x outside 0..size-1.
    double operator()(int x) const;
};

double reward_at(const RewardFn& reward, int x);

// Smallest state with v(x) <= 0, or nullopt if v stays positive on 0..x_max.
// A non-monotone table still reports the first sign change but clears the
// `monotone` flag so callers can distrust threshold semantics.
struct SignThreshold {
    std::optional<int> x0;
    bool monotone = true;
};

SignThreshold sign_threshold(const RewardFn& reward, int x_max);

// Join/balk decision of a user who opted out of the mechanism:
// 1 iff type * vbar - price >= 0 (indifference joins).
int outside_option(int type, double vbar, double price);

// Admission recommendation probabilities sigma(1|x,i) for both types over
// the truncated state range 0..x_max.
struct Policy {
    int x_max = 0;
    std::vector<double> admit1;  // type 1, size x_max+1
    std::vector<double> admit2;  // type 2, size x_max+1

    Policy() = default;
    Policy(int x_max, double fill1, double fill2);

    static Policy never(int x_max) { return Policy(x_max, 0.0, 0.0); }
    static Policy always(int x_max) { return Policy(x_max, 1.0, 1.0); }
    // Admit with probability 1 strictly below the per-type cutoff state.
    static Policy threshold(int x_max, int cutoff1, int cutoff2);

    double admit(int type, int x) const;
    void set_admit(int type, int x, double prob);
    // P_I(1)*sigma(1|x,1) + P_I(2)*sigma(1|x,2)
    double mean_admit(int x, double type_prior) const;
    void validate() const;  // entries in [0,1], sizes consistent
};

// Two-part tariff: t1 = t0 + q1 and t2 = t0 + 2*q2 - q1 hold by
// construction (see incentives::build_taxes).
struct TaxSchedule {
    double t0 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;

    double tax(int type) const;
};

struct ModelConfig {
    double lambda = 1.2;      // arrival rate, > 0
    double price = 0.0;       // outside service price, >= 0
    double type_prior = 0.5;  // P(type = 1)
    RewardFn reward = RewardFn::quadratic(50.0);
    int x_max = 200;          // truncation level, >= 1
    double tol = 1e-9;

    void validate() const;  // throws std::invalid_argument on bad fields
};

// Parses {"lambda":..,"price":..,"type_prior":..,
//         "reward":{"kind":"quadratic","scale":..}|{"kind":"table","values":[..]},
//         "x_max":..,"tol":..}. Missing keys fall back to the defaults above.
ModelConfig parse_config_json(const std::string& text);

// Expected utility of a user with `true_type` reporting `reported_type`:
//   sum_x true_type * v(x) * mu(x) * sigma(1|x,reported_type) - t(reported_type).
// Requires mu to sum to 1 within tol.
double expected_utility_report(int true_type, int reported_type,
                               std::span<const double> mu, const Policy& policy,
                               const TaxSchedule& taxes, const RewardFn& reward,
                               double tol = 1e-9);

}  // namespace qdesign
