#include "qdesign/model.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace qdesign {

RewardFn RewardFn::quadratic(double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("reward scale must be > 0");
    RewardFn r;
    r.kind = Kind::quadratic;
    r.scale = scale;
    return r;
}

RewardFn RewardFn::table(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("reward table must be nonempty");
    RewardFn r;
    r.kind = Kind::table;
    r.values = std::move(values);
    return r;
}

double RewardFn::operator()(int x) const {
    if (x < 0) throw std::out_of_range("reward queried at negative state");
    if (kind == Kind::quadratic) {
        const double z = static_cast<double>(x) / scale;
        return 1.0 - z * z;
    }
    if (x >= static_cast<int>(values.size()))
        throw std::out_of_range("reward table has no value for state " + std::to_string(x));
    return values[static_cast<size_t>(x)];
}

double reward_at(const RewardFn& reward, int x) { return reward(x); }

SignThreshold sign_threshold(const RewardFn& reward, int x_max) {
    SignThreshold out;
    double prev = reward(0);
    for (int x = 0; x <= x_max; ++x) {
        const double vx = reward(x);
        if (vx > prev) out.monotone = false;
        prev = vx;
        if (vx <= 0.0 && !out.x0) out.x0 = x;
    }
    return out;
}

int outside_option(int type, double vbar, double price) {
    if (type != 1 && type != 2) throw std::invalid_argument("type must be 1 or 2");
    return (static_cast<double>(type) * vbar - price >= 0.0) ? 1 : 0;
}

Policy::Policy(int x_max_, double fill1, double fill2)
    : x_max(x_max_),
      admit1(static_cast<size_t>(x_max_) + 1, fill1),
      admit2(static_cast<size_t>(x_max_) + 1, fill2) {}

Policy Policy::threshold(int x_max, int cutoff1, int cutoff2) {
    Policy p(x_max, 0.0, 0.0);
    for (int x = 0; x <= x_max; ++x) {
        if (x < cutoff1) p.admit1[static_cast<size_t>(x)] = 1.0;
        if (x < cutoff2) p.admit2[static_cast<size_t>(x)] = 1.0;
    }
    return p;
}

double Policy::admit(int type, int x) const {
    const auto& a = (type == 1) ? admit1 : admit2;
    return a.at(static_cast<size_t>(x));
}

void Policy::set_admit(int type, int x, double prob) {
    auto& a = (type == 1) ? admit1 : admit2;
    a.at(static_cast<size_t>(x)) = prob;
}

double Policy::mean_admit(int x, double type_prior) const {
    const size_t ix = static_cast<size_t>(x);
    return type_prior * admit1.at(ix) + (1.0 - type_prior) * admit2.at(ix);
}

void Policy::validate() const {
    const size_t n = static_cast<size_t>(x_max) + 1;
    if (admit1.size() != n || admit2.size() != n)
        throw std::invalid_argument("policy vectors do not match x_max");
    for (const auto& vec : {admit1, admit2})
        for (double a : vec)
            if (!(a >= 0.0 && a <= 1.0))
                throw std::invalid_argument("admission probability outside [0,1]");
}

double TaxSchedule::tax(int type) const {
    if (type == 1) return t1;
    if (type == 2) return t2;
    throw std::invalid_argument("type must be 1 or 2");
}

void ModelConfig::validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    if (!(price >= 0.0)) throw std::invalid_argument("price must be >= 0");
    if (!(type_prior >= 0.0 && type_prior <= 1.0))
        throw std::invalid_argument("type_prior must lie in [0,1]");
    if (x_max < 1) throw std::invalid_argument("x_max must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (reward.kind == RewardFn::Kind::table &&
        static_cast<int>(reward.values.size()) < x_max + 1)
        throw std::invalid_argument("reward table shorter than x_max+1");
}

ModelConfig parse_config_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    ModelConfig cfg;
    if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
    if (j.contains("price")) cfg.price = j.at("price").get<double>();
    if (j.contains("type_prior")) cfg.type_prior = j.at("type_prior").get<double>();
    if (j.contains("x_max")) cfg.x_max = j.at("x_max").get<int>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("reward")) {
        const auto& r = j.at("reward");
        const std::string kind = r.at("kind").get<std::string>();
        if (kind == "quadratic") {
            cfg.reward = RewardFn::quadratic(r.value("scale", 50.0));
        } else if (kind == "table") {
            cfg.reward = RewardFn::table(r.at("values").get<std::vector<double>>());
        } else {
            throw std::invalid_argument("unknown reward kind: " + kind);
        }
    }
    cfg.validate();
    return cfg;
}

double expected_utility_report(int true_type, int reported_type,
                               std::span<const double> mu, const Policy& policy,
                               const TaxSchedule& taxes, const RewardFn& reward,
                               double tol) {
    if (true_type < 1 || true_type > 2 || reported_type < 1 || reported_type > 2)
        throw std::invalid_argument("types must be 1 or 2");
    double total = 0.0;
    for (double m : mu) total += m;
    if (std::abs(total - 1.0) > tol)
        throw std::invalid_argument("mu does not sum to 1 within tol");

    double expect = 0.0;
    const int n = static_cast<int>(mu.size());
    for (int x = 0; x < n; ++x)
        expect += static_cast<double>(true_type) * reward(x) * mu[static_cast<size_t>(x)] *
                  policy.admit(reported_type, x);
    return expect - taxes.tax(reported_type);
}

}  // namespace qdesign
