#include "qdesign/incentives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdesign {

std::pair<double, double> allocations(const Policy& policy, const StationaryDist& dist,
                                      const RewardFn& reward) {
    if (static_cast<int>(dist.mu.size()) != policy.x_max + 1)
        throw std::invalid_argument("policy and distribution sizes differ");
    double q1 = 0.0, q2 = 0.0;
    for (int x = 0; x <= policy.x_max; ++x) {
        const double vm = reward(x) * dist.mu[static_cast<size_t>(x)];
        q1 += vm * policy.admit(1, x);
        q2 += vm * policy.admit(2, x);
    }
    return {q1, q2};
}

TaxSchedule build_taxes(double t0, double q1, double q2) {
    TaxSchedule t;
    t.t0 = t0;
    t.q1 = q1;
    t.q2 = q2;
    t.t1 = t0 + q1;
    t.t2 = t0 + 2.0 * q2 - q1;
    return t;
}

DsicReport verify_dsic(const TaxSchedule& taxes, double q1, double q2, double tol) {
    DsicReport r;
    r.monotone_ok = q2 >= q1 - tol;
    // Truthful utility minus misreport utility, from
    // E u(i, report m) = i*q(m) - t(m).
    const double u11 = 1.0 * q1 - taxes.t1;
    const double u12 = 1.0 * q2 - taxes.t2;
    const double u21 = 2.0 * q1 - taxes.t1;
    const double u22 = 2.0 * q2 - taxes.t2;
    r.slack_1_reports_2 = u11 - u12;
    r.slack_2_reports_1 = u22 - u21;
    r.ok = r.monotone_ok && r.slack_1_reports_2 >= -tol && r.slack_2_reports_1 >= -tol;
    return r;
}

IrReport verify_ir(const TaxSchedule& taxes, double q1, double vbar, double price,
                   double tol) {
    IrReport r;
    r.slack_1 = -taxes.t0 - std::max(vbar - price, 0.0);
    r.slack_2 = q1 - taxes.t0 - std::max(2.0 * vbar - price, 0.0);
    r.ok = r.slack_1 >= -tol && r.slack_2 >= -tol;
    return r;
}

IncentiveReport verify_incentives(const TaxSchedule& taxes, double q1, double q2,
                                  double vbar, double price, double tol) {
    IncentiveReport report;
    report.dsic = verify_dsic(taxes, q1, q2, tol);
    report.ir = verify_ir(taxes, q1, vbar, price, tol);
    return report;
}

double revenue(const TaxSchedule& taxes, double lambda, double type_prior) {
    return lambda * (type_prior * taxes.t1 + (1.0 - type_prior) * taxes.t2);
}

double outside_option_revenue(double lambda, double price) {
    return lambda * price / 2.0;
}

}  // namespace qdesign
