#pragma once

#include <utility>

#include "qdesign/model.hpp"
#include "qdesign/stationary.hpp"

namespace qdesign {

// Truth-telling margins. slack_1_reports_2 is the utility a type-1 user
// loses by claiming type 2 (equals q2 - q1 under build_taxes); the reverse
// deviation is exactly tax-neutral, so slack_2_reports_1 is identically 0
// for the constructed schedule. Both are reported, not assumed.
struct DsicReport {
    bool ok = false;
    bool monotone_ok = false;  // q2 >= q1 - tol
    double slack_1_reports_2 = 0.0;
    double slack_2_reports_1 = 0.0;
};

// Participation margins against the outside option (a)+ = max(a,0):
//   slack_1 = -t0 - (vbar - price)+
//   slack_2 = q1 - t0 - (2*vbar - price)+
struct IrReport {
    bool ok = false;
    double slack_1 = 0.0;
    double slack_2 = 0.0;
};

struct IncentiveReport {
    DsicReport dsic;
    IrReport ir;
    bool ok() const { return dsic.ok && ir.ok; }
};

// Default tolerance for incentive verification. Looser than the solver
// tolerance because optimal solutions sit exactly on constraint boundaries.
inline constexpr double kIncentiveTol = 1e-7;

// Per-type allocation q(i) = sum_x v(x) mu(x) sigma(1|x,i).
std::pair<double, double> allocations(const Policy& policy, const StationaryDist& dist,
                                      const RewardFn& reward);

// Revenue-maximizing schedule for given allocations:
//   t1 = t0 + q1,  t2 = t0 + 2*q2 - q1.
TaxSchedule build_taxes(double t0, double q1, double q2);

// Verification never throws; it reports slacks and flags.
DsicReport verify_dsic(const TaxSchedule& taxes, double q1, double q2,
                       double tol = kIncentiveTol);
IrReport verify_ir(const TaxSchedule& taxes, double q1, double vbar, double price,
                   double tol = kIncentiveTol);
IncentiveReport verify_incentives(const TaxSchedule& taxes, double q1, double q2,
                                  double vbar, double price, double tol = kIncentiveTol);

// Designer revenue lambda * (P1*t1 + P2*t2); reduces to lambda*(t0+q2)
// under the uniform prior.
double revenue(const TaxSchedule& taxes, double lambda, double type_prior);

// Revenue ceiling lambda*price/2 of running the queue with no
// recommendations (only type 2 joins, at rate lambda/2).
double outside_option_revenue(double lambda, double price);

}  // namespace qdesign
