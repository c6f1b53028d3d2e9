#include "qdesign/structure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdesign {

namespace {

// Coefficients of one exceptional-state equation, pre-normalized by the
// geometric weight sum B = sum_{x<=x_k} lambda^x (B > 0 always):
//   a * eps1 + psi = c.
struct EqCoeffs {
    double a = 0.0;
    double c = 0.0;
};

EqCoeffs equation_for(int x_k, const RewardFn& reward, double lambda) {
    double weight = 1.0;
    double a_raw = 0.0, b_raw = 0.0, c_raw = 0.0;
    for (int x = 0; x <= x_k; ++x) {
        const double vx = reward(x);
        a_raw += 2.0 * weight * vx;
        b_raw += weight;
        if (x < x_k) c_raw += weight * vx;
        weight *= lambda;
    }
    return {a_raw / b_raw, c_raw / b_raw};
}

}  // namespace

const char* to_string(StructureCase c) {
    switch (c) {
        case StructureCase::case1: return "case1";
        case StructureCase::case2: return "case2";
        case StructureCase::indeterminate: return "indeterminate";
    }
    return "unknown";
}

std::vector<Case1Violation> check_case1(const Policy& policy, std::span<const double> mu,
                                        const RewardFn& reward, double tol) {
    std::vector<Case1Violation> out;
    const int n = static_cast<int>(mu.size());
    for (int x = 0; x < n; ++x) {
        if (mu[static_cast<size_t>(x)] <= tol) continue;
        const double vx = reward(x);
        if (std::abs(vx) <= tol) continue;
        const double s1 = policy.admit(1, x);
        const double s2 = policy.admit(2, x);
        if (vx > 0.0 && s1 > tol && s2 < 1.0 - tol) {
            std::ostringstream os;
            os << "x=" << x << ": v>0 and sigma(1|x,1)=" << s1
               << " > 0 but sigma(1|x,2)=" << s2 << " < 1";
            out.push_back({x, vx, s1, s2, os.str()});
        }
        if (vx < 0.0 && s2 > tol && s1 < 1.0 - tol) {
            std::ostringstream os;
            os << "x=" << x << ": v<0 and sigma(1|x,2)=" << s2
               << " > 0 but sigma(1|x,1)=" << s1 << " < 1";
            out.push_back({x, vx, s1, s2, os.str()});
        }
    }
    return out;
}

std::vector<Case1Violation> check_case1(const DesignSolution& solution, double tol) {
    return check_case1(solution.policy, solution.mu.mu, solution.config.reward, tol);
}

std::optional<int> find_xtilde(const Policy& policy, double tol) {
    int cut = policy.x_max + 1;
    for (int x = policy.x_max; x >= 0; --x) {
        if (policy.admit(1, x) > tol || policy.admit(2, x) > tol) break;
        cut = x;
    }
    if (cut > policy.x_max) return std::nullopt;
    return cut;
}

std::optional<ExceptionalFit> fit_exceptional_states(const std::vector<int>& states,
                                                     const RewardFn& reward, double lambda) {
    ExceptionalFit fit;
    if (states.empty()) {
        fit.underdetermined = true;
        fit.eps1 = 1.0;
        fit.psi = 0.0;
        return fit;
    }
    std::vector<EqCoeffs> eqs;
    eqs.reserve(states.size());
    for (int x_k : states) eqs.push_back(equation_for(x_k, reward, lambda));

    if (eqs.size() == 1) {
        // Underdetermined: every eps1 > 0 admits a psi. Report eps1 = 1.
        fit.underdetermined = true;
        fit.eps1 = 1.0;
        fit.psi = eqs[0].c - eqs[0].a;
        fit.residuals = {0.0};
        return fit;
    }

    // Least squares on [a_k 1][eps1 psi]' = c_k; exact for a nonsingular
    // pair. Normal equations suffice at 2 unknowns.
    double saa = 0.0, sa = 0.0, sn = 0.0, sac = 0.0, sc = 0.0;
    for (const auto& e : eqs) {
        saa += e.a * e.a;
        sa += e.a;
        sn += 1.0;
        sac += e.a * e.c;
        sc += e.c;
    }
    const double det = saa * sn - sa * sa;
    if (std::abs(det) < 1e-12) {
        // All equations share the same slope. Consistent right-hand sides
        // collapse to the single-equation case; otherwise no solution.
        for (const auto& e : eqs)
            if (std::abs(e.c - eqs[0].c) > 1e-9 || std::abs(e.a - eqs[0].a) > 1e-9)
                return std::nullopt;
        fit.underdetermined = true;
        fit.eps1 = 1.0;
        fit.psi = eqs[0].c - eqs[0].a;
        fit.residuals.assign(eqs.size(), 0.0);
        return fit;
    }
    fit.eps1 = (sac * sn - sc * sa) / det;
    fit.psi = (saa * sc - sa * sac) / det;
    fit.residuals.reserve(eqs.size());
    for (const auto& e : eqs) fit.residuals.push_back(e.a * fit.eps1 + fit.psi - e.c);
    if (!(fit.eps1 > 0.0)) return std::nullopt;
    return fit;
}

std::vector<ExceptionalCandidate> solve_exceptional_system(int xtilde,
                                                           const RewardFn& reward,
                                                           double lambda) {
    std::vector<ExceptionalCandidate> out;
    std::vector<EqCoeffs> eqs(static_cast<size_t>(std::max(xtilde, 0)));
    for (int x = 0; x < xtilde; ++x) eqs[static_cast<size_t>(x)] = equation_for(x, reward, lambda);

    for (int x1 = 0; x1 < xtilde; ++x1) {
        // Single state: one equation in (eps1, psi) -- a feasible half-line.
        out.push_back({{x1}, 1.0, eqs[static_cast<size_t>(x1)].c - eqs[static_cast<size_t>(x1)].a, true});
        for (int x2 = x1 + 1; x2 < xtilde; ++x2) {
            const auto& e1 = eqs[static_cast<size_t>(x1)];
            const auto& e2 = eqs[static_cast<size_t>(x2)];
            const double det = e1.a - e2.a;
            if (std::abs(det) < 1e-12) continue;  // singular pair: skipped
            const double eps1 = (e1.c - e2.c) / det;
            if (!(eps1 > 0.0)) continue;
            const double psi = e1.c - e1.a * eps1;
            out.push_back({{x1, x2}, eps1, psi, false});
        }
    }
    return out;
}

StructureReport classify(const Policy& policy, std::span<const double> mu,
                         const RewardFn& reward, double lambda, double tol) {
    StructureReport rep;
    const SignThreshold st = sign_threshold(reward, policy.x_max);
    rep.x0 = st.x0;
    rep.reward_monotone = st.monotone;
    rep.case1_violations = check_case1(policy, mu, reward, tol);
    rep.xtilde = find_xtilde(policy, tol);

    // Common-signal shape first: full admission below the blocking
    // threshold except for an exceptional set that must solve the
    // (eps1, psi) system. The paper's priority pattern and this shape can
    // both hold (no blocking exceptions at all); such solutions read as the
    // degenerate common-signal case.
    if (rep.xtilde) {
        std::vector<int> candidates;
        for (int x = 0; x < *rep.xtilde; ++x) {
            if (mu[static_cast<size_t>(x)] <= tol) continue;
            if (policy.admit(1, x) < 1.0 - tol || policy.admit(2, x) < 1.0 - tol)
                candidates.push_back(x);
        }
        const auto fit = fit_exceptional_states(candidates, reward, lambda);
        bool residuals_ok = fit.has_value();
        if (fit)
            for (double r : fit->residuals)
                if (std::abs(r) > tol) residuals_ok = false;
        if (fit && residuals_ok) {
            rep.found = StructureCase::case2;
            rep.exceptional_set = std::move(candidates);
            if (!rep.exceptional_set.empty()) {
                rep.epsilon1 = fit->eps1;
                rep.psi = fit->psi;
                rep.eps1_underdetermined = fit->underdetermined;
            }
            rep.residuals = fit->residuals;
            return rep;
        }
    }

    rep.found = rep.case1_violations.empty() ? StructureCase::case1
                                             : StructureCase::indeterminate;
    return rep;
}

StructureReport classify(const DesignSolution& solution, double tol) {
    return classify(solution.policy, solution.mu.mu, solution.config.reward,
                    solution.config.lambda, tol);
}

}  // namespace qdesign
