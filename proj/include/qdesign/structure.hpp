#pragma once

#include <optional>

#include "qdesign/lp_builder.hpp"
#include "qdesign/model.hpp"

namespace qdesign {

// Structural classification of a solved recommendation policy. Case 1 is
// the priority pattern (below the reward sign change, admitting the low
// type forces the high type in with probability 1, and symmetrically
// above); case 2 is a common signal with blocking threshold xtilde and a
// small exceptional set tied to the eps1/psi linear system. The two
// patterns can overlap; the common-signal shape is reported as case 2.
enum class StructureCase { case1, case2, indeterminate };
const char* to_string(StructureCase c);

struct Case1Violation {
    int x = 0;
    double v_x = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    std::string detail;
};

// One admissible exceptional-set hypothesis: the states, the solved
// (eps1, psi), and whether a single equation left the pair underdetermined
// (in which case eps1 = 1 is a representative of the feasible half-line).
struct ExceptionalCandidate {
    std::vector<int> states;
    double eps1 = 0.0;
    double psi = 0.0;
    bool underdetermined = false;
};

struct StructureReport {
    StructureCase found = StructureCase::indeterminate;
    std::optional<int> x0;  // sign threshold of v
    bool reward_monotone = true;
    std::vector<Case1Violation> case1_violations;
    std::optional<int> xtilde;
    std::vector<int> exceptional_set;
    std::optional<double> epsilon1;
    std::optional<double> psi;
    bool eps1_underdetermined = false;
    // Residual of each exceptional state's balance equation, normalized by
    // sum_{x<=x_k} lambda^x so a single tolerance is meaningful at any x_k.
    std::vector<double> residuals;
};

// Priority-pattern check restricted to reachable states (mu(x) > tol);
// states with |v(x)| <= tol are exempt. Never throws.
std::vector<Case1Violation> check_case1(const Policy& policy, std::span<const double> mu,
                                        const RewardFn& reward, double tol);
std::vector<Case1Violation> check_case1(const DesignSolution& solution, double tol);

// Smallest x with sigma(1|y,i) <= tol for all y >= x and both types.
std::optional<int> find_xtilde(const Policy& policy, double tol);

// Solves the exceptional-set equations for a given state set:
//   (2 sum_{x<=x_k} lambda^x v(x)) eps1 + (sum_{x<=x_k} lambda^x) psi
//     = sum_{x<x_k} lambda^x v(x)        for every x_k in the set.
// One state leaves a feasible half-line (any eps1 > 0 works); two states
// give an exact solve; more are fit by least squares with per-equation
// residuals. Returns nullopt when no eps1 > 0 satisfies the system.
struct ExceptionalFit {
    double eps1 = 0.0;
    double psi = 0.0;
    bool underdetermined = false;
    std::vector<double> residuals;
};
std::optional<ExceptionalFit> fit_exceptional_states(const std::vector<int>& states,
                                                     const RewardFn& reward, double lambda);

// The O(xtilde^2) search: every single state and pair below xtilde is
// tested and the admissible candidates (eps1 > 0; pairs additionally
// nonsingular) are reported. Singular pairs are skipped.
std::vector<ExceptionalCandidate> solve_exceptional_system(int xtilde,
                                                           const RewardFn& reward,
                                                           double lambda);

StructureReport classify(const Policy& policy, std::span<const double> mu,
                         const RewardFn& reward, double lambda, double tol);
StructureReport classify(const DesignSolution& solution, double tol);

}  // namespace qdesign
