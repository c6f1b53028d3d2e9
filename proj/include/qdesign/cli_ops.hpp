#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "qdesign/lp_builder.hpp"
#include "qdesign/structure.hpp"

namespace qdesign::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailure = 1;
inline constexpr int kExitSolverFailure = 2;
inline constexpr int kExitUsage = 3;

// Tolerances for file-level re-verification. Looser than solver precision:
// optimal points sit on constraint boundaries and the checks must not fail
// on serialization round-trips.
inline constexpr double kVerifyStationaryTol = 1e-6;
inline constexpr double kVerifyStructureTol = 1e-6;
inline constexpr double kVerifyValueTol = 1e-6;

struct SolveResult {
    DesignSolution solution;
    StructureReport structure;
    double solve_seconds = 0.0;
};

// Build + solve + assemble + classify. Throws SolverFailure when the LP
// has no optimum and std::runtime_error on numerical failure.
SolveResult solve_model(const ModelConfig& config);

// Tail mass and top-state admission checks; a failure means the truncation
// level distorted the model and x_max must be raised.
struct TruncationCheck {
    bool ok = true;
    std::string detail;
};
TruncationCheck check_truncation(const DesignSolution& solution);

// Writes summary.json and policy.csv (header: x,v_x,sigma_1,sigma_2,mu).
void write_solution_artifacts(const SolveResult& result, const std::filesystem::path& dir);

int cmd_solve(const ModelConfig& config, const std::filesystem::path& out_dir,
              std::ostream& log);

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_ok() const;
    const CheckResult* find(const std::string& name) const;
};

// Re-runs stationarity, allocation, tax-identity, DSIC, IR, structure and
// revenue checks from summary.json + policy.csv alone.
VerifyReport run_verification(const std::filesystem::path& dir);

int cmd_verify(const std::filesystem::path& dir, std::ostream& log);

int cmd_simulate(const std::filesystem::path& dir, double horizon,
                 const std::vector<std::uint64_t>& seeds, std::ostream& log);

// One solve per price; rows: price, revenue, outside option, structure
// case, blocking threshold. Writes sweep.csv.
int cmd_sweep(const ModelConfig& base, const std::vector<double>& prices,
              const std::filesystem::path& out_dir, std::ostream& log);

// Solution files reloaded for verification and simulation.
struct StoredSolution {
    ModelConfig config;
    Policy policy;
    std::vector<double> v;   // v_x column as written
    std::vector<double> mu;  // mu column as written
    TaxSchedule taxes;
    double revenue = 0.0;
    double objective = 0.0;
};
StoredSolution load_solution(const std::filesystem::path& dir);

}  // namespace qdesign::cli
