#include "qdesign/cli_ops.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "qdesign/simulator.hpp"

namespace qdesign::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json reward_to_json(const RewardFn& r) {
    if (r.kind == RewardFn::Kind::quadratic)
        return {{"kind", "quadratic"}, {"scale", r.scale}};
    return {{"kind", "table"}, {"values", r.values}};
}

json config_to_json(const ModelConfig& c) {
    return {{"lambda", c.lambda},   {"price", c.price}, {"type_prior", c.type_prior},
            {"reward", reward_to_json(c.reward)},       {"x_max", c.x_max},
            {"tol", c.tol}};
}

json incentives_to_json(const IncentiveReport& r) {
    return {{"dsic_ok", r.dsic.ok},
            {"ir_ok", r.ir.ok},
            {"monotone_ok", r.dsic.monotone_ok},
            {"dsic_slack_1_reports_2", r.dsic.slack_1_reports_2},
            {"dsic_slack_2_reports_1", r.dsic.slack_2_reports_1},
            {"ir_slack_1", r.ir.slack_1},
            {"ir_slack_2", r.ir.slack_2}};
}

json structure_to_json(const StructureReport& r) {
    json j;
    j["case"] = to_string(r.found);
    j["x0"] = r.x0 ? json(*r.x0) : json(nullptr);
    j["reward_monotone"] = r.reward_monotone;
    j["xtilde"] = r.xtilde ? json(*r.xtilde) : json(nullptr);
    j["exceptional_set"] = r.exceptional_set;
    j["epsilon1"] = r.epsilon1 ? json(*r.epsilon1) : json(nullptr);
    j["psi"] = r.psi ? json(*r.psi) : json(nullptr);
    j["eps1_underdetermined"] = r.eps1_underdetermined;
    j["residuals"] = r.residuals;
    json viols = json::array();
    for (const auto& v : r.case1_violations)
        viols.push_back({{"x", v.x}, {"v_x", v.v_x}, {"sigma1", v.sigma1},
                         {"sigma2", v.sigma2}, {"detail", v.detail}});
    j["case1_violations"] = viols;
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

SolveResult solve_model(const ModelConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const LpProblem problem = build_lp(config);
    const LpSolution lp_solution = solve(problem);
    SolveResult result;
    result.solution = assemble_solution(problem, lp_solution, config);
    result.structure = classify(result.solution, kVerifyStructureTol);
    result.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

TruncationCheck check_truncation(const DesignSolution& solution) {
    TruncationCheck check;
    if (solution.diagnostics.tail_mass > 1e-8) {
        check.ok = false;
        check.detail = "tail mass " + fmt(solution.diagnostics.tail_mass) +
                       " at x_max=" + std::to_string(solution.config.x_max) +
                       " exceeds 1e-8; increase x_max";
        return check;
    }
    const int X = solution.config.x_max;
    if (solution.policy.admit(1, X) > solution.config.tol ||
        solution.policy.admit(2, X) > solution.config.tol) {
        check.ok = false;
        check.detail = "solved policy admits at the truncation state; increase x_max";
    }
    return check;
}

void write_solution_artifacts(const SolveResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const DesignSolution& sol = result.solution;
    const ModelConfig& cfg = sol.config;

    const double rev = revenue(sol.taxes, cfg.lambda, cfg.type_prior);
    const double outside = outside_option_revenue(cfg.lambda, cfg.price);
    const TruncationCheck trunc = check_truncation(sol);

    json summary;
    summary["config"] = config_to_json(cfg);
    summary["revenue"] = rev;
    summary["objective_value"] = sol.objective_value;
    summary["taxes"] = {{"t0", sol.taxes.t0}, {"q1", sol.taxes.q1}, {"q2", sol.taxes.q2},
                        {"t1", sol.taxes.t1}, {"t2", sol.taxes.t2}};
    summary["incentives"] = incentives_to_json(sol.incentives);
    summary["structure"] = structure_to_json(result.structure);
    summary["outside_option_revenue"] = outside;
    summary["beats_outside_option"] = rev >= outside;
    summary["solver"] = {{"status", "optimal"},
                         {"iterations", sol.diagnostics.iterations},
                         {"max_eq_residual", sol.diagnostics.residuals.max_eq_residual},
                         {"max_ineq_violation", sol.diagnostics.residuals.max_ineq_violation},
                         {"max_negativity", sol.diagnostics.residuals.max_negativity},
                         {"recursion_residual", sol.diagnostics.recursion_residual},
                         {"tail_mass", sol.diagnostics.tail_mass},
                         {"truncation_ok", trunc.ok},
                         {"degenerate_states", sol.diagnostics.degenerate_states},
                         {"unreachable_states", sol.diagnostics.unreachable_states}};
    summary["timing"] = {{"solve_seconds", result.solve_seconds}};
    write_text_file(dir / "summary.json", summary.dump(2) + "\n");

    std::ostringstream csv;
    csv << "x,v_x,sigma_1,sigma_2,mu\n";
    for (int x = 0; x <= cfg.x_max; ++x)
        csv << x << ',' << fmt(cfg.reward(x)) << ',' << fmt(sol.policy.admit(1, x)) << ','
            << fmt(sol.policy.admit(2, x)) << ',' << fmt(sol.mu.mu[static_cast<size_t>(x)])
            << '\n';
    write_text_file(dir / "policy.csv", csv.str());
}

int cmd_solve(const ModelConfig& config, const std::filesystem::path& out_dir,
              std::ostream& log) {
    SolveResult result;
    try {
        result = solve_model(config);
    } catch (const SolverFailure& e) {
        log << "solve: " << e.what() << "\n";
        std::filesystem::create_directories(out_dir);
        json summary = {{"config", config_to_json(config)},
                        {"solver", {{"status", to_string(e.status)},
                                    {"max_eq_residual", e.residuals.max_eq_residual},
                                    {"max_ineq_violation", e.residuals.max_ineq_violation},
                                    {"max_negativity", e.residuals.max_negativity}}},
                        {"error", e.what()}};
        write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
        return kExitSolverFailure;
    }
    write_solution_artifacts(result, out_dir);

    const TruncationCheck trunc = check_truncation(result.solution);
    if (!trunc.ok) {
        log << "solve: truncation warning: " << trunc.detail << "\n";
        return kExitSolverFailure;
    }
    const ModelConfig& cfg = result.solution.config;
    log << "solve: revenue " << revenue(result.solution.taxes, cfg.lambda, cfg.type_prior)
        << " (outside option " << outside_option_revenue(cfg.lambda, cfg.price) << "), case "
        << to_string(result.structure.found) << ", " << result.solve_seconds << " s\n";
    return kExitOk;
}

StoredSolution load_solution(const std::filesystem::path& dir) {
    const json summary = json::parse(read_text_file(dir / "summary.json"));
    StoredSolution stored;
    stored.config = parse_config_json(summary.at("config").dump());
    stored.taxes.t0 = summary.at("taxes").at("t0").get<double>();
    stored.taxes.q1 = summary.at("taxes").at("q1").get<double>();
    stored.taxes.q2 = summary.at("taxes").at("q2").get<double>();
    stored.taxes.t1 = summary.at("taxes").at("t1").get<double>();
    stored.taxes.t2 = summary.at("taxes").at("t2").get<double>();
    stored.revenue = summary.at("revenue").get<double>();
    stored.objective = summary.value("objective_value", stored.revenue);

    const std::string csv = read_text_file(dir / "policy.csv");
    std::istringstream is(csv);
    std::string line;
    if (!std::getline(is, line) || line != "x,v_x,sigma_1,sigma_2,mu")
        throw std::runtime_error("policy.csv has an unexpected header");
    const int n = stored.config.x_max + 1;
    stored.policy = Policy(stored.config.x_max, 0.0, 0.0);
    stored.v.resize(static_cast<size_t>(n));
    stored.mu.resize(static_cast<size_t>(n));
    int rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) throw std::runtime_error("policy.csv row is malformed");
        const int x = std::stoi(fields[0]);
        if (x < 0 || x >= n) throw std::runtime_error("policy.csv state out of range");
        stored.v[static_cast<size_t>(x)] = std::stod(fields[1]);
        stored.policy.set_admit(1, x, std::stod(fields[2]));
        stored.policy.set_admit(2, x, std::stod(fields[3]));
        stored.mu[static_cast<size_t>(x)] = std::stod(fields[4]);
        ++rows;
    }
    if (rows != n) throw std::runtime_error("policy.csv does not cover 0..x_max");
    return stored;
}

bool VerifyReport::all_ok() const {
    for (const auto& c : checks)
        if (!c.ok) return false;
    return true;
}

const CheckResult* VerifyReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

VerifyReport run_verification(const std::filesystem::path& dir) {
    VerifyReport report;
    StoredSolution stored;
    try {
        stored = load_solution(dir);
    } catch (const std::exception& e) {
        report.checks.push_back({"files", false, e.what()});
        return report;
    }
    report.checks.push_back({"files", true, ""});
    const ModelConfig& cfg = stored.config;
    const int n = cfg.x_max + 1;

    {
        double worst = 0.0;
        for (int x = 0; x < n; ++x)
            worst = std::max(worst, std::abs(stored.v[static_cast<size_t>(x)] - cfg.reward(x)));
        report.checks.push_back({"reward", worst <= 1e-12,
                                 worst <= 1e-12 ? "" : "v_x column deviates by " + fmt(worst)});
    }
    {
        double total = 0.0;
        for (double m : stored.mu) total += m;
        const double residual =
            recursion_residual(stored.mu, stored.policy, cfg.lambda, cfg.type_prior);
        const bool ok =
            std::abs(total - 1.0) <= kVerifyStationaryTol && residual <= kVerifyStationaryTol;
        std::string detail;
        if (!ok)
            detail = "mu sums to " + fmt(total) + ", recursion residual " + fmt(residual);
        report.checks.push_back({"stationarity", ok, detail});
    }
    StationaryDist dist;
    dist.mu = stored.mu;
    dist.tail_mass = stored.mu.empty() ? 0.0 : stored.mu.back();
    dist.vbar = expected_reward(stored.mu, cfg.reward);
    const auto [q1_file, q2_file] = allocations(stored.policy, dist, cfg.reward);
    {
        const double dq1 = std::abs(q1_file - stored.taxes.q1);
        const double dq2 = std::abs(q2_file - stored.taxes.q2);
        const double dt1 = std::abs(stored.taxes.t1 - (stored.taxes.t0 + stored.taxes.q1));
        const double dt2 = std::abs(stored.taxes.t2 -
                                    (stored.taxes.t0 + 2.0 * stored.taxes.q2 - stored.taxes.q1));
        const bool ok = dq1 <= kVerifyValueTol && dq2 <= kVerifyValueTol && dt1 <= 1e-9 &&
                        dt2 <= 1e-9;
        std::string detail;
        if (!ok) {
            std::ostringstream os;
            os << "recomputed q=(" << q1_file << "," << q2_file << ") vs stored q=("
               << stored.taxes.q1 << "," << stored.taxes.q2 << "), tax identity gaps ("
               << dt1 << "," << dt2 << ")";
            detail = os.str();
        }
        report.checks.push_back({"allocations", ok, detail});
    }
    {
        const DsicReport dsic =
            verify_dsic(stored.taxes, stored.taxes.q1, stored.taxes.q2, kIncentiveTol);
        std::string detail;
        if (!dsic.ok) {
            std::ostringstream os;
            os << "q1=" << stored.taxes.q1 << " q2=" << stored.taxes.q2
               << " monotone_ok=" << dsic.monotone_ok
               << " slack(1->2)=" << dsic.slack_1_reports_2
               << " slack(2->1)=" << dsic.slack_2_reports_1;
            detail = os.str();
        }
        report.checks.push_back({"dsic", dsic.ok, detail});
    }
    {
        const IrReport ir =
            verify_ir(stored.taxes, stored.taxes.q1, dist.vbar, cfg.price, kIncentiveTol);
        std::string detail;
        if (!ir.ok) {
            std::ostringstream os;
            os << "ir slacks (" << ir.slack_1 << "," << ir.slack_2 << ")";
            detail = os.str();
        }
        report.checks.push_back({"ir", ir.ok, detail});
    }
    {
        const StructureReport sr = classify(stored.policy, stored.mu, cfg.reward, cfg.lambda,
                                            kVerifyStructureTol);
        const bool ok = sr.found != StructureCase::indeterminate;
        std::string detail;
        if (!ok) {
            std::ostringstream os;
            os << "policy fits neither structural case;";
            for (size_t k = 0; k < sr.case1_violations.size() && k < 3; ++k)
                os << ' ' << sr.case1_violations[k].detail << ';';
            detail = os.str();
        }
        report.checks.push_back({"structure", ok, detail});
    }
    {
        const double expect = revenue(stored.taxes, cfg.lambda, cfg.type_prior);
        const bool ok = std::abs(expect - stored.revenue) <= 1e-12;
        report.checks.push_back({"revenue", ok,
                                 ok ? "" : "stored " + fmt(stored.revenue) + " vs recomputed " +
                                               fmt(expect)});
    }
    return report;
}

int cmd_verify(const std::filesystem::path& dir, std::ostream& log) {
    if (!std::filesystem::exists(dir / "summary.json") ||
        !std::filesystem::exists(dir / "policy.csv")) {
        log << "verify: missing summary.json or policy.csv in " << dir.string() << "\n";
        return kExitUsage;
    }
    const VerifyReport report = run_verification(dir);
    for (const auto& c : report.checks)
        log << (c.ok ? "[PASS] " : "[FAIL] ") << c.name << (c.detail.empty() ? "" : ": " + c.detail)
            << "\n";
    if (!report.all_ok()) {
        log << "verify: FAILED\n";
        return kExitVerifyFailure;
    }
    log << "verify: OK\n";
    return kExitOk;
}

int cmd_simulate(const std::filesystem::path& dir, double horizon,
                 const std::vector<std::uint64_t>& seeds, std::ostream& log) {
    if (!std::filesystem::exists(dir / "summary.json") ||
        !std::filesystem::exists(dir / "policy.csv")) {
        log << "simulate: missing solve outputs in " << dir.string() << "\n";
        return kExitUsage;
    }
    const StoredSolution stored = load_solution(dir);
    const ModelConfig& cfg = stored.config;
    const StationaryDist analytic = stationary_distribution(
        stored.policy, cfg.lambda, cfg.type_prior, cfg.x_max, cfg.tol, cfg.reward);

    std::vector<SimStats> replicas;
    replicas.reserve(seeds.size());
    json rep_json = json::array();
    for (std::uint64_t seed : seeds) {
        SimStats stats = simulate(cfg, stored.policy, stored.taxes, horizon, seed);
        const double tv = tv_distance(stats.empirical_mu, analytic.mu);
        rep_json.push_back({{"seed", seed},
                            {"tv_distance", tv},
                            {"revenue_rate", stats.revenue_rate},
                            {"arrivals", stats.arrivals},
                            {"joins", stats.joins},
                            {"balks", stats.balks},
                            {"services", stats.services},
                            {"truncation_balks", stats.truncation_balks}});
        log << "simulate: seed " << seed << " tv " << tv << " revenue " << stats.revenue_rate
            << "\n";
        replicas.push_back(std::move(stats));
    }
    const SimStats merged = merge_replicas(replicas);
    const double analytic_revenue = revenue(stored.taxes, cfg.lambda, cfg.type_prior);
    const double stderr_merged =
        revenue_rate_stderr(stored.taxes, cfg.lambda, cfg.type_prior, merged.sim_time);

    json out;
    out["horizon"] = horizon;
    out["replicas"] = rep_json;
    out["merged"] = {{"revenue_rate", merged.revenue_rate},
                     {"tv_distance", tv_distance(merged.empirical_mu, analytic.mu)},
                     {"sim_time", merged.sim_time}};
    out["analytic"] = {{"revenue", analytic_revenue}, {"revenue_stderr", stderr_merged}};
    out["revenue_gap_sigmas"] =
        stderr_merged > 0.0 ? (merged.revenue_rate - analytic_revenue) / stderr_merged : 0.0;
    write_text_file(dir / "sim_report.json", out.dump(2) + "\n");

    std::ostringstream csv;
    csv << "x,mu_analytic,mu_empirical\n";
    for (size_t x = 0; x < analytic.mu.size(); ++x)
        csv << x << ',' << fmt(analytic.mu[x]) << ',' << fmt(merged.empirical_mu[x]) << '\n';
    write_text_file(dir / "sim_mu.csv", csv.str());
    return kExitOk;
}

int cmd_sweep(const ModelConfig& base, const std::vector<double>& prices,
              const std::filesystem::path& out_dir, std::ostream& log) {
    std::filesystem::create_directories(out_dir);
    std::ostringstream csv;
    csv << "price,revenue,outside_option,case,xtilde\n";
    for (double price : prices) {
        ModelConfig cfg = base;
        cfg.price = price;
        SolveResult result;
        try {
            result = solve_model(cfg);
        } catch (const SolverFailure& e) {
            log << "sweep: price " << price << ": " << e.what() << "\n";
            return kExitSolverFailure;
        }
        const double rev = revenue(result.solution.taxes, cfg.lambda, cfg.type_prior);
        csv << fmt(price) << ',' << fmt(rev) << ','
            << fmt(outside_option_revenue(cfg.lambda, price)) << ','
            << to_string(result.structure.found) << ','
            << (result.structure.xtilde ? std::to_string(*result.structure.xtilde) : "none")
            << '\n';
        log << "sweep: price " << price << " revenue " << rev << "\n";
    }
    write_text_file(out_dir / "sweep.csv", csv.str());
    return kExitOk;
}

}  // namespace qdesign::cli
