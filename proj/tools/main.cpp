#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qdesign/cli_ops.hpp"

namespace {

using namespace qdesign;

ModelConfig load_config_or_default(const std::string& path, std::ostream& log) {
    if (path.empty()) return ModelConfig{};  // defaults reproduce the reference experiment
    std::ifstream in(path);
    if (!in) {
        log << "cannot read config file " << path << "\n";
        throw CLI::RuntimeError(cli::kExitUsage);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_json(os.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Revenue-optimal queue recommendations with type-dependent taxes"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string solution_dir;
    std::vector<double> prices;
    double price_override = std::numeric_limits<double>::quiet_NaN();
    double horizon = 1e6;
    std::vector<std::uint64_t> seeds;
    int xmax_override = -1;
    double tol_override = -1.0;

    auto add_config_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "model config JSON path");
        cmd->add_option("--xmax", xmax_override, "override truncation level");
        cmd->add_option("--tol", tol_override, "override numerical tolerance");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve the design problem");
    add_config_flags(solve_cmd);
    solve_cmd->add_option("--out", out_dir, "output directory");
    solve_cmd->add_option("--price", price_override, "override outside price");

    CLI::App* verify_cmd = app.add_subcommand("verify", "re-check a solved output directory");
    verify_cmd->add_option("dir", solution_dir, "directory with summary.json and policy.csv")
        ->required();

    CLI::App* sim_cmd = app.add_subcommand("simulate", "simulate a solved mechanism");
    sim_cmd->add_option("dir", solution_dir, "directory with summary.json and policy.csv")
        ->required();
    sim_cmd->add_option("--horizon", horizon, "simulated time per replica");
    sim_cmd->add_option("--seed", seeds, "replica seeds (repeatable)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve across a list of prices");
    add_config_flags(sweep_cmd);
    sweep_cmd->add_option("--out", out_dir, "output directory");
    sweep_cmd->add_option("--price", prices, "price list (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitUsage;
    }

    try {
        auto prepare_config = [&]() {
            ModelConfig cfg = load_config_or_default(config_path, std::cerr);
            if (xmax_override > 0) cfg.x_max = xmax_override;
            if (tol_override > 0) cfg.tol = tol_override;
            if (!std::isnan(price_override)) cfg.price = price_override;
            cfg.validate();
            return cfg;
        };

        if (solve_cmd->parsed()) return cli::cmd_solve(prepare_config(), out_dir, std::cout);
        if (verify_cmd->parsed()) return cli::cmd_verify(solution_dir, std::cout);
        if (sim_cmd->parsed()) {
            if (seeds.empty()) seeds = {1, 2, 3};
            return cli::cmd_simulate(solution_dir, horizon, seeds, std::cout);
        }
        if (sweep_cmd->parsed()) {
            if (prices.empty() && !sweep_cmd->count("--price")) prices = {0.0, 0.2};
            return cli::cmd_sweep(prepare_config(), prices, out_dir, std::cout);
        }
    } catch (const CLI::RuntimeError& e) {
        return e.get_exit_code();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitSolverFailure;
    }
    return cli::kExitUsage;
}
