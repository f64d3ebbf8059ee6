// Command-line driver: DDCH runs, convergence sweeps, sharp-interface runs
// and the normalization-integral verification table.

#include "ddch/analysis.hpp"
#include "ddch/asymptotics.hpp"
#include "ddch/config_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

// Exit codes: 0 success, 1 validation, 2 solver failure, 3 tolerance failure.
enum ExitCode { kOk = 0, kValidation = 1, kSolverFailure = 2, kToleranceFailure = 3 };

int cmd_run(const std::string& config_path, const std::string& output_dir) {
    ddch::RunConfig config;
    try {
        config = ddch::load_run_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    config.output.directory = ddch::resolve_output_dir(config.output.directory, output_dir);
    try {
        ddch::run_simulation(config);
    } catch (const ddch::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kSolverFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverFailure;
    }
    std::cout << "run finished; outputs in " << config.output.directory << "\n";
    return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& output_dir, int workers) {
    ddch::SweepConfig config;
    try {
        config = ddch::load_sweep_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    config.output.directory = ddch::resolve_output_dir(config.output.directory, output_dir);
    ddch::SweepTable table;
    try {
        table = ddch::run_convergence_sweep(config, workers);
        ddch::write_sweep_outputs(table, config.output.directory);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverFailure;
    }
    std::printf("%-6s %-5s %-8s %-12s %-12s %-12s\n", "model", "p", "eps", "ax_ddch", "ax_si",
                "delta");
    bool any_failed = false;
    for (const ddch::SweepCell& c : table.cells) {
        if (c.error.empty())
            std::printf("%-6s %-5g %-8g %-12.8f %-12.8f %-12.6e\n", ddch::to_string(c.kind), c.p,
                        c.epsilon, c.ax_ddch, c.ax_si, c.delta);
        else {
            std::printf("%-6s %-5g %-8g failed: %s\n", ddch::to_string(c.kind), c.p, c.epsilon,
                        c.error.c_str());
            any_failed = true;
        }
    }
    for (const ddch::OrderRow& o : table.orders)
        std::printf("order  %-6s p=%-4g eps %g -> %g : %.3f\n", ddch::to_string(o.kind), o.p,
                    o.eps_coarse, o.eps_fine, o.order);
    std::cout << "outputs in " << config.output.directory << "\n";
    return any_failed ? kSolverFailure : kOk;
}

int cmd_sharp(const std::string& config_path, const std::string& output_dir) {
    ddch::RunConfig config;
    try {
        config = ddch::load_run_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    config.output.directory = ddch::resolve_output_dir(config.output.directory, output_dir);
    try {
        ddch::run_sharp(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverFailure;
    }
    std::cout << "sharp-interface run finished; outputs in " << config.output.directory << "\n";
    return kOk;
}

int cmd_verify(const std::vector<double>& p_list) {
    const std::vector<double> diffusion_ps =
        p_list.empty() ? std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0} : p_list;
    std::vector<double> energy_ps;
    for (double p : p_list.empty() ? std::vector<double>{0.0, 0.5, 1.0, 1.5, 1.9} : p_list)
        if (p < 2.0)
            energy_ps.push_back(p);

    bool ok = true;
    std::printf("%-28s %-6s %-22s %-12s %s\n", "integral", "p", "value", "|value-1|", "status");
    auto report = [&ok](const char* name, double p, auto&& eval) {
        try {
            const double v = eval();
            std::printf("%-28s %-6g %-22.16f %-12.3e PASS\n", name, p, v, std::abs(v - 1.0));
        } catch (const ddch::ToleranceError& e) {
            std::printf("%-28s %-6g %-22.16f %-12.3e FAIL\n", name, p, e.value,
                        std::abs(e.value - 1.0));
            ok = false;
        }
    };

    const ddch::QuadratureSpec spec;
    report("kinetic", 0.0, [&] { return ddch::verify_kinetic_integral(spec); });
    report("gradient", 0.0, [&] { return ddch::verify_gradient_integral(spec); });
    for (double p : energy_ps) {
        // the energy integrand tail decays like e^{-6(2-p)|z|}; widen the
        // truncation near p = 2
        ddch::QuadratureSpec s = spec;
        if (p > 1.5) {
            s.z_max = 40.0;
            s.n = 4096;
        }
        report("energy-normalization", p, [&] { return ddch::verify_energy_normalization(p, s); });
    }
    for (double p : diffusion_ps)
        report("diffusion-normalization", p,
               [&] { return ddch::verify_diffusion_normalization(p, spec); });
    return ok ? kOk : kToleranceFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"doubly degenerate Cahn-Hilliard surface-diffusion lab"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    int workers = 1;
    bool seedless = false;
    std::vector<double> p_list;

    CLI::App* run = app.add_subcommand("run", "integrate one DDCH model from a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--output-dir", output_dir, "override output directory");
    run->add_flag("--seedless", seedless, "assert that the pipeline uses no RNG");

    CLI::App* sweep = app.add_subcommand("sweep", "epsilon-convergence sweep against the SI solver");
    sweep->add_option("config", config_path, "config file")->required();
    sweep->add_option("--output-dir", output_dir, "override output directory");
    sweep->add_option("--workers", workers, "parallel sweep cells")->check(CLI::PositiveNumber);
    sweep->add_flag("--seedless", seedless, "assert that the pipeline uses no RNG");

    CLI::App* sharp = app.add_subcommand("sharp", "sharp-interface run of the config's shape");
    sharp->add_option("config", config_path, "config file")->required();
    sharp->add_option("--output-dir", output_dir, "override output directory");
    sharp->add_flag("--seedless", seedless, "assert that the pipeline uses no RNG");

    CLI::App* verify = app.add_subcommand("verify", "verify the profile normalization integrals");
    verify->add_option("--p-list", p_list, "exponents to verify (default: the built-in grids)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kValidation;
    }

    if (seedless)
        std::cout << "seedless: the pipeline is deterministic by construction (no RNG anywhere)\n";

    if (run->parsed())
        return cmd_run(config_path, output_dir);
    if (sweep->parsed())
        return cmd_sweep(config_path, output_dir, workers);
    if (sharp->parsed())
        return cmd_sharp(config_path, output_dir);
    if (verify->parsed())
        return cmd_verify(p_list);
    return kValidation;
}
