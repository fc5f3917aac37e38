#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nmrsim/experiments.hpp"

namespace {

// 0 success, 1 numerical/contract failure, 2 config/parse failure
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

int run_simulate(const std::string& config_path, nmrsim::RunConfig cli_overrides,
                 bool has_noise, bool has_seed, bool has_miscal, bool has_contaminate,
                 const std::string& program, const std::string& out_dir,
                 const std::string& experiment) {
    nmrsim::RunConfig cfg;
    if (!config_path.empty()) {
        cfg = nmrsim::load_config_file(config_path);
    }
    if (!experiment.empty()) cfg.experiment = experiment;
    if (config_path.empty() && cfg.experiment.starts_with("gate-1q:")) {
        cfg.system.qubits = 1;  // the built-in one-qubit experiments need no config file
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (!program.empty()) cfg.program_path = program;
    if (has_noise) cfg.noise_sigma = cli_overrides.noise_sigma;
    if (has_seed) cfg.seed = cli_overrides.seed;
    if (has_miscal) cfg.miscal_eps = cli_overrides.miscal_eps;
    if (has_contaminate) cfg.contaminate_ratio = cli_overrides.contaminate_ratio;
    if (cfg.experiment.empty()) {
        throw nmrsim::ConfigError("no experiment selected (--experiment or config [run])");
    }

    const nmrsim::ExperimentReport report = nmrsim::run_experiment(cfg);
    std::cout << nmrsim::emit_report(report, nmrsim::ReportFormat::text);
    if (!cfg.output_dir.empty()) {
        std::cout << "artifacts written to " << cfg.output_dir << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale digital twin of a liquid-state NMR quantum computer"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "run an experiment end to end");
    std::string experiment, config_path, out_dir, program;
    nmrsim::RunConfig overrides;
    sim->add_option("--experiment", experiment,
                    "gate-1q:S1|S2|S3, pps-2q, hadamard-2q, custom[:file.pp]");
    sim->add_option("--config", config_path, "key=value config file");
    sim->add_option("--out", out_dir, "output directory for artifacts");
    auto* noise_opt = sim->add_option("--noise", overrides.noise_sigma,
                                      "additive complex Gaussian noise std-dev per sample");
    auto* seed_opt = sim->add_option("--seed", overrides.seed, "RNG seed (default 1)");
    auto* miscal_opt = sim->add_option("--miscal", overrides.miscal_eps,
                                       "fractional pulse-length miscalibration epsilon");
    auto* contam_opt =
        sim->add_option("--contaminate", overrides.contaminate_ratio,
                        "mix in the co-resident species' proton signal at this amplitude ratio")
            ->expected(0, 1)
            ->default_str("100");
    sim->add_option("--program", program, "pulse program file (.pp) for custom experiments");

    auto* check = app.add_subcommand(
        "check-paper", "cross-check the bundled reference dataset against the simulator");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (check->parsed()) {
            std::cout << nmrsim::check_paper_text();
            return 0;
        }
        if (contam_opt->count() > 0 && overrides.contaminate_ratio == 0.0) {
            overrides.contaminate_ratio = nmrsim::kDefaultContaminationRatio;
        }
        return run_simulate(config_path, overrides, noise_opt->count() > 0, seed_opt->count() > 0,
                            miscal_opt->count() > 0, contam_opt->count() > 0, program, out_dir,
                            experiment);
    } catch (const nmrsim::ProgramError& e) {
        std::cerr << e.what() << "\n";
        for (const auto& d : e.diagnostics) {
            std::cerr << nmrsim::diagnostic_string(d, "program") << "\n";
        }
        return kExitConfig;
    } catch (const nmrsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
