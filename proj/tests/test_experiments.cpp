#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "nmrsim/experiments.hpp"

using namespace nmrsim;

namespace {
constexpr double kPi = std::numbers::pi;

RunConfig one_qubit_cfg(const std::string& experiment) {
    RunConfig cfg;
    cfg.system.qubits = 1;
    cfg.experiment = experiment;
    return cfg;
}

RunConfig two_qubit_cfg(const std::string& experiment) {
    RunConfig cfg;
    cfg.experiment = experiment;
    return cfg;
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream os(path);
    os << text;
    return path.string();
}
}  // namespace

TEST_CASE("config parsing") {
    const std::string text =
        "[system]\n"
        "qubits = 1\n"
        "h.t2_s = 0.25\n"
        "[acquisition]\n"
        "n_samples = 2048\n"
        "noise_sigma = 0.001\n"
        "seed = 99\n"
        "decoherence = on\n"
        "[run]\n"
        "experiment = gate-1q:S2\n"
        "emit = report, rho\n"
        "miscal = 0.01\n";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.system.qubits == 1);
    CHECK(cfg.system.h.t2_s == 0.25);
    CHECK(cfg.n_samples == 2048);
    CHECK(cfg.noise_sigma == 0.001);
    CHECK(cfg.seed == 99);
    CHECK(cfg.experiment == "gate-1q:S2");
    CHECK(cfg.emit == std::set<std::string>{"report", "rho"});
    CHECK(cfg.miscal_eps == 0.01);

    CHECK_THROWS_AS(parse_config_text("[system]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("key_without_section = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[system]\nqubits = 3\n"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/nmr.ini"), ConfigError);
}

TEST_CASE("noiseless one-qubit gate pipelines hit the theory matrices") {
    for (const auto& [gate, d11, d22, offd] :
         std::vector<std::tuple<std::string, double, double, double>>{
             {"S1", 1.0, -1.0, 0.0}, {"S2", -1.0, 1.0, 0.0}, {"S3", 0.0, 0.0, 1.0}}) {
        const ExperimentReport rep = run_gate_1q(one_qubit_cfg("gate-1q:" + gate));
        CHECK(rep.delta_percent < 1e-7);
        CHECK(rep.rho_experiment.at(0, 0).real() == doctest::Approx(d11).epsilon(1e-9));
        CHECK(rep.rho_experiment.at(1, 1).real() == doctest::Approx(d22).epsilon(1e-9));
        CHECK(rep.rho_experiment.at(0, 1).real() == doctest::Approx(offd).epsilon(1e-9));
        CHECK(rep.purity == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK_THROWS_AS(run_gate_1q(one_qubit_cfg("gate-1q:S9")), ConfigError);
    CHECK_THROWS_AS(run_gate_1q(two_qubit_cfg("gate-1q:S1")), ConfigError);
}

TEST_CASE("noiseless pseudo-pure preparation") {
    const ExperimentReport rep = run_pps_2q(two_qubit_cfg("pps-2q"));
    CHECK(max_abs_diff(rep.rho_experiment, fixtures::pps_theory()) < 1e-9);
    CHECK(rep.delta_percent < 1e-7);
    CHECK(rep.purity == doctest::Approx(1.0).epsilon(1e-9));
    bool has_state_note = false;
    for (const auto& n : rep.notes) {
        if (n.find("pseudo-pure state readout") != std::string::npos) {
            has_state_note = true;
            CHECK(n.find("|3>: 1 @ 0") != std::string::npos);
        }
    }
    CHECK(has_state_note);
}

TEST_CASE("noiseless two-qubit Hadamard") {
    const ExperimentReport rep = run_hadamard_2q(two_qubit_cfg("hadamard-2q"));
    CHECK(max_abs_diff(rep.rho_experiment, fixtures::pps_hadamard_theory()) < 1e-9);
    bool has_phase_note = false;
    for (const auto& n : rep.notes) {
        if (n.find("phase(|01>) - phase(|11>)") != std::string::npos) {
            has_phase_note = true;
            const double diff = std::stod(n.substr(n.find('=') + 1));
            CHECK(std::abs(std::abs(diff) - kPi) < 1e-9);
        }
    }
    CHECK(has_phase_note);
}

TEST_CASE("custom program equals the built-in path") {
    const std::string path = write_temp("prog_x90.pp", "pulse H x 90\n");
    RunConfig cfg = one_qubit_cfg("custom");
    cfg.program_path = path;
    const ExperimentReport rep = run_custom(cfg);
    CHECK(rep.delta_percent < 1e-7);

    // empty program: identity experiment reproduces the diagonal equilibrium
    const std::string empty_path = write_temp("prog_empty.pp", "# nothing\n");
    RunConfig cfg2 = one_qubit_cfg("custom");
    cfg2.program_path = empty_path;
    const ExperimentReport rep2 = run_custom(cfg2);
    CHECK(rep2.delta_percent < 1e-7);
    CHECK(rep2.rho_experiment.at(0, 0).real() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(rep2.rho_experiment.at(0, 1)) < 1e-9);

    const std::string bad_path = write_temp("prog_bad.pp", "pulse H q 90\n");
    RunConfig cfg3 = one_qubit_cfg("custom");
    cfg3.program_path = bad_path;
    CHECK_THROWS_AS(run_custom(cfg3), ProgramError);
    try {
        run_custom(cfg3);
    } catch (const ProgramError& e) {
        REQUIRE(e.diagnostics.size() == 1);
        CHECK(e.diagnostics[0].line == 1);
        CHECK(e.diagnostics[0].column == 9);
    }
}

TEST_CASE("fixed seed means identical reports; noise means nonzero delta") {
    RunConfig cfg = two_qubit_cfg("pps-2q");
    cfg.noise_sigma = 2e-3;
    cfg.seed = 31337;
    const ExperimentReport a = run_pps_2q(cfg);
    const ExperimentReport b = run_pps_2q(cfg);
    CHECK(emit_report(a, ReportFormat::json) == emit_report(b, ReportFormat::json));
    CHECK(a.delta_percent > 0.0);

    cfg.seed = 31338;
    const ExperimentReport c = run_pps_2q(cfg);
    CHECK(a.delta_percent != c.delta_percent);
}

TEST_CASE("miscalibration and contamination degrade the result") {
    RunConfig clean = one_qubit_cfg("gate-1q:S3");
    const double base = run_gate_1q(clean).delta_percent;

    RunConfig miscal = clean;
    miscal.miscal_eps = 0.03;
    CHECK(run_gate_1q(miscal).delta_percent > base + 0.1);

    RunConfig contaminated = two_qubit_cfg("pps-2q");
    contaminated.contaminate_ratio = 100.0;
    const double contaminated_delta = run_pps_2q(contaminated).delta_percent;
    const double clean_delta = run_pps_2q(two_qubit_cfg("pps-2q")).delta_percent;
    CHECK(contaminated_delta > clean_delta + 0.05);
}

TEST_CASE("artifacts are emitted and byte-identical across runs") {
    const auto dir = std::filesystem::temp_directory_path() / "nmrsim_artifacts_test";
    std::filesystem::remove_all(dir);
    RunConfig cfg = one_qubit_cfg("gate-1q:S1");
    cfg.output_dir = dir.string();
    cfg.emit = {"report", "rho", "fid", "spectrum"};
    cfg.noise_sigma = 1e-3;
    cfg.seed = 7;
    run_gate_1q(cfg);

    const auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        REQUIRE(in.good());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string report1 = slurp(dir / "report.json");
    const std::string rho1 = slurp(dir / "rho_experiment.json");
    const std::string fid1 = slurp(dir / "fid_NONE_H.csv");
    const std::string spec1 = slurp(dir / "spectrum_PI1_H.csv");
    CHECK(fid1.substr(0, 19) == "index,time_s,re,im\n");

    std::filesystem::remove_all(dir);
    run_gate_1q(cfg);
    CHECK(slurp(dir / "report.json") == report1);
    CHECK(slurp(dir / "rho_experiment.json") == rho1);
    CHECK(slurp(dir / "fid_NONE_H.csv") == fid1);
    CHECK(slurp(dir / "spectrum_PI1_H.csv") == spec1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("fixture deltas juxtapose recomputed and quoted values") {
    const auto deltas = fixtures::fixture_deltas();
    REQUIRE(deltas.size() == 5);
    CHECK(deltas[0].recomputed_percent == doctest::Approx(10.4129).epsilon(1e-3));
    CHECK(deltas[0].printed_percent == 5.02);
    for (const auto& d : deltas) {
        CHECK(std::abs(d.recomputed_percent - d.printed_percent) > 0.05);
    }
}

TEST_CASE("experiment dispatch") {
    CHECK_THROWS_AS(run_experiment(two_qubit_cfg("warp-drive")), ConfigError);
    CHECK(run_experiment(two_qubit_cfg("pps-2q")).experiment_id == "pps-2q");
}

TEST_CASE("check-paper text assembles every section") {
    const std::string text = check_paper_text();
    CHECK(text.find("delta recomputation") != std::string::npos);
    CHECK(text.find("MISMATCH") != std::string::npos);
    CHECK(text.find("Gamma relations") != std::string::npos);
    CHECK(text.find("phase fidelity") != std::string::npos);
    CHECK(text.find("Boltzmann prefactor") != std::string::npos);
}
