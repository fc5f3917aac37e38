#include "nmrsim/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include "nmrsim/format_util.hpp"

namespace nmrsim {

namespace {

AcquisitionParams acq_params(const RunConfig& cfg, const SpinSystem& system) {
    AcquisitionParams p = AcquisitionParams::defaults_for(system);
    p.n_samples = cfg.n_samples;
    if (cfg.window_hz > 0) p.dwell_s = 1.0 / cfg.window_hz;
    p.noise_sigma = cfg.noise_sigma;
    p.seed = cfg.seed;
    p.decoherence = cfg.decoherence;
    return p;
}

CompileOptions data_opts(const RunConfig& cfg) {
    CompileOptions opts;
    opts.flip_scale = 1.0 + cfg.miscal_eps;
    return opts;
}

std::vector<std::string> rotations_for(int n_channels) {
    if (n_channels == 1) return {"NONE", "PI1"};
    return {"NONE", "OMEGA1", "OMEGA2", "OMEGA3", "OMEGA4"};
}

// Events the proton channel of the co-resident species experiences: carbon
// pulses are invisible to it, delays become plain free evolution. Symbolic
// J/2 delays are bound to the host system's J before the hand-off.
PulseSequence h_channel_part(const PulseSequence& seq, const SpinSystem& host) {
    PulseSequence out;
    for (const auto& ev : seq.events) {
        if (const auto* p = std::get_if<PulseEvent>(&ev)) {
            if (p->channel == "H") out.events.push_back(*p);
        } else if (const auto* d = std::get_if<DelayEvent>(&ev)) {
            DelayEvent lit;
            lit.half_j = false;
            lit.seconds = d->half_j ? 1.0 / (2.0 * host.j_coupling_hz()) : d->seconds;
            out.events.push_back(lit);
        } else {
            for (const auto& p : std::get<SimultaneousGroup>(ev).pulses) {
                if (p.channel == "H") out.events.push_back(p);
            }
        }
    }
    return out;
}

PulseSequence concat(const PulseSequence& a, const PulseSequence& b) {
    PulseSequence out = a;
    out.events.insert(out.events.end(), b.events.begin(), b.events.end());
    return out;
}

// The trailing artifacts of the run, written per cfg.emit.
class ArtifactWriter {
  public:
    ArtifactWriter(const RunConfig& cfg, std::string file_prefix)
        : cfg_(cfg), prefix_(std::move(file_prefix)) {
        if (enabled()) {
            std::filesystem::create_directories(cfg_.output_dir);
        }
    }

    bool enabled() const { return !cfg_.output_dir.empty(); }
    bool wants(const std::string& kind) const { return enabled() && cfg_.emit.count(kind) > 0; }

    AcquisitionHooks hooks_for(const std::string& tag, const AcquisitionHooks& base) const {
        AcquisitionHooks hooks = base;
        if (wants("fid") || wants("spectrum")) {
            const RunConfig& cfg = cfg_;
            const std::string prefix = prefix_;
            hooks.sink = [&cfg, prefix, tag](const std::string& ch, const Fid& fid,
                                             const Spectrum& spec) {
                if (cfg.emit.count("fid")) {
                    std::ofstream os(std::filesystem::path(cfg.output_dir) /
                                     (prefix + "fid_" + tag + "_" + ch + ".csv"));
                    write_fid_csv(os, fid);
                }
                if (cfg.emit.count("spectrum")) {
                    std::ofstream os(std::filesystem::path(cfg.output_dir) /
                                     (prefix + "spectrum_" + tag + "_" + ch + ".csv"));
                    write_spectrum_csv(os, spec);
                }
            };
        }
        return hooks;
    }

    void finish(const ExperimentReport& report, const StateReconstruction* state) const {
        if (!enabled()) return;
        const auto dir = std::filesystem::path(cfg_.output_dir);
        if (cfg_.emit.count("report")) {
            std::ofstream js(dir / (prefix_ + "report.json"));
            js << emit_report(report, ReportFormat::json) << "\n";
            std::ofstream txt(dir / (prefix_ + "report.txt"));
            txt << emit_report(report, ReportFormat::text);
        }
        if (cfg_.emit.count("rho")) {
            std::ofstream os(dir / (prefix_ + "rho_experiment.json"));
            os << matrix_json(report.rho_experiment, report.purity,
                              state ? state->warnings : std::vector<std::string>{})
               << "\n";
        }
    }

  private:
    const RunConfig& cfg_;
    std::string prefix_;
};

// Contaminant FID on the proton channel: the other chloroform species driven
// by the same H-channel pulses, read in the same acquisition window.
// `relative_amplitude` scales it against the host experiment's signal.
std::shared_ptr<Fid> companion_h_fid(const RunConfig& cfg, const SpinSystem& host,
                                     const PulseSequence& events_seen,
                                     const AcquisitionParams& host_params,
                                     double relative_amplitude) {
    const SpinSystem companion = cfg.system.companion().build();
    const CompileOptions opts = data_opts(cfg);
    const PulseSequence h_events = h_channel_part(events_seen, host);
    const ComplexMatrix u = sequence_unitary(h_events, companion, opts);
    const ComplexMatrix rho = apply(u, equilibrium_deviation(companion).rho);

    AcquisitionParams p = host_params;
    p.noise_sigma = 0.0;
    p.detuning_rad_per_s.clear();
    auto fid = std::make_shared<Fid>(simulate_fid(rho, companion, "H", p));
    for (auto& s : fid->samples) s *= relative_amplitude;
    return fid;
}

AcquisitionHooks contamination_hooks(const RunConfig& cfg, const SpinSystem& host,
                                     const PulseSequence& events_seen,
                                     const AcquisitionParams& params) {
    AcquisitionHooks hooks;
    if (cfg.contaminate_ratio <= 0.0) return hooks;
    // the proton-only signal is `ratio` times stronger than the two-spin one
    const double amp = host.n_channels() == 2 ? cfg.contaminate_ratio : 1.0 / cfg.contaminate_ratio;
    auto fid = companion_h_fid(cfg, host, events_seen, params, amp);
    hooks.mixin = [fid](const std::string& channel) -> const Fid* {
        return channel == "H" ? fid.get() : nullptr;
    };
    return hooks;
}

std::map<std::string, std::string> convention_flags(const RunConfig& cfg) {
    std::map<std::string, std::string> flags;
    flags["pulse_convention"] = "rotation_operator";
    flags["j_delay_reading"] = "dt = 1/(2J)";
    flags["omega4_hydrogen_axis"] = "y";
    flags["gamma_normalization"] = "1/dim";
    if (cfg.miscal_eps != 0) flags["miscalibration_eps"] = shortest_double(cfg.miscal_eps);
    if (cfg.contaminate_ratio > 0) {
        flags["contamination_ratio"] = shortest_double(cfg.contaminate_ratio);
    }
    return flags;
}

struct TomographyRun {
    ComplexMatrix rho_raw;
    std::vector<std::string> warnings;
};

TomographyRun tomograph(const ComplexMatrix& rho_prepared, const SpinSystem& system,
                        const MeasurementModel& model, const RunConfig& cfg,
                        const AcquisitionParams& params, const PulseSequence& events_before,
                        const std::string& tag, const ArtifactWriter& artifacts) {
    const CompileOptions dopts = data_opts(cfg);
    std::vector<TomographyReadout> readouts;
    for (const auto& rot_id : model.rotation_ids) {
        const ComplexMatrix rot = rotation_unitary(rot_id, system, dopts);
        const PulseSequence rot_seq = rot_id == "NONE"
                                          ? PulseSequence{}
                                          : named_sequence(named_sequence_id(rot_id));
        AcquisitionHooks hooks =
            contamination_hooks(cfg, system, concat(events_before, rot_seq), params);
        const std::string acq_tag = tag.empty() ? rot_id : tag + "_" + rot_id;
        hooks = artifacts.hooks_for(acq_tag, hooks);
        TomographyReadout ro;
        ro.rotation_id = rot_id;
        ro.gammas = measure_gammas(rho_prepared, system, rot, model.peaks, params,
                                   derive_seed(cfg.seed, acq_tag), hooks);
        readouts.push_back(std::move(ro));
    }
    const ReconstructionResult rec = reconstruct(model, readouts);
    return {rec.rho, rec.warnings};
}

// state readout off the dominant population; returns nullopt when the matrix
// is not pseudo-pure-like (all populations at or below zero)
std::optional<StateReconstruction> state_from(const ComplexMatrix& rho_normalized,
                                              int preferred_ref = -1) {
    const ComplexMatrix pure = pseudo_pure_part(rho_normalized);
    int ref = preferred_ref;
    if (ref < 0) {
        double best = 0.0;
        for (int i = 0; i < pure.dim(); ++i) {
            if (pure.at(i, i).real() > best) {
                best = pure.at(i, i).real();
                ref = i;
            }
        }
    }
    if (ref < 0 || pure.at(ref, ref).real() <= 0.0) return std::nullopt;
    return reconstruct_state(pure, ref);
}

std::string state_note(const StateReconstruction& st) {
    std::ostringstream os;
    os << "pseudo-pure state readout:";
    for (size_t i = 0; i < st.components.size(); ++i) {
        os << " |" << i << ">: " << shortest_double(st.components[i].amplitude) << " @ "
           << shortest_double(st.components[i].phase);
    }
    return os.str();
}

NamedSequence gate_from_experiment_id(const std::string& experiment) {
    const std::string prefix = "gate-1q:";
    if (!experiment.starts_with(prefix)) {
        throw ConfigError("run_gate_1q: experiment id must be gate-1q:S1|S2|S3");
    }
    const std::string gate = experiment.substr(prefix.size());
    if (gate != "S1" && gate != "S2" && gate != "S3") {
        throw ConfigError("run_gate_1q: unknown gate '" + gate + "'");
    }
    return named_sequence_id(gate);
}

}  // namespace

ExperimentReport run_gate_1q(const RunConfig& cfg) {
    const NamedSequence gate = gate_from_experiment_id(cfg.experiment);
    const SpinSystem system = cfg.system.build();
    if (system.n_channels() != 1) {
        throw ConfigError("run_gate_1q: needs a one-qubit system");
    }
    const AcquisitionParams params = acq_params(cfg, system);
    const ArtifactWriter artifacts(cfg, "");

    const MeasurementModel model =
        build_measurement_model(system, rotations_for(1), params);
    const ComplexMatrix rho0 = equilibrium_deviation(system).rho;
    const PulseSequence gate_seq = named_sequence(gate);
    const ComplexMatrix u_gate = sequence_unitary(gate_seq, system, data_opts(cfg));
    const ComplexMatrix rho_gated = apply(u_gate, rho0);

    const TomographyRun tomo =
        tomograph(rho_gated, system, model, cfg, params, gate_seq, "", artifacts);

    ExperimentReport report;
    report.experiment_id = cfg.experiment;
    switch (gate) {
        case NamedSequence::s1: report.rho_theory = fixtures::s1_theory(); break;
        case NamedSequence::s2: report.rho_theory = fixtures::s2_theory(); break;
        default: report.rho_theory = fixtures::s3_theory(); break;
    }
    report.rho_experiment = tomo.rho_raw;
    report.delta_percent = deviation_error(report.rho_theory, report.rho_experiment);
    report.convention_flags = convention_flags(cfg);
    report.seeds = {cfg.seed};
    report.notes = tomo.warnings;

    // the reconstruction is already on the calibrated diag(1,-1) scale, so the
    // identity discount applies to it directly
    std::optional<StateReconstruction> state;
    try {
        state = state_from(report.rho_experiment);
    } catch (const std::invalid_argument&) {
        state.reset();
    }
    if (state) {
        report.purity = state->purity;
        report.notes.push_back(state_note(*state));
    } else {
        report.notes.push_back("state readout not applicable (no dominant population)");
    }
    artifacts.finish(report, state ? &*state : nullptr);
    return report;
}

namespace {

ExperimentReport run_pps_like(const RunConfig& cfg, bool with_hadamard) {
    const SpinSystem system = cfg.system.build();
    if (system.n_channels() != 2) {
        throw ConfigError("two-qubit experiment needs a two-qubit system");
    }
    const AcquisitionParams params = acq_params(cfg, system);
    const ArtifactWriter artifacts(cfg, "");
    const CompileOptions dopts = data_opts(cfg);

    const MeasurementModel model =
        build_measurement_model(system, rotations_for(2), params);
    const EquilibriumDeviation eq = equilibrium_deviation(system);

    const PulseSequence h_seq =
        with_hadamard ? named_sequence(NamedSequence::h2q) : PulseSequence{};
    const ComplexMatrix u_h = sequence_unitary(h_seq, system, dopts);

    const std::vector<std::pair<std::string, PulseSequence>> preps = {
        {"P0", PulseSequence{}},
        {"P1", named_sequence(NamedSequence::p1)},
        {"P2", named_sequence(NamedSequence::p2)},
    };

    std::vector<ComplexMatrix> recs;
    std::vector<std::string> warnings;
    for (const auto& [name, prep_seq] : preps) {
        const ComplexMatrix u_prep = sequence_unitary(prep_seq, system, dopts);
        const ComplexMatrix rho_prep = apply(u_h * u_prep, eq.rho);
        const TomographyRun tomo = tomograph(rho_prep, system, model, cfg, params,
                                             concat(prep_seq, h_seq), name, artifacts);
        recs.push_back(tomo.rho_raw);
        for (const auto& w : tomo.warnings) warnings.push_back(name + ": " + w);
    }

    ExperimentReport report;
    report.experiment_id = with_hadamard ? "hadamard-2q" : "pps-2q";
    // The pps matrix is scale-fixed by its dominant |11> population, as in the
    // reference comparison. After the Hadamard the populations are all 1/3, so
    // the diagonal no longer carries the scale; the raw model-calibrated scale
    // is kept there.
    const ComplexMatrix averaged = temporal_average(recs);
    report.rho_experiment = with_hadamard ? averaged : normalize_deviation(averaged);
    report.rho_theory = with_hadamard ? fixtures::pps_hadamard_theory() : fixtures::pps_theory();
    report.delta_percent = deviation_error(report.rho_theory, report.rho_experiment);
    report.convention_flags = convention_flags(cfg);
    report.seeds = {cfg.seed};
    report.notes = std::move(warnings);
    report.notes.push_back("boltzmann prefactor: computed " + shortest_double(eq.prefactor) +
                           ", quoted " + shortest_double(eq.prefactor_printed));

    // wave-function readout relative to |11>
    std::optional<StateReconstruction> state;
    try {
        state = state_from(report.rho_experiment, 3);
    } catch (const std::invalid_argument&) {
        state.reset();
    }
    if (state) {
        report.purity = state->purity;
        report.notes.push_back(state_note(*state));
        if (with_hadamard) {
            const double diff = state->components[1].phase - state->components[3].phase;
            report.notes.push_back("phase(|01>) - phase(|11>) = " + shortest_double(diff));
        }
    } else {
        report.notes.push_back("state readout not applicable (|11> population not positive)");
    }
    artifacts.finish(report, state ? &*state : nullptr);
    return report;
}

}  // namespace

ExperimentReport run_pps_2q(const RunConfig& cfg) { return run_pps_like(cfg, false); }

ExperimentReport run_hadamard_2q(const RunConfig& cfg) { return run_pps_like(cfg, true); }

ExperimentReport run_custom(const RunConfig& cfg) {
    std::string path = cfg.program_path;
    if (cfg.experiment.starts_with("custom:")) {
        path = cfg.experiment.substr(7);
    }
    if (path.empty()) {
        throw ConfigError("run_custom: no pulse program given (--program or custom:<path>)");
    }
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open pulse program '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    const SourceProgram program{ss.str(), path};
    const ParseResult parsed = parse(program);
    if (!parsed.ok()) {
        throw ProgramError("pulse program '" + path + "' has errors", parsed.diagnostics);
    }

    const SpinSystem system = cfg.system.build();
    const AcquisitionParams params = acq_params(cfg, system);
    const ArtifactWriter artifacts(cfg, "");

    const MeasurementModel model =
        build_measurement_model(system, rotations_for(system.n_channels()), params);
    const ComplexMatrix rho0 = equilibrium_deviation(system).rho;
    const ComplexMatrix u_data = sequence_unitary(*parsed.sequence, system, data_opts(cfg));
    const ComplexMatrix u_ideal = sequence_unitary(*parsed.sequence, system);
    const ComplexMatrix rho_prep = apply(u_data, rho0);

    const TomographyRun tomo =
        tomograph(rho_prep, system, model, cfg, params, *parsed.sequence, "", artifacts);

    ExperimentReport report;
    report.experiment_id = "custom:" + path;
    report.rho_theory = apply(u_ideal, rho0);
    report.rho_experiment = tomo.rho_raw;
    report.delta_percent = deviation_error(report.rho_theory, report.rho_experiment);
    report.convention_flags = convention_flags(cfg);
    report.seeds = {cfg.seed};
    report.notes = tomo.warnings;

    std::optional<StateReconstruction> state;
    try {
        state = state_from(report.rho_experiment);
    } catch (const std::invalid_argument&) {
        state.reset();
    }
    if (state) {
        report.purity = state->purity;
        report.notes.push_back(state_note(*state));
    } else {
        report.notes.push_back("state readout not applicable");
    }
    artifacts.finish(report, state ? &*state : nullptr);
    return report;
}

ExperimentReport run_experiment(const RunConfig& cfg) {
    if (cfg.experiment.starts_with("gate-1q:")) return run_gate_1q(cfg);
    if (cfg.experiment == "pps-2q") return run_pps_2q(cfg);
    if (cfg.experiment == "hadamard-2q") return run_hadamard_2q(cfg);
    if (cfg.experiment == "custom" || cfg.experiment.starts_with("custom:")) {
        return run_custom(cfg);
    }
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

namespace fixtures {

namespace {
Complex c(double re, double im) { return {re, im}; }
}  // namespace

ComplexMatrix s1_experimental() {
    return ComplexMatrix::from_rows({{c(0.9603, 0), c(-0.0501, -0.0822)},
                                     {c(-0.0501, 0.0822), c(-0.9603, 0)}});
}

ComplexMatrix s2_experimental() {
    return ComplexMatrix::from_rows({{c(-0.9342, 0), c(0.0059, -0.0007)},
                                     {c(0.0059, 0.0007), c(0.9342, 0)}});
}

ComplexMatrix s3_experimental() {
    return ComplexMatrix::from_rows({{c(-0.1104, 0), c(1.0221, -0.1443)},
                                     {c(1.0221, 0.1443), c(0.1104, 0)}});
}

ComplexMatrix pps_experimental() {
    return ComplexMatrix::from_rows(
        {{c(0.2844, -0.0253), c(-0.05497, -0.09281), c(0.03786, -0.02695), c(0.01413, 0.03190)},
         {c(-0.05497, 0.09281), c(0.3408, 0.0115), c(-0.01169, 0.01876), c(-0.07782, -0.01776)},
         {c(0.03786, 0.02695), c(-0.01169, -0.01876), c(0.2990, 0.0013), c(-0.0383, -0.2076)},
         {c(0.01413, -0.03190), c(-0.07782, 0.01776), c(-0.0383, 0.2076), c(-0.9242, -0.0615)}});
}

ComplexMatrix pps_hadamard_experimental() {
    return ComplexMatrix::from_rows(
        {{c(0.2985, -0.0527), c(-0.0179, 0.1592), c(0.03942, 0.03982), c(-0.01039, -0.07239)},
         {c(-0.0179, -0.1592), c(-0.3825, -0.0360), c(-0.05330, 0.11672), c(0.4873, -0.0725)},
         {c(0.03942, -0.03982), c(-0.05330, -0.11672), c(0.2856, -0.0056), c(0.0607, 0.1693)},
         {c(-0.01039, 0.07239), c(0.4873, 0.0725), c(0.0607, -0.1693), c(-0.2016, 0.0004)}});
}

ComplexMatrix s1_theory() { return ComplexMatrix::from_rows({{1, 0}, {0, -1}}); }
ComplexMatrix s2_theory() { return ComplexMatrix::from_rows({{-1, 0}, {0, 1}}); }
ComplexMatrix s3_theory() { return ComplexMatrix::from_rows({{0, 1}, {1, 0}}); }

ComplexMatrix pps_theory() {
    return ComplexMatrix::from_rows({{1.0 / 3, 0, 0, 0},
                                     {0, 1.0 / 3, 0, 0},
                                     {0, 0, 1.0 / 3, 0},
                                     {0, 0, 0, -1}});
}

ComplexMatrix pps_hadamard_theory() {
    const ComplexMatrix h =
        kron((1.0 / std::sqrt(2.0)) * (pauli_x() + pauli_z()), ComplexMatrix::identity(2));
    return apply(h, pps_theory());
}

std::vector<FixtureDelta> fixture_deltas() {
    std::vector<FixtureDelta> out;
    const auto add = [&out](std::string id, double printed, const ComplexMatrix& teo,
                            const ComplexMatrix& exp) {
        out.push_back({std::move(id), printed, deviation_error(teo, exp)});
    };
    add("S1", 5.02, s1_theory(), s1_experimental());
    add("S2", 7.71, s2_theory(), s2_experimental());
    add("S3", 10.79, s3_theory(), s3_experimental());
    add("pps", 23.41, pps_theory(), pps_experimental());
    add("pps,H", 33.78, pps_hadamard_theory(), pps_hadamard_experimental());
    return out;
}

}  // namespace fixtures

std::string check_paper_text() {
    std::ostringstream os;
    os << "== delta recomputation from the printed experimental matrices ==\n";
    os << "(spectral-norm definition applied to the printed entries; the quoted\n"
          " delta values are not reproducible from them and are shown alongside)\n";
    for (const auto& f : fixtures::fixture_deltas()) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "  %-6s recomputed %7.4f %%   quoted %5.2f %%   %s\n",
                      f.id.c_str(), f.recomputed_percent, f.printed_percent,
                      std::abs(f.recomputed_percent - f.printed_percent) > 0.05 ? "MISMATCH"
                                                                                : "match");
        os << buf;
    }

    os << "\n== printed Gamma relations vs the simulated chain ==\n";
    for (const int nq : {1, 2}) {
        const SpinSystem system =
            nq == 1 ? SpinSystem::chloroform_proton() : SpinSystem::chloroform_two_spin();
        os << (nq == 1 ? "one qubit:\n" : "two qubits:\n");
        const PaperGammaReport rep = paper_gamma_check(system);
        for (const auto& r : rep.relations) {
            char buf[256];
            std::snprintf(buf, sizeof(buf), "  %-9s %-7s residual %.2e  scale (%.4g, %.4g)  # %s\n",
                          r.id.c_str(), r.matches_up_to_scale ? "match" : "differs", r.residual,
                          r.fitted_scale.real(), r.fitted_scale.imag(), r.description.c_str());
            os << buf;
        }
        for (const auto& n : rep.notes) os << "  note: " << n << "\n";
    }

    os << "\n== compiled P1/P2 vs the printed preparation matrices ==\n";
    const SpinSystem two = SpinSystem::chloroform_two_spin();
    for (const auto conv : {PulseConvention::rotation_operator, PulseConvention::generator_verbatim}) {
        CompileOptions opts;
        opts.convention = conv;
        os << (conv == PulseConvention::rotation_operator ? "rotation_operator (default):\n"
                                                          : "generator_verbatim:\n");
        for (const auto& f : reference_match_report(two, opts)) {
            os << "  " << f.id << ": phase fidelity " << shortest_double(f.fidelity);
            if (f.fidelity > 1 - 1e-9) {
                os << " (phase-equivalent)\n";
            } else if (f.residual_is_diagonal) {
                os << "; residual printed^dag * compiled is diagonal:";
                for (const auto& d : f.residual_diagonal) {
                    os << " (" << shortest_double(d.real()) << ", " << shortest_double(d.imag())
                       << ")";
                }
                os << "\n    -> differs only by per-state phases; populations and temporal"
                      " averaging are unaffected\n";
            } else {
                os << "; residual is NOT diagonal\n";
            }
        }
    }

    const EquilibriumDeviation eq = equilibrium_deviation(two);
    os << "\n== Boltzmann prefactor ==\n";
    os << "  computed hbar*B0*2pi*(gammaH+gammaC)/(2*kB*T) = " << shortest_double(eq.prefactor)
       << "\n  quoted in the reference study               = "
       << shortest_double(eq.prefactor_printed) << "\n";

    os << "\n== literal state readout of the printed pps matrix ==\n";
    os << "  sqrt(max(diag, 0)) with clamping:";
    const ComplexMatrix pps = fixtures::pps_experimental();
    for (int i = 0; i < 4; ++i) {
        const double p = pps.at(i, i).real();
        os << " " << shortest_double(std::sqrt(std::max(p, 0.0)));
    }
    os << "\n  (the quoted state amplitudes 0.0030/0.0001/0.0011/1.5853 are not reproducible\n"
          "   from the printed matrix under the published rule; an unstated background\n"
          "   subtraction was likely applied)\n";
    return os.str();
}

}  // namespace nmrsim
