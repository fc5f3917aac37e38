#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nmrsim/acquisition.hpp"
#include "nmrsim/pulse.hpp"

namespace nmrsim {

struct TomographyReadout {
    std::string rotation_id;           // "NONE", "PI1", "OMEGA1".."OMEGA4"
    std::map<int, Complex> gammas;     // Gamma index -> complex peak integral
};

// Linear map from the traceless Hermitian coordinates of rho to the stacked
// Gamma readouts. Rows are obtained by pushing each basis matrix through the
// full simulated chain (rotate -> FID -> spectrum -> peak integral), so the
// model *is* the brute-force oracle; hand-derived coefficient equations are
// test fixtures, not source code.
struct MeasurementModel {
    std::vector<ComplexMatrix> basis;              // traceless Hermitian basis, dim^2 - 1
    std::vector<std::string> rotation_ids;
    std::vector<ComplexMatrix> rotation_unitaries;
    std::vector<PeakAssignment> peaks;
    Eigen::MatrixXcd coefficients;                 // (rotations x peaks) rows, basis columns
    int rank = 0;
    int null_space_dim = 0;
    double condition_number = 0;
    AcquisitionParams params;                      // noise forced off
    std::vector<std::string> warnings;
};

// Traceless Hermitian basis used throughout: dim-1 adjacent diagonal
// differences, then for each i<j the symmetric and antisymmetric pair.
std::vector<ComplexMatrix> traceless_hermitian_basis(int dim);

/// Resolves "NONE" or a named sequence id to its compiled unitary.
ComplexMatrix rotation_unitary(const std::string& rotation_id, const SpinSystem& system,
                               const CompileOptions& opts = {});

// Optional taps into the acquisition chain. `mixin` returns a contaminant FID
// to add to the clean signal of a channel before noise (how co-resident
// experiments bleed into each other); `sink` observes the final FID/spectrum
// (used to export CSV artifacts).
struct AcquisitionHooks {
    std::function<const Fid*(const std::string& channel)> mixin;
    std::function<void(const std::string& channel, const Fid&, const Spectrum&)> sink;
};

/// Peak integrals for one rotated acquisition of rho.
std::map<int, Complex> measure_gammas(const ComplexMatrix& rho, const SpinSystem& system,
                                      const ComplexMatrix& rotation,
                                      std::span<const PeakAssignment> peaks,
                                      const AcquisitionParams& params, std::uint64_t seed,
                                      const AcquisitionHooks& hooks = {});

MeasurementModel build_measurement_model(const SpinSystem& system,
                                         std::vector<std::string> rotation_ids,
                                         const AcquisitionParams& params,
                                         const CompileOptions& opts = {});

/// Noise-free readouts of rho through the model's own chain (test/round-trip helper).
std::vector<TomographyReadout> simulate_readouts(const ComplexMatrix& rho,
                                                 const SpinSystem& system,
                                                 const MeasurementModel& model);

struct ReconstructionResult {
    ComplexMatrix rho;  // Hermitian, traceless
    std::vector<std::string> warnings;
};

// Least-squares inversion of the stacked (real, imaginary) linear system;
// Hermiticity and trace(rho) = 0 are built into the basis.
ReconstructionResult reconstruct(const MeasurementModel& model,
                                 std::span<const TomographyReadout> readouts);

/// Rescales a deviation matrix so its largest-|value| diagonal entry is +-1.
ComplexMatrix normalize_deviation(const ComplexMatrix& rho);

struct GammaRelationFinding {
    std::string id;
    std::string description;
    bool matches_up_to_scale = false;
    Complex fitted_scale;      // LHS ~= fitted_scale * RHS
    double residual = 0;       // relative, after the fit
};

struct PaperGammaReport {
    std::vector<GammaRelationFinding> relations;
    std::vector<std::string> notes;
};

// Evaluates the reference experiment's printed Gamma relations against the
// oracle-built chain on random Hermitian rho; outcomes are recorded, not
// presumed.
PaperGammaReport paper_gamma_check(const SpinSystem& system);

struct StateComponent {
    double amplitude = 0;
    double phase = 0;
};

struct StateReconstruction {
    std::vector<StateComponent> components;
    double purity = 0;  // trace(rho^2)/trace(rho)^2
    std::vector<std::string> warnings;
};

// Wave-function readout: |c_i| = sqrt(max(rho_ii, 0)) (clamped negatives are
// warned about), phases Arg(rho_{i,ref}) with phase(ref) = 0.
// `reference_index` is 0-based; rho_{ref,ref} must be positive.
StateReconstruction reconstruct_state(const ComplexMatrix& rho, int reference_index);

// Pseudo-pure projector part of a normalized deviation matrix (the identity
// background discounted): one qubit (rho + 1)/2, two qubits (1)/4 - (3/4) rho.
// For an exactly prepared pseudo-pure state this is the rank-1 projector.
ComplexMatrix pseudo_pure_part(const ComplexMatrix& normalized_deviation);

}  // namespace nmrsim
