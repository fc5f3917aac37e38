#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nmrsim/complex_matrix.hpp"

namespace nmrsim {

// Thrown for bad user-facing configuration (unknown channel, bad file, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Channel {
    std::string name;            // "H" or "C"
    double gamma_mhz_per_t = 0;  // gamma/2pi convention
    double larmor_rad_per_s = 0; // omega_0
    double rf_rad_per_s = 0;     // nutation rate omega_1
    double t1_s = 1.0;
    double t2_s = 0.3;
};

// Physical description of the sample: one channel per active spin, scalar
// J-coupling between them, static field, temperature. Immutable after
// construction.
class SpinSystem {
  public:
    SpinSystem(std::vector<Channel> channels, double j_hz, double b0_tesla, double temperature_k);

    // Proton-only chloroform defaults (the carbon-12 molecules).
    static SpinSystem chloroform_proton();
    // Proton + carbon-13 chloroform defaults.
    static SpinSystem chloroform_two_spin();

    int n_channels() const { return static_cast<int>(channels_.size()); }
    int dim() const { return 1 << n_channels(); }
    const Channel& channel(int i) const { return channels_.at(i); }
    int channel_index(std::string_view name) const;  // throws ConfigError if unknown
    bool has_channel(std::string_view name) const;

    double j_coupling_hz() const { return j_hz_; }
    double b0_tesla() const { return b0_t_; }
    double temperature_k() const { return temperature_k_; }

  private:
    std::vector<Channel> channels_;
    double j_hz_;
    double b0_t_;
    double temperature_k_;
};

// Single-channel rotating-frame drive Hamiltonian (units of rad/s):
//   -w1 (cos(phi) I_x - sin(phi) I_y)
ComplexMatrix h_rot_1q(double w1, double phi);

// Double-rotating-frame Hamiltonian for two channels, optionally with the
// 2*pi*J Iz(x)Iz coupling term.
ComplexMatrix h_rot_2q(double w1_h, double phi_h, double w1_c, double phi_c, double j_hz,
                       bool include_j);

struct EquilibriumDeviation {
    ComplexMatrix rho;         // deviation part, normalized so max |diagonal| = 1
    double prefactor;          // physical Boltzmann scale carried separately
    double prefactor_printed;  // the value quoted by the reference experiment (4x4 case)
};

// High-temperature thermal deviation density matrix (identity share removed).
// One qubit: diag(1,-1). Two qubits: diag(1, r, -r, -1) with
// r = (gamma_H - gamma_C)/(gamma_H + gamma_C).
EquilibriumDeviation equilibrium_deviation(const SpinSystem& system);

// Generator for evolution between/after pulses: per-channel detunings on I_z
// plus the J term (zero matrix for a single resonant spin).
ComplexMatrix free_evolution_hamiltonian(const SpinSystem& system,
                                         std::span<const double> detuning_rad_per_s);
ComplexMatrix free_evolution_hamiltonian(const SpinSystem& system);

}  // namespace nmrsim
