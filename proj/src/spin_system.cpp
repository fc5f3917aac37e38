#include "nmrsim/spin_system.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nmrsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHbar = 1.054571817e-34;   // J s
constexpr double kBoltzmann = 1.380649e-23; // J/K

// Prefactor printed alongside the reference two-spin deviation matrix; it does
// not match a direct recomputation (see equilibrium_deviation), so both are
// carried in the result.
constexpr double kPrintedTwoSpinPrefactor = 5.86e-5;

Channel make_channel(std::string name, double gamma_mhz_t, double larmor_hz, double rf_hz) {
    Channel ch;
    ch.name = std::move(name);
    ch.gamma_mhz_per_t = gamma_mhz_t;
    ch.larmor_rad_per_s = kTwoPi * larmor_hz;
    ch.rf_rad_per_s = kTwoPi * rf_hz;
    ch.t1_s = 1.0;
    ch.t2_s = 0.3;
    return ch;
}

}  // namespace

SpinSystem::SpinSystem(std::vector<Channel> channels, double j_hz, double b0_tesla,
                       double temperature_k)
    : channels_(std::move(channels)), j_hz_(j_hz), b0_t_(b0_tesla), temperature_k_(temperature_k) {
    if (channels_.empty() || channels_.size() > 2) {
        throw ConfigError("SpinSystem: expected 1 or 2 channels");
    }
    if (channels_.size() == 1 && j_hz_ != 0.0) {
        throw ConfigError("SpinSystem: J-coupling must be 0 for a single channel");
    }
    if (temperature_k_ <= 0.0) {
        throw ConfigError("SpinSystem: temperature must be positive");
    }
    for (const auto& ch : channels_) {
        if (ch.gamma_mhz_per_t <= 0.0 || ch.rf_rad_per_s <= 0.0) {
            throw ConfigError("SpinSystem: channel " + ch.name +
                              " needs positive gamma and rf amplitude");
        }
        if (!(ch.t1_s >= ch.t2_s && ch.t2_s > 0.0)) {
            throw ConfigError("SpinSystem: channel " + ch.name + " requires t1 >= t2 > 0");
        }
    }
}

SpinSystem SpinSystem::chloroform_proton() {
    return SpinSystem({make_channel("H", 42.57, 300e6, 25e3)}, 0.0, 7.0, 293.15);
}

SpinSystem SpinSystem::chloroform_two_spin() {
    return SpinSystem({make_channel("H", 42.57, 300e6, 25e3),
                       make_channel("C", 10.71, 75.5e6, 25e3)},
                      208.0, 7.0, 293.15);
}

int SpinSystem::channel_index(std::string_view name) const {
    for (int i = 0; i < n_channels(); ++i) {
        if (channels_[i].name == name) return i;
    }
    throw ConfigError("unknown channel '" + std::string(name) + "'");
}

bool SpinSystem::has_channel(std::string_view name) const {
    for (const auto& ch : channels_) {
        if (ch.name == name) return true;
    }
    return false;
}

ComplexMatrix h_rot_1q(double w1, double phi) {
    return -w1 * (std::cos(phi) * spin_x() - std::sin(phi) * spin_y());
}

ComplexMatrix h_rot_2q(double w1_h, double phi_h, double w1_c, double phi_c, double j_hz,
                       bool include_j) {
    ComplexMatrix h = kron(h_rot_1q(w1_h, phi_h), ComplexMatrix::identity(2)) +
                      kron(ComplexMatrix::identity(2), h_rot_1q(w1_c, phi_c));
    if (include_j) {
        h = h + kTwoPi * j_hz * kron(spin_z(), spin_z());
    }
    return h;
}

EquilibriumDeviation equilibrium_deviation(const SpinSystem& system) {
    EquilibriumDeviation out;
    if (system.n_channels() == 1) {
        out.rho = ComplexMatrix::from_rows({{1, 0}, {0, -1}});
        // rho ~ 1 + (hbar w0 / kT) I_z, so the normalized diag(1,-1) carries
        // hbar w0 / (2 kT).
        out.prefactor = kHbar * system.channel(0).larmor_rad_per_s /
                        (2.0 * kBoltzmann * system.temperature_k());
        out.prefactor_printed = 0.0;
        return out;
    }
    const double gh = system.channel(0).gamma_mhz_per_t * 1e6;
    const double gc = system.channel(1).gamma_mhz_per_t * 1e6;
    const double r = (gh - gc) / (gh + gc);
    out.rho = ComplexMatrix::from_rows({{1, 0, 0, 0},
                                        {0, r, 0, 0},
                                        {0, 0, -r, 0},
                                        {0, 0, 0, -1}});
    out.prefactor = kHbar * system.b0_tesla() * kTwoPi * (gh + gc) /
                    (2.0 * kBoltzmann * system.temperature_k());
    out.prefactor_printed = kPrintedTwoSpinPrefactor;
    return out;
}

ComplexMatrix free_evolution_hamiltonian(const SpinSystem& system,
                                         std::span<const double> detuning_rad_per_s) {
    const int nch = system.n_channels();
    if (!detuning_rad_per_s.empty() && static_cast<int>(detuning_rad_per_s.size()) != nch) {
        throw std::invalid_argument("free_evolution_hamiltonian: one detuning per channel");
    }
    ComplexMatrix h = ComplexMatrix::zero(system.dim());
    for (int i = 0; i < nch; ++i) {
        const double dw = detuning_rad_per_s.empty() ? 0.0 : detuning_rad_per_s[i];
        if (dw != 0.0) {
            h = h + (-dw) * embed(spin_z(), i, nch);
        }
    }
    if (nch == 2) {
        h = h + kTwoPi * system.j_coupling_hz() * kron(spin_z(), spin_z());
    }
    return h;
}

ComplexMatrix free_evolution_hamiltonian(const SpinSystem& system) {
    return free_evolution_hamiltonian(system, {});
}

}  // namespace nmrsim
