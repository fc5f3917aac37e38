#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nmrsim/complex_matrix.hpp"
#include "nmrsim/spin_system.hpp"

namespace nmrsim {

struct AcquisitionParams {
    int n_samples = 4096;                      // power of two, >= 2
    double dwell_s = 0;                        // seconds per sample
    std::vector<double> detuning_rad_per_s;    // per channel; empty = on resonance
    double noise_sigma = 0;                    // std-dev per quadrature per sample
    std::uint64_t seed = 0;
    bool decoherence = true;

    // Spectral window of 16*J for two spins (resolves the doublet with >= 64
    // bins between the peaks), 2 kHz for one spin.
    static AcquisitionParams defaults_for(const SpinSystem& system);

    double window_hz() const { return 1.0 / dwell_s; }
    double bin_width_hz() const { return 1.0 / (n_samples * dwell_s); }
};

struct Fid {
    std::string channel;
    std::vector<Complex> samples;
    double dwell_s = 0;
};

struct Spectrum {
    std::string channel;
    std::vector<Complex> amplitudes;
    std::vector<double> freq_hz;  // offsets from the channel carrier, ascending
};

struct PeakWindow {
    double center_hz = 0;
    double half_width_hz = 0;
};

// Transverse magnetization samples for one channel:
//   s_k = Tr[rho(t_k) I+_channel] / dim * exp(-t_k/T2)   (+ noise when sigma > 0)
// with rho(t_k) evolved under the free-evolution Hamiltonian.
Fid simulate_fid(const ComplexMatrix& rho, const SpinSystem& system, std::string_view channel,
                 const AcquisitionParams& params);

// DFT with the exp(+i w t) kernel; output sorted by ascending frequency over
// (-1/(2 dwell), +1/(2 dwell)].
Spectrum fid_to_spectrum(const Fid& fid);

/// Sum of complex amplitudes over bins inside the window, scaled by bin width.
Complex integrate_peak(const Spectrum& spec, const PeakWindow& window);

struct PeakAssignment {
    std::string channel;
    PeakWindow window;
    int gamma_index;  // 1-based Gamma label
};

// One qubit: single window at 0 Hz. Two qubits: the J doublet at +-J/2 on each
// channel. Throws for a degenerate (J = 0) two-spin system.
std::vector<PeakAssignment> peak_table(const SpinSystem& system, const AcquisitionParams& params);

/// Adds independent complex Gaussian noise per sample; deterministic per seed.
Fid add_noise(const Fid& fid, double sigma, std::uint64_t seed);

// Deterministic standard-normal sampler: mt19937_64 + Box-Muller. The C++
// library's normal_distribution is implementation-defined, which would break
// byte-identical outputs across platforms.
class GaussianSampler {
  public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
    double operator()();

  private:
    std::uint64_t next_bits();
    double next_uniform();  // in (0, 1)
    std::mt19937_64 rng_;
    double spare_ = 0;
    bool has_spare_ = false;
};

/// Mixes a base seed with a context tag; used to give every acquisition in an
/// experiment its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);

// CSV: header row, LF line endings, '.' decimal separator, shortest
// round-trip numbers.
void write_fid_csv(std::ostream& os, const Fid& fid);
void write_spectrum_csv(std::ostream& os, const Spectrum& spec);

}  // namespace nmrsim
