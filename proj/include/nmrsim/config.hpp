#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "nmrsim/spin_system.hpp"

namespace nmrsim {

struct ChannelParams {
    double gamma_mhz_per_t = 0;
    double larmor_hz = 0;
    double rf_hz = 0;
    double t1_s = 1.0;
    double t2_s = 0.3;
};

struct SystemParams {
    int qubits = 2;
    ChannelParams h{42.57, 300e6, 25e3, 1.0, 0.3};
    ChannelParams c{10.71, 75.5e6, 25e3, 1.0, 0.3};
    double j_hz = 208.0;
    double b0_tesla = 7.0;
    double temperature_k = 293.15;

    SpinSystem build() const;
    /// Same sample, the other molecular species (1q <-> 2q); used by the
    /// spectral-contamination mode.
    SystemParams companion() const;
};

struct RunConfig {
    SystemParams system;

    int n_samples = 4096;
    double window_hz = 0;  // 0 = auto: 16*J (two spins) or 2 kHz (one spin)
    bool decoherence = true;
    double noise_sigma = 0;
    std::uint64_t seed = 1;

    std::string experiment;  // gate-1q:S1|S2|S3, pps-2q, hadamard-2q, custom[:path]
    std::string program_path;
    std::string output_dir;
    std::set<std::string> emit = {"report"};  // subset of {fid, spectrum, rho, report}

    double miscal_eps = 0;
    double contaminate_ratio = 0;  // 0 = off; r means the proton-only signal is r times stronger
};

/// Flat key=value file with [system]/[acquisition]/[run] sections; '#' comments.
RunConfig load_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

}  // namespace nmrsim
