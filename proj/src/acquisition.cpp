#include "nmrsim/acquisition.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "nmrsim/format_util.hpp"

namespace nmrsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(int n) { return n >= 2 && (n & (n - 1)) == 0; }

void validate_params(const SpinSystem& system, const AcquisitionParams& p) {
    if (!is_pow2(p.n_samples)) {
        throw std::invalid_argument("acquisition: n_samples must be a power of two >= 2");
    }
    if (p.dwell_s <= 0.0) {
        throw std::invalid_argument("acquisition: dwell must be positive");
    }
    if (system.n_channels() == 2 && p.window_hz() <= 4.0 * system.j_coupling_hz()) {
        throw std::invalid_argument("acquisition: spectral window too narrow for J");
    }
    if (!p.detuning_rad_per_s.empty() &&
        static_cast<int>(p.detuning_rad_per_s.size()) != system.n_channels()) {
        throw std::invalid_argument("acquisition: one detuning per channel");
    }
}

// in-place radix-2 FFT, kernel exp(sign * 2 pi i j k / n), unnormalized
void fft_pow2(std::vector<Complex>& a, int sign) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * kTwoPi / static_cast<double>(len);
        const Complex wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

}  // namespace

AcquisitionParams AcquisitionParams::defaults_for(const SpinSystem& system) {
    AcquisitionParams p;
    p.n_samples = 4096;
    const double window =
        system.n_channels() == 2 ? 16.0 * system.j_coupling_hz() : 2000.0;
    p.dwell_s = 1.0 / window;
    return p;
}

Fid simulate_fid(const ComplexMatrix& rho, const SpinSystem& system, std::string_view channel,
                 const AcquisitionParams& params) {
    validate_params(system, params);
    const int ch = system.channel_index(channel);
    if (rho.dim() != system.dim()) {
        throw std::invalid_argument("simulate_fid: rho dimension does not match system");
    }
    const int nch = system.n_channels();
    const ComplexMatrix iplus = nch == 1 ? raising() : embed(raising(), ch, nch);
    const ComplexMatrix h_free = free_evolution_hamiltonian(system, params.detuning_rad_per_s);
    const ComplexMatrix u_dwell = expm_generator(h_free, params.dwell_s);
    const double t2 = system.channel(ch).t2_s;
    const double inv_dim = 1.0 / static_cast<double>(system.dim());

    Fid fid;
    fid.channel = std::string(channel);
    fid.dwell_s = params.dwell_s;
    fid.samples.resize(params.n_samples);
    const ComplexMatrix u_dag = u_dwell.adjoint();
    ComplexMatrix r = rho;
    for (int k = 0; k < params.n_samples; ++k) {
        const double t = k * params.dwell_s;
        const double envelope = params.decoherence ? std::exp(-t / t2) : 1.0;
        fid.samples[k] = trace(r * iplus) * inv_dim * envelope;
        r = u_dwell * r * u_dag;
    }
    if (params.noise_sigma > 0.0) {
        return add_noise(fid, params.noise_sigma, params.seed);
    }
    return fid;
}

Spectrum fid_to_spectrum(const Fid& fid) {
    const int n = static_cast<int>(fid.samples.size());
    if (!is_pow2(n)) {
        throw std::invalid_argument("fid_to_spectrum: sample count must be a power of two");
    }
    std::vector<Complex> a = fid.samples;
    fft_pow2(a, +1);  // raw bin m holds sum_k s_k exp(+2 pi i m k / n)

    Spectrum spec;
    spec.channel = fid.channel;
    spec.amplitudes.resize(n);
    spec.freq_hz.resize(n);
    const double binw = 1.0 / (n * fid.dwell_s);
    // ascending order m = -n/2+1 .. n/2; raw index for negative m is m + n
    for (int i = 0; i < n; ++i) {
        const int m = i - n / 2 + 1;
        spec.amplitudes[i] = a[(m + n) % n];
        spec.freq_hz[i] = m * binw;
    }
    return spec;
}

Complex integrate_peak(const Spectrum& spec, const PeakWindow& window) {
    if (spec.freq_hz.empty()) {
        throw std::invalid_argument("integrate_peak: empty spectrum");
    }
    if (window.half_width_hz <= 0.0) {
        throw std::invalid_argument("integrate_peak: window half-width must be positive");
    }
    const double lo = spec.freq_hz.front();
    const double hi = spec.freq_hz.back();
    if (window.center_hz - window.half_width_hz < lo ||
        window.center_hz + window.half_width_hz > hi) {
        throw std::invalid_argument("integrate_peak: window outside spectral range");
    }
    const double binw = spec.freq_hz[1] - spec.freq_hz[0];
    const double slack = 1e-9 * binw;
    Complex sum(0, 0);
    for (size_t i = 0; i < spec.freq_hz.size(); ++i) {
        if (std::abs(spec.freq_hz[i] - window.center_hz) <= window.half_width_hz + slack) {
            sum += spec.amplitudes[i];
        }
    }
    return sum * binw;
}

std::vector<PeakAssignment> peak_table(const SpinSystem& system, const AcquisitionParams& params) {
    validate_params(system, params);
    const double hw = 4.0 * params.bin_width_hz();
    if (system.n_channels() == 1) {
        return {{system.channel(0).name, {0.0, hw}, 1}};
    }
    const double j = system.j_coupling_hz();
    if (j <= 0.0) {
        throw ConfigError("peak_table: degenerate J doublet (J <= 0)");
    }
    const std::string h = system.channel(0).name;
    const std::string c = system.channel(1).name;
    return {{h, {+j / 2, hw}, 1},
            {h, {-j / 2, hw}, 2},
            {c, {+j / 2, hw}, 3},
            {c, {-j / 2, hw}, 4}};
}

double GaussianSampler::next_uniform() {
    // 53 random bits, shifted into (0,1); never exactly 0, safe for log()
    const std::uint64_t bits = rng_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double GaussianSampler::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = kTwoPi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    // FNV-1a over the tag, then splitmix64 finalization
    std::uint64_t h = 1469598103934665603ULL ^ base;
    for (const char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    h += 0x9E3779B97F4A7C15ULL;
    h = (h ^ (h >> 30)) * 0xBF58476D1CE4E5B9ULL;
    h = (h ^ (h >> 27)) * 0x94D049BB133111EBULL;
    return h ^ (h >> 31);
}

Fid add_noise(const Fid& fid, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) {
        throw std::invalid_argument("add_noise: sigma must be nonnegative");
    }
    Fid out = fid;
    if (sigma == 0.0) return out;
    GaussianSampler gauss(seed);
    for (auto& s : out.samples) {
        const double re = gauss();
        const double im = gauss();
        s += Complex(sigma * re, sigma * im);
    }
    return out;
}

void write_fid_csv(std::ostream& os, const Fid& fid) {
    os << "index,time_s,re,im\n";
    for (size_t k = 0; k < fid.samples.size(); ++k) {
        os << k << ',' << shortest_double(k * fid.dwell_s) << ','
           << shortest_double(fid.samples[k].real()) << ','
           << shortest_double(fid.samples[k].imag()) << '\n';
    }
}

void write_spectrum_csv(std::ostream& os, const Spectrum& spec) {
    os << "index,freq_hz,re,im\n";
    for (size_t k = 0; k < spec.amplitudes.size(); ++k) {
        os << k << ',' << shortest_double(spec.freq_hz[k]) << ','
           << shortest_double(spec.amplitudes[k].real()) << ','
           << shortest_double(spec.amplitudes[k].imag()) << '\n';
    }
}

}  // namespace nmrsim
