#include "nmrsim/pulse.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace nmrsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 2x2 pulse generator in rad/s for the chosen convention.
ComplexMatrix pulse_generator(double w1, double phi, PulseConvention conv) {
    if (conv == PulseConvention::rotation_operator) {
        return w1 * (std::cos(phi) * spin_x() + std::sin(phi) * spin_y());
    }
    return h_rot_1q(w1, phi);
}

ComplexMatrix embedded_pulse_generator(const SpinSystem& system, const PulseEvent& p,
                                       PulseConvention conv) {
    const int idx = system.channel_index(p.channel);
    const ComplexMatrix g = pulse_generator(system.channel(idx).rf_rad_per_s, p.phase, conv);
    return system.n_channels() == 1 ? g : embed(g, idx, system.n_channels());
}

double delay_duration(const DelayEvent& d, const SpinSystem& system) {
    if (d.half_j) {
        const double j = system.j_coupling_hz();
        if (j <= 0.0) {
            throw ConfigError("J/2 delay requires a system with positive J-coupling");
        }
        return 1.0 / (2.0 * j);
    }
    return d.seconds;
}

PulseEvent pulse(std::string ch, double flip_deg, double phase) {
    PulseEvent p;
    p.channel = std::move(ch);
    p.flip_angle = flip_deg * (kPi / 180.0);
    p.phase = phase;
    return p;
}

constexpr double kAxisX = 0.0;
constexpr double kAxisY = kPi / 2.0;

}  // namespace

ComplexMatrix event_unitary(const SequenceEvent& event, const SpinSystem& system,
                            const CompileOptions& opts) {
    if (const auto* p = std::get_if<PulseEvent>(&event)) {
        const int idx = system.channel_index(p->channel);
        const double w1 = system.channel(idx).rf_rad_per_s;
        const double dt = p->flip_angle * opts.flip_scale / w1;
        ComplexMatrix g = embedded_pulse_generator(system, *p, opts.convention);
        if (opts.soft_pulse && system.n_channels() == 2) {
            g = g + kTwoPi * system.j_coupling_hz() * kron(spin_z(), spin_z());
        }
        return expm_generator(g, dt);
    }
    if (const auto* d = std::get_if<DelayEvent>(&event)) {
        return expm_generator(free_evolution_hamiltonian(system), delay_duration(*d, system));
    }
    const auto& group = std::get<SimultaneousGroup>(event);
    std::set<std::string> seen;
    ComplexMatrix g = ComplexMatrix::zero(system.dim());
    double dt_max = 0.0;
    for (const auto& p : group.pulses) {
        if (!seen.insert(p.channel).second) {
            throw std::invalid_argument("simultaneous group has two pulses on channel " + p.channel);
        }
        const int idx = system.channel_index(p.channel);
        const double dt = p.flip_angle * opts.flip_scale / system.channel(idx).rf_rad_per_s;
        dt_max = std::max(dt_max, dt);
        // weight each commuting channel generator by its own duration
        g = g + dt * embedded_pulse_generator(system, p, opts.convention);
    }
    if (opts.soft_pulse && system.n_channels() == 2) {
        g = g + dt_max * kTwoPi * system.j_coupling_hz() * kron(spin_z(), spin_z());
    }
    return expm_generator(g, 1.0);
}

ComplexMatrix sequence_unitary(const PulseSequence& seq, const SpinSystem& system,
                               const CompileOptions& opts) {
    ComplexMatrix u = ComplexMatrix::identity(system.dim());
    for (const auto& ev : seq.events) {
        u = event_unitary(ev, system, opts) * u;
    }
    return u;
}

NamedSequence named_sequence_id(std::string_view id) {
    const auto& names = named_sequence_names();
    for (size_t k = 0; k < names.size(); ++k) {
        if (names[k] == id) return static_cast<NamedSequence>(k);
    }
    throw ConfigError("unknown sequence id '" + std::string(id) + "'");
}

std::string named_sequence_name(NamedSequence id) {
    return named_sequence_names().at(static_cast<size_t>(id));
}

const std::vector<std::string>& named_sequence_names() {
    static const std::vector<std::string> names = {"S1", "S2", "S3", "PI1", "OMEGA1", "OMEGA2",
                                                   "OMEGA3", "OMEGA4", "P1", "P2", "H2Q"};
    return names;
}

PulseSequence named_sequence(NamedSequence id) {
    PulseSequence s;
    const DelayEvent half_j{0.0, true};
    switch (id) {
        case NamedSequence::s1:
            // pi-x then pi-y; acts as the Pauli-Z gate on the deviation matrix
            s.events = {pulse("H", 180, kAxisX), pulse("H", 180, kAxisY)};
            break;
        case NamedSequence::s2:
            // single pi-x; Pauli-X gate
            s.events = {pulse("H", 180, kAxisX)};
            break;
        case NamedSequence::s3:
            // pi/2-y then pi-x; Hadamard gate
            s.events = {pulse("H", 90, kAxisY), pulse("H", 180, kAxisX)};
            break;
        case NamedSequence::pi1:
            s.events = {pulse("H", 90, kAxisX)};
            break;
        case NamedSequence::omega1:
            s.events = {pulse("H", 90, kAxisX)};
            break;
        case NamedSequence::omega2:
            s.events = {pulse("C", 90, kAxisX)};
            break;
        case NamedSequence::omega3:
            s.events = {SimultaneousGroup{{pulse("H", 90, kAxisX), pulse("C", 90, kAxisX)}}};
            break;
        case NamedSequence::omega4:
            // y on hydrogen, x on carbon. The y axis (not its mirror) is what
            // makes the five-rotation readout informationally complete.
            s.events = {SimultaneousGroup{{pulse("H", 90, kAxisY), pulse("C", 90, kAxisX)}}};
            break;
        case NamedSequence::p1:
            s.events = {pulse("H", 90, kAxisX), half_j, pulse("H", 90, kAxisY),
                        pulse("C", 90, kAxisX), half_j, pulse("C", 90, kAxisY)};
            break;
        case NamedSequence::p2:
            s.events = {pulse("C", 90, kAxisX), half_j, pulse("C", 90, kAxisY),
                        pulse("H", 90, kAxisX), half_j, pulse("H", 90, kAxisY)};
            break;
        case NamedSequence::h2q:
            s.events = {pulse("H", 90, kAxisY), pulse("H", 180, kAxisX)};
            break;
    }
    return s;
}

ComplexMatrix apply(const ComplexMatrix& u, const ComplexMatrix& rho) {
    if (u.dim() != rho.dim()) {
        throw std::invalid_argument("apply: dimension mismatch");
    }
    return u * rho * u.adjoint();
}

ComplexMatrix temporal_average(std::span<const ComplexMatrix> rhos) {
    if (rhos.empty()) {
        throw std::invalid_argument("temporal_average: empty list");
    }
    ComplexMatrix sum = rhos[0];
    for (size_t k = 1; k < rhos.size(); ++k) {
        sum = sum + rhos[k];
    }
    return (1.0 / static_cast<double>(rhos.size())) * sum;
}

ComplexMatrix reference_matrix(PrepMatrix id) {
    const Complex i(0, 1);
    switch (id) {
        case PrepMatrix::p0:
            return ComplexMatrix::identity(4);
        case PrepMatrix::p1:
            return ComplexMatrix::from_rows({{0, -i, 0, 0},
                                             {0, 0, -1, 0},
                                             {-1, 0, 0, 0},
                                             {0, 0, 0, i}});
        case PrepMatrix::p2:
            return ComplexMatrix::from_rows({{0, 0, -1, 0},
                                             {-i, 0, 0, 0},
                                             {0, -1, 0, 0},
                                             {0, 0, 0, i}});
    }
    throw std::invalid_argument("reference_matrix: unknown id");
}

std::vector<ReferenceMatchFinding> reference_match_report(const SpinSystem& system,
                                                          const CompileOptions& opts) {
    std::vector<ReferenceMatchFinding> out;
    const std::pair<NamedSequence, PrepMatrix> pairs[] = {
        {NamedSequence::p1, PrepMatrix::p1},
        {NamedSequence::p2, PrepMatrix::p2},
    };
    for (const auto& [seq_id, ref_id] : pairs) {
        ReferenceMatchFinding f;
        f.id = named_sequence_name(seq_id);
        const ComplexMatrix compiled = sequence_unitary(named_sequence(seq_id), system, opts);
        const ComplexMatrix ref = reference_matrix(ref_id);
        f.fidelity = phase_fidelity(compiled, ref);
        const ComplexMatrix residual = ref.adjoint() * compiled;
        double offdiag = 0.0;
        for (int r = 0; r < residual.dim(); ++r) {
            for (int c = 0; c < residual.dim(); ++c) {
                if (r != c) offdiag = std::max(offdiag, std::abs(residual.at(r, c)));
            }
        }
        f.residual_is_diagonal = offdiag < 1e-9;
        for (int r = 0; r < residual.dim(); ++r) {
            f.residual_diagonal.push_back(residual.at(r, r));
        }
        out.push_back(std::move(f));
    }
    return out;
}

double phase_fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("phase_fidelity: dimension mismatch");
    }
    return std::abs(trace(a.adjoint() * b)) / static_cast<double>(a.dim());
}

bool phase_equivalent(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    return phase_fidelity(a, b) >= 1.0 - tol;
}

}  // namespace nmrsim
