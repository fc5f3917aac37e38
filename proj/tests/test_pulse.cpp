#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nmrsim/pulse.hpp"
#include "test_support.hpp"

using namespace nmrsim;

namespace {
constexpr double kPi = std::numbers::pi;
const Complex kI(0, 1);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PulseEvent pulse(const char* ch, double flip_deg, double phase) {
    return {ch, flip_deg * kPi / 180.0, phase};
}

ComplexMatrix hadamard() { return kInvSqrt2 * (pauli_x() + pauli_z()); }
}  // namespace

TEST_CASE("pulse event unitaries") {
    const SpinSystem one = SpinSystem::chloroform_proton();

    // pi pulse about x is sigma_x up to a global phase in either convention
    const ComplexMatrix u_pi = event_unitary(pulse("H", 180, 0), one);
    CHECK(phase_equivalent(u_pi, pauli_x()));

    // 90-degree x pulse: the adopted rotation-operator convention gives
    // (1/sqrt2)[[1,-i],[-i,1]]; the verbatim-generator compilation gives the
    // conjugate. Both are pinned here.
    const ComplexMatrix u90 = event_unitary(pulse("H", 90, 0), one);
    const ComplexMatrix rot_expected =
        kInvSqrt2 * ComplexMatrix::from_rows({{1, -kI}, {-kI, 1}});
    CHECK(max_abs_diff(u90, rot_expected) < 1e-12);

    CompileOptions verbatim;
    verbatim.convention = PulseConvention::generator_verbatim;
    const ComplexMatrix u90v = event_unitary(pulse("H", 90, 0), one, verbatim);
    const ComplexMatrix verb_expected =
        kInvSqrt2 * ComplexMatrix::from_rows({{1, kI}, {kI, 1}});
    CHECK(max_abs_diff(u90v, verb_expected) < 1e-12);

    CHECK_THROWS_AS(event_unitary(pulse("C", 90, 0), one, {}), ConfigError);
}

TEST_CASE("delay event unitary is the J evolution") {
    const SpinSystem two = SpinSystem::chloroform_two_spin();
    const ComplexMatrix u = event_unitary(DelayEvent{0.0, true}, two);
    const Complex e_m = std::exp(Complex(0, -kPi / 4));
    const Complex e_p = std::exp(Complex(0, kPi / 4));
    const ComplexMatrix expected = ComplexMatrix::from_rows(
        {{e_m, 0, 0, 0}, {0, e_p, 0, 0}, {0, 0, e_p, 0}, {0, 0, 0, e_m}});
    CHECK(max_abs_diff(u, expected) < 1e-12);

    const SpinSystem one = SpinSystem::chloroform_proton();
    CHECK(max_abs_diff(event_unitary(DelayEvent{3e-3, false}, one),
                       ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("simultaneous group equals the sequential product of commuting pulses") {
    const SpinSystem two = SpinSystem::chloroform_two_spin();
    SimultaneousGroup g{{pulse("H", 90, 0), pulse("C", 90, 0)}};
    const ComplexMatrix u_sim = event_unitary(g, two);
    const ComplexMatrix u_seq = event_unitary(pulse("C", 90, 0), two) *
                                event_unitary(pulse("H", 90, 0), two);
    CHECK(max_abs_diff(u_sim, u_seq) < 1e-10);

    SimultaneousGroup dup{{pulse("H", 90, 0), pulse("H", 90, kPi / 2)}};
    CHECK_THROWS_AS(event_unitary(dup, two), std::invalid_argument);
}

TEST_CASE("sequence unitaries of the named gates") {
    const SpinSystem one = SpinSystem::chloroform_proton();
    CHECK(max_abs_diff(sequence_unitary(PulseSequence{}, one), ComplexMatrix::identity(2)) == 0);

    const ComplexMatrix s1 = sequence_unitary(named_sequence(NamedSequence::s1), one);
    const ComplexMatrix s2 = sequence_unitary(named_sequence(NamedSequence::s2), one);
    const ComplexMatrix s3 = sequence_unitary(named_sequence(NamedSequence::s3), one);
    CHECK(phase_equivalent(s1, pauli_z()));
    CHECK(phase_equivalent(s2, pauli_x()));
    CHECK(phase_equivalent(s3, hadamard()));

    // gate outcomes on the equilibrium deviation
    const ComplexMatrix rho0 = pauli_z();
    CHECK(max_abs_diff(apply(s1, rho0), ComplexMatrix::from_rows({{1, 0}, {0, -1}})) < 1e-10);
    CHECK(max_abs_diff(apply(s2, rho0), ComplexMatrix::from_rows({{-1, 0}, {0, 1}})) < 1e-10);
    CHECK(max_abs_diff(apply(s3, rho0), ComplexMatrix::from_rows({{0, 1}, {1, 0}})) < 1e-10);
}

TEST_CASE("two-qubit Hadamard matches the printed matrix") {
    const SpinSystem two = SpinSystem::chloroform_two_spin();
    const ComplexMatrix h2q = sequence_unitary(named_sequence(NamedSequence::h2q), two);
    const ComplexMatrix printed = kInvSqrt2 * ComplexMatrix::from_rows({{1, 0, 1, 0},
                                                                        {0, 1, 0, 1},
                                                                        {1, 0, -1, 0},
                                                                        {0, 1, 0, -1}});
    CHECK(phase_equivalent(h2q, printed));
}

TEST_CASE("gate idempotence up to global phase") {
    const SpinSystem one = SpinSystem::chloroform_proton();
    const SpinSystem two = SpinSystem::chloroform_two_spin();
    for (const auto id : {NamedSequence::s1, NamedSequence::s2, NamedSequence::s3}) {
        const ComplexMatrix u = sequence_unitary(named_sequence(id), one);
        CHECK(phase_equivalent(u * u, ComplexMatrix::identity(2), 1e-9));
    }
    const ComplexMatrix h = sequence_unitary(named_sequence(NamedSequence::h2q), two);
    CHECK(phase_equivalent(h * h, ComplexMatrix::identity(4), 1e-9));
}

TEST_CASE("named sequence structure") {
    const PulseSequence pi1 = named_sequence(NamedSequence::pi1);
    REQUIRE(pi1.events.size() == 1);
    const auto& p = std::get<PulseEvent>(pi1.events[0]);
    CHECK(p.channel == "H");
    CHECK(p.flip_angle == doctest::Approx(kPi / 2));
    CHECK(p.phase == 0.0);

    const PulseSequence o4 = named_sequence(NamedSequence::omega4);
    REQUIRE(o4.events.size() == 1);
    const auto& g = std::get<SimultaneousGroup>(o4.events[0]);
    REQUIRE(g.pulses.size() == 2);
    CHECK(g.pulses[0].channel == "H");
    CHECK(g.pulses[0].phase == doctest::Approx(kPi / 2));  // y axis
    CHECK(g.pulses[1].channel == "C");
    CHECK(g.pulses[1].phase == 0.0);

    const PulseSequence p1 = named_sequence(NamedSequence::p1);
    REQUIRE(p1.events.size() == 6);
    CHECK(std::get<PulseEvent>(p1.events[0]).channel == "H");
    CHECK(std::get<DelayEvent>(p1.events[1]).half_j);
    CHECK(std::get<PulseEvent>(p1.events[2]).phase == doctest::Approx(kPi / 2));
    CHECK(std::get<PulseEvent>(p1.events[3]).channel == "C");

    CHECK_THROWS_AS(named_sequence_id("NOPE"), ConfigError);
}

TEST_CASE("apply conjugation") {
    const ComplexMatrix rho = ComplexMatrix::from_rows({{1, 0}, {0, -1}});
    CHECK(max_abs_diff(apply(ComplexMatrix::identity(2), rho), rho) == 0);
    CHECK(max_abs_diff(apply(pauli_x(), rho), ComplexMatrix::from_rows({{-1, 0}, {0, 1}})) <
          1e-15);
    CHECK(max_abs_diff(apply(hadamard(), rho), pauli_x()) < 1e-12);
    CHECK_THROWS_AS(apply(ComplexMatrix::identity(4), rho), std::invalid_argument);

    std::mt19937_64 rng(7);
    for (int it = 0; it < 25; ++it) {
        const ComplexMatrix m = test::random_hermitian(4, rng);
        const ComplexMatrix u = test::random_unitary(4, rng);
        const ComplexMatrix out = apply(u, m);
        CHECK(out.is_hermitian(1e-12));
        CHECK(std::abs(trace(out) - trace(m)) < 1e-12);
    }
}

TEST_CASE("temporal averaging") {
    const ComplexMatrix rho = ComplexMatrix::from_rows({{0.25, 0.5}, {0.5, -0.25}});
    const ComplexMatrix single[] = {rho};
    CHECK(max_abs_diff(temporal_average(single), rho) == 0);

    const ComplexMatrix pair[] = {pauli_z(), (-1.0) * pauli_z()};
    CHECK(temporal_average(pair).max_abs() < 1e-15);

    CHECK_THROWS_AS(temporal_average(std::span<const ComplexMatrix>{}), std::invalid_argument);

    // reference preparations cyclically permute the first three populations
    const ComplexMatrix rho0 = ComplexMatrix::from_rows(
        {{1, 0, 0, 0}, {0, 0.5981, 0, 0}, {0, 0, -0.5981, 0}, {0, 0, 0, -1}});
    const ComplexMatrix avg =
        temporal_average(std::vector<ComplexMatrix>{apply(reference_matrix(PrepMatrix::p0), rho0),
                                                    apply(reference_matrix(PrepMatrix::p1), rho0),
                                                    apply(reference_matrix(PrepMatrix::p2), rho0)});
    const ComplexMatrix pps = ComplexMatrix::from_rows(
        {{1.0 / 3, 0, 0, 0}, {0, 1.0 / 3, 0, 0}, {0, 0, 1.0 / 3, 0}, {0, 0, 0, -1}});
    CHECK(max_abs_diff(avg, pps) < 1e-12);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(avg.at(i, i) - avg.at((i + 1) % 3, (i + 1) % 3)) < 1e-12);
    }
}

TEST_CASE("reference matrices") {
    CHECK(max_abs_diff(reference_matrix(PrepMatrix::p0), ComplexMatrix::identity(4)) == 0);
    const ComplexMatrix p1 = reference_matrix(PrepMatrix::p1);
    const ComplexMatrix p2 = reference_matrix(PrepMatrix::p2);
    CHECK(p1.is_unitary(1e-12));
    CHECK(p2.is_unitary(1e-12));
    CHECK(p1.at(0, 1) == Complex(0, -1));
    CHECK(p1.at(2, 0) == Complex(-1, 0));
    CHECK(p2.at(0, 2) == Complex(-1, 0));
    CHECK(p2.at(1, 0) == Complex(0, -1));
}

TEST_CASE("compiled preparations permute populations like the printed matrices") {
    const SpinSystem two = SpinSystem::chloroform_two_spin();
    const ComplexMatrix rho0 = ComplexMatrix::from_rows(
        {{1, 0, 0, 0}, {0, 0.5981, 0, 0}, {0, 0, -0.5981, 0}, {0, 0, 0, -1}});
    const ComplexMatrix u1 = sequence_unitary(named_sequence(NamedSequence::p1), two);
    const ComplexMatrix u2 = sequence_unitary(named_sequence(NamedSequence::p2), two);

    for (const auto* u : {&u1, &u2}) {
        const ComplexMatrix out = apply(*u, rho0);
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                if (r != c) CHECK(std::abs(out.at(r, c)) < 1e-10);
            }
        }
    }
    // P1: (d1,d2,d3) -> (d2,d3,d1); P2 the other cycle; |11> untouched
    const ComplexMatrix o1 = apply(u1, rho0);
    CHECK(o1.at(0, 0).real() == doctest::Approx(0.5981));
    CHECK(o1.at(1, 1).real() == doctest::Approx(-0.5981));
    CHECK(o1.at(2, 2).real() == doctest::Approx(1.0));
    CHECK(o1.at(3, 3).real() == doctest::Approx(-1.0));
    const ComplexMatrix o2 = apply(u2, rho0);
    CHECK(o2.at(0, 0).real() == doctest::Approx(-0.5981));
    CHECK(o2.at(1, 1).real() == doctest::Approx(1.0));
    CHECK(o2.at(2, 2).real() == doctest::Approx(0.5981));

    const ComplexMatrix avg = temporal_average(std::vector<ComplexMatrix>{rho0, o1, o2});
    const ComplexMatrix pps = ComplexMatrix::from_rows(
        {{1.0 / 3, 0, 0, 0}, {0, 1.0 / 3, 0, 0}, {0, 0, 1.0 / 3, 0}, {0, 0, 0, -1}});
    CHECK(max_abs_diff(avg, pps) < 1e-10);
}

TEST_CASE("compiled P1/P2 differ from the printed matrices by diagonal phases only") {
    const SpinSystem two = SpinSystem::chloroform_two_spin();
    const auto findings = reference_match_report(two);
    REQUIRE(findings.size() == 2);

    // P1: phase fidelity 0, residual diag(-1, 1, 1, -1)
    CHECK(findings[0].id == "P1");
    CHECK(findings[0].fidelity < 1e-9);
    CHECK(findings[0].residual_is_diagonal);
    CHECK(std::abs(findings[0].residual_diagonal[0] - Complex(-1, 0)) < 1e-9);
    CHECK(std::abs(findings[0].residual_diagonal[1] - Complex(1, 0)) < 1e-9);
    CHECK(std::abs(findings[0].residual_diagonal[2] - Complex(1, 0)) < 1e-9);
    CHECK(std::abs(findings[0].residual_diagonal[3] - Complex(-1, 0)) < 1e-9);

    // P2: phase fidelity 1/2, residual diag(i, 1, i, -1)
    CHECK(findings[1].id == "P2");
    CHECK(findings[1].fidelity == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(findings[1].residual_is_diagonal);
    CHECK(std::abs(findings[1].residual_diagonal[0] - Complex(0, 1)) < 1e-9);
    CHECK(std::abs(findings[1].residual_diagonal[1] - Complex(1, 0)) < 1e-9);
    CHECK(std::abs(findings[1].residual_diagonal[2] - Complex(0, 1)) < 1e-9);
    CHECK(std::abs(findings[1].residual_diagonal[3] - Complex(-1, 0)) < 1e-9);
}

TEST_CASE("phase equivalence checker") {
    std::mt19937_64 rng(11);
    const ComplexMatrix u = test::random_unitary(4, rng);
    const ComplexMatrix v = std::exp(Complex(0, 0.7)) * u;
    CHECK(phase_equivalent(u, v));
    CHECK(phase_fidelity(pauli_x(), pauli_z()) < 1e-12);
    CHECK_FALSE(phase_equivalent(pauli_x(), pauli_z()));
}

TEST_CASE("compile options") {
    const SpinSystem two = SpinSystem::chloroform_two_spin();
    CompileOptions soft;
    soft.soft_pulse = true;
    const ComplexMatrix hard_u = event_unitary(pulse("H", 90, 0), two);
    const ComplexMatrix soft_u = event_unitary(pulse("H", 90, 0), two, soft);
    CHECK(max_abs_diff(hard_u, soft_u) > 1e-6);   // J during the pulse shifts it slightly
    CHECK(max_abs_diff(hard_u, soft_u) < 1e-2);   // but only slightly: w1 >> 2 pi J

    CompileOptions miscal;
    miscal.flip_scale = 1.02;
    const ComplexMatrix stretched = event_unitary(pulse("H", 90, 0), two, miscal);
    CHECK(max_abs_diff(hard_u, stretched) > 1e-3);
}

TEST_CASE("every sequence unitary is unitary") {
    const SpinSystem one = SpinSystem::chloroform_proton();
    const SpinSystem two = SpinSystem::chloroform_two_spin();
    for (const auto& name : named_sequence_names()) {
        const NamedSequence id = named_sequence_id(name);
        const PulseSequence seq = named_sequence(id);
        bool uses_carbon = false;
        for (const auto& ev : seq.events) {
            if (const auto* p = std::get_if<PulseEvent>(&ev)) {
                uses_carbon = uses_carbon || p->channel == "C";
            } else if (std::holds_alternative<DelayEvent>(ev)) {
                uses_carbon = true;  // J/2 delays need the coupled system
            } else {
                uses_carbon = true;
            }
        }
        const SpinSystem& sys = uses_carbon ? two : one;
        CHECK(sequence_unitary(seq, sys).is_unitary(1e-10));
    }
}
