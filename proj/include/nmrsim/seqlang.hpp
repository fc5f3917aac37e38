#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nmrsim/pulse.hpp"

namespace nmrsim {

struct SourceProgram {
    std::string text;
    std::string name = "<program>";
};

struct ParseDiagnostic {
    enum class Severity { error, warning };
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    std::string message;
    Severity severity = Severity::error;
};

// All-or-nothing parse: `sequence` is set only when there are no errors.
struct ParseResult {
    std::optional<PulseSequence> sequence;
    std::vector<ParseDiagnostic> diagnostics;
    bool ok() const { return sequence.has_value(); }
};

// Pulse-program grammar (newline-delimited, whitespace-tolerant,
// case-sensitive keywords):
//
//   program   := line*
//   line      := stmt? comment? NEWLINE
//   stmt      := pulse | delay | simblock | use
//   pulse     := "pulse" CHANNEL AXIS ANGLE
//   delay     := "delay" TIMESPEC
//   simblock  := "sim" "{" pulse ("," pulse)* "}"
//   use       := "use" SEQID
//   CHANNEL   := "H" | "C"
//   AXIS      := "x" | "y" | "-x" | "-y"        (phases 0, pi/2, pi, 3pi/2)
//   ANGLE     := decimal degrees, > 0
//   TIMESPEC  := decimal seconds with suffix "s" | "ms" | "us", or "J/2"
//   comment   := "#" .*
ParseResult parse(const SourceProgram& program);

// Inverse of parse; parse(format(s)) is structurally equal to s.
SourceProgram format(const PulseSequence& seq, std::string name = "<formatted>");

bool structurally_equal(const PulseSequence& a, const PulseSequence& b, double tol = 1e-9);

std::string diagnostic_string(const ParseDiagnostic& d, const std::string& program_name);

}  // namespace nmrsim
