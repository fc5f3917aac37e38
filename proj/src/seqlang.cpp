#include "nmrsim/seqlang.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "nmrsim/format_util.hpp"

namespace nmrsim {

namespace {

constexpr double kPi = std::numbers::pi;

struct Token {
    std::string text;
    int column;  // 1-based
};

// splits on whitespace; '{', '}' and ',' are tokens of their own
std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') break;
        if (c == '{' || c == '}' || c == ',') {
            out.push_back({std::string(1, c), static_cast<int>(i) + 1});
            ++i;
            continue;
        }
        size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
               line[j] != '{' && line[j] != '}' && line[j] != ',' && line[j] != '#') {
            ++j;
        }
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

class LineParser {
  public:
    LineParser(int line_no, std::vector<Token> tokens, std::vector<ParseDiagnostic>& diags)
        : line_(line_no), tokens_(std::move(tokens)), diags_(diags) {}

    bool done() const { return pos_ >= tokens_.size(); }
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }
    int end_column() const {
        if (tokens_.empty()) return 1;
        const Token& last = tokens_.back();
        return last.column + static_cast<int>(last.text.size());
    }

    void error_at(int col, const std::string& msg) {
        diags_.push_back({line_, col, msg, ParseDiagnostic::Severity::error});
        failed_ = true;
    }
    void error_here(const std::string& msg) {
        error_at(done() ? end_column() : peek().column, msg);
    }
    bool failed() const { return failed_; }

    std::optional<PulseEvent> parse_pulse_args() {
        PulseEvent p;
        if (done()) {
            error_here("expected channel after 'pulse'");
            return std::nullopt;
        }
        const Token ch = take();
        if (ch.text != "H" && ch.text != "C") {
            error_at(ch.column, "unknown channel '" + ch.text + "' (expected H or C)");
            return std::nullopt;
        }
        p.channel = ch.text;
        if (done()) {
            error_here("expected axis after channel");
            return std::nullopt;
        }
        const Token ax = take();
        if (ax.text == "x") p.phase = 0.0;
        else if (ax.text == "y") p.phase = kPi / 2;
        else if (ax.text == "-x") p.phase = kPi;
        else if (ax.text == "-y") p.phase = 3 * kPi / 2;
        else {
            error_at(ax.column, "unknown axis '" + ax.text + "' (expected x, y, -x or -y)");
            return std::nullopt;
        }
        if (done()) {
            error_here("expected angle in degrees");
            return std::nullopt;
        }
        const Token ang = take();
        double deg = 0.0;
        const char* b = ang.text.data();
        const char* e = b + ang.text.size();
        const auto res = std::from_chars(b, e, deg);
        if (res.ec != std::errc{} || res.ptr != e) {
            error_at(ang.column, "malformed angle '" + ang.text + "'");
            return std::nullopt;
        }
        if (!(deg > 0.0)) {
            error_at(ang.column, "flip angle must be positive");
            return std::nullopt;
        }
        p.flip_angle = deg * (kPi / 180.0);
        return p;
    }

    std::optional<DelayEvent> parse_delay_args() {
        if (done()) {
            error_here("expected duration after 'delay'");
            return std::nullopt;
        }
        const Token t = take();
        if (t.text == "J/2") {
            return DelayEvent{0.0, true};
        }
        double scale = 1.0;
        std::string num = t.text;
        if (num.size() > 2 && num.ends_with("ms")) {
            scale = 1e-3;
            num.resize(num.size() - 2);
        } else if (num.size() > 2 && num.ends_with("us")) {
            scale = 1e-6;
            num.resize(num.size() - 2);
        } else if (num.size() > 1 && num.ends_with("s")) {
            num.resize(num.size() - 1);
        } else {
            error_at(t.column, "malformed duration '" + t.text + "' (expected s/ms/us suffix or J/2)");
            return std::nullopt;
        }
        double v = 0.0;
        const char* b = num.data();
        const auto res = std::from_chars(b, b + num.size(), v);
        if (res.ec != std::errc{} || res.ptr != b + num.size()) {
            error_at(t.column, "malformed duration '" + t.text + "'");
            return std::nullopt;
        }
        if (v < 0.0) {
            error_at(t.column, "duration must be nonnegative");
            return std::nullopt;
        }
        return DelayEvent{v * scale, false};
    }

    std::optional<SimultaneousGroup> parse_sim_block() {
        if (done() || peek().text != "{") {
            error_here("expected '{' after 'sim'");
            return std::nullopt;
        }
        take();
        SimultaneousGroup group;
        std::set<std::string> channels;
        while (true) {
            if (done()) {
                error_here("unterminated sim block (missing '}')");
                return std::nullopt;
            }
            if (peek().text != "pulse") {
                error_here("expected 'pulse' inside sim block");
                return std::nullopt;
            }
            const int kw_col = take().column;
            auto p = parse_pulse_args();
            if (!p) return std::nullopt;
            if (!channels.insert(p->channel).second) {
                error_at(kw_col, "duplicate channel '" + p->channel + "' inside sim block");
                return std::nullopt;
            }
            group.pulses.push_back(std::move(*p));
            if (done()) {
                error_here("unterminated sim block (missing '}')");
                return std::nullopt;
            }
            if (peek().text == ",") {
                take();
                continue;
            }
            if (peek().text == "}") {
                take();
                return group;
            }
            error_here("expected ',' or '}' in sim block");
            return std::nullopt;
        }
    }

  private:
    int line_;
    std::vector<Token> tokens_;
    size_t pos_ = 0;
    std::vector<ParseDiagnostic>& diags_;
    bool failed_ = false;
};

std::string axis_for_phase(double phase) {
    const double tau = 2 * kPi;
    double p = std::fmod(phase, tau);
    if (p < 0) p += tau;
    const auto near = [&](double target) { return std::abs(p - target) < 1e-9; };
    if (near(0.0) || near(tau)) return "x";
    if (near(kPi / 2)) return "y";
    if (near(kPi)) return "-x";
    if (near(3 * kPi / 2)) return "-y";
    throw std::invalid_argument("format: pulse phase is not one of the x/y/-x/-y axes");
}

std::string format_angle_deg(double flip_rad) {
    const double deg = flip_rad * (180.0 / kPi);
    const double rounded = std::round(deg);
    if (std::abs(deg - rounded) < 1e-9 && std::abs(rounded) < 1e15) {
        return shortest_double(rounded);
    }
    return shortest_double(deg);
}

std::string format_pulse(const PulseEvent& p) {
    return "pulse " + p.channel + " " + axis_for_phase(p.phase) + " " + format_angle_deg(p.flip_angle);
}

bool pulses_equal(const PulseEvent& a, const PulseEvent& b, double tol) {
    if (a.channel != b.channel) return false;
    if (std::abs(a.flip_angle - b.flip_angle) > tol) return false;
    const double tau = 2 * kPi;
    double d = std::fmod(std::abs(a.phase - b.phase), tau);
    if (d > kPi) d = tau - d;
    return d <= tol;
}

}  // namespace

ParseResult parse(const SourceProgram& program) {
    ParseResult result;
    PulseSequence seq;

    std::istringstream in(program.text);
    std::string line;
    int line_no = 0;
    bool any_error = false;
    while (std::getline(in, line)) {
        ++line_no;
        LineParser lp(line_no, tokenize(line), result.diagnostics);
        if (lp.done()) continue;
        const Token kw = lp.take();
        if (kw.text == "pulse") {
            if (auto p = lp.parse_pulse_args()) seq.events.emplace_back(std::move(*p));
        } else if (kw.text == "delay") {
            if (auto d = lp.parse_delay_args()) seq.events.emplace_back(*d);
        } else if (kw.text == "sim") {
            if (auto g = lp.parse_sim_block()) seq.events.emplace_back(std::move(*g));
        } else if (kw.text == "use") {
            if (lp.done()) {
                lp.error_here("expected sequence id after 'use'");
            } else {
                const Token id = lp.take();
                try {
                    const PulseSequence spliced = named_sequence(named_sequence_id(id.text));
                    for (const auto& ev : spliced.events) seq.events.push_back(ev);
                } catch (const ConfigError&) {
                    lp.error_at(id.column, "unknown sequence id '" + id.text + "'");
                }
            }
        } else {
            lp.error_at(kw.column, "unknown keyword '" + kw.text + "'");
        }
        if (!lp.failed() && !lp.done()) {
            lp.error_here("unexpected token '" + lp.peek().text + "'");
        }
        any_error = any_error || lp.failed();
    }
    for (const auto& d : result.diagnostics) {
        any_error = any_error || d.severity == ParseDiagnostic::Severity::error;
    }
    if (!any_error) {
        result.sequence = std::move(seq);
    }
    return result;
}

SourceProgram format(const PulseSequence& seq, std::string name) {
    std::string out;
    bool first = true;
    for (const auto& ev : seq.events) {
        if (!first) out += "\n";
        first = false;
        if (const auto* p = std::get_if<PulseEvent>(&ev)) {
            out += format_pulse(*p);
        } else if (const auto* d = std::get_if<DelayEvent>(&ev)) {
            out += d->half_j ? std::string("delay J/2")
                             : "delay " + shortest_double(d->seconds) + "s";
        } else {
            const auto& g = std::get<SimultaneousGroup>(ev);
            out += "sim { ";
            for (size_t k = 0; k < g.pulses.size(); ++k) {
                if (k) out += ", ";
                out += format_pulse(g.pulses[k]);
            }
            out += " }";
        }
    }
    return SourceProgram{std::move(out), std::move(name)};
}

bool structurally_equal(const PulseSequence& a, const PulseSequence& b, double tol) {
    if (a.events.size() != b.events.size()) return false;
    for (size_t k = 0; k < a.events.size(); ++k) {
        const auto& ea = a.events[k];
        const auto& eb = b.events[k];
        if (ea.index() != eb.index()) return false;
        if (const auto* pa = std::get_if<PulseEvent>(&ea)) {
            if (!pulses_equal(*pa, std::get<PulseEvent>(eb), tol)) return false;
        } else if (const auto* da = std::get_if<DelayEvent>(&ea)) {
            const auto& db = std::get<DelayEvent>(eb);
            if (da->half_j != db.half_j) return false;
            if (!da->half_j && std::abs(da->seconds - db.seconds) > tol) return false;
        } else {
            const auto& ga = std::get<SimultaneousGroup>(ea);
            const auto& gb = std::get<SimultaneousGroup>(eb);
            if (ga.pulses.size() != gb.pulses.size()) return false;
            for (size_t m = 0; m < ga.pulses.size(); ++m) {
                if (!pulses_equal(ga.pulses[m], gb.pulses[m], tol)) return false;
            }
        }
    }
    return true;
}

std::string diagnostic_string(const ParseDiagnostic& d, const std::string& program_name) {
    std::ostringstream os;
    os << program_name << ":" << d.line << ":" << d.column << ": "
       << (d.severity == ParseDiagnostic::Severity::error ? "error: " : "warning: ") << d.message;
    return os.str();
}

}  // namespace nmrsim
