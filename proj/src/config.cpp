#include "nmrsim/config.hpp"

#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>

namespace nmrsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& where) {
    double out = 0;
    const char* b = v.data();
    const auto res = std::from_chars(b, b + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != b + v.size()) {
        throw ConfigError(where + ": malformed number '" + v + "'");
    }
    return out;
}

std::uint64_t parse_u64(const std::string& v, const std::string& where) {
    std::uint64_t out = 0;
    const char* b = v.data();
    const auto res = std::from_chars(b, b + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != b + v.size()) {
        throw ConfigError(where + ": malformed integer '" + v + "'");
    }
    return out;
}

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError(where + ": expected on/off, got '" + v + "'");
}

void set_channel_key(ChannelParams& ch, const std::string& key, const std::string& value,
                     const std::string& where) {
    if (key == "gamma_mhz_per_t") ch.gamma_mhz_per_t = parse_double(value, where);
    else if (key == "larmor_hz") ch.larmor_hz = parse_double(value, where);
    else if (key == "rf_hz") ch.rf_hz = parse_double(value, where);
    else if (key == "t1_s") ch.t1_s = parse_double(value, where);
    else if (key == "t2_s") ch.t2_s = parse_double(value, where);
    else throw ConfigError(where + ": unknown channel key '" + key + "'");
}

void set_key(RunConfig& cfg, const std::string& section, const std::string& key,
             const std::string& value, const std::string& where) {
    if (section == "system") {
        if (key == "qubits") {
            cfg.system.qubits = static_cast<int>(parse_u64(value, where));
            if (cfg.system.qubits < 1 || cfg.system.qubits > 2) {
                throw ConfigError(where + ": qubits must be 1 or 2");
            }
        } else if (key == "j_hz") cfg.system.j_hz = parse_double(value, where);
        else if (key == "b0_tesla") cfg.system.b0_tesla = parse_double(value, where);
        else if (key == "temperature_k") cfg.system.temperature_k = parse_double(value, where);
        else if (key.starts_with("h.")) set_channel_key(cfg.system.h, key.substr(2), value, where);
        else if (key.starts_with("c.")) set_channel_key(cfg.system.c, key.substr(2), value, where);
        else throw ConfigError(where + ": unknown system key '" + key + "'");
        return;
    }
    if (section == "acquisition") {
        if (key == "n_samples") cfg.n_samples = static_cast<int>(parse_u64(value, where));
        else if (key == "window_hz") cfg.window_hz = parse_double(value, where);
        else if (key == "noise_sigma") cfg.noise_sigma = parse_double(value, where);
        else if (key == "seed") cfg.seed = parse_u64(value, where);
        else if (key == "decoherence") cfg.decoherence = parse_bool(value, where);
        else throw ConfigError(where + ": unknown acquisition key '" + key + "'");
        return;
    }
    if (section == "run") {
        if (key == "experiment") cfg.experiment = value;
        else if (key == "program") cfg.program_path = value;
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "miscal") cfg.miscal_eps = parse_double(value, where);
        else if (key == "contaminate") cfg.contaminate_ratio = parse_double(value, where);
        else if (key == "emit") {
            cfg.emit.clear();
            std::string item;
            std::istringstream items(value);
            while (std::getline(items, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                if (item != "fid" && item != "spectrum" && item != "rho" && item != "report") {
                    throw ConfigError(where + ": unknown emit kind '" + item + "'");
                }
                cfg.emit.insert(item);
            }
        } else {
            throw ConfigError(where + ": unknown run key '" + key + "'");
        }
        return;
    }
    throw ConfigError(where + ": unknown section '" + section + "'");
}

}  // namespace

SpinSystem SystemParams::build() const {
    const auto make = [](const std::string& name, const ChannelParams& p) {
        Channel ch;
        ch.name = name;
        ch.gamma_mhz_per_t = p.gamma_mhz_per_t;
        ch.larmor_rad_per_s = 2.0 * std::numbers::pi * p.larmor_hz;
        ch.rf_rad_per_s = 2.0 * std::numbers::pi * p.rf_hz;
        ch.t1_s = p.t1_s;
        ch.t2_s = p.t2_s;
        return ch;
    };
    if (qubits == 1) {
        return SpinSystem({make("H", h)}, 0.0, b0_tesla, temperature_k);
    }
    return SpinSystem({make("H", h), make("C", c)}, j_hz, b0_tesla, temperature_k);
}

SystemParams SystemParams::companion() const {
    SystemParams other = *this;
    other.qubits = qubits == 1 ? 2 : 1;
    return other;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(where + ": key outside any [section]");
        set_key(cfg, section, key, value, where);
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

}  // namespace nmrsim
