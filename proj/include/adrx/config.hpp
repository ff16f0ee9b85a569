#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "adrx/errors.hpp"
#include "adrx/params.hpp"
#include "adrx/quadrature.hpp"

// Flat key = value experiment configuration with dotted section names.
// Lines starting with (or containing) '#' are commented; keys are validated
// against the known set so typos fail loudly.

namespace adrx {

enum class RunMode { Simulate, Analytic, Compare };

// Optional one-parameter sweep over the surface rate constants.
struct SweepSpec {
    std::string param; // "k1" or "km1"
    std::vector<double> values;
};

struct ExperimentConfig {
    ChannelParams channel;
    SimConfig sim;
    QuadratureSpec quad;
    RunMode mode = RunMode::Compare;
    std::optional<SweepSpec> sweep;
    std::string output_path = "out.csv";

    // Channel parameters with one sweep value substituted.
    ChannelParams channel_with(const std::string& param, double value) const {
        ChannelParams c = channel;
        if (param == "k1")
            c.k1 = value;
        else if (param == "km1")
            c.km1 = value;
        else
            throw ValidationError("sweep parameter must be k1 or km1, got '" +
                                  param + "'");
        return c;
    }

    void validate() const {
        channel.validate();
        sim.validate();
        quad.validate();
        if (sweep) {
            if (sweep->values.empty())
                throw ValidationError("sweep." + sweep->param +
                                      " must list at least one value");
            for (double v : sweep->values)
                channel_with(sweep->param, v).validate();
        }
        if (output_path.empty())
            throw ValidationError("output path must not be empty");
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_double(const std::string& key, const std::string& text,
                           std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": value '" + text +
                         "' for " + key + " is not a number");
    }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& text,
                                std::size_t line) {
    try {
        if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line) + ": value '" + text +
                         "' for " + key + " is not a nonnegative integer");
    }
}

inline std::vector<double> parse_double_list(const std::string& key,
                                             const std::string& text,
                                             std::size_t line) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t.empty())
            throw ParseError("line " + std::to_string(line) +
                             ": empty entry in list for " + key);
        out.push_back(parse_double(key, t, line));
    }
    if (out.empty())
        throw ParseError("line " + std::to_string(line) + ": empty list for " + key);
    return out;
}

} // namespace detail

inline RunMode parse_mode(const std::string& text) {
    if (text == "simulate") return RunMode::Simulate;
    if (text == "analytic") return RunMode::Analytic;
    if (text == "compare") return RunMode::Compare;
    throw ParseError("mode must be simulate, analytic or compare, got '" + text + "'");
}

inline const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::Simulate: return "simulate";
        case RunMode::Analytic: return "analytic";
        default: return "compare";
    }
}

// Parses config text. Throws ParseError with line numbers for syntax issues
// and unknown keys; semantic violations surface later via validate().
inline ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    cfg.sim.trials = 100; // desk-scale default; presets override for full runs

    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected key = value, got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("line " + std::to_string(line_no) +
                             ": empty key or value");
        if (!seen.insert(key).second)
            throw ParseError("line " + std::to_string(line_no) +
                             ": duplicate key '" + key + "'");

        if (key == "mode") {
            cfg.mode = parse_mode(value);
        } else if (key == "output") {
            cfg.output_path = value;
        } else if (key == "channel.D") {
            cfg.channel.D = detail::parse_double(key, value, line_no);
        } else if (key == "channel.r0") {
            cfg.channel.r0 = detail::parse_double(key, value, line_no);
        } else if (key == "channel.rr") {
            cfg.channel.rr = detail::parse_double(key, value, line_no);
        } else if (key == "channel.k1") {
            cfg.channel.k1 = detail::parse_double(key, value, line_no);
        } else if (key == "channel.km1") {
            cfg.channel.km1 = detail::parse_double(key, value, line_no);
        } else if (key == "channel.ntx") {
            cfg.channel.ntx = detail::parse_uint(key, value, line_no);
        } else if (key == "sim.dt") {
            cfg.sim.dt = detail::parse_double(key, value, line_no);
        } else if (key == "sim.ts") {
            cfg.sim.ts = detail::parse_double(key, value, line_no);
        } else if (key == "sim.t_end") {
            cfg.sim.t_end = detail::parse_double(key, value, line_no);
        } else if (key == "sim.trials") {
            cfg.sim.trials = static_cast<std::uint32_t>(
                detail::parse_uint(key, value, line_no));
        } else if (key == "sim.seed") {
            cfg.sim.seed = detail::parse_uint(key, value, line_no);
        } else if (key == "sim.emission") {
            if (value == "shell")
                cfg.sim.emission = EmissionMode::Shell;
            else if (value == "point")
                cfg.sim.emission = EmissionMode::Point;
            else
                throw ParseError("line " + std::to_string(line_no) +
                                 ": sim.emission must be shell or point");
        } else if (key == "quad.w_max") {
            cfg.quad.w_max = detail::parse_double(key, value, line_no);
        } else if (key == "quad.rel_tol") {
            cfg.quad.rel_tol = detail::parse_double(key, value, line_no);
        } else if (key == "quad.max_panels") {
            cfg.quad.max_panels =
                static_cast<std::size_t>(detail::parse_uint(key, value, line_no));
        } else if (key == "sweep.k1" || key == "sweep.km1") {
            if (cfg.sweep)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": at most one sweep parameter is supported");
            cfg.sweep = SweepSpec{key.substr(6),
                                  detail::parse_double_list(key, value, line_no)};
        } else {
            throw ParseError("line " + std::to_string(line_no) +
                             ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

// Loads, parses and validates a config file.
inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    ExperimentConfig cfg = parse_config(buf.str());
    cfg.validate();
    return cfg;
}

} // namespace adrx
