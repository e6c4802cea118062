#pragma once

// Plain-text instance format:
//
//   N K
//   N rows of K means
//   K rows of N agent ids (1-based, most preferred first)
//
// Lines starting with '#' are comments. Means are written in shortest
// round-trip form.

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "core.hpp"

namespace matchbandit {

inline std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, end);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

class InstanceFormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void write_instance(std::ostream& os, const Instance& inst, const std::vector<std::string>& comments = {}) {
    for (const auto& c : comments) os << "# " << c << '\n';
    os << inst.n_agents() << ' ' << inst.n_arms() << '\n';
    for (AgentIndex j = 0; j < inst.n_agents(); ++j) {
        for (ArmIndex k = 0; k < inst.n_arms(); ++k) os << (k ? " " : "") << format_double(inst.mean(j, k));
        os << '\n';
    }
    for (ArmIndex k = 0; k < inst.n_arms(); ++k) {
        const auto& list = inst.arm_pref(k);
        for (std::size_t p = 0; p < list.size(); ++p) os << (p ? " " : "") << list[p] + 1;
        os << '\n';
    }
}

inline Instance read_instance(std::istream& is) {
    std::string line;
    std::vector<std::string> tokens;
    while (std::getline(is, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    std::size_t pos = 0;
    auto next = [&]() -> const std::string& {
        if (pos >= tokens.size()) throw InstanceFormatError("instance file ended early");
        return tokens[pos++];
    };
    auto next_count = [&]() {
        const auto& t = next();
        std::size_t v = 0;
        auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || end != t.data() + t.size()) throw InstanceFormatError("expected an integer, got '" + t + "'");
        return v;
    };
    const std::size_t n = next_count();
    const std::size_t k = next_count();
    std::vector<double> means;
    means.reserve(n * k);
    for (std::size_t i = 0; i < n * k; ++i) {
        try {
            means.push_back(parse_double(next()));
        } catch (const std::invalid_argument& e) {
            throw InstanceFormatError(e.what());
        }
    }
    std::vector<std::vector<AgentIndex>> prefs(k);
    for (ArmIndex a = 0; a < k; ++a)
        for (std::size_t p = 0; p < n; ++p) {
            const std::size_t id = next_count();
            if (id < 1 || id > n) throw InstanceFormatError("agent id out of range in arm preference");
            prefs[a].push_back(id - 1);
        }
    if (pos != tokens.size()) throw InstanceFormatError("trailing data in instance file");
    return Instance(n, k, std::move(means), std::move(prefs));
}

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file " + path);
    return read_instance(in);
}

inline void save_instance(const std::string& path, const Instance& inst, const std::vector<std::string>& comments = {}) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file " + path);
    write_instance(out, inst, comments);
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace matchbandit
