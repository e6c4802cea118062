#pragma once

// Experiment configuration, read from an INI file:
//
//   [instance]    file = path            (relative to the config file)
//                 or n_agents, n_arms, kind, delta_min, seed, max_rejections, validate_unqc
//   [run]         horizon, trials, checkpoints, extra_checkpoints, seed,
//                 workers, output, id, format
//   [algorithms]  list = etc, ucbd4, ucbd3, ucbc, caucb   (any subset)
//   [etc]         epsilon, c0, c1, regime
//   [ucbd4]       gamma, beta, c0, c1, regime   (same keys for [ucbd3])
//   [ucbc]        gamma, regime
//   [caucb]       gamma, lambda, regime
//
// Unknown sections and keys are errors.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../core.hpp"
#include "../instance_gen.hpp"
#include "../instance_io.hpp"
#include "../market.hpp"
#include "../policies/caucb.hpp"
#include "../policies/etc.hpp"
#include "../policies/protocol.hpp"
#include "../policies/ucbd4.hpp"

namespace matchbandit {

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_output_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError("unknown output format '" + std::string(s) + "'");
}

enum class AlgorithmKind { Etc, UcbD4, UcbD3, UcbC, CaUcb };

inline const std::vector<std::pair<std::string_view, AlgorithmKind>>& algorithm_names() {
    static const std::vector<std::pair<std::string_view, AlgorithmKind>> names{
        {"etc", AlgorithmKind::Etc},   {"ucbd4", AlgorithmKind::UcbD4}, {"ucbd3", AlgorithmKind::UcbD3},
        {"ucbc", AlgorithmKind::UcbC}, {"caucb", AlgorithmKind::CaUcb},
    };
    return names;
}

inline std::string_view to_string(AlgorithmKind a) {
    for (const auto& [name, kind] : algorithm_names())
        if (kind == a) return name;
    return "?";
}

inline AlgorithmKind parse_algorithm(std::string_view s) {
    for (const auto& [name, kind] : algorithm_names())
        if (name == s) return kind;
    throw ConfigError("unknown algorithm '" + std::string(s) + "'");
}

/// Stable id used to derive the algorithm's random streams.
inline std::uint64_t algorithm_stream_id(AlgorithmKind a) { return static_cast<std::uint64_t>(a); }

inline Regime native_regime(AlgorithmKind a) {
    switch (a) {
        case AlgorithmKind::UcbC: return Regime::Centralized;
        case AlgorithmKind::CaUcb: return Regime::Partial;
        default: return Regime::FullDecentralized;
    }
}

/// Parses "0.25" or "1/12".
inline double parse_number(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return parse_double(text);
        const double num = parse_double(text.substr(0, slash));
        const double den = parse_double(text.substr(slash + 1));
        if (den == 0.0) throw std::invalid_argument("zero denominator");
        return num / den;
    } catch (const std::invalid_argument&) {
        throw ConfigError("expected a number, got '" + text + "'");
    }
}

template <typename Int>
Int parse_integer(const std::string& text) {
    Int v{};
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size()) throw ConfigError("expected an integer, got '" + text + "'");
    return v;
}

inline bool parse_bool(const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("expected a boolean, got '" + text + "'");
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

struct AlgorithmConfig {
    AlgorithmKind kind = AlgorithmKind::UcbD4;
    Regime regime = Regime::FullDecentralized;
    double epsilon = 0.2;
    double gamma = 2.0;
    std::optional<double> beta;
    double lambda = 0.2;
    std::optional<double> c0;
    std::optional<double> c1;

    std::string name() const { return std::string(to_string(kind)); }

    /// Phase tuning: explicit c0/c1 (a missing one keeps its doubling
    /// default), else the large-market values when there are more than 8
    /// agents, else the plain doubling schedule.
    std::optional<PhaseTuning> tuning(std::size_t n_agents) const {
        if (c0 || c1) {
            PhaseTuning t;
            if (c0) t.c0 = *c0;
            if (c1) t.c1 = *c1;
            return t;
        }
        if (n_agents > 8) {
            if (kind == AlgorithmKind::Etc) return PhaseTuning{1.5, 1.0};
            return PhaseTuning{1.2, 3.0};
        }
        return std::nullopt;
    }
};

struct ExperimentConfig {
    std::optional<std::string> instance_file;
    std::optional<GenSpec> generate;
    Round horizon = 0;
    std::size_t trials = 50;
    std::size_t checkpoints = 100;
    std::vector<Round> extra_checkpoints;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::string output_dir;
    std::string run_id = "run";
    OutputFormat format = OutputFormat::Csv;
    std::vector<AlgorithmConfig> algorithms;

    void validate() const {
        if (instance_file.has_value() == generate.has_value())
            throw ConfigError("instance section needs either 'file' or generator keys");
        if (horizon < 1) throw ConfigError("run.horizon must be positive");
        if (trials < 1) throw ConfigError("run.trials must be at least 1");
        if (workers < 1) throw ConfigError("run.workers must be at least 1");
        if (algorithms.empty()) throw ConfigError("no algorithms selected");
        std::set<AlgorithmKind> seen;
        for (const auto& a : algorithms) {
            if (!seen.insert(a.kind).second) throw ConfigError("algorithm listed twice: " + a.name());
            if (a.regime != native_regime(a.kind))
                throw ConfigError(a.name() + " cannot run under the " + std::string(to_string(a.regime)) + " regime");
        }
        for (auto t : extra_checkpoints)
            if (t < 1 || t > horizon) throw ConfigError("extra checkpoint outside 1..horizon");
    }
};

namespace detail {

using Ptree = boost::property_tree::ptree;

inline void reject_unknown(const Ptree& section, const std::string& name, std::initializer_list<std::string_view> keys) {
    for (const auto& [key, value] : section) {
        bool ok = false;
        for (auto k : keys) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
    }
}

inline std::optional<std::string> get(const Ptree& section, const std::string& key) {
    if (auto v = section.get_optional<std::string>(key)) return *v;
    return std::nullopt;
}

inline GenSpec parse_gen_spec(const Ptree& s) {
    GenSpec g;
    auto required = [&](const char* key) {
        auto v = get(s, key);
        if (!v) throw ConfigError(std::string("[instance] needs '") + key + "'");
        return *v;
    };
    g.n_agents = parse_integer<std::size_t>(required("n_agents"));
    g.n_arms = parse_integer<std::size_t>(required("n_arms"));
    if (auto v = get(s, "kind")) {
        try {
            g.kind = parse_instance_kind(*v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (auto v = get(s, "delta_min")) g.delta_min_threshold = parse_number(*v);
    if (auto v = get(s, "seed")) g.seed = parse_integer<std::uint64_t>(*v);
    if (auto v = get(s, "max_rejections")) g.max_rejections = parse_integer<std::size_t>(*v);
    if (auto v = get(s, "validate_unqc")) g.validate_unqc = parse_bool(*v);
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return g;
}

}  // namespace detail

/// Instance generator spec from a file holding an [instance] section.
inline GenSpec load_gen_spec(const std::string& path) {
    detail::Ptree tree;
    try {
        boost::property_tree::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    for (const auto& [name, section] : tree)
        if (name != "instance") throw ConfigError("unknown section [" + name + "] in generator spec");
    const auto section = tree.get_child_optional("instance");
    if (!section) throw ConfigError("generator spec needs an [instance] section");
    detail::reject_unknown(*section, "instance",
                           {"n_agents", "n_arms", "kind", "delta_min", "seed", "max_rejections", "validate_unqc"});
    return detail::parse_gen_spec(*section);
}

inline ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {}) {
    detail::Ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    ExperimentConfig cfg;
    std::set<std::string> algo_sections;
    for (const auto& [name, section] : tree) {
        if (!section.data().empty()) throw ConfigError("key '" + name + "' outside any section");
        if (name == "instance") {
            if (auto f = detail::get(section, "file")) {
                detail::reject_unknown(section, name, {"file"});
                const std::filesystem::path p(*f);
                cfg.instance_file = (p.is_absolute() || base_dir.empty()) ? p.string() : (base_dir / p).string();
            } else {
                detail::reject_unknown(section, name,
                                       {"n_agents", "n_arms", "kind", "delta_min", "seed", "max_rejections", "validate_unqc"});
                cfg.generate = detail::parse_gen_spec(section);
            }
        } else if (name == "run") {
            detail::reject_unknown(section, name,
                                   {"horizon", "trials", "checkpoints", "extra_checkpoints", "seed", "workers", "output", "id", "format"});
            if (auto v = detail::get(section, "horizon")) cfg.horizon = parse_integer<Round>(*v);
            if (auto v = detail::get(section, "trials")) cfg.trials = parse_integer<std::size_t>(*v);
            if (auto v = detail::get(section, "checkpoints")) cfg.checkpoints = parse_integer<std::size_t>(*v);
            if (auto v = detail::get(section, "extra_checkpoints"))
                for (const auto& item : split_list(*v)) cfg.extra_checkpoints.push_back(parse_integer<Round>(item));
            if (auto v = detail::get(section, "seed")) cfg.seed = parse_integer<std::uint64_t>(*v);
            if (auto v = detail::get(section, "workers")) cfg.workers = parse_integer<std::size_t>(*v);
            if (auto v = detail::get(section, "output")) {
                const std::filesystem::path p(*v);
                cfg.output_dir = (p.is_absolute() || base_dir.empty()) ? p.string() : (base_dir / p).string();
            }
            if (auto v = detail::get(section, "id")) cfg.run_id = *v;
            if (auto v = detail::get(section, "format")) cfg.format = parse_output_format(*v);
        } else if (name == "algorithms") {
            detail::reject_unknown(section, name, {"list"});
            for (const auto& item : split_list(section.get<std::string>("list", ""))) {
                AlgorithmConfig a;
                a.kind = parse_algorithm(item);
                a.regime = native_regime(a.kind);
                cfg.algorithms.push_back(a);
            }
        } else {
            parse_algorithm(name);  // throws on unknown sections
            algo_sections.insert(name);
        }
    }
    if (!tree.get_child_optional("run")) throw ConfigError("config needs a [run] section");
    if (!tree.get_child_optional("instance")) throw ConfigError("config needs an [instance] section");
    for (const auto& name : algo_sections) {
        auto it = std::find_if(cfg.algorithms.begin(), cfg.algorithms.end(), [&](const AlgorithmConfig& a) { return a.name() == name; });
        if (it == cfg.algorithms.end()) throw ConfigError("section [" + name + "] configures an algorithm not in the list");
        const auto& section = tree.get_child(name);
        AlgorithmConfig& a = *it;
        switch (a.kind) {
            case AlgorithmKind::Etc: detail::reject_unknown(section, name, {"epsilon", "c0", "c1", "regime"}); break;
            case AlgorithmKind::UcbD4:
            case AlgorithmKind::UcbD3: detail::reject_unknown(section, name, {"gamma", "beta", "c0", "c1", "regime"}); break;
            case AlgorithmKind::UcbC: detail::reject_unknown(section, name, {"gamma", "regime"}); break;
            case AlgorithmKind::CaUcb: detail::reject_unknown(section, name, {"gamma", "lambda", "regime"}); break;
        }
        if (auto v = detail::get(section, "epsilon")) a.epsilon = parse_number(*v);
        if (auto v = detail::get(section, "gamma")) a.gamma = parse_number(*v);
        if (auto v = detail::get(section, "beta")) a.beta = parse_number(*v);
        if (auto v = detail::get(section, "lambda")) a.lambda = parse_number(*v);
        if (auto v = detail::get(section, "c0")) a.c0 = parse_number(*v);
        if (auto v = detail::get(section, "c1")) a.c1 = parse_number(*v);
        if (auto v = detail::get(section, "regime")) a.regime = parse_regime(*v);
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_config(in, std::filesystem::path(path).parent_path());
}

}  // namespace matchbandit
