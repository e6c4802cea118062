#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conditions.hpp"
#include "core.hpp"
#include "instance_io.hpp"
#include "rng.hpp"

namespace matchbandit {

enum class InstanceKind { General, Spc, Alpha };

inline std::string_view to_string(InstanceKind k) {
    switch (k) {
        case InstanceKind::General: return "general";
        case InstanceKind::Spc: return "spc";
        case InstanceKind::Alpha: return "alpha";
    }
    return "?";
}

inline InstanceKind parse_instance_kind(std::string_view s) {
    if (s == "general") return InstanceKind::General;
    if (s == "spc") return InstanceKind::Spc;
    if (s == "alpha") return InstanceKind::Alpha;
    throw std::invalid_argument("unknown instance kind '" + std::string(s) + "'");
}

struct GenSpec {
    std::size_t n_agents = 0;
    std::size_t n_arms = 0;
    InstanceKind kind = InstanceKind::General;
    double delta_min_threshold = 0.05;
    std::uint64_t seed = 0;
    std::size_t max_rejections = 100000;
    bool validate_unqc = false;  // alpha kind only; needs n_agents, n_arms <= 6

    void validate() const {
        if (n_agents == 0 || n_agents > n_arms) throw std::invalid_argument("need 1 <= n_agents <= n_arms");
        if (!(delta_min_threshold > 0.0 && delta_min_threshold < 1.0))
            throw std::invalid_argument("delta_min threshold must lie in (0, 1)");
        if (max_rejections == 0) throw std::invalid_argument("max_rejections must be positive");
        if (validate_unqc && (n_agents > kMaxUnqcSize || n_arms > kMaxUnqcSize))
            throw std::invalid_argument("uniqueness-consistency validation needs at most 6 agents and arms");
    }
};

class GenerationError : public std::runtime_error {
public:
    GenerationError(const std::string& what, std::size_t attempts) : std::runtime_error(what), attempts_(attempts) {}
    std::size_t attempts() const { return attempts_; }

private:
    std::size_t attempts_;
};

namespace detail {
inline bool means_acceptable(const std::vector<double>& m, std::size_t n, std::size_t k, double threshold) {
    std::vector<double> row(k);
    for (std::size_t j = 0; j < n; ++j) {
        std::copy_n(m.begin() + static_cast<std::ptrdiff_t>(j * k), k, row.begin());
        std::sort(row.begin(), row.end());
        for (std::size_t a = 1; a < k; ++a)
            if (row[a] - row[a - 1] < threshold) return false;
    }
    auto all = m;
    std::sort(all.begin(), all.end());
    return std::adjacent_find(all.begin(), all.end()) == all.end();
}

inline std::vector<std::vector<AgentIndex>> random_profile(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::vector<AgentIndex>> prefs(k, std::vector<AgentIndex>(n));
    for (auto& list : prefs) {
        for (AgentIndex j = 0; j < n; ++j) list[j] = j;
        rng.shuffle(list);
    }
    return prefs;
}
}  // namespace detail

/// Row-major N x K matrix of iid uniforms, resampled wholesale until each
/// row's sorted values are at least the threshold apart and all entries
/// are distinct.
inline std::vector<double> gen_means(const GenSpec& spec, Rng& rng) {
    spec.validate();
    const std::size_t n = spec.n_agents, k = spec.n_arms;
    std::vector<double> m(n * k);
    for (std::size_t attempt = 1; attempt <= spec.max_rejections; ++attempt) {
        for (auto& x : m) x = rng.uniform();
        if (detail::means_acceptable(m, n, k, spec.delta_min_threshold)) return m;
    }
    throw GenerationError("mean matrix rejected " + std::to_string(spec.max_rejections) + " times", spec.max_rejections);
}

/// Moves agent i to the first position of arm i's list holding an agent
/// with index >= i, for every arm i < N.
inline void apply_spc_swaps(std::vector<std::vector<AgentIndex>>& prefs, std::size_t n_agents) {
    for (std::size_t i = 0; i < std::min(n_agents, prefs.size()); ++i) {
        auto& list = prefs[i];
        const auto first = std::find_if(list.begin(), list.end(), [&](AgentIndex j) { return j >= i; });
        const auto self = std::find(list.begin(), list.end(), AgentIndex{i});
        std::iter_swap(first, self);
    }
}

/// Row j gets its largest value among arms >= j moved onto arm j. Returns
/// true if any entry moved.
inline bool apply_spc_mean_swaps(std::vector<double>& means, std::size_t n_agents, std::size_t n_arms) {
    bool changed = false;
    for (std::size_t j = 0; j < n_agents; ++j) {
        const auto row = means.begin() + static_cast<std::ptrdiff_t>(j * n_arms);
        const auto best = std::max_element(row + static_cast<std::ptrdiff_t>(j), row + static_cast<std::ptrdiff_t>(n_arms));
        if (best != row + static_cast<std::ptrdiff_t>(j)) {
            std::iter_swap(best, row + static_cast<std::ptrdiff_t>(j));
            changed = true;
        }
    }
    return changed;
}

struct GeneratedInstance {
    Instance instance;
    bool agent_side_spc_repair = false;  // means were edited to make the SPC order hold on the agent side
    std::size_t preference_attempts = 1;

    std::vector<std::string> metadata(const GenSpec& spec) const {
        std::vector<std::string> out{
            "kind " + std::string(to_string(spec.kind)),
            "seed " + std::to_string(spec.seed),
            "delta_min_threshold " + format_double(spec.delta_min_threshold),
        };
        if (spec.kind == InstanceKind::Spc)
            out.push_back(std::string("agent_side_spc_repair ") + (agent_side_spc_repair ? "applied" : "not-needed"));
        if (spec.kind == InstanceKind::Alpha) out.push_back("preference_attempts " + std::to_string(preference_attempts));
        return out;
    }
};

/// Arm preferences for the general and alpha kinds. The spc kind also edits
/// means, so it is only available through generate_instance.
inline std::vector<std::vector<AgentIndex>> gen_arm_prefs(const GenSpec& spec, const std::vector<double>& means, Rng& rng,
                                                          std::size_t* attempts_out = nullptr) {
    spec.validate();
    const std::size_t n = spec.n_agents, k = spec.n_arms;
    switch (spec.kind) {
        case InstanceKind::General:
            if (attempts_out) *attempts_out = 1;
            return detail::random_profile(n, k, rng);
        case InstanceKind::Spc: {
            auto prefs = detail::random_profile(n, k, rng);
            apply_spc_swaps(prefs, n);
            if (attempts_out) *attempts_out = 1;
            return prefs;
        }
        case InstanceKind::Alpha:
            for (std::size_t attempt = 1; attempt <= spec.max_rejections; ++attempt) {
                auto prefs = detail::random_profile(n, k, rng);
                Instance candidate(n, k, means, prefs);
                if (check_alpha(candidate)) {
                    if (spec.validate_unqc && !check_unqc_brute(candidate))
                        throw std::logic_error("alpha instance is not uniqueness consistent");
                    if (attempts_out) *attempts_out = attempt;
                    return prefs;
                }
            }
            throw GenerationError("no alpha-condition profile in " + std::to_string(spec.max_rejections) + " draws",
                                  spec.max_rejections);
    }
    throw std::logic_error("unhandled instance kind");
}

/// Deterministic in (spec, spec.seed).
inline GeneratedInstance generate_instance(const GenSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    auto means = gen_means(spec, rng);
    GeneratedInstance out;
    auto prefs = gen_arm_prefs(spec, means, rng, &out.preference_attempts);
    if (spec.kind == InstanceKind::Spc) out.agent_side_spc_repair = apply_spc_mean_swaps(means, spec.n_agents, spec.n_arms);
    out.instance = Instance(spec.n_agents, spec.n_arms, std::move(means), std::move(prefs));
    if (spec.kind == InstanceKind::Spc && !check_spc(out.instance)) throw std::logic_error("SPC construction failed");
    return out;
}

}  // namespace matchbandit
