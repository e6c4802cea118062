#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace matchbandit {

/// What agents see after each round.
///  - FullDecentralized: only whether they were matched, and their reward.
///  - Partial: additionally the whole round matching; arm preferences are known.
///  - Centralized: a planner assigns arms; agents see their own outcome.
enum class Regime { FullDecentralized, Partial, Centralized };

inline std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::FullDecentralized: return "full-decentralized";
        case Regime::Partial: return "partial";
        case Regime::Centralized: return "centralized";
    }
    return "?";
}

inline Regime parse_regime(std::string_view s) {
    if (s == "full-decentralized" || s == "decentralized") return Regime::FullDecentralized;
    if (s == "partial") return Regime::Partial;
    if (s == "centralized") return Regime::Centralized;
    throw ConfigError("unknown regime '" + std::string(s) + "'");
}

using PlayProfile = std::vector<ArmIndex>;

struct RoundOutcome {
    Matching matching;
    std::vector<bool> blocked;
    std::vector<std::optional<double>> rewards;  // set for matched agents only
};

struct Observation {
    bool matched = false;
    std::optional<double> reward;
    // Partial regime only. Points into the round's outcome and is valid for
    // the duration of the update call.
    const Matching* full_matching = nullptr;
    bool arm_prefs_known = false;
};

/// Each played arm goes to its most preferred proposer; everyone else who
/// proposed to it is blocked. Writes into out so the round loop does not
/// reallocate.
inline void resolve_round_into(const Instance& inst, const PlayProfile& plays, RoundOutcome& out) {
    const std::size_t n = inst.n_agents();
    if (plays.size() != n) throw std::invalid_argument("need exactly one play per agent");
    if (out.matching.n_agents() != n || out.matching.n_arms() != inst.n_arms()) out.matching = Matching(n, inst.n_arms());
    for (AgentIndex j = 0; j < n; ++j) out.matching.unassign_agent(j);
    out.blocked.assign(n, false);
    out.rewards.assign(n, std::nullopt);
    for (AgentIndex j = 0; j < n; ++j) {
        const ArmIndex k = plays[j];
        if (k >= inst.n_arms()) throw std::out_of_range("played arm out of range");
        const AgentIndex holder = out.matching.agent_of(k);
        if (holder == kNone) {
            out.matching.assign(j, k);
        } else if (inst.arm_prefers(k, j, holder)) {
            out.matching.unassign_agent(holder);
            out.blocked[holder] = true;
            out.matching.assign(j, k);
        } else {
            out.blocked[j] = true;
        }
    }
}

inline RoundOutcome resolve_round(const Instance& inst, const PlayProfile& plays) {
    RoundOutcome out;
    resolve_round_into(inst, plays, out);
    return out;
}

/// Two-point rewards: 1 with probability mu(j, k), else 0. Draws happen in
/// agent order, one per matched agent.
inline void sample_rewards_into(const Instance& inst, const Matching& m, Rng& rng, std::vector<std::optional<double>>& out) {
    out.assign(inst.n_agents(), std::nullopt);
    for (AgentIndex j = 0; j < inst.n_agents(); ++j)
        if (m.agent_matched(j)) out[j] = rng.bernoulli(inst.mean(j, m.arm_of(j))) ? 1.0 : 0.0;
}

inline std::vector<std::optional<double>> sample_rewards(const Instance& inst, const Matching& m, Rng& rng) {
    std::vector<std::optional<double>> out;
    sample_rewards_into(inst, m, rng, out);
    return out;
}

inline void make_observations_into(const RoundOutcome& outcome, Regime regime, std::vector<Observation>& out) {
    const std::size_t n = outcome.blocked.size();
    out.resize(n);
    for (AgentIndex j = 0; j < n; ++j) {
        auto& o = out[j];
        o.matched = outcome.matching.agent_matched(j);
        o.reward = o.matched ? outcome.rewards[j] : std::nullopt;
        o.full_matching = regime == Regime::Partial ? &outcome.matching : nullptr;
        o.arm_prefs_known = regime == Regime::Partial;
    }
}

inline std::vector<Observation> make_observations(const RoundOutcome& outcome, Regime regime) {
    std::vector<Observation> out;
    make_observations_into(outcome, regime, out);
    return out;
}

/// One trial's environment: resolves plays, draws rewards from its own
/// stream and builds observations, reusing buffers between rounds.
class Market {
public:
    Market(const Instance& inst, Regime regime, Rng rewards) : inst_(&inst), regime_(regime), rng_(rewards) {}

    const RoundOutcome& step(const PlayProfile& plays) {
        resolve_round_into(*inst_, plays, outcome_);
        sample_rewards_into(*inst_, outcome_.matching, rng_, outcome_.rewards);
        make_observations_into(outcome_, regime_, observations_);
        return outcome_;
    }

    const RoundOutcome& outcome() const { return outcome_; }
    const std::vector<Observation>& observations() const { return observations_; }
    Regime regime() const { return regime_; }
    const Instance& instance() const { return *inst_; }

private:
    const Instance* inst_;
    Regime regime_;
    Rng rng_;
    RoundOutcome outcome_;
    std::vector<Observation> observations_;
};

}  // namespace matchbandit
