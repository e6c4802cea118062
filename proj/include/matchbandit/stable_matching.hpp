#pragma once

#include <cstddef>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace matchbandit {

struct BlockingPair {
    AgentIndex agent;
    ArmIndex arm;

    bool operator==(const BlockingPair&) const = default;
};

struct DeferredAcceptanceResult {
    Matching matching;
    std::size_t proposals = 0;
};

/// Agent-proposing deferred acceptance. agent_lists[j] ranks every arm for
/// agent j, best first; arms judge proposals by the instance's arm lists.
inline DeferredAcceptanceResult deferred_acceptance(const Instance& inst,
                                                    const std::vector<std::vector<ArmIndex>>& agent_lists) {
    const std::size_t n = inst.n_agents();
    if (agent_lists.size() != n) throw std::invalid_argument("need one ranked list per agent");
    DeferredAcceptanceResult out{Matching(n, inst.n_arms()), 0};
    std::vector<std::size_t> next(n, 0);
    std::deque<AgentIndex> free_agents(n);
    std::iota(free_agents.begin(), free_agents.end(), AgentIndex{0});
    while (!free_agents.empty()) {
        const AgentIndex j = free_agents.front();
        free_agents.pop_front();
        if (next[j] >= agent_lists[j].size()) continue;  // list exhausted (only with incomplete lists)
        const ArmIndex k = agent_lists[j][next[j]++];
        ++out.proposals;
        const AgentIndex holder = out.matching.agent_of(k);
        if (holder == kNone) {
            out.matching.assign(j, k);
        } else if (inst.arm_prefers(k, j, holder)) {
            out.matching.unassign_agent(holder);
            out.matching.assign(j, k);
            free_agents.push_back(holder);
        } else {
            free_agents.push_back(j);
        }
    }
    return out;
}

inline std::vector<std::vector<ArmIndex>> agent_preferences(const Instance& inst) {
    std::vector<std::vector<ArmIndex>> lists(inst.n_agents());
    for (AgentIndex j = 0; j < inst.n_agents(); ++j) lists[j] = inst.agent_pref(j);
    return lists;
}

/// Agent-optimal stable matching.
inline Matching gale_shapley(const Instance& inst) { return deferred_acceptance(inst, agent_preferences(inst)).matching; }

/// Pairs (j, k) outside the matching where j prefers k to its arm and k is
/// unmatched or prefers j to its partner.
inline std::vector<BlockingPair> blocking_pairs(const Instance& inst, const Matching& m) {
    if (m.n_agents() != inst.n_agents() || m.n_arms() != inst.n_arms())
        throw std::invalid_argument("matching does not fit the instance");
    if (!m.all_agents_matched()) throw std::invalid_argument("every agent must be matched");
    std::vector<BlockingPair> out;
    for (AgentIndex j = 0; j < inst.n_agents(); ++j) {
        const ArmIndex mine = m.arm_of(j);
        for (ArmIndex k = 0; k < inst.n_arms(); ++k) {
            if (k == mine || !inst.agent_prefers(j, k, mine)) continue;
            const AgentIndex holder = m.agent_of(k);
            if (holder == kNone || inst.arm_prefers(k, j, holder)) out.push_back({j, k});
        }
    }
    return out;
}

inline bool is_stable(const Instance& inst, const Matching& m) { return blocking_pairs(inst, m).empty(); }

struct StableSet {
    std::vector<Matching> matchings;
    std::size_t agent_optimal = 0;
    std::size_t agent_pessimal = 0;

    std::size_t size() const { return matchings.size(); }
};

inline constexpr std::size_t kMaxEnumerationSize = 8;

namespace detail {
template <typename Visit>
void for_each_injection(std::size_t n, std::size_t k, Visit&& visit) {
    std::vector<ArmIndex> arms(n, kNone);
    std::vector<bool> used(k, false);
    auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == n) {
            visit(arms);
            return;
        }
        for (ArmIndex a = 0; a < k; ++a) {
            if (used[a]) continue;
            used[a] = true;
            arms[j] = a;
            self(self, j + 1);
            used[a] = false;
        }
    };
    rec(rec, 0);
}

// True if every agent weakly prefers its arm in a to its arm in b.
inline bool agents_weakly_prefer(const Instance& inst, const Matching& a, const Matching& b) {
    for (AgentIndex j = 0; j < inst.n_agents(); ++j)
        if (inst.mean(j, a.arm_of(j)) < inst.mean(j, b.arm_of(j))) return false;
    return true;
}
}  // namespace detail

/// Exhaustive list of stable matchings; test oracle for small markets.
inline StableSet enumerate_stable(const Instance& inst) {
    if (inst.n_agents() > kMaxEnumerationSize || inst.n_arms() > kMaxEnumerationSize)
        throw CapacityError("enumerate_stable supports at most 8 agents and 8 arms");
    StableSet set;
    detail::for_each_injection(inst.n_agents(), inst.n_arms(), [&](const std::vector<ArmIndex>& arms) {
        auto m = Matching::from_agent_arms(arms, inst.n_arms());
        if (is_stable(inst, m)) set.matchings.push_back(std::move(m));
    });
    if (set.matchings.empty()) throw std::logic_error("no stable matching found");
    auto find_extreme = [&](bool optimal) {
        for (std::size_t i = 0; i < set.size(); ++i) {
            bool ok = true;
            for (std::size_t o = 0; o < set.size() && ok; ++o)
                ok = optimal ? detail::agents_weakly_prefer(inst, set.matchings[i], set.matchings[o])
                             : detail::agents_weakly_prefer(inst, set.matchings[o], set.matchings[i]);
            if (ok) return i;
        }
        throw std::logic_error("stable set has no extreme element");
    };
    set.agent_optimal = find_extreme(true);
    set.agent_pessimal = find_extreme(false);
    return set;
}

}  // namespace matchbandit
