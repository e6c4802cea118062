#pragma once

// Market model shared by every module: the instance (agent means plus arm
// preference lists), matchings, and the structural quantities that feed the
// regret-bound evaluators.
//
// Agents and arms are 0-based indices in code; files and CLI output use
// 1-based ids.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matchbandit {

using AgentIndex = std::size_t;
using ArmIndex = std::size_t;
inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Thrown when an exhaustive oracle is asked to handle an instance that is too large.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Thrown when a protocol observes something that cannot happen if every
/// agent follows it (e.g. a collision during collision-free exploration).
class ProtocolViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Invalid or inconsistent experiment configuration (including a policy run
/// under a feedback regime it cannot use).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Instance {
public:
    Instance() = default;

    /// means is row-major n_agents x n_arms; arm_prefs[k] lists agents,
    /// most preferred first.
    Instance(std::size_t n_agents, std::size_t n_arms, std::vector<double> means,
             std::vector<std::vector<AgentIndex>> arm_prefs)
        : n_agents_(n_agents), n_arms_(n_arms), means_(std::move(means)),
          arm_prefs_(std::move(arm_prefs)) {
        validate();
        arm_rank_.assign(n_arms_, std::vector<std::size_t>(n_agents_, 0));
        for (ArmIndex k = 0; k < n_arms_; ++k)
            for (std::size_t pos = 0; pos < n_agents_; ++pos) arm_rank_[k][arm_prefs_[k][pos]] = pos;
    }

    std::size_t n_agents() const { return n_agents_; }
    std::size_t n_arms() const { return n_arms_; }
    double mean(AgentIndex j, ArmIndex k) const { return means_[j * n_arms_ + k]; }
    const std::vector<double>& means() const { return means_; }
    const std::vector<std::vector<AgentIndex>>& arm_prefs() const { return arm_prefs_; }
    const std::vector<AgentIndex>& arm_pref(ArmIndex k) const { return arm_prefs_[k]; }

    /// Position of agent j in arm k's list (0 = most preferred).
    std::size_t arm_rank(ArmIndex k, AgentIndex j) const { return arm_rank_[k][j]; }
    bool arm_prefers(ArmIndex k, AgentIndex a, AgentIndex b) const { return arm_rank_[k][a] < arm_rank_[k][b]; }
    bool agent_prefers(AgentIndex j, ArmIndex a, ArmIndex b) const { return mean(j, a) > mean(j, b); }

    /// Agent j's arms by descending mean. Agent preferences are never stored.
    std::vector<ArmIndex> agent_pref(AgentIndex j) const {
        std::vector<ArmIndex> order(n_arms_);
        for (ArmIndex k = 0; k < n_arms_; ++k) order[k] = k;
        std::sort(order.begin(), order.end(), [&](ArmIndex a, ArmIndex b) { return mean(j, a) > mean(j, b); });
        return order;
    }

    /// Sub-market on the given agents and arms (original indices, kept in
    /// the given order). Arm lists keep their relative order.
    Instance restrict(const std::vector<AgentIndex>& agents, const std::vector<ArmIndex>& arms) const {
        std::vector<std::size_t> new_id(n_agents_, kNone);
        for (std::size_t i = 0; i < agents.size(); ++i) new_id[agents[i]] = i;
        std::vector<double> m;
        m.reserve(agents.size() * arms.size());
        for (auto j : agents)
            for (auto k : arms) m.push_back(mean(j, k));
        std::vector<std::vector<AgentIndex>> prefs;
        for (auto k : arms) {
            std::vector<AgentIndex> list;
            for (auto j : arm_prefs_[k])
                if (new_id[j] != kNone) list.push_back(new_id[j]);
            prefs.push_back(std::move(list));
        }
        return Instance(agents.size(), arms.size(), std::move(m), std::move(prefs));
    }

    bool operator==(const Instance& o) const {
        return n_agents_ == o.n_agents_ && n_arms_ == o.n_arms_ && means_ == o.means_ && arm_prefs_ == o.arm_prefs_;
    }

private:
    void validate() const {
        if (n_agents_ > n_arms_) throw std::invalid_argument("instance needs n_agents <= n_arms");
        if (means_.size() != n_agents_ * n_arms_) throw std::invalid_argument("mean matrix has wrong size");
        for (double m : means_)
            if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("means must lie in [0,1]");
        auto sorted = means_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("means must be pairwise distinct");
        if (arm_prefs_.size() != n_arms_) throw std::invalid_argument("need one preference list per arm");
        for (const auto& list : arm_prefs_) {
            if (list.size() != n_agents_) throw std::invalid_argument("arm preference is not a permutation of the agents");
            std::vector<bool> seen(n_agents_, false);
            for (auto j : list) {
                if (j >= n_agents_ || seen[j]) throw std::invalid_argument("arm preference is not a permutation of the agents");
                seen[j] = true;
            }
        }
    }

    std::size_t n_agents_ = 0;
    std::size_t n_arms_ = 0;
    std::vector<double> means_;
    std::vector<std::vector<AgentIndex>> arm_prefs_;
    std::vector<std::vector<std::size_t>> arm_rank_;
};

/// Partial agent <-> arm assignment kept consistent in both directions.
class Matching {
public:
    Matching() = default;
    Matching(std::size_t n_agents, std::size_t n_arms) : arm_of_(n_agents, kNone), agent_of_(n_arms, kNone) {}

    std::size_t n_agents() const { return arm_of_.size(); }
    std::size_t n_arms() const { return agent_of_.size(); }

    ArmIndex arm_of(AgentIndex j) const { return arm_of_[j]; }
    AgentIndex agent_of(ArmIndex k) const { return agent_of_[k]; }
    bool agent_matched(AgentIndex j) const { return arm_of_[j] != kNone; }
    bool arm_matched(ArmIndex k) const { return agent_of_[k] != kNone; }

    void assign(AgentIndex j, ArmIndex k) {
        if (j >= arm_of_.size() || k >= agent_of_.size()) throw std::out_of_range("matching index out of range");
        if (arm_of_[j] != kNone || agent_of_[k] != kNone) throw std::invalid_argument("agent or arm already matched");
        arm_of_[j] = k;
        agent_of_[k] = j;
    }

    void unassign_agent(AgentIndex j) {
        if (arm_of_[j] == kNone) return;
        agent_of_[arm_of_[j]] = kNone;
        arm_of_[j] = kNone;
    }

    bool all_agents_matched() const {
        return std::none_of(arm_of_.begin(), arm_of_.end(), [](std::size_t k) { return k == kNone; });
    }

    std::size_t size() const {
        return static_cast<std::size_t>(std::count_if(arm_of_.begin(), arm_of_.end(), [](std::size_t k) { return k != kNone; }));
    }

    const std::vector<ArmIndex>& agent_to_arm() const { return arm_of_; }

    /// Builds a matching from an agent->arm vector (kNone = unmatched).
    static Matching from_agent_arms(const std::vector<ArmIndex>& arms, std::size_t n_arms) {
        Matching m(arms.size(), n_arms);
        for (AgentIndex j = 0; j < arms.size(); ++j)
            if (arms[j] != kNone) m.assign(j, arms[j]);
        return m;
    }

    bool operator==(const Matching& o) const { return arm_of_ == o.arm_of_ && agent_of_ == o.agent_of_; }

private:
    std::vector<ArmIndex> arm_of_;
    std::vector<AgentIndex> agent_of_;
};

struct GapSummary {
    std::size_t n_arms = 0;
    std::vector<double> gaps;  // row-major, mu(j, k*_j) - mu(j, k); may be negative
    std::optional<double> delta_min;      // smallest strictly positive gap
    std::optional<double> all_pairs_gap;  // min over j, k != k' of |mu_jk - mu_jk'|

    double gap(AgentIndex j, ArmIndex k) const { return gaps[j * n_arms + k]; }
};

inline GapSummary gap_summary(const Instance& inst, const Matching& stable) {
    if (!stable.all_agents_matched()) throw std::invalid_argument("gap_summary needs every agent matched");
    GapSummary g;
    g.n_arms = inst.n_arms();
    g.gaps.resize(inst.n_agents() * inst.n_arms());
    for (AgentIndex j = 0; j < inst.n_agents(); ++j) {
        const double best = inst.mean(j, stable.arm_of(j));
        for (ArmIndex k = 0; k < inst.n_arms(); ++k) {
            const double d = best - inst.mean(j, k);
            g.gaps[j * inst.n_arms() + k] = d;
            if (d > 0.0 && (!g.delta_min || d < *g.delta_min)) g.delta_min = d;
        }
        for (ArmIndex a = 0; a < inst.n_arms(); ++a)
            for (ArmIndex b = a + 1; b < inst.n_arms(); ++b) {
                const double d = std::abs(inst.mean(j, a) - inst.mean(j, b));
                if (!g.all_pairs_gap || d < *g.all_pairs_gap) g.all_pairs_gap = d;
            }
    }
    return g;
}

/// A pair of orders over agents and arms. agents[r] / arms[r] are the
/// original indices at position r. arms covers all K arms; positions >= N
/// hold the arms left unmatched.
struct AgentArmOrder {
    std::vector<AgentIndex> agents;
    std::vector<ArmIndex> arms;

    bool operator==(const AgentArmOrder&) const = default;
};

/// Blocking structure of a uniqueness-consistent instance.
///
/// Sets are expressed in the relabeled frame where the left order is the
/// identity: agent label r is left.agents[r] and its stable arm is arm label
/// r. Rank-valued fields (j_max, lr, lr_max, f_alpha) are 1-based, matching
/// the formulas they feed.
struct InstanceStructure {
    std::size_t n_agents = 0;
    std::size_t n_arms = 0;
    AgentArmOrder left;
    AgentArmOrder right;

    std::vector<std::set<ArmIndex>> dominated;               // D_j, arm labels
    std::vector<std::vector<std::set<AgentIndex>>> blocking;  // B_jk, agent labels
    std::vector<std::set<ArmIndex>> hidden;                  // H_j, arm labels
    std::vector<std::size_t> j_max;
    std::vector<std::size_t> lr;
    std::vector<std::size_t> lr_max;
    std::vector<std::size_t> f_alpha;

    AgentIndex original_agent(AgentIndex label) const { return left.agents[label]; }
    ArmIndex original_arm(ArmIndex label) const { return left.arms[label]; }

    /// Same sets with labels mapped back to original indices; entry j of
    /// each per-agent vector then refers to original agent j.
    InstanceStructure in_original_frame() const {
        InstanceStructure out = *this;
        auto map_arms = [&](const std::set<ArmIndex>& s) {
            std::set<ArmIndex> r;
            for (auto k : s) r.insert(left.arms[k]);
            return r;
        };
        auto map_agents = [&](const std::set<AgentIndex>& s) {
            std::set<AgentIndex> r;
            for (auto j : s) r.insert(left.agents[j]);
            return r;
        };
        for (AgentIndex label = 0; label < n_agents; ++label) {
            const AgentIndex j = left.agents[label];
            out.dominated[j] = map_arms(dominated[label]);
            out.hidden[j] = map_arms(hidden[label]);
            out.j_max[j] = j_max[label];
            out.lr[j] = lr[label];
            out.lr_max[j] = lr_max[label];
            out.f_alpha[j] = f_alpha[label];
            for (ArmIndex k = 0; k < n_arms; ++k) out.blocking[j][left.arms[k]] = map_agents(blocking[label][k]);
        }
        return out;
    }
};

namespace detail {
inline bool is_permutation_of(const std::vector<std::size_t>& v, std::size_t n) {
    if (v.size() != n) return false;
    std::vector<bool> seen(n, false);
    for (auto x : v) {
        if (x >= n || seen[x]) return false;
        seen[x] = true;
    }
    return true;
}
}  // namespace detail

/// Computes D_j, B_jk, H_j, J_max, lr, lr_max and f_alpha. The left order
/// must pair each agent with its stable arm position by position, and the
/// right order likewise.
inline InstanceStructure instance_structure(const Instance& inst, const Matching& stable, const AgentArmOrder& left,
                                            const AgentArmOrder& right) {
    const std::size_t n = inst.n_agents();
    const std::size_t kk = inst.n_arms();
    if (!stable.all_agents_matched()) throw std::invalid_argument("stable matching must match every agent");
    for (const auto* o : {&left, &right})
        if (!detail::is_permutation_of(o->agents, n) || !detail::is_permutation_of(o->arms, kk))
            throw std::invalid_argument("orders must be permutations of agents and arms");
    for (std::size_t r = 0; r < n; ++r) {
        if (stable.arm_of(left.agents[r]) != left.arms[r])
            throw std::invalid_argument("left order is inconsistent with the stable matching");
        if (stable.arm_of(right.agents[r]) != right.arms[r])
            throw std::invalid_argument("right order is inconsistent with the stable matching");
    }

    InstanceStructure s;
    s.n_agents = n;
    s.n_arms = kk;
    s.left = left;
    s.right = right;

    std::vector<std::size_t> arm_label(kk);
    for (std::size_t r = 0; r < kk; ++r) arm_label[left.arms[r]] = r;

    s.dominated.resize(n);
    for (AgentIndex j = 0; j < n; ++j)
        for (AgentIndex jp = 0; jp < j; ++jp) s.dominated[j].insert(jp);  // k*_{j'} has label j'

    s.blocking.assign(n, std::vector<std::set<AgentIndex>>(kk));
    for (AgentIndex j = 0; j < n; ++j)
        for (ArmIndex k = 0; k < kk; ++k)
            for (AgentIndex jp = 0; jp < n; ++jp)
                if (jp != j && inst.arm_prefers(left.arms[k], left.agents[jp], left.agents[j])) s.blocking[j][k].insert(jp);

    s.hidden.resize(n);
    s.j_max.resize(n);
    for (AgentIndex j = 0; j < n; ++j) {
        for (ArmIndex k = 0; k < kk; ++k) {
            if (s.dominated[j].count(k)) continue;
            for (auto jp : s.blocking[j][k])
                if (!s.dominated[jp].count(k)) {
                    s.hidden[j].insert(k);
                    break;
                }
        }
        std::size_t jm = j + 2;  // j+1 as a 1-based rank
        for (auto k : s.hidden[j])
            for (auto jp : s.blocking[j][k]) jm = std::max(jm, jp + 1);
        s.j_max[j] = jm;
    }

    std::vector<std::size_t> right_pos(n);
    for (std::size_t r = 0; r < n; ++r) right_pos[right.agents[r]] = r + 1;
    s.lr.resize(n);
    s.lr_max.resize(n);
    s.f_alpha.resize(n);
    std::size_t running = 0;
    for (AgentIndex j = 0; j < n; ++j) {
        s.lr[j] = right_pos[left.agents[j]];
        running = std::max(running, s.lr[j]);
        s.lr_max[j] = running;
        s.f_alpha[j] = (j + 1) + running;
    }
    return s;
}

}  // namespace matchbandit
