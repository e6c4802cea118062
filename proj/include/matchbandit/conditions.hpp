#pragma once

// Checkers for the structural conditions that make the stable matching
// unique and learnable: serial dictatorship, the sequential preference
// condition, the alpha condition, and a brute-force uniqueness-consistency
// oracle.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "core.hpp"
#include "stable_matching.hpp"

namespace matchbandit {

enum class CertificateKind { SerialDictatorship, Spc, AlphaLeft, AlphaRight };

inline std::string_view to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::SerialDictatorship: return "serial-dictatorship";
        case CertificateKind::Spc: return "spc";
        case CertificateKind::AlphaLeft: return "alpha-left";
        case CertificateKind::AlphaRight: return "alpha-right";
    }
    return "?";
}

/// Position r pairs agent_order[r] with arm_order[r] for r < N; arm
/// positions from N on hold the surplus arms.
struct OrderCertificate {
    std::vector<AgentIndex> agent_order;
    std::vector<ArmIndex> arm_order;
    CertificateKind kind{};

    AgentArmOrder as_order() const { return {agent_order, arm_order}; }
    bool operator==(const OrderCertificate&) const = default;
};

struct AlphaCertificate {
    OrderCertificate left;
    OrderCertificate right;
    Matching stable;
};

namespace elimination {

using Pair = std::pair<AgentIndex, ArmIndex>;

/// Remaining agents/arms as flags; true = still present.
struct Remaining {
    std::vector<bool> agents;
    std::vector<bool> arms;

    Remaining(std::size_t n, std::size_t k) : agents(n, true), arms(k, true) {}
    void remove(Pair p) {
        agents[p.first] = false;
        arms[p.second] = false;
    }
};

inline ArmIndex best_remaining_arm(const Instance& inst, AgentIndex j, const std::vector<bool>& arms) {
    ArmIndex best = kNone;
    for (ArmIndex k = 0; k < inst.n_arms(); ++k)
        if (arms[k] && (best == kNone || inst.mean(j, k) > inst.mean(j, best))) best = k;
    return best;
}

inline AgentIndex top_remaining_agent(const Instance& inst, ArmIndex k, const std::vector<bool>& agents) {
    for (auto j : inst.arm_pref(k))
        if (agents[j]) return j;
    return kNone;
}

/// Mutually-top pairs, by ascending agent index.
inline std::vector<Pair> spc_eligible(const Instance& inst, const Remaining& rem) {
    std::vector<Pair> out;
    for (AgentIndex j = 0; j < inst.n_agents(); ++j) {
        if (!rem.agents[j]) continue;
        const ArmIndex k = best_remaining_arm(inst, j, rem.arms);
        if (k != kNone && top_remaining_agent(inst, k, rem.agents) == j) out.emplace_back(j, k);
    }
    return out;
}

/// Agents whose stable arm is their best remaining arm, by ascending agent index.
inline std::vector<Pair> alpha_left_eligible(const Instance& inst, const Matching& stable, const Remaining& rem) {
    std::vector<Pair> out;
    for (AgentIndex j = 0; j < inst.n_agents(); ++j)
        if (rem.agents[j] && best_remaining_arm(inst, j, rem.arms) == stable.arm_of(j)) out.emplace_back(j, stable.arm_of(j));
    return out;
}

/// Matched arms whose stable agent is their top remaining agent, by ascending arm index.
inline std::vector<Pair> alpha_right_eligible(const Instance& inst, const Matching& stable, const Remaining& rem) {
    std::vector<Pair> out;
    for (ArmIndex k = 0; k < inst.n_arms(); ++k) {
        const AgentIndex j = stable.agent_of(k);
        if (j != kNone && rem.arms[k] && top_remaining_agent(inst, k, rem.agents) == j) out.emplace_back(j, k);
    }
    return out;
}

/// Runs an elimination, always taking the first eligible pair. Returns the
/// removal sequence, or nothing if it stalls before every agent is removed.
template <typename Eligible>
std::optional<std::vector<Pair>> run_greedy(std::size_t n, std::size_t k, Eligible&& eligible) {
    Remaining rem(n, k);
    std::vector<Pair> seq;
    for (std::size_t step = 0; step < n; ++step) {
        const auto cand = eligible(rem);
        if (cand.empty()) return std::nullopt;
        seq.push_back(cand.front());
        rem.remove(cand.front());
    }
    return seq;
}

}  // namespace elimination

namespace detail {

inline OrderCertificate certificate_from(const std::vector<elimination::Pair>& seq, std::size_t n_arms, CertificateKind kind) {
    OrderCertificate c;
    c.kind = kind;
    std::vector<bool> used(n_arms, false);
    for (auto [j, k] : seq) {
        c.agent_order.push_back(j);
        c.arm_order.push_back(k);
        used[k] = true;
    }
    for (ArmIndex k = 0; k < n_arms; ++k)
        if (!used[k]) c.arm_order.push_back(k);
    return c;
}

// Agent at position r prefers its arm to every arm at a later position.
inline bool agent_side_holds(const Instance& inst, const OrderCertificate& c) {
    for (std::size_t r = 0; r < c.agent_order.size(); ++r)
        for (std::size_t s = r + 1; s < c.arm_order.size(); ++s)
            if (!inst.agent_prefers(c.agent_order[r], c.arm_order[r], c.arm_order[s])) return false;
    return true;
}

// Arm at position r prefers its agent to every agent at a later position.
inline bool arm_side_holds(const Instance& inst, const OrderCertificate& c) {
    for (std::size_t r = 0; r < c.agent_order.size(); ++r)
        for (std::size_t s = r + 1; s < c.agent_order.size(); ++s)
            if (!inst.arm_prefers(c.arm_order[r], c.agent_order[r], c.agent_order[s])) return false;
    return true;
}

inline bool pairs_match(const OrderCertificate& c, const Matching& m) {
    for (std::size_t r = 0; r < c.agent_order.size(); ++r)
        if (m.arm_of(c.agent_order[r]) != c.arm_order[r]) return false;
    return true;
}

}  // namespace detail

/// Replays a certificate against its defining condition.
inline bool verify_certificate(const Instance& inst, const OrderCertificate& c) {
    if (!detail::is_permutation_of(c.agent_order, inst.n_agents()) || !detail::is_permutation_of(c.arm_order, inst.n_arms()))
        return false;
    switch (c.kind) {
        case CertificateKind::SerialDictatorship:
            for (ArmIndex k = 0; k < inst.n_arms(); ++k)
                if (inst.arm_pref(k) != c.agent_order) return false;
            return detail::agent_side_holds(inst, c);
        case CertificateKind::Spc: return detail::agent_side_holds(inst, c) && detail::arm_side_holds(inst, c);
        case CertificateKind::AlphaLeft: return detail::agent_side_holds(inst, c);
        case CertificateKind::AlphaRight: return detail::arm_side_holds(inst, c);
    }
    return false;
}

inline std::optional<OrderCertificate> check_serial_dictatorship(const Instance& inst) {
    const auto& common = inst.arm_pref(0);
    for (ArmIndex k = 1; k < inst.n_arms(); ++k)
        if (inst.arm_pref(k) != common) return std::nullopt;
    std::vector<elimination::Pair> seq;
    std::vector<bool> arms(inst.n_arms(), true);
    for (auto j : common) {
        const ArmIndex k = elimination::best_remaining_arm(inst, j, arms);
        arms[k] = false;
        seq.emplace_back(j, k);
    }
    auto cert = detail::certificate_from(seq, inst.n_arms(), CertificateKind::SerialDictatorship);
    if (!verify_certificate(inst, cert)) throw std::logic_error("serial dictatorship certificate failed replay");
    return cert;
}

inline std::optional<OrderCertificate> check_spc(const Instance& inst) {
    auto seq = elimination::run_greedy(inst.n_agents(), inst.n_arms(),
                                       [&](const elimination::Remaining& r) { return elimination::spc_eligible(inst, r); });
    if (!seq) return std::nullopt;
    auto cert = detail::certificate_from(*seq, inst.n_arms(), CertificateKind::Spc);
    if (!verify_certificate(inst, cert)) throw std::logic_error("SPC certificate failed replay");
    return cert;
}

inline std::optional<AlphaCertificate> check_alpha(const Instance& inst) {
    Matching stable = gale_shapley(inst);
    const std::size_t n = inst.n_agents();
    const std::size_t k = inst.n_arms();
    auto left = elimination::run_greedy(
        n, k, [&](const elimination::Remaining& r) { return elimination::alpha_left_eligible(inst, stable, r); });
    if (!left) return std::nullopt;
    auto right = elimination::run_greedy(
        n, k, [&](const elimination::Remaining& r) { return elimination::alpha_right_eligible(inst, stable, r); });
    if (!right) return std::nullopt;
    AlphaCertificate out{detail::certificate_from(*left, k, CertificateKind::AlphaLeft),
                         detail::certificate_from(*right, k, CertificateKind::AlphaRight), std::move(stable)};
    if (!verify_certificate(inst, out.left) || !verify_certificate(inst, out.right) ||
        !detail::pairs_match(out.left, out.stable) || !detail::pairs_match(out.right, out.stable))
        throw std::logic_error("alpha certificate failed replay");
    return out;
}

inline constexpr std::size_t kMaxUnqcSize = 6;

/// Unique stable matching, and still unique after deleting any subset of
/// stable pairs.
inline bool check_unqc_brute(const Instance& inst) {
    if (inst.n_agents() > kMaxUnqcSize || inst.n_arms() > kMaxUnqcSize)
        throw CapacityError("check_unqc_brute supports at most 6 agents and 6 arms");
    const auto top = enumerate_stable(inst);
    if (top.size() != 1) return false;
    const Matching& m = top.matchings.front();
    const std::size_t n = inst.n_agents();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<AgentIndex> agents;
        std::vector<bool> arm_removed(inst.n_arms(), false);
        for (AgentIndex j = 0; j < n; ++j) {
            if (mask & (std::size_t{1} << j))
                arm_removed[m.arm_of(j)] = true;
            else
                agents.push_back(j);
        }
        std::vector<ArmIndex> arms;
        for (ArmIndex k = 0; k < inst.n_arms(); ++k)
            if (!arm_removed[k]) arms.push_back(k);
        if (enumerate_stable(inst.restrict(agents, arms)).size() != 1) return false;
    }
    return true;
}

}  // namespace matchbandit
