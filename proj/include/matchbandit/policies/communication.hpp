#pragma once

#include <cstdint>
#include <vector>

#include "common.hpp"

namespace matchbandit {

/// Collision-based scan over N*K rounds. Every agent broadcasts its most
/// matched arm O, except during its own slot, where the agent with rank
/// Index plays arms 1..K in turn. A collision on a scanned arm means a
/// higher-ranked broadcaster sits there, so the arm goes into the result.
///
/// Round c of the block (0-based) is protocol step tau = c + 1; the final
/// round (tau = NK) is padding in which everyone broadcasts. Step 0 would
/// have the rank-1 agent scan arm 1, where it cannot be blocked, so it is
/// dropped.
class CommunicationScan {
public:
    CommunicationScan(std::size_t n_agents, std::size_t n_arms) : n_(n_agents), k_(n_arms), found_(n_arms, false) {}

    /// Starts a block; index is the agent's 1-based rank.
    void begin(std::size_t index, ArmIndex broadcast) {
        index_ = index;
        broadcast_ = broadcast;
        std::fill(found_.begin(), found_.end(), false);
    }

    bool scanning(std::uint64_t c) const {
        const std::uint64_t tau = c + 1;
        if (tau >= static_cast<std::uint64_t>(n_) * k_) return false;
        return tau >= k_ * (index_ - 1) && tau <= k_ * index_ - 1;
    }

    ArmIndex act(std::uint64_t c) const { return scanning(c) ? static_cast<ArmIndex>((c + 1) % k_) : broadcast_; }

    void update(std::uint64_t c, ArmIndex played, bool matched) {
        if (scanning(c) && !matched) found_[played] = true;
    }

    const std::vector<bool>& result() const { return found_; }
    ArmIndex broadcast() const { return broadcast_; }

private:
    std::size_t n_;
    std::size_t k_;
    std::size_t index_ = 1;
    ArmIndex broadcast_ = 0;
    std::vector<bool> found_;
};

}  // namespace matchbandit
