#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "../core.hpp"
#include "../market.hpp"

namespace matchbandit {

using Round = std::uint64_t;  // 1-based

/// Optimistic index; +inf for an arm never sampled.
inline double ucb_index(double mean_hat, std::uint64_t n, Round t, double gamma) {
    if (n == 0) return std::numeric_limits<double>::infinity();
    return mean_hat + std::sqrt(2.0 * gamma * std::log(static_cast<double>(t)) / static_cast<double>(n));
}

/// Running per-arm sample means.
class ArmStats {
public:
    explicit ArmStats(std::size_t n_arms = 0) : mean_(n_arms, 0.0), count_(n_arms, 0) {}

    void add(ArmIndex k, double reward) {
        ++count_[k];
        mean_[k] += (reward - mean_[k]) / static_cast<double>(count_[k]);
    }

    double mean(ArmIndex k) const { return mean_[k]; }
    std::uint64_t count(ArmIndex k) const { return count_[k]; }
    std::size_t size() const { return mean_.size(); }
    double index(ArmIndex k, Round t, double gamma) const { return ucb_index(mean_[k], count_[k], t, gamma); }

    /// Highest index among arms with allowed[k] set; ties go to the lower
    /// arm. kNone if nothing is allowed.
    template <typename Allowed>
    ArmIndex argmax(Round t, double gamma, Allowed&& allowed) const {
        ArmIndex best = kNone;
        double best_value = -std::numeric_limits<double>::infinity();
        for (ArmIndex k = 0; k < mean_.size(); ++k) {
            if (!allowed(k)) continue;
            const double v = index(k, t, gamma);
            if (best == kNone || v > best_value) {
                best = k;
                best_value = v;
            }
        }
        return best;
    }

private:
    std::vector<double> mean_;
    std::vector<std::uint64_t> count_;
};

/// One agent's decision rule, driven round by round by the trial loop.
class AgentPolicy {
public:
    virtual ~AgentPolicy() = default;
    virtual ArmIndex act(Round t) = 0;
    virtual void update(Round t, ArmIndex played, const Observation& obs) = 0;
    /// Count of recoveries from states the protocol should never reach.
    virtual std::size_t anomalies() const { return 0; }
};

/// Rank at arm 1 from the arm's own choices: everyone still unranked plays
/// arm 1; the agent matched there in round t has rank t and moves to arm 2.
/// Runs for N-1 rounds; agents never matched have rank N.
class IndexEstimator {
public:
    IndexEstimator(std::size_t n_agents, std::size_t n_arms) : n_agents_(n_agents), n_arms_(n_arms), index_(n_agents) {}

    ArmIndex act() const { return arm_; }

    void update(Round t, bool matched) {
        if (!found_ && matched && t + 1 <= n_agents_) {
            found_ = true;
            index_ = static_cast<std::size_t>(t);
            arm_ = n_arms_ > 1 ? 1 : 0;
        }
    }

    /// 1-based rank.
    std::size_t index() const { return index_; }

private:
    std::size_t n_agents_;
    std::size_t n_arms_;
    std::size_t index_;
    bool found_ = false;
    ArmIndex arm_ = 0;
};

}  // namespace matchbandit
