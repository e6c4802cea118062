#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"
#include "schedule.hpp"

namespace matchbandit {

struct EtcParams {
    double epsilon = 0.2;
    PhaseTuning tuning{};
};

/// Decentralized deferred acceptance as seen by one agent: propose to the
/// best arm not yet refused in this block, and treat a block as a refusal.
class RejectionProposer {
public:
    explicit RejectionProposer(std::size_t n_arms = 0) : rejected_(n_arms, false) {}

    void reset() { std::fill(rejected_.begin(), rejected_.end(), false); }

    /// Best arm by the given estimates among arms not refused; ties go to
    /// the lower arm.
    ArmIndex choose(const std::vector<double>& estimates) const {
        ArmIndex best = kNone;
        for (ArmIndex k = 0; k < rejected_.size(); ++k)
            if (!rejected_[k] && (best == kNone || estimates[k] > estimates[best])) best = k;
        if (best == kNone) throw ProtocolViolation("every arm refused during deferred acceptance");
        return best;
    }

    void refuse(ArmIndex k) { rejected_[k] = true; }
    bool refused(ArmIndex k) const { return rejected_[k]; }

private:
    std::vector<bool> rejected_;
};

/// Phased explore-then-commit. Each phase opens with K*floor(i^eps)
/// collision-free round-robin explore rounds (offset by the agent's rank),
/// then runs deferred acceptance on the explore-only sample means.
class EtcPolicy : public AgentPolicy {
public:
    EtcPolicy(std::size_t n_agents, std::size_t n_arms, EtcParams params = {})
        : n_(n_agents), k_(n_arms), params_(params), schedule_(params.tuning), cursor_(schedule_),
          ranking_(n_agents, n_arms), sums_(n_arms, 0.0), counts_(n_arms, 0), estimates_(n_arms),
          proposer_(n_arms) {
        if (!(params.epsilon > 0.0)) throw std::invalid_argument("ETC epsilon must be positive");
    }

    EtcPolicy(const EtcPolicy&) = delete;
    EtcPolicy& operator=(const EtcPolicy&) = delete;

    ArmIndex act(Round t) override {
        if (t <= n_) {
            mode_ = Mode::Ranking;
            return ranking_.act();
        }
        const auto pos = cursor_.seek(t);
        if (pos.offset <= etc_explore_rounds(pos.phase, k_, params_.epsilon)) {
            mode_ = Mode::Explore;
            const std::uint64_t r = (pos.offset + ranking_.index() + 1) % k_;
            return static_cast<ArmIndex>(r == 0 ? k_ - 1 : r - 1);
        }
        mode_ = Mode::Exploit;
        if (!exploit_phase_ || *exploit_phase_ != pos.phase) {
            exploit_phase_ = pos.phase;
            proposer_.reset();
        }
        return proposer_.choose(current_estimates());
    }

    void update(Round t, ArmIndex played, const Observation& obs) override {
        switch (mode_) {
            case Mode::Ranking: ranking_.update(t, obs.matched); break;
            case Mode::Explore:
                if (!obs.matched)
                    throw ProtocolViolation("collision during an ETC explore round at t=" + std::to_string(t));
                sums_[played] += obs.reward.value_or(0.0);
                ++counts_[played];
                break;
            case Mode::Exploit:
                if (!obs.matched) proposer_.refuse(played);
                break;
        }
    }

    /// Replace the explore estimates (used to study the commit dynamics
    /// with exact means).
    void override_estimates(std::vector<double> estimates) { override_ = std::move(estimates); }

    bool last_round_was_explore() const { return mode_ == Mode::Explore; }
    bool last_round_was_exploit() const { return mode_ == Mode::Exploit; }
    std::size_t index() const { return ranking_.index(); }
    std::uint64_t explore_count(ArmIndex k) const { return counts_[k]; }

    /// Explore-only sample means; arms never explored rank last.
    const std::vector<double>& current_estimates() {
        if (override_) return *override_;
        for (ArmIndex k = 0; k < k_; ++k)
            estimates_[k] = counts_[k] ? sums_[k] / static_cast<double>(counts_[k]) : -std::numeric_limits<double>::infinity();
        return estimates_;
    }

private:
    enum class Mode { Ranking, Explore, Exploit };

    std::size_t n_;
    std::size_t k_;
    EtcParams params_;
    EtcSchedule schedule_;
    EtcSchedule::Cursor cursor_;
    IndexEstimator ranking_;
    std::vector<double> sums_;
    std::vector<std::uint64_t> counts_;
    std::vector<double> estimates_;
    std::optional<std::vector<double>> override_;
    RejectionProposer proposer_;
    std::optional<std::size_t> exploit_phase_;
    Mode mode_ = Mode::Ranking;
};

}  // namespace matchbandit
