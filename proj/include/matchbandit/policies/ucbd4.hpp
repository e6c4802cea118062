#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "communication.hpp"
#include "schedule.hpp"

namespace matchbandit {

struct UcbD4Params {
    double gamma = 2.0;
    std::optional<double> beta;  // default 1/(2K)
    bool local_deletion = true;  // false gives UCB-D3
    std::optional<PhaseTuning> tuning;
};

/// Local-deletion threshold ceil(beta * len), tolerant of the rounding in
/// beta itself (1/6 * 12 must give 2, not 3).
inline std::uint64_t local_deletion_threshold(double beta, std::uint64_t regular_len) {
    const double x = beta * static_cast<double>(regular_len);
    return static_cast<std::uint64_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

class UcbD4Policy : public AgentPolicy {
public:
    UcbD4Policy(std::size_t n_agents, std::size_t n_arms, UcbD4Params params = {})
        : n_(n_agents), k_(n_arms), gamma_(params.gamma),
          beta_(params.beta.value_or(1.0 / (2.0 * static_cast<double>(n_arms)))), local_deletion_(params.local_deletion),
          schedule_(n_agents, n_arms, params.tuning), cursor_(schedule_), ranking_(n_agents, n_arms), stats_(n_arms),
          active_(n_arms, true), global_deleted_(n_arms, false), local_deleted_(n_arms, false), collisions_(n_arms, 0),
          matches_(n_arms, 0), scan_(n_agents, n_arms) {
        if (!(gamma_ > 0.0)) throw std::invalid_argument("gamma must be positive");
        if (!(beta_ > 0.0)) throw std::invalid_argument("beta must be positive");
    }

    UcbD4Policy(const UcbD4Policy&) = delete;
    UcbD4Policy& operator=(const UcbD4Policy&) = delete;

    ArmIndex act(Round t) override {
        pos_ = cursor_.seek(t);
        switch (pos_.block) {
            case Block::Ranking: return ranking_.act();
            case Block::Regular: {
                if (pos_.phase != phase_) start_phase(pos_.phase);
                ArmIndex k = stats_.argmax(t, gamma_, [&](ArmIndex a) { return active_[a]; });
                if (k == kNone) {
                    // Every active arm was deleted locally: fall back to all
                    // non-global arms and stop deleting until the phase ends.
                    ++anomalies_;
                    deletion_suspended_ = true;
                    for (ArmIndex a = 0; a < k_; ++a) active_[a] = !global_deleted_[a];
                    k = stats_.argmax(t, gamma_, [&](ArmIndex a) { return active_[a]; });
                    if (k == kNone) {
                        std::fill(active_.begin(), active_.end(), true);
                        k = stats_.argmax(t, gamma_, [](ArmIndex) { return true; });
                    }
                }
                last_argmax_ = k;
                return k;
            }
            case Block::Communication:
                if (pos_.offset == 0) scan_.begin(ranking_.index(), most_matched());
                return scan_.act(pos_.offset);
        }
        return 0;
    }

    void update(Round t, ArmIndex played, const Observation& obs) override {
        if (obs.matched && obs.reward) stats_.add(played, *obs.reward);
        switch (pos_.block) {
            case Block::Ranking: ranking_.update(t, obs.matched); break;
            case Block::Regular:
                if (obs.matched) {
                    ++matches_[played];
                } else if (++collisions_[played] >= threshold_ && local_deletion_ && !deletion_suspended_ && active_[played]) {
                    active_[played] = false;
                    local_deleted_[played] = true;
                }
                break;
            case Block::Communication: scan_.update(pos_.offset, played, obs.matched); break;
        }
    }

    std::size_t anomalies() const override { return anomalies_; }

    std::size_t index() const { return ranking_.index(); }
    std::size_t phase() const { return phase_; }
    const std::vector<bool>& active_set() const { return active_; }
    const std::vector<bool>& global_deleted() const { return global_deleted_; }
    const std::vector<bool>& local_deleted() const { return local_deleted_; }
    const ArmStats& stats() const { return stats_; }
    double beta() const { return beta_; }
    const UcbD4Schedule& schedule() const { return schedule_; }

    /// Arm matched most often in the current regular block; ties go to the
    /// lower arm, and with no matches at all the last argmax is used.
    ArmIndex most_matched() const {
        ArmIndex best = kNone;
        for (ArmIndex k = 0; k < k_; ++k)
            if (matches_[k] > 0 && (best == kNone || matches_[k] > matches_[best])) best = k;
        return best == kNone ? last_argmax_ : best;
    }

private:
    void start_phase(std::size_t phase) {
        if (phase_ != 0) global_deleted_ = scan_.result();
        phase_ = phase;
        for (ArmIndex k = 0; k < k_; ++k) {
            active_[k] = !global_deleted_[k];
            local_deleted_[k] = false;
            collisions_[k] = 0;
            matches_[k] = 0;
        }
        deletion_suspended_ = false;
        threshold_ = local_deletion_threshold(beta_, schedule_.regular_len(phase));
    }

    std::size_t n_;
    std::size_t k_;
    double gamma_;
    double beta_;
    bool local_deletion_;
    UcbD4Schedule schedule_;
    UcbD4Schedule::Cursor cursor_;
    UcbD4Schedule::Position pos_{};
    IndexEstimator ranking_;
    ArmStats stats_;
    std::vector<bool> active_;
    std::vector<bool> global_deleted_;
    std::vector<bool> local_deleted_;
    std::vector<std::uint64_t> collisions_;
    std::vector<std::uint64_t> matches_;
    std::uint64_t threshold_ = 1;
    bool deletion_suspended_ = false;
    std::size_t phase_ = 0;
    ArmIndex last_argmax_ = 0;
    CommunicationScan scan_;
    std::size_t anomalies_ = 0;
};

}  // namespace matchbandit
