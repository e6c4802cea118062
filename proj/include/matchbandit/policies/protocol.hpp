#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "../stable_matching.hpp"
#include "common.hpp"

namespace matchbandit {

/// A full market's worth of decision making for one trial: produces the
/// round's plays and digests the round's observations.
class Protocol {
public:
    virtual ~Protocol() = default;
    virtual void plan(Round t, PlayProfile& plays) = 0;
    virtual void update(Round t, const PlayProfile& plays, const std::vector<Observation>& obs) = 0;
    virtual Regime regime() const = 0;
    virtual std::size_t anomalies() const { return 0; }
};

/// N independent agents, each seeing only its own observation.
class DecentralizedProtocol : public Protocol {
public:
    DecentralizedProtocol(std::vector<std::unique_ptr<AgentPolicy>> agents, Regime regime)
        : agents_(std::move(agents)), regime_(regime) {}

    void plan(Round t, PlayProfile& plays) override {
        plays.resize(agents_.size());
        for (std::size_t j = 0; j < agents_.size(); ++j) plays[j] = agents_[j]->act(t);
    }

    void update(Round t, const PlayProfile& plays, const std::vector<Observation>& obs) override {
        for (std::size_t j = 0; j < agents_.size(); ++j) agents_[j]->update(t, plays[j], obs[j]);
    }

    Regime regime() const override { return regime_; }

    std::size_t anomalies() const override {
        std::size_t total = 0;
        for (const auto& a : agents_) total += a->anomalies();
        return total;
    }

    AgentPolicy& agent(std::size_t j) { return *agents_[j]; }
    std::size_t size() const { return agents_.size(); }

private:
    std::vector<std::unique_ptr<AgentPolicy>> agents_;
    Regime regime_;
};

struct UcbCParams {
    double gamma = 2.0;
};

/// Centralized UCB: each agent submits its arms ranked by UCB index and a
/// planner runs agent-proposing deferred acceptance against the true arm
/// preferences.
class CentralizedUcb : public Protocol {
public:
    CentralizedUcb(const Instance& inst, Regime regime, UcbCParams params = {})
        : inst_(&inst), params_(params), stats_(inst.n_agents(), ArmStats(inst.n_arms())),
          lists_(inst.n_agents(), std::vector<ArmIndex>(inst.n_arms())), scores_(inst.n_arms()) {
        if (regime != Regime::Centralized) throw ConfigError("UCB-C needs the centralized regime");
        if (!(params.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    }

    /// Submitted preference lists: arms by descending UCB index, ties to
    /// the lower arm.
    const std::vector<std::vector<ArmIndex>>& submissions(Round t) {
        for (AgentIndex j = 0; j < inst_->n_agents(); ++j) {
            for (ArmIndex k = 0; k < inst_->n_arms(); ++k) scores_[k] = stats_[j].index(k, t, params_.gamma);
            auto& list = lists_[j];
            std::iota(list.begin(), list.end(), ArmIndex{0});
            std::stable_sort(list.begin(), list.end(), [&](ArmIndex a, ArmIndex b) { return scores_[a] > scores_[b]; });
        }
        return lists_;
    }

    void plan(Round t, PlayProfile& plays) override {
        const auto result = deferred_acceptance(*inst_, submissions(t));
        plays = result.matching.agent_to_arm();
    }

    void update(Round, const PlayProfile& plays, const std::vector<Observation>& obs) override {
        for (AgentIndex j = 0; j < obs.size(); ++j)
            if (obs[j].matched && obs[j].reward) stats_[j].add(plays[j], *obs[j].reward);
    }

    Regime regime() const override { return Regime::Centralized; }
    const ArmStats& stats(AgentIndex j) const { return stats_[j]; }

private:
    const Instance* inst_;
    UcbCParams params_;
    std::vector<ArmStats> stats_;
    std::vector<std::vector<ArmIndex>> lists_;
    std::vector<double> scores_;
};

}  // namespace matchbandit
