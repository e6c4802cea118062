#pragma once

#include <stdexcept>
#include <vector>

#include "../rng.hpp"
#include "common.hpp"

namespace matchbandit {

struct CaUcbParams {
    double gamma = 2.0;
    double lambda = 0.2;
};

/// Collision-avoiding UCB for the partial-information regime. Each round
/// the agent repeats its previous attempt with probability lambda, and
/// otherwise plays the UCB argmax over arms it could win given last
/// round's matching: arms that were free, held by itself, or held by an
/// agent the arm likes less.
class CaUcbPolicy : public AgentPolicy {
public:
    CaUcbPolicy(AgentIndex self, const Instance& inst, Regime regime, Rng rng, CaUcbParams params = {})
        : self_(self), inst_(&inst), params_(params), rng_(rng), stats_(inst.n_arms()),
          holder_(inst.n_arms(), kNone) {
        if (regime != Regime::Partial) throw ConfigError("CA-UCB needs the partial-information regime");
        if (!(params.lambda >= 0.0 && params.lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
        if (!(params.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    }

    ArmIndex act(Round t) override {
        if (t == 1 || previous_ == kNone) return stats_.argmax(t, params_.gamma, [](ArmIndex) { return true; });
        if (rng_.bernoulli(params_.lambda)) return previous_;
        return stats_.argmax(t, params_.gamma, [&](ArmIndex k) { return plausible(k); });
    }

    void update(Round, ArmIndex played, const Observation& obs) override {
        if (!obs.full_matching) throw ConfigError("CA-UCB received an observation without the round matching");
        if (obs.matched && obs.reward) stats_.add(played, *obs.reward);
        previous_ = played;
        for (ArmIndex k = 0; k < holder_.size(); ++k) holder_[k] = obs.full_matching->agent_of(k);
    }

    bool plausible(ArmIndex k) const {
        const AgentIndex h = holder_[k];
        return h == kNone || h == self_ || inst_->arm_prefers(k, self_, h);
    }

    const ArmStats& stats() const { return stats_; }

private:
    AgentIndex self_;
    const Instance* inst_;
    CaUcbParams params_;
    Rng rng_;
    ArmStats stats_;
    ArmIndex previous_ = kNone;
    std::vector<AgentIndex> holder_;
};

}  // namespace matchbandit
