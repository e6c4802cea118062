#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "market.hpp"
#include "policies/common.hpp"

namespace matchbandit {

/// About count rounds spaced geometrically from first to last (both
/// included), merged with extra, sorted and de-duplicated.
inline std::vector<Round> checkpoint_grid(Round first, Round last, std::size_t count, const std::vector<Round>& extra = {}) {
    if (first < 1 || first > last) throw std::invalid_argument("checkpoint range must satisfy 1 <= first <= last");
    std::vector<Round> out;
    if (count == 1) {
        out.push_back(last);
    } else if (count > 1) {
        const double ratio = std::log(static_cast<double>(last) / static_cast<double>(first));
        for (std::size_t i = 0; i < count; ++i) {
            const double x = static_cast<double>(first) * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
            out.push_back(std::clamp<Round>(static_cast<Round>(std::llround(x)), first, last));
        }
        out.back() = last;
    }
    for (auto t : extra) {
        if (t < 1 || t > last) throw std::invalid_argument("extra checkpoint outside 1..horizon");
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Cumulative agent-optimal pseudo-regret and collision regret per agent.
/// Each round adds mu(j, stable arm) - matched * mu(j, played arm); a
/// blocked round also adds mu(j, stable arm) to the collision series.
class RegretLedger {
public:
    RegretLedger(const Instance& inst, const Matching& stable, std::vector<Round> checkpoints = {})
        : checkpoints_(std::move(checkpoints)), regret_(inst.n_agents(), 0.0), collision_(inst.n_agents(), 0.0),
          matched_rounds_(inst.n_agents(), 0), blocked_rounds_(inst.n_agents(), 0), means_(inst.means()),
          n_arms_(inst.n_arms()), best_(inst.n_agents()) {
        if (!stable.all_agents_matched()) throw std::invalid_argument("ledger needs a stable matching covering every agent");
        for (AgentIndex j = 0; j < inst.n_agents(); ++j) best_[j] = inst.mean(j, stable.arm_of(j));
        if (!std::is_sorted(checkpoints_.begin(), checkpoints_.end())) throw std::invalid_argument("checkpoints must be sorted");
    }

    void record_round(AgentIndex j, ArmIndex play, bool matched) {
        if (matched) {
            regret_[j] += best_[j] - means_[j * n_arms_ + play];
            ++matched_rounds_[j];
        } else {
            regret_[j] += best_[j];
            collision_[j] += best_[j];
            ++blocked_rounds_[j];
        }
    }

    /// Records every agent for round t and snapshots if t is a checkpoint.
    void record(Round t, const PlayProfile& plays, const RoundOutcome& outcome) {
        for (AgentIndex j = 0; j < plays.size(); ++j) record_round(j, plays[j], outcome.matching.agent_matched(j));
        rounds_ = t;
        while (next_ < checkpoints_.size() && checkpoints_[next_] <= t) {
            if (checkpoints_[next_] == t) {
                regret_snap_.push_back(regret_);
                collision_snap_.push_back(collision_);
            }
            ++next_;
        }
    }

    double regret(AgentIndex j) const { return regret_[j]; }
    double collision_regret(AgentIndex j) const { return collision_[j]; }
    std::uint64_t matched_rounds(AgentIndex j) const { return matched_rounds_[j]; }
    std::uint64_t blocked_rounds(AgentIndex j) const { return blocked_rounds_[j]; }
    double stable_mean(AgentIndex j) const { return best_[j]; }
    Round rounds() const { return rounds_; }

    const std::vector<Round>& checkpoints() const { return checkpoints_; }
    /// [checkpoint][agent], for checkpoints reached so far.
    const std::vector<std::vector<double>>& regret_snapshots() const { return regret_snap_; }
    const std::vector<std::vector<double>>& collision_snapshots() const { return collision_snap_; }

private:
    std::vector<Round> checkpoints_;
    std::size_t next_ = 0;
    std::vector<double> regret_;
    std::vector<double> collision_;
    std::vector<std::uint64_t> matched_rounds_;
    std::vector<std::uint64_t> blocked_rounds_;
    std::vector<double> means_;
    std::size_t n_arms_;
    std::vector<double> best_;
    Round rounds_ = 0;
    std::vector<std::vector<double>> regret_snap_;
    std::vector<std::vector<double>> collision_snap_;
};

struct SummaryStats {
    double mean = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    std::size_t trials = 0;
};

/// Element floor(p*n) of the sorted values, capped at the last one.
inline double nearest_rank(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample");
    const auto idx = static_cast<std::size_t>(std::floor(p * static_cast<double>(sorted.size())));
    return sorted[std::min(sorted.size() - 1, idx)];
}

/// Mean (summed in the given order) and quartiles over trials.
inline SummaryStats summarize(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("cannot aggregate zero trials");
    SummaryStats s;
    s.trials = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    auto sorted = values;
    std::sort(sorted.begin(), sorted.end());
    s.q25 = nearest_rank(sorted, 0.25);
    s.q75 = nearest_rank(sorted, 0.75);
    return s;
}

/// Per-trial regret at each checkpoint: [trial][checkpoint][agent].
using TrialCurves = std::vector<std::vector<std::vector<double>>>;

/// Curve per agent and checkpoint: result[agent][checkpoint]. An extra last
/// row holds the per-trial maximum over agents.
inline std::vector<std::vector<SummaryStats>> aggregate(const TrialCurves& trials) {
    if (trials.empty()) throw std::invalid_argument("cannot aggregate zero trials");
    const std::size_t n_checkpoints = trials.front().size();
    const std::size_t n_agents = n_checkpoints ? trials.front().front().size() : 0;
    for (const auto& tr : trials) {
        if (tr.size() != n_checkpoints) throw std::invalid_argument("trials disagree on checkpoints");
        for (const auto& row : tr)
            if (row.size() != n_agents) throw std::invalid_argument("trials disagree on agent count");
    }
    std::vector<std::vector<SummaryStats>> out(n_agents + 1, std::vector<SummaryStats>(n_checkpoints));
    std::vector<double> column(trials.size());
    for (std::size_t c = 0; c < n_checkpoints; ++c) {
        for (std::size_t j = 0; j < n_agents; ++j) {
            for (std::size_t r = 0; r < trials.size(); ++r) column[r] = trials[r][c][j];
            out[j][c] = summarize(column);
        }
        for (std::size_t r = 0; r < trials.size(); ++r)
            column[r] = *std::max_element(trials[r][c].begin(), trials[r][c].end());
        if (n_agents) out[n_agents][c] = summarize(column);
    }
    return out;
}

}  // namespace matchbandit
