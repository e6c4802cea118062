#pragma once

#include <atomic>
#include <exception>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "../core.hpp"
#include "../instance_gen.hpp"
#include "../instance_io.hpp"
#include "../market.hpp"
#include "../regret.hpp"
#include "../rng.hpp"
#include "../stable_matching.hpp"
#include "config.hpp"

namespace matchbandit {

inline std::unique_ptr<Protocol> make_protocol(const AlgorithmConfig& algo, const Instance& inst, std::uint64_t seed,
                                               std::uint64_t trial) {
    const std::size_t n = inst.n_agents(), k = inst.n_arms();
    const auto tuning = algo.tuning(n);
    std::vector<std::unique_ptr<AgentPolicy>> agents;
    switch (algo.kind) {
        case AlgorithmKind::Etc: {
            EtcParams p{algo.epsilon, tuning.value_or(PhaseTuning{})};
            for (AgentIndex j = 0; j < n; ++j) agents.push_back(std::make_unique<EtcPolicy>(n, k, p));
            break;
        }
        case AlgorithmKind::UcbD4:
        case AlgorithmKind::UcbD3: {
            UcbD4Params p{algo.gamma, algo.beta, algo.kind == AlgorithmKind::UcbD4, tuning};
            for (AgentIndex j = 0; j < n; ++j) agents.push_back(std::make_unique<UcbD4Policy>(n, k, p));
            break;
        }
        case AlgorithmKind::CaUcb: {
            CaUcbParams p{algo.gamma, algo.lambda};
            for (AgentIndex j = 0; j < n; ++j)
                agents.push_back(std::make_unique<CaUcbPolicy>(
                    j, inst, algo.regime, Rng::derive(seed, {trial, algorithm_stream_id(algo.kind), 1 + j}), p));
            break;
        }
        case AlgorithmKind::UcbC: return std::make_unique<CentralizedUcb>(inst, algo.regime, UcbCParams{algo.gamma});
    }
    return std::make_unique<DecentralizedProtocol>(std::move(agents), algo.regime);
}

struct AlgorithmTrial {
    std::string algorithm;
    std::vector<std::vector<double>> regret;     // [checkpoint][agent]
    std::vector<std::vector<double>> collision;  // [checkpoint][agent]
    std::size_t anomalies = 0;
};

struct TrialResult {
    std::size_t trial = 0;  // 1-based
    std::vector<AlgorithmTrial> algorithms;
};

/// Everything a trial needs that does not change between trials.
struct PreparedExperiment {
    ExperimentConfig config;
    Instance instance;
    std::string instance_id;
    std::vector<std::string> instance_metadata;
    Matching stable;
    std::vector<Round> checkpoints;
};

inline PreparedExperiment prepare_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    PreparedExperiment p{cfg, {}, {}, {}, {}, {}};
    if (cfg.instance_file) {
        p.instance = load_instance(*cfg.instance_file);
        p.instance_id = std::filesystem::path(*cfg.instance_file).stem().string();
    } else {
        const auto gen = generate_instance(*cfg.generate);
        p.instance = gen.instance;
        p.instance_metadata = gen.metadata(*cfg.generate);
        p.instance_id = std::string(to_string(cfg.generate->kind)) + "-n" + std::to_string(cfg.generate->n_agents) + "-k" +
                        std::to_string(cfg.generate->n_arms) + "-s" + std::to_string(cfg.generate->seed);
    }
    const Round ranking = p.instance.n_agents();
    if (cfg.horizon < ranking) throw ConfigError("horizon is shorter than the ranking period");
    p.stable = gale_shapley(p.instance);
    p.checkpoints = checkpoint_grid(ranking, cfg.horizon, cfg.checkpoints, cfg.extra_checkpoints);
    return p;
}

/// One algorithm over the full horizon. Rewards come from the stream
/// (seed, trial, algorithm, 0).
inline AlgorithmTrial run_algorithm(const PreparedExperiment& p, const AlgorithmConfig& algo, std::size_t trial) {
    const auto& inst = p.instance;
    auto protocol = make_protocol(algo, inst, p.config.seed, trial);
    Market market(inst, algo.regime, Rng::derive(p.config.seed, {trial, algorithm_stream_id(algo.kind), 0}));
    RegretLedger ledger(inst, p.stable, p.checkpoints);
    PlayProfile plays(inst.n_agents());
    for (Round t = 1; t <= p.config.horizon; ++t) {
        protocol->plan(t, plays);
        const auto& outcome = market.step(plays);
        protocol->update(t, plays, market.observations());
        ledger.record(t, plays, outcome);
    }
    return {algo.name(), ledger.regret_snapshots(), ledger.collision_snapshots(), protocol->anomalies()};
}

inline TrialResult run_trial(const PreparedExperiment& p, std::size_t trial) {
    TrialResult r{trial, {}};
    for (const auto& algo : p.config.algorithms) r.algorithms.push_back(run_algorithm(p, algo, trial));
    return r;
}

struct AlgorithmAggregate {
    std::string algorithm;
    std::vector<std::vector<SummaryStats>> regret;  // [agent, then max][checkpoint]
    std::size_t anomalies = 0;
};

struct ExperimentResult {
    PreparedExperiment prepared;
    std::vector<TrialResult> trials;
    std::vector<AlgorithmAggregate> aggregates;
};

/// Runs trials 1..T on the configured number of threads. Results are
/// stored by trial number, so output does not depend on scheduling.
inline std::vector<TrialResult> run_trials(const PreparedExperiment& p, std::size_t workers) {
    const std::size_t n_trials = p.config.trials;
    std::vector<TrialResult> results(n_trials);
    std::vector<std::exception_ptr> errors(n_trials);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n_trials; i = next++) {
            try {
                results[i] = run_trial(p, i + 1);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(workers, n_trials);
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

inline std::vector<AlgorithmAggregate> aggregate_trials(const std::vector<TrialResult>& trials) {
    if (trials.empty()) throw std::invalid_argument("cannot aggregate zero trials");
    std::vector<AlgorithmAggregate> out;
    for (std::size_t a = 0; a < trials.front().algorithms.size(); ++a) {
        TrialCurves curves;
        AlgorithmAggregate agg{trials.front().algorithms[a].algorithm, {}, 0};
        for (const auto& tr : trials) {
            curves.push_back(tr.algorithms[a].regret);
            agg.anomalies += tr.algorithms[a].anomalies;
        }
        agg.regret = aggregate(curves);
        out.push_back(std::move(agg));
    }
    return out;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult r{prepare_experiment(cfg), {}, {}};
    r.trials = run_trials(r.prepared, cfg.workers);
    r.aggregates = aggregate_trials(r.trials);
    return r;
}

}  // namespace matchbandit
