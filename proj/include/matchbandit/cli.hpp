#pragma once

// Command-line front end. Exit codes: 0 ok, 2 usage, 3 config, 4 instance
// generation failure, 5 runtime failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "conditions.hpp"
#include "harness/config.hpp"
#include "harness/experiment.hpp"
#include "harness/output.hpp"
#include "instance_gen.hpp"
#include "instance_io.hpp"
#include "stable_matching.hpp"

namespace matchbandit {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitConfig = 3, kExitGeneration = 4, kExitRuntime = 5 };

namespace detail {

inline std::string join_ids(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i] + 1);
    return s;
}

inline std::string describe_matching(const Matching& m) {
    std::string s;
    for (AgentIndex j = 0; j < m.n_agents(); ++j)
        s += (j ? " " : "") + std::to_string(j + 1) + "->" + (m.agent_matched(j) ? std::to_string(m.arm_of(j) + 1) : "-");
    return s;
}

inline nlohmann::ordered_json certificate_json(const OrderCertificate& c) {
    std::vector<std::size_t> agents, arms;
    for (auto j : c.agent_order) agents.push_back(j + 1);
    for (auto k : c.arm_order) arms.push_back(k + 1);
    return {{"kind", std::string(to_string(c.kind))}, {"agents", agents}, {"arms", arms}};
}

inline int cmd_check(const std::string& path, OutputFormat format, std::ostream& out) {
    const Instance inst = load_instance(path);
    const Matching stable = gale_shapley(inst);
    const auto sd = check_serial_dictatorship(inst);
    const auto spc = check_spc(inst);
    const auto alpha = check_alpha(inst);
    std::optional<bool> unqc;
    if (inst.n_agents() <= kMaxUnqcSize && inst.n_arms() <= kMaxUnqcSize) unqc = check_unqc_brute(inst);

    if (format == OutputFormat::Json) {
        nlohmann::ordered_json j;
        j["n_agents"] = inst.n_agents();
        j["n_arms"] = inst.n_arms();
        std::vector<std::size_t> arms;
        for (auto k : stable.agent_to_arm()) arms.push_back(k + 1);
        j["stable_matching"] = arms;
        j["serial_dictatorship"] = sd.has_value();
        if (sd) j["serial_dictatorship_order"] = certificate_json(*sd);
        j["spc"] = spc.has_value();
        if (spc) j["spc_order"] = certificate_json(*spc);
        j["alpha"] = alpha.has_value();
        if (alpha) {
            j["alpha_left_order"] = certificate_json(alpha->left);
            j["alpha_right_order"] = certificate_json(alpha->right);
        }
        if (unqc)
            j["uniqueness_consistency"] = *unqc;
        else
            j["uniqueness_consistency"] = nullptr;
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    auto order = [](const OrderCertificate& c) { return "agents=" + join_ids(c.agent_order) + " arms=" + join_ids(c.arm_order); };
    out << "agents: " << inst.n_agents() << "\narms: " << inst.n_arms() << '\n';
    out << "stable_matching: " << describe_matching(stable) << '\n';
    out << "serial_dictatorship: " << (sd ? "true " + order(*sd) : "false") << '\n';
    out << "spc: " << (spc ? "true " + order(*spc) : "false") << '\n';
    out << "alpha: " << (alpha ? "true left " + order(alpha->left) + " right " + order(alpha->right) : "false") << '\n';
    out << "uniqueness_consistency: " << (unqc ? (*unqc ? "true" : "false") : "skipped") << '\n';
    return kExitOk;
}

inline int cmd_generate(const std::string& spec_path, std::optional<std::uint64_t> seed, const std::string& out_path,
                        std::ostream& out) {
    GenSpec spec = load_gen_spec(spec_path);
    if (seed) spec.seed = *seed;
    const auto gen = generate_instance(spec);
    save_instance(out_path, gen.instance, gen.metadata(spec));
    out << "wrote " << out_path << '\n';
    return kExitOk;
}

inline int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, std::optional<std::string> out_dir,
                   std::optional<std::size_t> workers, std::optional<std::string> format, std::ostream& out) {
    ExperimentConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.output_dir = *out_dir;
    if (workers) cfg.workers = *workers;
    if (format) cfg.format = parse_output_format(*format);
    if (cfg.output_dir.empty()) throw ConfigError("no output directory (set run.output or pass --out)");
    cfg.validate();
    const auto result = run_experiment(cfg);
    write_outputs(result, cfg.output_dir, cfg.format);
    const std::size_t n = result.prepared.instance.n_agents();
    for (const auto& agg : result.aggregates) {
        const auto& last = agg.regret[n].back();
        out << agg.algorithm << ": mean max-agent regret at T=" << cfg.horizon << " is " << format_double(last.mean);
        if (agg.anomalies) out << " (" << agg.anomalies << " recoveries)";
        out << '\n';
    }
    out << "wrote " << cfg.output_dir << '\n';
    return kExitOk;
}

struct BoundsArgs {
    std::optional<std::string> instance;
    std::optional<std::size_t> n_agents;
    std::optional<std::size_t> n_arms;
    std::optional<double> delta_min;
    std::optional<double> delta;
    double gamma = 2.0;
    std::optional<std::string> beta;
    std::optional<double> horizon;
    std::optional<double> epsilon;
    std::optional<std::size_t> agent;
};

inline int cmd_bounds(const BoundsArgs& a, OutputFormat format, std::ostream& out) {
    nlohmann::ordered_json j;
    std::vector<std::pair<std::string, std::string>> lines;
    auto emit = [&](const std::string& key, const nlohmann::ordered_json& value, const std::string& text) {
        j[key] = value;
        lines.emplace_back(key, text);
    };
    std::optional<Instance> inst;
    std::optional<GapSummary> gaps;
    std::optional<AlphaCertificate> alpha;
    std::size_t n = a.n_agents.value_or(0), k = a.n_arms.value_or(0);
    std::optional<double> dmin = a.delta_min;
    if (a.instance) {
        inst = load_instance(*a.instance);
        n = inst->n_agents();
        k = inst->n_arms();
        gaps = gap_summary(*inst, gale_shapley(*inst));
        if (!dmin) dmin = gaps->delta_min;
        alpha = check_alpha(*inst);
    }
    if (n == 0 || k == 0) throw ConfigError("bounds needs --instance or both --n-agents and --n-arms");
    if (!dmin) throw ConfigError("bounds needs --delta-min (or an instance with a positive gap)");
    const double beta = a.beta ? parse_number(*a.beta) : 1.0 / (2.0 * static_cast<double>(k));

    const auto c = phase_constants(n, k, *dmin, a.gamma, beta);
    emit("delta_min", *dmin, format_double(*dmin));
    emit("gamma", a.gamma, format_double(a.gamma));
    emit("beta", beta, format_double(beta));
    emit("i1", c.i1, std::to_string(c.i1));
    emit("i2", c.i2, std::to_string(c.i2));
    emit("i_star", c.i_star, std::to_string(c.i_star));

    if (inst && a.horizon) {
        if (!alpha) throw ConfigError("UCB-D4 bound terms need an alpha-condition instance");
        const auto s = instance_structure(*inst, alpha->stable, alpha->left.as_order(), alpha->right.as_order());
        for (AgentIndex ag = 0; ag < n; ++ag) {
            if (a.agent && *a.agent != ag + 1) continue;
            const auto r = ucbd4_bound(*inst, s, *gaps, ag, a.gamma, beta, *a.horizon);
            const std::string p = "agent" + std::to_string(ag + 1) + "_";
            emit(p + "suboptimal", r.suboptimal, format_double(r.suboptimal));
            emit(p + "collision", r.collision, format_double(r.collision));
            emit(p + "communication", r.communication, format_double(r.communication));
            emit(p + "f_alpha", r.f_alpha, std::to_string(r.f_alpha));
        }
    }
    if (a.epsilon) {
        if (!a.horizon) throw ConfigError("ETC bound terms need --horizon");
        std::optional<double> d = a.delta;
        if (!d && gaps) d = gaps->all_pairs_gap;
        if (!d) d = a.delta_min;
        if (!d) throw ConfigError("ETC bound terms need --delta");
        const auto e = etc_bound(*a.horizon, n, k, *d, *a.epsilon);
        emit("etc_explore", e.explore, format_double(e.explore));
        emit("etc_commit", e.commit, format_double(e.commit));
        emit("etc_warmup_exponent", e.warmup_exponent, format_double(e.warmup_exponent));
        emit("etc_warmup", e.warmup_overflow ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(e.warmup),
             e.warmup_overflow ? "inf" : format_double(e.warmup));
        emit("etc_tail", e.tail, format_double(e.tail));
    }
    if (format == OutputFormat::Json)
        out << j.dump(2) << '\n';
    else
        for (const auto& [key, text] : lines) out << key << ": " << text << '\n';
    return kExitOk;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Matching-market bandit simulator", "matchbandit"};
    app.require_subcommand(1);

    std::string format_text = "csv";
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format_text, "Output format")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* generate = app.add_subcommand("generate", "Generate a random instance file");
    std::string spec_path, out_path;
    std::optional<std::uint64_t> seed;
    generate->add_option("--spec", spec_path, "Generator spec (INI with an [instance] section)")->required();
    generate->add_option("--out", out_path, "Instance file to write")->required();
    generate->add_option("--seed", seed, "Override the spec's seed");

    auto* check = app.add_subcommand("check", "Report which structural conditions an instance satisfies");
    std::string instance_path;
    check->add_option("--instance", instance_path, "Instance file")->required();
    add_format(check);

    auto* run = app.add_subcommand("run", "Run an experiment");
    std::string config_path;
    std::optional<std::string> run_out, run_format;
    std::optional<std::size_t> workers;
    run->add_option("--config", config_path, "Experiment config")->required();
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--out", run_out, "Override the output directory");
    run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--format", run_format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto* bounds = app.add_subcommand("bounds", "Evaluate regret-bound constants and terms");
    detail::BoundsArgs b;
    bounds->add_option("--instance", b.instance, "Instance file");
    bounds->add_option("--n-agents", b.n_agents, "Number of agents");
    bounds->add_option("--n-arms", b.n_arms, "Number of arms");
    bounds->add_option("--delta-min", b.delta_min, "Smallest positive gap");
    bounds->add_option("--delta", b.delta, "All-pairs gap for the ETC bound");
    bounds->add_option("--gamma", b.gamma, "UCB exploration factor")->capture_default_str();
    bounds->add_option("--beta", b.beta, "Local deletion fraction, e.g. 1/12 (default 1/(2K))");
    bounds->add_option("--horizon", b.horizon, "Horizon T");
    bounds->add_option("--epsilon", b.epsilon, "ETC exploration exponent");
    bounds->add_option("--agent", b.agent, "Only this agent (1-based)");
    add_format(bounds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const auto format = parse_output_format(format_text);
        if (generate->parsed()) return detail::cmd_generate(spec_path, seed, out_path, out);
        if (check->parsed()) return detail::cmd_check(instance_path, format, out);
        if (run->parsed()) return detail::cmd_run(config_path, seed, run_out, workers, run_format, out);
        if (bounds->parsed()) return detail::cmd_bounds(b, format, out);
        err << "no subcommand\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const GenerationError& e) {
        err << "generation failed after " << e.attempts() << " attempts: " << e.what() << '\n';
        return kExitGeneration;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace matchbandit
