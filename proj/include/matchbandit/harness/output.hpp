#pragma once

// Result files. CSV:
//   trials.csv     run_id,instance_id,algorithm,trial,agent,t,cum_regret,cum_collision_regret
//   aggregate.csv  algorithm,agent,t,mean,q25,q75,trials
//   plot_data.csv  aggregate rows plus agent=max rows (per-trial maximum over agents)
// JSON output writes the same tables as arrays of row objects.

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <string>

#include "../instance_io.hpp"
#include "experiment.hpp"

namespace matchbandit {

namespace detail {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline Table trials_table(const ExperimentResult& r) {
    Table t{{"run_id", "instance_id", "algorithm", "trial", "agent", "t", "cum_regret", "cum_collision_regret"}, {}};
    const auto& p = r.prepared;
    for (const auto& trial : r.trials)
        for (const auto& algo : trial.algorithms)
            for (std::size_t j = 0; j < p.instance.n_agents(); ++j)
                for (std::size_t c = 0; c < p.checkpoints.size(); ++c)
                    t.rows.push_back({p.config.run_id, p.instance_id, algo.algorithm, std::to_string(trial.trial),
                                      std::to_string(j + 1), std::to_string(p.checkpoints[c]), format_double(algo.regret[c][j]),
                                      format_double(algo.collision[c][j])});
    return t;
}

inline Table aggregate_table(const ExperimentResult& r, bool with_max) {
    Table t{{"algorithm", "agent", "t", "mean", "q25", "q75", "trials"}, {}};
    const auto& p = r.prepared;
    const std::size_t n = p.instance.n_agents();
    for (const auto& agg : r.aggregates)
        for (std::size_t j = 0; j < n + (with_max ? 1 : 0); ++j)
            for (std::size_t c = 0; c < p.checkpoints.size(); ++c) {
                const auto& s = agg.regret[j][c];
                t.rows.push_back({agg.algorithm, j < n ? std::to_string(j + 1) : "max", std::to_string(p.checkpoints[c]),
                                  format_double(s.mean), format_double(s.q25), format_double(s.q75), std::to_string(s.trials)});
            }
    return t;
}

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
}

// Numeric-looking cells become JSON numbers; the rest stay strings.
inline void write_json(std::ostream& os, const Table& t) {
    static const std::set<std::string> text_columns{"run_id", "instance_id", "algorithm", "agent"};
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (text_columns.count(t.columns[i]))
                obj[t.columns[i]] = row[i];
            else
                obj[t.columns[i]] = parse_double(row[i]);
        }
        rows.push_back(std::move(obj));
    }
    os << rows.dump(1) << '\n';
}

inline void write_table(const std::filesystem::path& dir, const std::string& stem, const Table& t, OutputFormat format) {
    const auto path = dir / (stem + (format == OutputFormat::Csv ? ".csv" : ".json"));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (format == OutputFormat::Csv)
        write_csv(out, t);
    else
        write_json(out, t);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace detail

inline void write_aggregate_csv(std::ostream& os, const ExperimentResult& r) { detail::write_csv(os, detail::aggregate_table(r, false)); }

inline std::string aggregate_csv(const ExperimentResult& r) {
    std::ostringstream os;
    write_aggregate_csv(os, r);
    return os.str();
}

/// Writes trials, aggregate and plot_data tables plus the instance used.
inline void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir, OutputFormat format) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    detail::write_table(dir, "trials", detail::trials_table(r), format);
    detail::write_table(dir, "aggregate", detail::aggregate_table(r, false), format);
    detail::write_table(dir, "plot_data", detail::aggregate_table(r, true), format);
    save_instance((dir / "instance.txt").string(), r.prepared.instance, r.prepared.instance_metadata);
}

}  // namespace matchbandit
