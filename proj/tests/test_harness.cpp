#include <gtest/gtest.h>

#include <matchbandit/matchbandit.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

using namespace matchbandit;

namespace {

const std::filesystem::path kConfigs = std::filesystem::path(MATCHBANDIT_SOURCE_DIR) / "configs";

ExperimentConfig parse(const std::string& text, const std::filesystem::path& base = kConfigs) {
    std::istringstream in(text);
    return parse_config(in, base);
}

const char* const kSmall = R"(
[instance]
file = ex1.txt

[run]
horizon = 3000
trials = 6
checkpoints = 10
seed = 4

[algorithms]
list = etc, ucbd4, ucbc, caucb
)";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    return cells;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST(Config, ParsesSections) {
    const auto cfg = parse(R"(
[instance]
file = ex1.txt
[run]
horizon = 5000
trials = 3
extra_checkpoints = 100, 2500
workers = 2
output = out/x
format = json
[algorithms]
list = ucbd4, ucbd3, etc
[ucbd4]
gamma = 3
beta = 1/12
[etc]
epsilon = 0.5
c0 = 1.5
)");
    EXPECT_EQ(*cfg.instance_file, (kConfigs / "ex1.txt").string());
    EXPECT_EQ(cfg.output_dir, (kConfigs / "out/x").string());
    EXPECT_EQ(cfg.horizon, 5000u);
    EXPECT_EQ(cfg.trials, 3u);
    EXPECT_EQ(cfg.extra_checkpoints, (std::vector<Round>{100, 2500}));
    EXPECT_EQ(cfg.format, OutputFormat::Json);
    ASSERT_EQ(cfg.algorithms.size(), 3u);
    EXPECT_EQ(cfg.algorithms[0].gamma, 3.0);
    EXPECT_NEAR(*cfg.algorithms[0].beta, 1.0 / 12.0, 1e-15);
    EXPECT_FALSE(cfg.algorithms[1].beta);
    EXPECT_EQ(cfg.algorithms[2].epsilon, 0.5);
    const auto t = cfg.algorithms[2].tuning(3);
    ASSERT_TRUE(t);
    EXPECT_EQ(t->c0, 1.5);
    EXPECT_EQ(t->c1, 1.0);
}

TEST(Config, GeneratorSection) {
    const auto cfg = parse("[instance]\nn_agents=4\nn_arms=5\nkind=alpha\nseed=3\n[run]\nhorizon=100\n[algorithms]\nlist=ucbc\n");
    ASSERT_TRUE(cfg.generate);
    EXPECT_EQ(cfg.generate->kind, InstanceKind::Alpha);
    EXPECT_EQ(cfg.generate->n_arms, 5u);
    EXPECT_FALSE(cfg.instance_file);
}

TEST(Config, Rejections) {
    const std::string run = "[run]\nhorizon=100\n";
    const std::string inst = "[instance]\nfile=ex1.txt\n";
    const std::string algos = "[algorithms]\nlist=ucbd4\n";
    EXPECT_THROW(parse(inst + run + algos + "[ucbd4]\nlambda=0.3\n"), ConfigError);
    EXPECT_THROW(parse(inst + run + algos + "[mystery]\nx=1\n"), std::exception);
    EXPECT_THROW(parse(inst + run + algos + "[caucb]\nlambda=0.3\n"), ConfigError);
    EXPECT_THROW(parse(inst + run + "[algorithms]\nlist=ucbc\n[ucbc]\nregime=partial\n"), ConfigError);
    EXPECT_THROW(parse(inst + run + "[algorithms]\nlist=ucbd4,ucbd4\n"), ConfigError);
    EXPECT_THROW(parse(inst + run + "[algorithms]\nlist=\n"), ConfigError);
    EXPECT_THROW(parse(inst + algos), ConfigError);
    EXPECT_THROW(parse(run + algos), ConfigError);
    EXPECT_THROW(parse("[instance]\nfile=ex1.txt\nn_agents=3\n" + run + algos), ConfigError);
    EXPECT_THROW(parse(inst + "[run]\nhorizon=100\nextra_checkpoints=101\n" + algos), ConfigError);
    EXPECT_THROW(parse(inst + "[run]\nhorizon=0\n" + algos), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/experiment.ini"), ConfigError);
}

TEST(Config, SampleConfigsLoad) {
    for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
        const auto name = entry.path().filename().string();
        if (entry.path().extension() != ".ini") continue;
        if (name.find(".spec.") != std::string::npos)
            EXPECT_NO_THROW(load_gen_spec(entry.path().string())) << name;
        else
            EXPECT_NO_THROW(load_config(entry.path().string())) << name;
    }
}

TEST(Config, LargeMarketTuning) {
    AlgorithmConfig etc;
    etc.kind = AlgorithmKind::Etc;
    EXPECT_FALSE(etc.tuning(8));
    ASSERT_TRUE(etc.tuning(10));
    EXPECT_EQ(etc.tuning(10)->c0, 1.5);
    EXPECT_EQ(etc.tuning(10)->c1, 1.0);
    AlgorithmConfig ucb;
    ucb.kind = AlgorithmKind::UcbD4;
    ASSERT_TRUE(ucb.tuning(10));
    EXPECT_EQ(ucb.tuning(10)->c0, 1.2);
    EXPECT_EQ(ucb.tuning(10)->c1, 3.0);
}

TEST(Experiment, HorizonShorterThanRankingPeriod) {
    auto cfg = parse(kSmall);
    cfg.horizon = 2;
    EXPECT_THROW(prepare_experiment(cfg), ConfigError);
}

TEST(Experiment, TrialsAreReproducible) {
    const auto p = prepare_experiment(parse(kSmall));
    const auto a = run_trial(p, 3);
    const auto b = run_trial(p, 3);
    ASSERT_EQ(a.algorithms.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(a.algorithms[i].regret, b.algorithms[i].regret);
        EXPECT_EQ(a.algorithms[i].collision, b.algorithms[i].collision);
    }
    EXPECT_NE(run_trial(p, 4).algorithms[1].regret, a.algorithms[1].regret);
}

TEST(Experiment, WorkerCountDoesNotChangeResults) {
    auto cfg = parse(kSmall);
    cfg.workers = 1;
    const auto serial = run_experiment(cfg);
    cfg.workers = 8;
    const auto parallel = run_experiment(cfg);
    EXPECT_EQ(aggregate_csv(serial), aggregate_csv(parallel));
}

TEST(Experiment, SingleTrialAggregateIsTheTrial) {
    auto cfg = parse(kSmall);
    cfg.trials = 1;
    const auto r = run_experiment(cfg);
    const std::size_t n = r.prepared.instance.n_agents();
    for (std::size_t a = 0; a < r.aggregates.size(); ++a)
        for (std::size_t c = 0; c < r.prepared.checkpoints.size(); ++c) {
            double worst = -1e300;
            for (std::size_t j = 0; j < n; ++j) {
                const auto& s = r.aggregates[a].regret[j][c];
                const double v = r.trials[0].algorithms[a].regret[c][j];
                EXPECT_EQ(s.mean, v);
                EXPECT_EQ(s.q25, v);
                EXPECT_EQ(s.q75, v);
                worst = std::max(worst, v);
            }
            EXPECT_EQ(r.aggregates[a].regret[n][c].mean, worst);
        }
}

TEST(Experiment, CentralizedRunHasNoCollisions) {
    auto cfg = parse(kSmall);
    cfg.algorithms.erase(cfg.algorithms.begin(), cfg.algorithms.begin() + 2);  // keep ucbc, caucb
    const auto r = run_experiment(cfg);
    for (const auto& tr : r.trials)
        for (const auto& row : tr.algorithms[0].collision)
            for (double v : row) EXPECT_EQ(v, 0.0);
}

TEST(Output, FilesAndMeansAgree) {
    TempDir dir("matchbandit_output_test");
    const auto r = run_experiment(parse(kSmall));
    write_outputs(r, dir.path, OutputFormat::Csv);
    for (const char* f : {"trials.csv", "aggregate.csv", "plot_data.csv", "instance.txt"})
        EXPECT_TRUE(std::filesystem::exists(dir.path / f)) << f;
    EXPECT_EQ(load_instance((dir.path / "instance.txt").string()), r.prepared.instance);

    // Recompute aggregate means from the per-trial rows.
    std::map<std::tuple<std::string, std::string, std::string>, std::pair<double, int>> sums;
    std::ifstream trials(dir.path / "trials.csv");
    std::string line;
    std::getline(trials, line);
    EXPECT_EQ(line, "run_id,instance_id,algorithm,trial,agent,t,cum_regret,cum_collision_regret");
    std::size_t rows = 0;
    while (std::getline(trials, line)) {
        const auto c = split_csv_line(line);
        ASSERT_EQ(c.size(), 8u);
        EXPECT_EQ(c[1], "ex1");
        auto& s = sums[{c[2], c[4], c[5]}];
        s.first += parse_double(c[6]);
        ++s.second;
        ++rows;
    }
    EXPECT_EQ(rows, 6u * 4u * 3u * r.prepared.checkpoints.size());

    std::ifstream agg(dir.path / "aggregate.csv");
    std::getline(agg, line);
    EXPECT_EQ(line, "algorithm,agent,t,mean,q25,q75,trials");
    std::size_t checked = 0;
    while (std::getline(agg, line)) {
        const auto c = split_csv_line(line);
        ASSERT_EQ(c.size(), 7u);
        const auto& s = sums.at({c[0], c[1], c[2]});
        EXPECT_EQ(s.second, 6);
        EXPECT_NEAR(parse_double(c[3]), s.first / 6.0, 1e-9 * std::max(1.0, std::abs(s.first)));
        EXPECT_LE(parse_double(c[4]), parse_double(c[5]));
        ++checked;
    }
    EXPECT_EQ(checked, sums.size());

    std::ifstream plot(dir.path / "plot_data.csv");
    std::size_t max_rows = 0;
    while (std::getline(plot, line))
        if (split_csv_line(line)[1] == "max") ++max_rows;
    EXPECT_EQ(max_rows, 4u * r.prepared.checkpoints.size());
}

TEST(Output, JsonTables) {
    TempDir dir("matchbandit_json_test");
    auto cfg = parse(kSmall);
    cfg.trials = 2;
    const auto r = run_experiment(cfg);
    write_outputs(r, dir.path, OutputFormat::Json);
    std::ifstream in(dir.path / "aggregate.json");
    const auto j = nlohmann::json::parse(in);
    ASSERT_TRUE(j.is_array());
    EXPECT_EQ(j.size(), 4u * 3u * r.prepared.checkpoints.size());
    EXPECT_TRUE(j[0]["mean"].is_number());
    EXPECT_TRUE(j[0]["agent"].is_string());
    EXPECT_EQ(j[0]["trials"].get<int>(), 2);
    EXPECT_TRUE(std::filesystem::exists(dir.path / "trials.json"));
}
