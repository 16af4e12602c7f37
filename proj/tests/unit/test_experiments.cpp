#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dcqaoa/experiments.hpp"

using namespace dcqaoa;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dcqaoa_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST(Experiments, IntListParsing) {
  EXPECT_EQ(parse_int_list("4"), (std::vector<int>{4}));
  EXPECT_EQ(parse_int_list("1..4"), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(parse_int_list("2,4,6"), (std::vector<int>{2, 4, 6}));
  EXPECT_EQ(parse_int_list("1..2,8"), (std::vector<int>{1, 2, 8}));
  EXPECT_THROW(parse_int_list("5..3"), std::invalid_argument);
  EXPECT_THROW(parse_int_list("x"), std::invalid_argument);
  EXPECT_THROW(parse_int_list(""), std::invalid_argument);
}

TEST(Experiments, DoubleListParsing) {
  EXPECT_EQ(parse_double_list("0.3,0.5"), (std::vector<double>{0.3, 0.5}));
  const auto r = parse_double_list("0.3..0.9:0.2");
  ASSERT_EQ(r.size(), 4u);
  EXPECT_NEAR(r.back(), 0.9, 1e-12);
  EXPECT_THROW(parse_double_list("0.3..0.9"), std::invalid_argument);
}

TEST(Experiments, FormatNumberUsesTwelveDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(2.0), "2");
}

TEST(Experiments, CsvCarriesManifestLine) {
  const auto dir = temp_dir("csv");
  CsvWriter w(dir + "/a.csv", {"x", "y"});
  w.row({"1", "2"});
  EXPECT_THROW(w.row({"1"}), std::logic_error);
  const nlohmann::json manifest = {{"subcommand", "train"}, {"seed", 3}};
  w.finish(manifest);
  EXPECT_EQ(csv_body(dir + "/a.csv"), "x,y\n1,2\n");
  EXPECT_EQ(read_manifest(dir + "/a.csv"), manifest);
  std::ifstream in(dir + "/a.csv");
  std::string last, line;
  while (std::getline(in, line)) last = line;
  EXPECT_EQ(last.rfind("# manifest: ", 0), 0u);
}

TEST(Experiments, OptionsRoundTripThroughJson) {
  ScalingOptions o;
  o.sizes = "6,8,10";
  o.epsilon = 0.1;
  o.seed = 99;
  const nlohmann::json j = o;
  const auto back = j.get<ScalingOptions>();
  EXPECT_EQ(back.sizes, o.sizes);
  EXPECT_EQ(back.epsilon, o.epsilon);
  EXPECT_EQ(back.seed, o.seed);
  // Missing keys keep their defaults.
  const auto partial = nlohmann::json{{"p", "3"}}.get<TrainOptions>();
  EXPECT_EQ(partial.p, "3");
  EXPECT_EQ(partial.restarts, 8);
}

TEST(Experiments, ConnectedRandomGraph) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph g = connected_random_graph(8, 0.3, s);
    EXPECT_TRUE(is_connected(g));
    EXPECT_EQ(g, connected_random_graph(8, 0.3, s));
  }
}

TEST(Experiments, TrainReplayReproducesCsvBodies) {
  const auto dir = temp_dir("train");
  TrainOptions o;
  o.graph.n = 5;
  o.p = "1..2";
  o.restarts = 2;
  o.max_iterations = 30;
  o.out = dir + "/first";
  std::ostringstream log;
  ASSERT_EQ(run_train(o, log), 0);
  ASSERT_EQ(run_replay(dir + "/first/train_summary.csv", dir + "/second", log), 0);
  for (const char* name : {"train_trace.csv", "train_summary.csv"}) {
    EXPECT_EQ(csv_body(dir + "/first/" + name), csv_body(dir + "/second/" + name)) << name;
  }
  EXPECT_EQ(read_manifest(dir + "/first/manifest.json").at("subcommand"), "train");
}

TEST(Experiments, TrainCellsStatistics) {
  TrainOptions o;
  o.graph.n = 4;
  o.families = "qaoa";
  o.restarts = 3;
  o.max_iterations = 20;
  const auto cells = train_cells(o);
  ASSERT_EQ(cells.size(), 1u);
  const auto& r = cells[0].result.restart_best;
  const double mean = (r[0] + r[1] + r[2]) / 3;
  EXPECT_NEAR(cells[0].mean_best, mean, 1e-15);
  double ss = 0;
  for (double v : r) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(cells[0].std_best, std::sqrt(ss / 2), 1e-15);
}

// A failing cell is enumerated while the others complete.
TEST(Experiments, ScalingEnumeratesFailedCells) {
  ScalingOptions o;
  o.sizes = "4";
  o.densities = "0,1";
  o.instances = 1;
  o.families = "qaoa";
  o.restarts = 1;
  o.p_limit = 2;
  o.max_iterations = 30;
  const auto r = scaling_sweep(o);
  EXPECT_EQ(r.points.size(), 1u);
  EXPECT_EQ(r.failures.size(), 1u);
  o.out = temp_dir("scaling");
  std::ostringstream log;
  EXPECT_NE(run_scaling(o, log), 0);
  EXPECT_NE(log.str().find("failed:"), std::string::npos);
}

TEST(Experiments, NoiseZeroDepolarizingMatchesNoiseless) {
  NoiseOptions o;
  o.sizes = "4";
  o.instances = 2;
  o.p_depol = 0.0;
  o.trajectories = 5;
  o.restarts = 1;
  o.max_iterations = 30;
  const auto r = noise_sweep(o);
  ASSERT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) EXPECT_EQ(row.noisy.mean, row.noiseless_fidelity);
}

TEST(Experiments, ReduceRequiresOneInput) {
  ReduceOptions o;
  std::ostringstream log;
  EXPECT_THROW(run_reduce(o, log), std::invalid_argument);
}
