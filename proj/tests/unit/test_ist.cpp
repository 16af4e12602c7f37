#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dcqaoa/experiments.hpp"
#include "dcqaoa/ist.hpp"

using namespace dcqaoa;

namespace {

const Family kFamilies[] = {Family::Qaoa, Family::DcNc, Family::DcYy, Family::DcY};

}  // namespace

TEST(Ist, ScheduleKeepsEveryStageConnected) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5 + trial % 6;
    const Graph g = connected_random_graph(n, 0.4, rng());
    const int k = 2 + trial % (n - 2);
    const auto s = build_schedule(g, k, rng());
    EXPECT_EQ(static_cast<int>(s.removal_order.size()), n - k);
    EXPECT_EQ(s.num_stages(), n - k + 1);
    EXPECT_EQ(s.stage_graph(n), g);
    for (int i = k; i <= n; ++i) {
      const Graph gi = s.stage_graph(i);
      EXPECT_EQ(gi.num_vertices(), i);
      EXPECT_TRUE(is_connected(gi));
      // Nested: stage i is the base minus the first n - i removals.
      std::vector<int> keep;
      for (int v = 0; v < n; ++v)
        if (std::find(s.removal_order.begin(), s.removal_order.begin() + (n - i), v) ==
            s.removal_order.begin() + (n - i))
          keep.push_back(v);
      EXPECT_EQ(gi, induced_subgraph(g, keep));
    }
  }
}

TEST(Ist, ScheduleRejectsBadInput) {
  EXPECT_THROW(build_schedule(Graph(4, {{0, 1, 1.0}}), 2, 0), std::invalid_argument);
  EXPECT_THROW(build_schedule(complete_graph(4), 5, 0), std::invalid_argument);
  EXPECT_THROW(build_schedule(complete_graph(4), 0, 0), std::invalid_argument);
}

TEST(Ist, StageBudget) {
  EXPECT_EQ(stage_budget(300, 10, 6), 60);
  EXPECT_EQ(stage_budget(301, 10, 6), 61);
  EXPECT_EQ(stage_budget(300, 10, 10), 300);
}

TEST(IstProperty, ResourceBreakdownMatchesClosedForm) {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4 + trial % 7;
    const Graph g = connected_random_graph(n, 0.5, rng());
    const int k = 2 + static_cast<int>(rng() % (n - 1));
    const long long c = 10 + static_cast<long long>(rng() % 500);
    const Family f = kFamilies[trial % 4];
    const int p = 1 + trial % 5;
    const auto s = build_schedule(g, k, rng());
    const auto res = ist_resources(s, f, p, c);
    const long long budget = (c + (n - k)) / (n - k + 1);
    long long expected = 0;
    for (int i = k; i <= n; ++i)
      expected += budget * cnot_per_edge(f) * s.stage_graph(i).num_edges() * p * i;
    long long summed = 0;
    for (const auto& st : res.breakdown) summed += st.contribution;
    EXPECT_EQ(res.total, expected);
    EXPECT_EQ(summed, expected);
    const auto trad = traditional_resources(g, f, p, c);
    EXPECT_EQ(trad.total, c * cnot_per_edge(f) * g.num_edges() * p * n);
    if (k < n) EXPECT_LT(res.total, trad.total);
  }
}

TEST(IstProperty, FullSizeScheduleEqualsTraditionalTraining) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 4; ++trial) {
    const Graph g = connected_random_graph(6, 0.5, rng());
    TrainConfig cfg;
    cfg.objective = Objective::Ratio;
    cfg.restarts = 3;
    cfg.seed = rng();
    const long long c = 40;
    const auto ist = ist_train(g, Family::DcNc, 2, 6, c, cfg, 1);
    TrainConfig full = cfg;
    full.max_iterations = static_cast<int>(c);
    const auto trad = train(AnsatzSpec::make(Family::DcNc, 2, g), maxcut_hamiltonian(g), full);
    EXPECT_EQ(ist.final_result.trace, trad.trace);
    EXPECT_EQ(ist.final_result.best_params, trad.best_params);
    EXPECT_EQ(ist.final_result.best_objective, trad.best_objective);
  }
}

TEST(IstProperty, WarmStartStagesNeverEndBelowTheirStart) {
  const Graph g = connected_random_graph(8, 0.5, 4);
  TrainConfig cfg;
  cfg.objective = Objective::Ratio;
  cfg.restarts = 2;
  const auto r = ist_train(g, Family::DcNc, 2, 5, 80, cfg, 9);
  ASSERT_EQ(r.stages.size(), 4u);
  long long partial = 0;
  for (std::size_t i = 0; i < r.stages.size(); ++i) {
    EXPECT_GE(r.stages[i].best_objective, r.stages[i].initial_objective);
    EXPECT_EQ(r.stages[i].stage_n, 5 + static_cast<int>(i));
    partial += r.resources.breakdown[i].contribution;
    EXPECT_EQ(r.stages[i].resource_partial, partial);
  }
  EXPECT_EQ(r.stages.back().resource_partial, r.resources.total);
}
