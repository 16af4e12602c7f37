#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "dcqaoa/ansatz.hpp"
#include "dcqaoa/graph.hpp"
#include "dcqaoa/optimizer.hpp"

namespace dcqaoa {

/// Removal order (labels of the base graph) from N down to k vertices.
/// Every intermediate graph is connected.
struct IstSchedule {
  Graph base;
  std::vector<int> removal_order;
  int k = 0;

  int num_stages() const { return base.num_vertices() - k + 1; }
  /// Graph with i vertices (k <= i <= N): the base graph minus the first
  /// N - i removals, relabeled in order.
  Graph stage_graph(int i) const;
};

/// Seeded rejection sampling: candidates are tried in random order and a
/// vertex is removed only if the remainder stays connected. Throws
/// std::runtime_error if no removal keeps the graph connected.
IstSchedule build_schedule(const Graph& g, int k, std::uint64_t seed);

struct ResourceStage {
  int n_vertices = 0;
  int n_edges = 0;
  long long iterations = 0;
  long long cnots = 0;          // CNOTs of the full p-layer circuit
  long long contribution = 0;   // iterations * cnots * n_vertices
};

struct ResourceIndicator {
  long long total = 0;
  std::vector<ResourceStage> breakdown;
};

/// Iterations per IST stage: ceil(c / (N - k + 1)).
long long stage_budget(long long c, int n, int k);

/// Sum over stages of budget * cnot_per_edge * M_i * p * i.
ResourceIndicator ist_resources(const IstSchedule& schedule, Family family, int p, long long c);
/// c * cnot_per_edge * M * p * N.
ResourceIndicator traditional_resources(const Graph& g, Family family, int p, long long c);

struct ResourceComparison {
  ResourceIndicator ist;
  ResourceIndicator traditional;
};

ResourceComparison resource_compare(const IstSchedule& schedule, Family family, int p,
                                    long long c);

struct IstStageRecord {
  int stage_n = 0;
  int stage_m = 0;
  long long iterations = 0;     // budget of the stage
  double initial_objective = 0.0;  // best first-iteration objective over restarts
  double best_objective = 0.0;
  long long resource_partial = 0;  // cumulative indicator up to this stage
};

struct IstResult {
  IstSchedule schedule;
  TrainResult final_result;
  std::vector<IstStageRecord> stages;
  ResourceIndicator resources;
};

/// Trains G_k, then re-adds one vertex per stage with a warm start.
/// config.max_iterations is ignored; every stage gets
/// stage_budget(c, N, k) iterations. Each restart is one warm-start chain.
IstResult ist_train(const Graph& g, Family family, int p, int k, long long c,
                    const TrainConfig& config, std::uint64_t schedule_seed);

nlohmann::json to_json(const IstStageRecord& r);
void write_stage_log(std::ostream& out, const IstResult& result);

}  // namespace dcqaoa
