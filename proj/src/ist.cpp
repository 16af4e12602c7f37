#include "dcqaoa/ist.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "dcqaoa/hamiltonian.hpp"

namespace dcqaoa {

Graph IstSchedule::stage_graph(int i) const {
  const int n = base.num_vertices();
  if (i < k || i > n) throw std::out_of_range("stage_graph: size outside [k, N]");
  std::vector<bool> removed(n, false);
  for (int r = 0; r < n - i; ++r) removed[removal_order[r]] = true;
  std::vector<int> keep;
  for (int v = 0; v < n; ++v)
    if (!removed[v]) keep.push_back(v);
  return induced_subgraph(base, keep);
}

IstSchedule build_schedule(const Graph& g, int k, std::uint64_t seed) {
  const int n = g.num_vertices();
  if (k < 2 || k > n) throw std::invalid_argument("build_schedule: need 2 <= k <= N");
  if (!is_connected(g)) throw std::invalid_argument("build_schedule: graph is not connected");
  IstSchedule s;
  s.base = g;
  s.k = k;
  std::mt19937_64 rng(seed);
  std::vector<int> alive(n);
  std::iota(alive.begin(), alive.end(), 0);
  while (static_cast<int>(alive.size()) > k) {
    std::vector<int> candidates = alive;
    std::shuffle(candidates.begin(), candidates.end(), rng);
    bool removed = false;
    for (int v : candidates) {
      std::vector<int> rest;
      for (int u : alive)
        if (u != v) rest.push_back(u);
      if (is_connected(induced_subgraph(g, rest))) {
        s.removal_order.push_back(v);
        alive = std::move(rest);
        removed = true;
        break;
      }
    }
    if (!removed) throw std::runtime_error("build_schedule: no connectivity-preserving removal");
  }
  return s;
}

long long stage_budget(long long c, int n, int k) {
  if (c < 1) throw std::invalid_argument("stage_budget: c must be >= 1");
  const long long stages = n - k + 1;
  return (c + stages - 1) / stages;
}

ResourceIndicator ist_resources(const IstSchedule& schedule, Family family, int p, long long c) {
  const int n = schedule.base.num_vertices();
  const long long budget = stage_budget(c, n, schedule.k);
  ResourceIndicator r;
  for (int i = schedule.k; i <= n; ++i) {
    ResourceStage st;
    st.n_vertices = i;
    st.n_edges = schedule.stage_graph(i).num_edges();
    st.iterations = budget;
    st.cnots = static_cast<long long>(cnot_per_edge(family)) * st.n_edges * p;
    st.contribution = st.iterations * st.cnots * i;
    r.total += st.contribution;
    r.breakdown.push_back(st);
  }
  return r;
}

ResourceIndicator traditional_resources(const Graph& g, Family family, int p, long long c) {
  ResourceStage st;
  st.n_vertices = g.num_vertices();
  st.n_edges = g.num_edges();
  st.iterations = c;
  st.cnots = static_cast<long long>(cnot_per_edge(family)) * st.n_edges * p;
  st.contribution = st.iterations * st.cnots * st.n_vertices;
  return {st.contribution, {st}};
}

ResourceComparison resource_compare(const IstSchedule& schedule, Family family, int p,
                                    long long c) {
  return {ist_resources(schedule, family, p, c),
          traditional_resources(schedule.base, family, p, c)};
}

IstResult ist_train(const Graph& g, Family family, int p, int k, long long c,
                    const TrainConfig& config, std::uint64_t schedule_seed) {
  IstResult out;
  out.schedule = build_schedule(g, k, schedule_seed);
  out.resources = ist_resources(out.schedule, family, p, c);
  TrainConfig cfg = config;
  cfg.max_iterations = static_cast<int>(stage_budget(c, g.num_vertices(), k));

  std::vector<ParameterVector> chain;
  long long partial = 0;
  for (int i = k; i <= g.num_vertices(); ++i) {
    const Graph gi = out.schedule.stage_graph(i);
    const auto spec = AnsatzSpec::make(family, p, gi);
    const auto h = maxcut_hamiltonian(gi);
    TrainResult r = chain.empty() ? train(spec, h, cfg) : train_from(spec, h, cfg, chain);
    chain = r.restart_params;

    IstStageRecord rec;
    rec.stage_n = i;
    rec.stage_m = gi.num_edges();
    rec.iterations = cfg.max_iterations;
    rec.initial_objective = r.trace[0][0];
    for (const auto& t : r.trace) rec.initial_objective = std::max(rec.initial_objective, t[0]);
    rec.best_objective = r.best_objective;
    partial += out.resources.breakdown[i - k].contribution;
    rec.resource_partial = partial;
    out.stages.push_back(rec);
    out.final_result = std::move(r);
  }
  return out;
}

nlohmann::json to_json(const IstStageRecord& r) {
  return {{"stage_n", r.stage_n},
          {"M_i", r.stage_m},
          {"iterations", r.iterations},
          {"initial_objective", r.initial_objective},
          {"best_objective", r.best_objective},
          {"resource_partial", r.resource_partial}};
}

void write_stage_log(std::ostream& out, const IstResult& result) {
  for (const auto& s : result.stages) out << to_json(s).dump() << '\n';
}

}  // namespace dcqaoa
