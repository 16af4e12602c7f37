#include "dcqaoa/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <utility>

namespace dcqaoa {

Graph::Graph(int n_vertices, std::vector<Edge> edges)
    : n_vertices_(n_vertices), edges_(std::move(edges)) {
  if (n_vertices_ < 0) {
    throw std::invalid_argument("graph: negative vertex count");
  }
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n_vertices_) {
      throw std::invalid_argument("graph: edge endpoint out of range");
    }
    if (e.u == e.v) throw std::invalid_argument("graph: self-loop");
    if (!std::isfinite(e.weight)) {
      throw std::invalid_argument("graph: non-finite edge weight");
    }
    if (!seen.emplace(e.u, e.v).second) {
      throw std::invalid_argument("graph: duplicate edge");
    }
  }
}

double Graph::total_weight() const {
  double w = 0.0;
  for (const auto& e : edges_) w += e.weight;
  return w;
}

bool Graph::is_unweighted() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.weight == 1.0; });
}

int Graph::degree(int v) const {
  return static_cast<int>(std::count_if(
      edges_.begin(), edges_.end(),
      [v](const Edge& e) { return e.u == v || e.v == v; }));
}

std::vector<std::vector<int>> Graph::adjacency() const {
  std::vector<std::vector<int>> adj(n_vertices_);
  for (const auto& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  return Graph(n, std::move(edges));
}

Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1, 1.0});
  return Graph(n, std::move(edges));
}

Graph generate_random_graph(int n, double edge_prob, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random graph: need n >= 2");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw std::invalid_argument("random graph: edge probability outside [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      // Always draw so the stream position does not depend on edge_prob.
      const double r = unit(rng);
      if (r < edge_prob) edges.push_back({u, v, 1.0});
    }
  }
  return Graph(n, std::move(edges));
}

double edge_density(const Graph& g) {
  const double n = g.num_vertices();
  if (n < 2) return 0.0;
  return 2.0 * g.num_edges() / (n * (n - 1.0));
}

double cut_value(const Graph& g, const std::vector<std::uint8_t>& assignment) {
  if (static_cast<int>(assignment.size()) != g.num_vertices()) {
    throw std::invalid_argument("cut_value: assignment length mismatch");
  }
  double c = 0.0;
  for (const auto& e : g.edges()) {
    if (assignment[e.u] != assignment[e.v]) c += e.weight;
  }
  return c;
}

namespace {

// Lexicographic order with vertex 0 first equals integer order after bit
// reversal of the little-endian index.
std::uint64_t lex_key(std::uint64_t index, int n) {
  std::uint64_t key = 0;
  for (int i = 0; i < n; ++i) {
    if ((index >> i) & 1U) key |= std::uint64_t{1} << (n - 1 - i);
  }
  return key;
}

}  // namespace

CutResult brute_force_maxcut(const Graph& g) {
  const int n = g.num_vertices();
  if (n > kMaxCutEnumerationLimit) {
    throw InstanceTooLarge("brute_force_maxcut: too many vertices");
  }
  CutResult result;
  result.assignment.assign(n, 0);
  if (n == 0) return result;

  // incident[v] holds (neighbor, weight).
  std::vector<std::vector<std::pair<int, double>>> incident(n);
  double scale = 1.0;
  for (const auto& e : g.edges()) {
    incident[e.u].emplace_back(e.v, e.weight);
    incident[e.v].emplace_back(e.u, e.weight);
    scale += std::abs(e.weight);
  }
  const double tol = 1e-9 * scale;

  // Gray-code walk: one vertex flips per step, the cut updates in O(deg).
  std::uint64_t index = 0;
  double current = 0.0;
  double best = 0.0;
  std::uint64_t best_key = 0;  // index 0 has key 0
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int flip = std::countr_zero(step);
    const bool was_set = (index >> flip) & 1U;
    for (const auto& [w, weight] : incident[flip]) {
      const bool other = (index >> w) & 1U;
      // Edge crossed before the flip iff sides differ.
      current += (was_set == other) ? weight : -weight;
    }
    index ^= std::uint64_t{1} << flip;
    if (current > best + tol) {
      best = current;
      best_key = lex_key(index, n);
    } else if (current >= best - tol) {
      const auto key = lex_key(index, n);
      if (key < best_key) {
        best_key = key;
        best = std::max(best, current);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    result.assignment[i] = (best_key >> (n - 1 - i)) & 1U;
  }
  result.cut_value = cut_value(g, result.assignment);
  return result;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& keep) {
  std::vector<int> relabel(g.num_vertices(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const int v = keep[i];
    if (v < 0 || v >= g.num_vertices()) {
      throw std::out_of_range("induced_subgraph: vertex out of range");
    }
    if (i > 0 && keep[i - 1] >= v) {
      throw std::invalid_argument("induced_subgraph: vertices must be increasing");
    }
    relabel[v] = static_cast<int>(i);
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (relabel[e.u] >= 0 && relabel[e.v] >= 0) {
      edges.push_back({relabel[e.u], relabel[e.v], e.weight});
    }
  }
  return Graph(static_cast<int>(keep.size()), std::move(edges));
}

Graph remove_vertex(const Graph& g, int v) {
  if (v < 0 || v >= g.num_vertices()) {
    throw std::out_of_range("remove_vertex: vertex out of range");
  }
  std::vector<int> keep;
  keep.reserve(g.num_vertices() - 1);
  for (int i = 0; i < g.num_vertices(); ++i) {
    if (i != v) keep.push_back(i);
  }
  return induced_subgraph(g, keep);
}

bool is_connected(const Graph& g) {
  const int n = g.num_vertices();
  if (n <= 1) return true;
  const auto adj = g.adjacency();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int w : adj[u]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  const auto old_precision = out.precision(17);
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) {
    out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
  }
  out.precision(old_precision);
}

Graph read_edge_list(std::istream& in) {
  int n = 0;
  int m = 0;
  if (!(in >> n >> m) || n < 0 || m < 0) {
    throw std::invalid_argument("edge list: malformed header");
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  for (int i = 0; i < m; ++i) {
    Edge e;
    if (!(in >> e.u >> e.v >> e.weight)) {
      throw std::invalid_argument("edge list: truncated edge section");
    }
    edges.push_back(e);
  }
  return Graph(n, std::move(edges));
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return graph_from_json(nlohmann::json::parse(in));
  }
  return read_edge_list(in);
}

nlohmann::json to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.weight});
  return {{"n", g.num_vertices()}, {"edges", edges}};
}

Graph graph_from_json(const nlohmann::json& j) {
  std::vector<Edge> edges;
  for (const auto& item : j.at("edges")) {
    if (!item.is_array() || item.size() < 2 || item.size() > 3) {
      throw std::invalid_argument("graph json: edge must be [u, v] or [u, v, w]");
    }
    Edge e{item[0].get<int>(), item[1].get<int>(), 1.0};
    if (item.size() == 3) e.weight = item[2].get<double>();
    edges.push_back(e);
  }
  return Graph(j.at("n").get<int>(), std::move(edges));
}

}  // namespace dcqaoa
