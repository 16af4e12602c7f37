#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dcqaoa {

/// Thrown when an exhaustive routine is asked to enumerate more states than
/// its guard allows.
class InstanceTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected weighted graph. Edges are stored with u < v in insertion
/// order; the order is significant because circuit construction follows it.
class Graph {
 public:
  Graph() = default;

  /// Validates and normalizes the edge list. Rejects self-loops, duplicate
  /// pairs, out-of-range endpoints and non-finite weights.
  Graph(int n_vertices, std::vector<Edge> edges);

  int num_vertices() const { return n_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  double total_weight() const;
  bool is_unweighted() const;
  int degree(int v) const;
  std::vector<std::vector<int>> adjacency() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_vertices_ = 0;
  std::vector<Edge> edges_;
};

struct CutResult {
  std::vector<std::uint8_t> assignment;  // side of each vertex, 0 or 1
  double cut_value = 0.0;
};

Graph complete_graph(int n);
Graph path_graph(int n);

/// G(n, p): every unordered pair is included independently with
/// probability edge_prob. Pairs are visited in (u, v) lexicographic order so
/// the edge list is sorted and reproducible for a given seed.
Graph generate_random_graph(int n, double edge_prob, std::uint64_t seed);

/// 2M / (N (N - 1)).
double edge_density(const Graph& g);

/// Crossing weight of an assignment.
double cut_value(const Graph& g, const std::vector<std::uint8_t>& assignment);

inline constexpr int kMaxCutEnumerationLimit = 24;

/// Exhaustive MaxCut. Among maximizers the lexicographically smallest
/// assignment vector (vertex 0 first) is returned.
CutResult brute_force_maxcut(const Graph& g);

/// Subgraph induced by `keep` (must be strictly increasing). Vertices are
/// relabeled contiguously in order; edge order follows the parent graph.
Graph induced_subgraph(const Graph& g, const std::vector<int>& keep);

Graph remove_vertex(const Graph& g, int v);

bool is_connected(const Graph& g);

// Edge-list text format: "N M" followed by M lines "u v w".
void write_edge_list(std::ostream& out, const Graph& g);
Graph read_edge_list(std::istream& in);
Graph load_edge_list(const std::string& path);

nlohmann::json to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

}  // namespace dcqaoa
