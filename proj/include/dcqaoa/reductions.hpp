#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dcqaoa/graph.hpp"

namespace dcqaoa {

/// CNF formula with DIMACS literals: +i is x_i, -i is not x_i, 1 <= i <= n.
struct CnfFormula {
  int n_vars = 0;
  std::vector<std::vector<int>> clauses;

  int max_width() const;
  /// Rejects empty clauses, out-of-range variables, repeated literals and
  /// clauses holding a literal together with its negation.
  void validate() const;
};

/// Random formula with clause widths uniform in [1, max_width].
CnfFormula random_formula(int n_vars, int n_clauses, int max_width, std::uint64_t seed);

/// Number of clauses satisfied by an assignment (entry i-1 is x_i).
int satisfied_count(const CnfFormula& f, const std::vector<std::uint8_t>& assignment);

struct SatToCut {
  Graph graph;
  std::vector<std::string> names;  // v1, ~v1, ..., u1, w1, ...
  double consistency_weight = 0.0;  // W = 3m + 1
};

/// Vertices: v_i = i-1, ~v_i = n+i-1, u_j = 2n+j-1, w_j = 2n+m+j-1. Edges:
/// every (v_i, ~v_i) with weight W, then per clause the u-literal edges, the
/// w-literal edges and (u_j, w_j), all of weight 1.
SatToCut sat_to_maxcut(const CnfFormula& f);

enum class ClauseConvention { Standard, Equality };

std::string_view convention_name(ClauseConvention c);
ClauseConvention parse_convention(std::string_view name);

/// Two clauses per edge on variables x_{u+1}, x_{v+1}. Standard emits
/// (x_u or x_v), (not x_u or not x_v); Equality emits (x_u or not x_v),
/// (not x_u or x_v). Rejects weighted graphs.
CnfFormula maxcut_to_sat(const Graph& g, ClauseConvention convention = ClauseConvention::Standard);

inline constexpr int kMaxSatEnumerationLimit = 20;

struct MaxSatResult {
  std::vector<std::uint8_t> assignment;
  int satisfied = 0;
};

/// Exhaustive Max-SAT; lexicographically smallest maximizer (x_1 first).
MaxSatResult brute_force_maxsat(const CnfFormula& f);

inline constexpr int kMaxCertifyVertices = 22;

struct ReductionCertificate {
  std::string direction;  // "sat_to_cut" or "cut_to_sat"
  std::string convention;  // cut_to_sat only
  double opt_source = 0.0;
  double opt_target = 0.0;
  double predicted_target = 0.0;
  bool predicted_relation_holds = false;
  bool consistency_holds = false;
  int n_vars = 0;
  int n_clauses = 0;
  int n_vertices = 0;
  int n_edges = 0;
  double consistency_weight = 0.0;
};

/// sat_to_cut: OPT_SAT and OPT_Cut by enumeration. The predicted relation is
/// OPT_Cut = 3 OPT_SAT + nW; consistency means every optimal cut separates
/// every (v_i, ~v_i) pair.
ReductionCertificate certify_reduction(const CnfFormula& f);

/// cut_to_sat: OPT_Cut and OPT_SAT by enumeration. The predicted relation is
/// OPT_SAT = 2 OPT_Cut; consistency means the optimal assignments of the
/// formula are exactly the optimal cuts (read as x_v = side of v).
ReductionCertificate certify_cut_to_sat(const Graph& g, ClauseConvention convention);

nlohmann::json to_json(const ReductionCertificate& c);

void write_dimacs(std::ostream& out, const CnfFormula& f);
CnfFormula read_dimacs(std::istream& in);
CnfFormula load_dimacs(const std::string& path);

}  // namespace dcqaoa
