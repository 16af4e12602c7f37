#include "dcqaoa/reductions.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dcqaoa {

int CnfFormula::max_width() const {
  std::size_t w = 0;
  for (const auto& c : clauses) w = std::max(w, c.size());
  return static_cast<int>(w);
}

void CnfFormula::validate() const {
  if (n_vars < 0) throw std::invalid_argument("cnf: negative variable count");
  for (const auto& c : clauses) {
    if (c.empty()) throw std::invalid_argument("cnf: empty clause");
    std::set<int> seen;
    for (int lit : c) {
      if (lit == 0 || std::abs(lit) > n_vars) {
        throw std::invalid_argument("cnf: literal outside the variable range");
      }
      if (seen.count(-lit)) throw std::invalid_argument("cnf: clause is a tautology");
      if (!seen.insert(lit).second) throw std::invalid_argument("cnf: repeated literal");
    }
  }
}

CnfFormula random_formula(int n_vars, int n_clauses, int max_width, std::uint64_t seed) {
  if (n_vars < 1 || n_clauses < 0 || max_width < 1) {
    throw std::invalid_argument("random_formula: bad sizes");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> width(1, std::min(max_width, n_vars));
  std::uniform_int_distribution<int> coin(0, 1);
  CnfFormula f;
  f.n_vars = n_vars;
  std::vector<int> vars(n_vars);
  for (int i = 0; i < n_vars; ++i) vars[i] = i + 1;
  for (int j = 0; j < n_clauses; ++j) {
    std::shuffle(vars.begin(), vars.end(), rng);
    const int w = width(rng);
    std::vector<int> clause;
    for (int t = 0; t < w; ++t) clause.push_back(coin(rng) ? vars[t] : -vars[t]);
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

int satisfied_count(const CnfFormula& f, const std::vector<std::uint8_t>& assignment) {
  int count = 0;
  for (const auto& c : f.clauses) {
    for (int lit : c) {
      const bool value = assignment.at(std::abs(lit) - 1) != 0;
      if ((lit > 0) == value) {
        ++count;
        break;
      }
    }
  }
  return count;
}

SatToCut sat_to_maxcut(const CnfFormula& f) {
  f.validate();
  const int n = f.n_vars;
  const int m = static_cast<int>(f.clauses.size());
  SatToCut out;
  out.consistency_weight = 3.0 * m + 1.0;
  auto literal_vertex = [n](int lit) { return lit > 0 ? lit - 1 : n - lit - 1; };
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, n + i, out.consistency_weight});
  for (int j = 0; j < m; ++j) {
    const int u = 2 * n + j;
    const int w = 2 * n + m + j;
    for (int lit : f.clauses[j]) edges.push_back({u, literal_vertex(lit), 1.0});
    for (int lit : f.clauses[j]) edges.push_back({w, literal_vertex(lit), 1.0});
    edges.push_back({u, w, 1.0});
  }
  out.graph = Graph(2 * n + 2 * m, std::move(edges));
  for (int i = 1; i <= n; ++i) out.names.push_back("v" + std::to_string(i));
  for (int i = 1; i <= n; ++i) out.names.push_back("~v" + std::to_string(i));
  for (int j = 1; j <= m; ++j) out.names.push_back("u" + std::to_string(j));
  for (int j = 1; j <= m; ++j) out.names.push_back("w" + std::to_string(j));
  return out;
}

std::string_view convention_name(ClauseConvention c) {
  return c == ClauseConvention::Standard ? "standard" : "equality";
}

ClauseConvention parse_convention(std::string_view name) {
  if (name == "standard") return ClauseConvention::Standard;
  if (name == "equality") return ClauseConvention::Equality;
  throw std::invalid_argument("unknown clause convention: " + std::string(name));
}

CnfFormula maxcut_to_sat(const Graph& g, ClauseConvention convention) {
  if (!g.is_unweighted()) throw std::invalid_argument("maxcut_to_sat: graph is weighted");
  CnfFormula f;
  f.n_vars = g.num_vertices();
  for (const auto& e : g.edges()) {
    const int a = e.u + 1;
    const int b = e.v + 1;
    if (convention == ClauseConvention::Standard) {
      f.clauses.push_back({a, b});
      f.clauses.push_back({-a, -b});
    } else {
      f.clauses.push_back({a, -b});
      f.clauses.push_back({-a, b});
    }
  }
  return f;
}

namespace {

// Clause as bitmasks over variables (bit i-1 is x_i).
struct ClauseMask {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
};

std::vector<ClauseMask> clause_masks(const CnfFormula& f) {
  std::vector<ClauseMask> masks;
  for (const auto& c : f.clauses) {
    ClauseMask m;
    for (int lit : c) (lit > 0 ? m.pos : m.neg) |= std::uint32_t{1} << (std::abs(lit) - 1);
    masks.push_back(m);
  }
  return masks;
}

int count_satisfied(const std::vector<ClauseMask>& masks, std::uint32_t a) {
  int count = 0;
  for (const auto& m : masks) count += ((a & m.pos) | (~a & m.neg)) != 0;
  return count;
}

// Index whose bit i is entry i, visiting assignment vectors in
// lexicographic order (entry 0 most significant).
std::uint32_t lex_to_bits(std::uint32_t code, int n) {
  std::uint32_t bits = 0;
  for (int i = 0; i < n; ++i)
    if (code >> (n - 1 - i) & 1U) bits |= std::uint32_t{1} << i;
  return bits;
}

std::vector<std::uint8_t> bits_to_vector(std::uint64_t bits, int n) {
  std::vector<std::uint8_t> v(n);
  for (int i = 0; i < n; ++i) v[i] = static_cast<std::uint8_t>(bits >> i & 1U);
  return v;
}

}  // namespace

MaxSatResult brute_force_maxsat(const CnfFormula& f) {
  f.validate();
  if (f.n_vars > kMaxSatEnumerationLimit) {
    throw InstanceTooLarge("brute_force_maxsat: too many variables");
  }
  const auto masks = clause_masks(f);
  const std::uint32_t total = std::uint32_t{1} << f.n_vars;
  MaxSatResult best;
  best.satisfied = -1;
  std::uint32_t best_bits = 0;
  for (std::uint32_t code = 0; code < total; ++code) {
    const std::uint32_t bits = lex_to_bits(code, f.n_vars);
    const int s = count_satisfied(masks, bits);
    if (s > best.satisfied) {
      best.satisfied = s;
      best_bits = bits;
    }
  }
  best.assignment = bits_to_vector(best_bits, f.n_vars);
  return best;
}

ReductionCertificate certify_reduction(const CnfFormula& f) {
  const auto reduced = sat_to_maxcut(f);
  const Graph& g = reduced.graph;
  const int v = g.num_vertices();
  if (v > kMaxCertifyVertices) throw InstanceTooLarge("certify_reduction: too many vertices");
  const auto sat = brute_force_maxsat(f);

  // Every cut, tracking whether all maximizers separate each (v_i, ~v_i).
  const int n = f.n_vars;
  double best = -1.0;
  bool consistent = true;
  const std::uint64_t total = std::uint64_t{1} << v;
  for (std::uint64_t z = 0; z < total; ++z) {
    double cut = 0.0;
    for (const auto& e : g.edges())
      if (((z >> e.u) ^ (z >> e.v)) & 1U) cut += e.weight;
    bool separated = true;
    for (int i = 0; i < n && separated; ++i) separated = ((z >> i) ^ (z >> (n + i))) & 1U;
    if (cut > best) {
      best = cut;
      consistent = separated;
    } else if (cut == best) {
      consistent = consistent && separated;
    }
  }

  ReductionCertificate c;
  c.direction = "sat_to_cut";
  c.opt_source = sat.satisfied;
  c.opt_target = best;
  c.predicted_target = 3.0 * sat.satisfied + n * reduced.consistency_weight;
  c.predicted_relation_holds = c.opt_target == c.predicted_target;
  c.consistency_holds = consistent;
  c.n_vars = n;
  c.n_clauses = static_cast<int>(f.clauses.size());
  c.n_vertices = v;
  c.n_edges = g.num_edges();
  c.consistency_weight = reduced.consistency_weight;
  return c;
}

ReductionCertificate certify_cut_to_sat(const Graph& g, ClauseConvention convention) {
  const auto f = maxcut_to_sat(g, convention);
  const int n = g.num_vertices();
  if (n > kMaxSatEnumerationLimit) throw InstanceTooLarge("certify_cut_to_sat: too many vertices");
  const auto masks = clause_masks(f);
  const std::uint32_t total = std::uint32_t{1} << n;
  std::vector<double> cuts(total);
  std::vector<int> sats(total);
  double best_cut = 0.0;
  int best_sat = 0;
  for (std::uint32_t z = 0; z < total; ++z) {
    double cut = 0.0;
    for (const auto& e : g.edges())
      if (((z >> e.u) ^ (z >> e.v)) & 1U) cut += e.weight;
    cuts[z] = cut;
    sats[z] = count_satisfied(masks, z);
    best_cut = std::max(best_cut, cut);
    best_sat = std::max(best_sat, sats[z]);
  }
  bool same_argmax = true;
  for (std::uint32_t z = 0; z < total; ++z) {
    same_argmax = same_argmax && ((cuts[z] == best_cut) == (sats[z] == best_sat));
  }
  ReductionCertificate c;
  c.direction = "cut_to_sat";
  c.convention = std::string(convention_name(convention));
  c.opt_source = best_cut;
  c.opt_target = best_sat;
  c.predicted_target = 2.0 * best_cut;
  c.predicted_relation_holds = c.opt_target == c.predicted_target;
  c.consistency_holds = same_argmax;
  c.n_vars = n;
  c.n_clauses = static_cast<int>(f.clauses.size());
  c.n_vertices = n;
  c.n_edges = g.num_edges();
  return c;
}

nlohmann::json to_json(const ReductionCertificate& c) {
  nlohmann::json j = {{"direction", c.direction},
                      {"opt_source", c.opt_source},
                      {"opt_target", c.opt_target},
                      {"predicted_target", c.predicted_target},
                      {"predicted_relation_holds", c.predicted_relation_holds},
                      {"consistency_holds", c.consistency_holds},
                      {"n_vars", c.n_vars},
                      {"n_clauses", c.n_clauses},
                      {"n_vertices", c.n_vertices},
                      {"n_edges", c.n_edges}};
  if (c.direction == "sat_to_cut") j["consistency_weight"] = c.consistency_weight;
  if (!c.convention.empty()) j["convention"] = c.convention;
  return j;
}

void write_dimacs(std::ostream& out, const CnfFormula& f) {
  out << "p cnf " << f.n_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) {
    for (int lit : c) out << lit << ' ';
    out << "0\n";
  }
}

CnfFormula read_dimacs(std::istream& in) {
  CnfFormula f;
  std::string line;
  long long declared = -1;
  std::vector<int> current;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c" || first[0] == '%') continue;
    if (first == "p") {
      std::string kind;
      if (!(ls >> kind >> f.n_vars >> declared) || kind != "cnf") {
        throw std::invalid_argument("dimacs: malformed problem line");
      }
      continue;
    }
    if (declared < 0) throw std::invalid_argument("dimacs: clause before problem line");
    std::istringstream body(line);
    long long lit;
    while (body >> lit) {
      if (lit == 0) {
        f.clauses.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(static_cast<int>(lit));
      }
    }
    if (!body.eof()) throw std::invalid_argument("dimacs: non-numeric token");
  }
  if (!current.empty()) throw std::invalid_argument("dimacs: clause not terminated by 0");
  if (declared < 0) throw std::invalid_argument("dimacs: missing problem line");
  if (static_cast<long long>(f.clauses.size()) != declared) {
    throw std::invalid_argument("dimacs: clause count does not match the header");
  }
  f.validate();
  return f;
}

CnfFormula load_dimacs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_dimacs(in);
}

}  // namespace dcqaoa
