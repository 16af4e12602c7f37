#include "dcqaoa/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dcqaoa {

std::vector<double> ising_diagonal(const Graph& g) {
  const int n = g.num_vertices();
  if (n > kMaxDiagonalQubits) {
    throw InstanceTooLarge("ising_diagonal: too many qubits");
  }
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> diag(dim, 0.0);
  for (const auto& e : g.edges()) {
    const std::size_t mask = (std::size_t{1} << e.u) | (std::size_t{1} << e.v);
    for (std::size_t z = 0; z < dim; ++z) {
      // s_u s_v = -1 exactly when the two bits differ.
      const std::size_t both = z & mask;
      diag[z] += (both == 0 || both == mask) ? e.weight : -e.weight;
    }
  }
  return diag;
}

DiagonalHamiltonian make_diagonal_hamiltonian(int n_qubits, std::vector<double> diagonal) {
  if (diagonal.size() != (std::size_t{1} << n_qubits) || diagonal.empty()) {
    throw std::invalid_argument("diagonal hamiltonian: size is not 2^n");
  }
  DiagonalHamiltonian h;
  h.n_qubits = n_qubits;
  h.diagonal = std::move(diagonal);
  h.ground_energy = *std::min_element(h.diagonal.begin(), h.diagonal.end());
  double scale = 1.0;
  for (double d : h.diagonal) scale = std::max(scale, std::abs(d));
  const double tol = 1e-9 * scale;
  for (std::size_t z = 0; z < h.diagonal.size(); ++z) {
    if (h.diagonal[z] <= h.ground_energy + tol) h.ground_indices.push_back(z);
  }
  return h;
}

DiagonalHamiltonian maxcut_hamiltonian(const Graph& g) {
  return make_diagonal_hamiltonian(g.num_vertices(), ising_diagonal(g));
}

SkInstance sk_instance(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sk_instance: need n >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SkInstance sk;
  sk.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) sk.couplings.push_back({i, j, normal(rng)});
  return sk;
}

DiagonalHamiltonian sk_hamiltonian(int n, std::uint64_t seed) {
  return maxcut_hamiltonian(sk_instance(n, seed).to_graph());
}

nlohmann::json to_json(const SkInstance& sk) {
  nlohmann::json c = nlohmann::json::array();
  for (const auto& e : sk.couplings) c.push_back({e.u, e.v, e.weight});
  return {{"n", sk.n}, {"couplings", c}};
}

SkInstance sk_from_json(const nlohmann::json& j) {
  SkInstance sk;
  sk.n = j.at("n").get<int>();
  for (const auto& c : j.at("couplings")) {
    sk.couplings.push_back({c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<double>()});
  }
  Graph validated(sk.n, sk.couplings);
  sk.couplings = validated.edges();
  return sk;
}

double cost_expectation(const DiagonalHamiltonian& h, const Statevector& s) {
  if (static_cast<std::size_t>(s.dimension()) != h.diagonal.size()) {
    throw std::invalid_argument("cost_expectation: dimension mismatch");
  }
  double acc = 0.0;
  const auto amps = s.amplitudes();
  for (std::size_t z = 0; z < amps.size(); ++z) acc += h.diagonal[z] * std::norm(amps[z]);
  return acc;
}

double approximation_ratio(const DiagonalHamiltonian& h, const Statevector& s,
                           const Graph& g) {
  if (g.num_vertices() != h.n_qubits) {
    throw std::invalid_argument("approximation_ratio: graph does not match hamiltonian");
  }
  const double c_max = brute_force_maxcut(g).cut_value;
  if (c_max <= 0.0) {
    throw std::invalid_argument("approximation_ratio: graph has no cuttable edge");
  }
  const double expected_cut = 0.5 * (g.total_weight() - cost_expectation(h, s));
  return expected_cut / c_max;
}

double fidelity_to_ground(const DiagonalHamiltonian& h, const Statevector& s) {
  if (static_cast<std::size_t>(s.dimension()) != h.diagonal.size()) {
    throw std::invalid_argument("fidelity_to_ground: dimension mismatch");
  }
  return projector_overlap(s, h.ground_indices);
}

}  // namespace dcqaoa
