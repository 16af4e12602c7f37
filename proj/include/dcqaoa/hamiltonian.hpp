#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "dcqaoa/graph.hpp"
#include "dcqaoa/statevector.hpp"

namespace dcqaoa {

/// Hamiltonian diagonal in the computational basis, stored densely.
struct DiagonalHamiltonian {
  int n_qubits = 0;
  std::vector<double> diagonal;
  double ground_energy = 0.0;
  std::vector<std::uint64_t> ground_indices;  // ascending
};

/// sum_k h_k X_k. Weights default to one.
struct MixerHamiltonian {
  std::vector<double> field_weights;

  static MixerHamiltonian uniform(int n_qubits) {
    return {std::vector<double>(n_qubits, 1.0)};
  }
};

inline constexpr int kMaxDiagonalQubits = 24;

/// Ising energy sum_{(j,k)} w_jk s_j s_k for every basis state, with
/// s = +1 for bit 0 and -1 for bit 1.
std::vector<double> ising_diagonal(const Graph& g);

/// Builds ground energy and ground indices from a diagonal.
DiagonalHamiltonian make_diagonal_hamiltonian(int n_qubits, std::vector<double> diagonal);

DiagonalHamiltonian maxcut_hamiltonian(const Graph& g);

/// Sherrington-Kirkpatrick couplings: one standard-normal J_ij per pair i < j.
struct SkInstance {
  int n = 0;
  std::vector<Edge> couplings;  // (i, j, J_ij), i < j, lexicographic

  /// The complete graph weighted by J_ij; its Ising diagonal is H_SK.
  Graph to_graph() const { return Graph(n, couplings); }
};

SkInstance sk_instance(int n, std::uint64_t seed);
DiagonalHamiltonian sk_hamiltonian(int n, std::uint64_t seed);

nlohmann::json to_json(const SkInstance& sk);
SkInstance sk_from_json(const nlohmann::json& j);

double cost_expectation(const DiagonalHamiltonian& h, const Statevector& s);

/// Expected cut over maximum cut: ((W - <H>) / 2) / C_max, W the total edge
/// weight. Rejects graphs whose maximum cut is zero.
double approximation_ratio(const DiagonalHamiltonian& h, const Statevector& s,
                           const Graph& g);

/// Overlap with the full ground subspace.
double fidelity_to_ground(const DiagonalHamiltonian& h, const Statevector& s);

}  // namespace dcqaoa
