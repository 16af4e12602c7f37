#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dcqaoa/ansatz.hpp"
#include "dcqaoa/hamiltonian.hpp"
#include "dcqaoa/optimizer.hpp"

namespace dcqaoa {

/// Two-qubit depolarizing noise rho -> (1 - p) rho + p I/4 on the CNOT pair,
/// applied after every CNOT. Single-qubit gates are noiseless.
struct NoiseConfig {
  double depolarizing_p = 0.0066;
  int n_trajectories = 200;
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const;
};

struct NoisyEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n)
  int n_trajectories = 0;
};

/// Applies a CNOT-level gate list, inserting after each CNOT a uniformly
/// chosen non-identity two-qubit Pauli with probability 15p/16.
void apply_noisy_gates(Statevector& s, std::span<const GateOp> gates, double p,
                       std::mt19937_64& rng);

Statevector run_noisy_trajectory(const AnsatzSpec& spec, const ParameterVector& params,
                                 const NoiseConfig& noise, std::uint64_t trajectory_seed);

/// Mean over trajectories of sum_z observable[z] |psi_z|^2. Trajectory t uses
/// seed derive_seed(noise.seed, t).
NoisyEstimate noisy_expectation(std::span<const GateOp> gates, const Statevector& initial,
                                std::span<const double> observable, const NoiseConfig& noise);

/// Ground-space fidelity under noise. With p = 0 the noiseless fidelity is
/// returned exactly, with zero standard error.
NoisyEstimate noisy_fidelity(const AnsatzSpec& spec, const ParameterVector& params,
                             const DiagonalHamiltonian& h, const NoiseConfig& noise);

/// CNOT-level gate whose angle is scale * theta[param] (param < 0: fixed).
struct BoundGate {
  GateOp gate;
  int param = -1;
  double scale = 0.0;
};

/// build_circuit with every angle expressed as a function of the parameters.
std::vector<BoundGate> bind_circuit(const AnsatzSpec& spec);

/// Trajectory-averaged diagonal expectation with its exact gradient. Pauli
/// insertions are sampled once per trajectory and frozen, so the objective
/// is a smooth function of the parameters (common random numbers).
class NoisyObjective {
 public:
  NoisyObjective(const AnsatzSpec& spec, std::vector<double> observable, const NoiseConfig& noise);

  double value_and_gradient(std::span<const double> params, std::span<double> grad) const;

 private:
  struct Insertion {
    std::size_t after_gate;
    PauliWord word;
  };
  int n_qubits_;
  int n_params_;
  std::vector<BoundGate> gates_;
  std::vector<double> observable_;
  std::vector<std::vector<Insertion>> trajectories_;
};

/// Trains against the noisy fidelity estimate (noise.n_trajectories frozen
/// trajectories) instead of the noiseless state.
TrainResult train_under_noise(const AnsatzSpec& spec, const DiagonalHamiltonian& h,
                              const TrainConfig& config, const NoiseConfig& noise);

inline constexpr int kMaxDensityQubits = 6;

/// Dense density matrix. Element (r, c) is stored at r + c * 2^n, i.e. as a
/// 2n-qubit vector whose low n bits index the row.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Statevector& pure);

  int num_qubits() const { return n_; }
  std::size_t dimension() const { return dim_; }
  cplx operator()(std::size_t r, std::size_t c) const { return vec_[r + c * dim_]; }

  void apply_gate(const GateOp& gate);
  /// rho -> (1 - p) rho + p (I/4 on a, b) (x) Tr_ab rho.
  void depolarize(int a, int b, double p);

  cplx trace() const;
  double expectation(std::span<const double> diagonal) const;
  Eigen::MatrixXcd to_matrix() const;

 private:
  int n_;
  std::size_t dim_;
  Statevector vec_;
};

/// Exact channel evolution of a CNOT-level gate list (n <= 6).
DensityMatrix density_matrix_oracle(std::span<const GateOp> gates, const Statevector& initial,
                                    double p);

}  // namespace dcqaoa
