#include "dcqaoa/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "dcqaoa/parallel.hpp"
#include "dcqaoa/random.hpp"

namespace dcqaoa {

void NoiseConfig::validate() const {
  if (!(depolarizing_p >= 0.0 && depolarizing_p <= 1.0)) {
    throw std::invalid_argument("noise: depolarizing_p must lie in [0, 1]");
  }
  if (n_trajectories < 1) throw std::invalid_argument("noise: n_trajectories must be >= 1");
}

namespace {

constexpr Pauli kPaulis[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

void insert_pauli_pair(Statevector& s, int a, int b, int index) {
  // index 1..15 encodes (pa, pb) in base 4; 0 is the identity.
  const Pauli pa = kPaulis[index % 4];
  const Pauli pb = kPaulis[index / 4];
  std::vector<std::pair<int, Pauli>> factors;
  if (pa != Pauli::I) factors.emplace_back(a, pa);
  if (pb != Pauli::I) factors.emplace_back(b, pb);
  apply_pauli(s, PauliWord(std::move(factors)));
}

}  // namespace

void apply_noisy_gates(Statevector& s, std::span<const GateOp> gates, double p,
                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p_error = 15.0 * p / 16.0;
  for (const auto& g : gates) {
    apply_gate(s, g);
    if (g.kind != GateKind::CNOT || p <= 0.0) continue;
    const double u = unit(rng);
    if (u >= p_error) continue;
    const int k = std::min(14, static_cast<int>(u / (p / 16.0)));
    insert_pauli_pair(s, g.qubits[0], g.qubits[1], k + 1);
  }
}

Statevector run_noisy_trajectory(const AnsatzSpec& spec, const ParameterVector& params,
                                 const NoiseConfig& noise, std::uint64_t trajectory_seed) {
  noise.validate();
  const auto gates = build_circuit(spec, params);
  Statevector s = init_plus_state(spec.n_qubits());
  std::mt19937_64 rng(trajectory_seed);
  apply_noisy_gates(s, gates, noise.depolarizing_p, rng);
  return s;
}

NoisyEstimate noisy_expectation(std::span<const GateOp> gates, const Statevector& initial,
                                std::span<const double> observable, const NoiseConfig& noise) {
  noise.validate();
  if (observable.size() != initial.dimension()) {
    throw std::invalid_argument("noisy_expectation: observable size");
  }
  const auto n = static_cast<std::size_t>(noise.n_trajectories);
  std::vector<double> values(n);
  parallel_for(n, noise.workers, [&](std::size_t t) {
    Statevector s = initial;
    std::mt19937_64 rng(derive_seed(noise.seed, t));
    apply_noisy_gates(s, gates, noise.depolarizing_p, rng);
    double acc = 0.0;
    const auto amps = s.amplitudes();
    for (std::size_t z = 0; z < amps.size(); ++z) acc += observable[z] * std::norm(amps[z]);
    values[t] = acc;
  });
  NoisyEstimate est;
  est.n_trajectories = noise.n_trajectories;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.std_error = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  }
  return est;
}

NoisyEstimate noisy_fidelity(const AnsatzSpec& spec, const ParameterVector& params,
                             const DiagonalHamiltonian& h, const NoiseConfig& noise) {
  noise.validate();
  if (noise.depolarizing_p == 0.0) {
    return {fidelity_to_ground(h, run_ansatz(spec, params)), 0.0, noise.n_trajectories};
  }
  std::vector<double> indicator(h.diagonal.size(), 0.0);
  for (auto z : h.ground_indices) indicator[z] = 1.0;
  const auto gates = build_circuit(spec, params);
  return noisy_expectation(gates, init_plus_state(spec.n_qubits()), indicator, noise);
}

std::vector<BoundGate> bind_circuit(const AnsatzSpec& spec) {
  std::vector<BoundGate> out;
  for (const auto& t : logical_template(spec)) {
    // Decomposed angles are linear in the logical angle, so decomposing the
    // unit-parameter gate yields the per-parameter scales.
    for (const auto& d : decompose(t.gate)) {
      if (d.has_angle()) {
        out.push_back({d, t.param, d.angle});
      } else {
        out.push_back({d, -1, 0.0});
      }
    }
  }
  return out;
}

namespace {

GateOp at_angle(const BoundGate& b, std::span<const double> params, double sign) {
  GateOp g = b.gate;
  if (b.param >= 0) g.angle = sign * b.scale * params[b.param];
  return g;
}

PauliWord rotation_axis(const GateOp& g) {
  switch (g.kind) {
    case GateKind::RX: return PauliWord({{g.qubits[0], Pauli::X}});
    case GateKind::RY: return PauliWord({{g.qubits[0], Pauli::Y}});
    case GateKind::RZ: return PauliWord({{g.qubits[0], Pauli::Z}});
    default: throw std::logic_error("rotation_axis: not a single-qubit rotation");
  }
}

}  // namespace

NoisyObjective::NoisyObjective(const AnsatzSpec& spec, std::vector<double> observable,
                               const NoiseConfig& noise)
    : n_qubits_(spec.n_qubits()),
      n_params_(spec.num_params()),
      gates_(bind_circuit(spec)),
      observable_(std::move(observable)) {
  noise.validate();
  if (observable_.size() != (std::size_t{1} << n_qubits_)) {
    throw std::invalid_argument("noisy objective: observable size");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p = noise.depolarizing_p;
  for (int t = 0; t < noise.n_trajectories; ++t) {
    std::mt19937_64 rng(derive_seed(noise.seed, static_cast<std::uint64_t>(t)));
    std::vector<Insertion> ins;
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      const auto& g = gates_[i].gate;
      if (g.kind != GateKind::CNOT || p <= 0.0) continue;
      const double u = unit(rng);
      if (u >= 15.0 * p / 16.0) continue;
      const int k = std::min(14, static_cast<int>(u / (p / 16.0))) + 1;
      std::vector<std::pair<int, Pauli>> factors;
      if (kPaulis[k % 4] != Pauli::I) factors.emplace_back(g.qubits[0], kPaulis[k % 4]);
      if (kPaulis[k / 4] != Pauli::I) factors.emplace_back(g.qubits[1], kPaulis[k / 4]);
      ins.push_back({i, PauliWord(std::move(factors))});
    }
    trajectories_.push_back(std::move(ins));
  }
}

double NoisyObjective::value_and_gradient(std::span<const double> params,
                                          std::span<double> grad) const {
  if (static_cast<int>(params.size()) != n_params_ || grad.size() != params.size()) {
    throw std::invalid_argument("noisy objective: parameter count mismatch");
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0.0;
  for (const auto& ins : trajectories_) {
    Statevector phi = init_plus_state(n_qubits_);
    std::size_t next = 0;
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      apply_gate(phi, at_angle(gates_[i], params, 1.0));
      while (next < ins.size() && ins[next].after_gate == i) apply_pauli(phi, ins[next++].word);
    }
    Statevector lambda = phi;
    apply_diagonal(lambda, observable_);
    total += inner_product(phi, lambda).real();
    // Adjoint sweep; Pauli insertions and fixed gates are self-inverse.
    std::size_t back = ins.size();
    for (std::size_t i = gates_.size(); i-- > 0;) {
      while (back > 0 && ins[back - 1].after_gate == i) {
        --back;
        apply_pauli(phi, ins[back].word);
        apply_pauli(lambda, ins[back].word);
      }
      const auto& b = gates_[i];
      if (b.param >= 0) {
        // d/dtheta exp(-i s theta P / 2) = -i (s/2) P exp(...)
        const cplx elem = pauli_matrix_element(lambda, rotation_axis(b.gate), phi);
        grad[b.param] += b.scale * elem.imag();
      }
      const GateOp inverse = at_angle(b, params, -1.0);
      apply_gate(phi, inverse);
      apply_gate(lambda, inverse);
    }
  }
  const double inv = 1.0 / static_cast<double>(trajectories_.size());
  for (auto& g : grad) g *= inv;
  return total * inv;
}

TrainResult train_under_noise(const AnsatzSpec& spec, const DiagonalHamiltonian& h,
                              const TrainConfig& config, const NoiseConfig& noise) {
  std::vector<double> observable(h.diagonal.size(), 0.0);
  if (config.objective == Objective::Fidelity) {
    for (auto z : h.ground_indices) observable[z] = 1.0;
  } else {
    const double c_max = brute_force_maxcut(spec.graph).cut_value;
    if (c_max <= 0.0) throw std::invalid_argument("train_under_noise: no cuttable edge");
    for (std::size_t z = 0; z < observable.size(); ++z) {
      observable[z] = 0.5 * (spec.graph.total_weight() - h.diagonal[z]) / c_max;
    }
  }
  const NoisyObjective f(spec, std::move(observable), noise);
  std::vector<ParameterVector> starts;
  for (int r = 0; r < config.restarts; ++r) {
    starts.push_back(random_parameters(spec.family, spec.layers, config.seed, r));
  }
  return train_objective(
      [&f](std::span<const double> x, std::span<double> g) { return f.value_and_gradient(x, g); },
      spec, config, starts);
}

DensityMatrix::DensityMatrix(const Statevector& pure)
    : n_(pure.num_qubits()), dim_(pure.dimension()) {
  if (n_ > kMaxDensityQubits) throw InstanceTooLarge("density matrix: too many qubits");
  std::vector<cplx> data(dim_ * dim_);
  for (std::size_t c = 0; c < dim_; ++c)
    for (std::size_t r = 0; r < dim_; ++r) data[r + c * dim_] = pure[r] * std::conj(pure[c]);
  vec_ = Statevector(2 * n_, std::move(data));
}

// U rho U^dag acts as U on the row qubits and conj(U) on the column qubits.
void DensityMatrix::apply_gate(const GateOp& gate) {
  if (gate.arity() == 1) {
    Matrix2 m = single_qubit_matrix(gate);
    dcqaoa::apply_matrix(vec_, gate.qubits[0], m);
    for (auto& x : m) x = std::conj(x);
    dcqaoa::apply_matrix(vec_, gate.qubits[0] + n_, m);
  } else if (gate.kind == GateKind::CNOT) {
    apply_cnot(vec_, gate.qubits[0], gate.qubits[1]);
    apply_cnot(vec_, gate.qubits[0] + n_, gate.qubits[1] + n_);
  } else {
    for (const auto& g : decompose(gate)) apply_gate(g);
  }
}

void DensityMatrix::depolarize(int a, int b, double p) {
  const std::size_t ma = std::size_t{1} << a;
  const std::size_t mb = std::size_t{1} << b;
  const std::size_t pair = ma | mb;
  const std::size_t sub[4] = {0, ma, mb, pair};
  auto amps = vec_.amplitudes();
  for (std::size_t c = 0; c < dim_; ++c) {
    if (c & pair) continue;
    for (std::size_t r = 0; r < dim_; ++r) {
      if (r & pair) continue;
      cplx reduced{0.0, 0.0};
      for (auto s : sub) reduced += amps[(r | s) + (c | s) * dim_];
      for (auto s : sub) {
        for (auto t : sub) {
          auto& x = amps[(r | s) + (c | t) * dim_];
          x *= (1.0 - p);
          if (s == t) x += 0.25 * p * reduced;
        }
      }
    }
  }
}

cplx DensityMatrix::trace() const {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < dim_; ++i) acc += (*this)(i, i);
  return acc;
}

double DensityMatrix::expectation(std::span<const double> diagonal) const {
  if (diagonal.size() != dim_) throw std::invalid_argument("density matrix: observable size");
  double acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) acc += diagonal[i] * (*this)(i, i).real();
  return acc;
}

Eigen::MatrixXcd DensityMatrix::to_matrix() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) m(r, c) = (*this)(r, c);
  return m;
}

DensityMatrix density_matrix_oracle(std::span<const GateOp> gates, const Statevector& initial,
                                    double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("oracle: p must lie in [0, 1]");
  DensityMatrix rho(initial);
  for (const auto& g : gates) {
    rho.apply_gate(g);
    if (g.kind == GateKind::CNOT && p > 0.0) rho.depolarize(g.qubits[0], g.qubits[1], p);
  }
  return rho;
}

}  // namespace dcqaoa
