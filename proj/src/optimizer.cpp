#include "dcqaoa/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "dcqaoa/parallel.hpp"
#include "dcqaoa/random.hpp"

namespace dcqaoa {

std::string_view objective_name(Objective o) {
  return o == Objective::Fidelity ? "fidelity" : "ratio";
}

Objective parse_objective(std::string_view name) {
  if (name == "fidelity") return Objective::Fidelity;
  if (name == "ratio") return Objective::Ratio;
  throw std::invalid_argument("unknown objective: " + std::string(name));
}

void TrainConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("train: max_iterations must be >= 1");
  if (restarts < 1) throw std::invalid_argument("train: restarts must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate must be > 0");
  if (convergence_window < 1) throw std::invalid_argument("train: convergence_window must be >= 1");
  if (!(convergence_tol >= 0.0)) throw std::invalid_argument("train: convergence_tol must be >= 0");
}

ObjectiveFunction::ObjectiveFunction(const AnsatzSpec& spec, const DiagonalHamiltonian& h,
                                     Objective kind)
    : circuit_(compile_ansatz(spec)), initial_(init_plus_state(spec.n_qubits())) {
  if (h.n_qubits != spec.n_qubits()) {
    throw std::invalid_argument("objective: hamiltonian does not match the ansatz");
  }
  if (kind == Objective::Fidelity) {
    observable_.assign(h.diagonal.size(), 0.0);
    for (auto z : h.ground_indices) observable_[z] = 1.0;
  } else {
    const double c_max = brute_force_maxcut(spec.graph).cut_value;
    if (c_max <= 0.0) throw std::invalid_argument("objective: graph has no cuttable edge");
    const double w = spec.graph.total_weight();
    observable_.resize(h.diagonal.size());
    for (std::size_t z = 0; z < h.diagonal.size(); ++z) {
      observable_[z] = 0.5 * (w - h.diagonal[z]) / c_max;
    }
  }
}

double ObjectiveFunction::value(std::span<const double> params) const {
  const Statevector s = circuit_.run(initial_, params);
  double acc = 0.0;
  const auto amps = s.amplitudes();
  for (std::size_t z = 0; z < amps.size(); ++z) acc += observable_[z] * std::norm(amps[z]);
  return acc;
}

double ObjectiveFunction::value_and_gradient(std::span<const double> params,
                                             std::span<double> grad) const {
  return circuit_.expectation_and_gradient(initial_, params, observable_, grad);
}

double objective_value(const AnsatzSpec& spec, const ParameterVector& params,
                       const DiagonalHamiltonian& h, Objective kind) {
  const Statevector s = run_ansatz(spec, params);
  if (kind == Objective::Fidelity) return fidelity_to_ground(h, s);
  return approximation_ratio(h, s, spec.graph);
}

std::vector<double> gradient(const AnsatzSpec& spec, const ParameterVector& params,
                             const DiagonalHamiltonian& h, Objective kind) {
  const ObjectiveFunction f(spec, h, kind);
  std::vector<double> grad(params.size());
  f.value_and_gradient(params.values(), grad);
  return grad;
}

ParameterVector random_parameters(Family family, int layers, std::uint64_t seed, int restart) {
  std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(restart)));
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::vector<double> values(num_params(family, layers));
  for (auto& v : values) v = angle(rng);
  return ParameterVector(family, layers, std::move(values));
}

namespace {

struct RestartOutcome {
  std::vector<double> trace;
  ParameterVector best;
  double best_value = -std::numeric_limits<double>::infinity();
};

RestartOutcome adam_ascent(const ValueAndGradient& f, const TrainConfig& cfg,
                           ParameterVector theta) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  const std::size_t dim = theta.size();
  std::vector<double> grad(dim), m(dim, 0.0), v(dim, 0.0);
  std::vector<double> running_best;
  RestartOutcome out;
  double b1t = 1.0;
  double b2t = 1.0;
  for (int t = 0; t < cfg.max_iterations; ++t) {
    const double value = f(theta.values(), grad);
    out.trace.push_back(value);
    if (value > out.best_value) {
      out.best_value = value;
      out.best = theta;
    }
    running_best.push_back(out.best_value);
    if (out.best_value >= cfg.stop_at) break;
    const int w = cfg.convergence_window;
    if (t >= w && running_best[t] - running_best[t - w] < cfg.convergence_tol) break;
    if (t + 1 == cfg.max_iterations) break;  // last evaluation, skip the update
    b1t *= kBeta1;
    b2t *= kBeta2;
    auto x = theta.values();
    for (std::size_t i = 0; i < dim; ++i) {
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * grad[i];
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * grad[i] * grad[i];
      const double m_hat = m[i] / (1.0 - b1t);
      const double v_hat = v[i] / (1.0 - b2t);
      x[i] += cfg.learning_rate * m_hat / (std::sqrt(v_hat) + kEps);
    }
  }
  return out;
}

}  // namespace

TrainResult train_objective(const ValueAndGradient& f, const AnsatzSpec& spec,
                            const TrainConfig& config, const std::vector<ParameterVector>& starts) {
  config.validate();
  if (starts.empty()) throw std::invalid_argument("train: no starting points");
  for (const auto& s : starts) {
    if (s.family() != spec.family || s.layers() != spec.layers) {
      throw std::invalid_argument("train: start does not match the ansatz");
    }
  }
  std::vector<RestartOutcome> outcomes;
  if (std::isfinite(config.stop_at)) {
    // Early stopping across restarts depends on order, so run sequentially.
    for (const auto& s : starts) {
      outcomes.push_back(adam_ascent(f, config, s));
      if (outcomes.back().best_value >= config.stop_at) break;
    }
  } else {
    outcomes.resize(starts.size());
    parallel_for(starts.size(), config.workers,
                 [&](std::size_t r) { outcomes[r] = adam_ascent(f, config, starts[r]); });
  }

  TrainResult result;
  result.gate_report = count_gates(spec);
  result.best_objective = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    auto& o = outcomes[r];
    if (o.best_value > result.best_objective) {
      result.best_objective = o.best_value;
      result.best_params = o.best;
      result.best_restart = static_cast<int>(r);
    }
    result.iterations_used.push_back(static_cast<int>(o.trace.size()));
    result.restart_best.push_back(o.best_value);
    result.restart_params.push_back(std::move(o.best));
    result.trace.push_back(std::move(o.trace));
  }
  return result;
}

TrainResult train_from(const AnsatzSpec& spec, const DiagonalHamiltonian& h,
                       const TrainConfig& config, const std::vector<ParameterVector>& starts) {
  const ObjectiveFunction f(spec, h, config.objective);
  return train_objective(
      [&f](std::span<const double> x, std::span<double> g) { return f.value_and_gradient(x, g); },
      spec, config, starts);
}

TrainResult train(const AnsatzSpec& spec, const DiagonalHamiltonian& h,
                  const TrainConfig& config) {
  config.validate();
  std::vector<ParameterVector> starts;
  for (int r = 0; r < config.restarts; ++r) {
    starts.push_back(random_parameters(spec.family, spec.layers, config.seed, r));
  }
  return train_from(spec, h, config, starts);
}

std::optional<int> critical_depth(Family family, const Graph& g, double epsilon,
                                  const TrainConfig& config, int p_limit) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("critical_depth: epsilon must lie in (0, 1)");
  }
  if (p_limit < 1) throw std::invalid_argument("critical_depth: p_limit must be >= 1");
  if (g.num_edges() == 0) throw std::invalid_argument("critical_depth: graph has no edges");
  const DiagonalHamiltonian h = maxcut_hamiltonian(g);
  for (int p = 1; p <= p_limit; ++p) {
    TrainConfig cfg = config;
    cfg.objective = Objective::Fidelity;
    cfg.seed = derive_seed(config.seed, 0x10000 + static_cast<std::uint64_t>(p));
    cfg.stop_at = 1.0 - epsilon;
    const auto spec = AnsatzSpec::make(family, p, g);
    if (train(spec, h, cfg).best_objective >= 1.0 - epsilon) return p;
  }
  return std::nullopt;
}

nlohmann::json to_json(const TrainResult& r, const AnsatzSpec& spec, const TrainConfig& config) {
  return {{"family", family_name(spec.family)},
          {"p", spec.layers},
          {"n", spec.n_qubits()},
          {"seed", config.seed},
          {"objective", objective_name(config.objective)},
          {"best_objective", r.best_objective},
          {"best_restart", r.best_restart},
          {"best_params", std::vector<double>(r.best_params.values().begin(),
                                              r.best_params.values().end())},
          {"iterations", r.iterations_used},
          {"trace", r.trace},
          {"cnot_total", r.gate_report.cnot_total}};
}

}  // namespace dcqaoa
