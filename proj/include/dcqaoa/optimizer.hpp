#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dcqaoa/ansatz.hpp"
#include "dcqaoa/hamiltonian.hpp"

namespace dcqaoa {

enum class Objective { Fidelity, Ratio };

std::string_view objective_name(Objective o);
Objective parse_objective(std::string_view name);

struct TrainConfig {
  Objective objective = Objective::Fidelity;
  int max_iterations = 500;
  int restarts = 1;
  double learning_rate = 0.05;
  int convergence_window = 20;
  double convergence_tol = 1e-6;
  std::uint64_t seed = 0;
  int workers = 1;
  /// A restart stops as soon as its objective reaches this value, and no
  /// later restart is run. Infinite by default (disabled).
  double stop_at = std::numeric_limits<double>::infinity();

  void validate() const;
};

struct TrainResult {
  ParameterVector best_params;
  double best_objective = 0.0;
  int best_restart = 0;
  std::vector<std::vector<double>> trace;      // objective per iteration, per restart
  std::vector<int> iterations_used;            // per restart
  std::vector<ParameterVector> restart_params; // argmax of each restart
  std::vector<double> restart_best;            // best objective of each restart
  GateCountReport gate_report;
};

/// A diagonal observable evaluated on the ansatz output. Fidelity uses the
/// ground-space indicator; ratio uses C(z) / C_max.
class ObjectiveFunction {
 public:
  ObjectiveFunction(const AnsatzSpec& spec, const DiagonalHamiltonian& h, Objective kind);

  double value(std::span<const double> params) const;
  double value_and_gradient(std::span<const double> params, std::span<double> grad) const;

  const ParametricCircuit& circuit() const { return circuit_; }
  std::span<const double> observable() const { return observable_; }

 private:
  ParametricCircuit circuit_;
  Statevector initial_;
  std::vector<double> observable_;
};

double objective_value(const AnsatzSpec& spec, const ParameterVector& params,
                       const DiagonalHamiltonian& h, Objective kind);

std::vector<double> gradient(const AnsatzSpec& spec, const ParameterVector& params,
                             const DiagonalHamiltonian& h, Objective kind);

/// Parameters of restart r, uniform in [-pi, pi] from derive_seed(seed, r).
ParameterVector random_parameters(Family family, int layers, std::uint64_t seed, int restart);

/// Objective value at the given parameters; fills the gradient buffer.
using ValueAndGradient = std::function<double(std::span<const double>, std::span<double>)>;

/// Adam ascent of an arbitrary objective, one restart per starting point.
/// The callable must be safe to invoke concurrently.
TrainResult train_objective(const ValueAndGradient& f, const AnsatzSpec& spec,
                            const TrainConfig& config, const std::vector<ParameterVector>& starts);

/// Adam ascent from each of config.restarts random initial points.
TrainResult train(const AnsatzSpec& spec, const DiagonalHamiltonian& h,
                  const TrainConfig& config);

/// Adam ascent from the given initial points (one restart each).
TrainResult train_from(const AnsatzSpec& spec, const DiagonalHamiltonian& h,
                       const TrainConfig& config, const std::vector<ParameterVector>& starts);

/// Smallest p <= p_limit whose trained fidelity reaches 1 - epsilon, or
/// nullopt when saturated. Each depth uses its own seed stream.
std::optional<int> critical_depth(Family family, const Graph& g, double epsilon,
                                  const TrainConfig& config, int p_limit);

nlohmann::json to_json(const TrainResult& r, const AnsatzSpec& spec, const TrainConfig& config);

}  // namespace dcqaoa
