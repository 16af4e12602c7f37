#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dcqaoa/ansatz.hpp"
#include "dcqaoa/hamiltonian.hpp"

namespace dcqaoa {

struct QfiMatrix {
  Eigen::MatrixXd entries;
  Eigen::VectorXd eigenvalues;  // ascending
};

/// F_ij = Re(<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>), from exact
/// forward-mode tangents. No factor of 4 is applied.
QfiMatrix qfi_matrix(const ParametricCircuit& circuit, const Statevector& initial,
                     std::span<const double> params);
QfiMatrix qfi_matrix(const AnsatzSpec& spec, const ParameterVector& params);

/// Eigenvalues above 1e-10 * max(1, lambda_max).
int qfi_rank(const QfiMatrix& qfi);

/// QFI rank at n_samples parameter points uniform in [-pi, pi).
std::vector<int> effective_dimension_samples(const AnsatzSpec& spec, int n_samples,
                                             std::uint64_t seed);
double effective_dimension(const AnsatzSpec& spec, int n_samples = 20, std::uint64_t seed = 0);

/// R(params) - R(params with every gamma zeroed). Rejects plain QAOA.
double suppression_delta(const AnsatzSpec& spec, const ParameterVector& params,
                         const DiagonalHamiltonian& h);

/// p_crit(a) = p_max / (1 + exp(k (a - alpha_c))).
struct LogisticFit {
  double p_max = 0.0;
  double k = 0.0;
  double alpha_c = 0.0;
  double residual = 0.0;  // sum of squared deviations
  bool flat = false;      // all targets equal; p_max carries the constant
};

double logistic(double p_max, double k, double alpha_c, double x);

/// Levenberg-Marquardt from 100 deterministic starts; the best residual
/// wins. k may take either sign.
LogisticFit fit_logistic(std::span<const std::pair<double, double>> points);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  std::vector<std::pair<double, double>> points;
};

/// Ordinary least squares, at least 3 points.
ScalingFit fit_linear(std::span<const std::pair<double, double>> points);
inline ScalingFit fit_saturation_scaling(std::span<const std::pair<double, double>> points) {
  return fit_linear(points);
}

/// N solving slope_a N + intercept_a = factor (slope_b N + intercept_b).
double crossover_size(double slope_a, double intercept_a, double slope_b, double intercept_b,
                      double factor);

/// Maps every entry to (-pi, pi].
ParameterVector wrap_angles(const ParameterVector& p);

/// Sum of squared block distances over every block present.
double parameter_distance(const ParameterVector& a, const ParameterVector& b);
double min_cross_distance(std::span<const ParameterVector> a, std::span<const ParameterVector> b);
Eigen::MatrixXd distance_matrix(std::span<const ParameterVector> vectors);

struct ConcentrationFit {
  double exponent = 0.0;  // l in d_N ~ N^-l
  double residual = 0.0;
};

ConcentrationFit concentration_exponent(std::span<const std::pair<double, double>> distances);

}  // namespace dcqaoa
