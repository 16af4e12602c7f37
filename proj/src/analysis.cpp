#include "dcqaoa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dcqaoa/optimizer.hpp"
#include "dcqaoa/random.hpp"

namespace dcqaoa {

QfiMatrix qfi_matrix(const ParametricCircuit& circuit, const Statevector& initial,
                     std::span<const double> params) {
  const auto states = circuit.state_and_tangents(initial, params);
  const int k = circuit.num_params();
  const Statevector& psi = states[0];
  std::vector<cplx> overlap(k);  // <psi|d_i psi>
  for (int i = 0; i < k; ++i) overlap[i] = inner_product(psi, states[i + 1]);
  QfiMatrix q;
  q.entries.resize(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      const cplx g = inner_product(states[i + 1], states[j + 1]);
      const double f = (g - std::conj(overlap[i]) * overlap[j]).real();
      q.entries(i, j) = f;
      q.entries(j, i) = f;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q.entries, Eigen::EigenvaluesOnly);
  q.eigenvalues = solver.eigenvalues();
  return q;
}

QfiMatrix qfi_matrix(const AnsatzSpec& spec, const ParameterVector& params) {
  return qfi_matrix(compile_ansatz(spec), init_plus_state(spec.n_qubits()), params.values());
}

int qfi_rank(const QfiMatrix& qfi) {
  if (qfi.eigenvalues.size() == 0) return 0;
  const double threshold = 1e-10 * std::max(1.0, qfi.eigenvalues.maxCoeff());
  return static_cast<int>((qfi.eigenvalues.array() > threshold).count());
}

std::vector<int> effective_dimension_samples(const AnsatzSpec& spec, int n_samples,
                                             std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("effective_dimension: n_samples must be >= 1");
  const auto circuit = compile_ansatz(spec);
  const auto initial = init_plus_state(spec.n_qubits());
  std::vector<int> counts;
  for (int s = 0; s < n_samples; ++s) {
    const auto theta = random_parameters(spec.family, spec.layers, seed, s);
    counts.push_back(qfi_rank(qfi_matrix(circuit, initial, theta.values())));
  }
  return counts;
}

double effective_dimension(const AnsatzSpec& spec, int n_samples, std::uint64_t seed) {
  const auto counts = effective_dimension_samples(spec, n_samples, seed);
  double acc = 0.0;
  for (int c : counts) acc += c;
  return acc / static_cast<double>(counts.size());
}

double suppression_delta(const AnsatzSpec& spec, const ParameterVector& params,
                         const DiagonalHamiltonian& h) {
  if (!has_cd_term(spec.family)) {
    throw std::invalid_argument("suppression_delta: plain QAOA has no cd-terms");
  }
  const double raw = objective_value(spec, params, h, Objective::Ratio);
  const double nocd = objective_value(spec, params.without_cd(), h, Objective::Ratio);
  return raw - nocd;
}

double logistic(double p_max, double k, double alpha_c, double x) {
  const double e = std::clamp(k * (x - alpha_c), -700.0, 700.0);
  return p_max / (1.0 + std::exp(e));
}

namespace {

using Vec3 = Eigen::Vector3d;

double sum_squares(std::span<const std::pair<double, double>> pts, const Vec3& t) {
  double acc = 0.0;
  for (const auto& [x, y] : pts) {
    const double r = logistic(t[0], t[1], t[2], x) - y;
    acc += r * r;
  }
  return acc;
}

// Levenberg-Marquardt on (p_max, k, alpha_c) with Marquardt scaling.
Vec3 levenberg_marquardt(std::span<const std::pair<double, double>> pts, Vec3 t) {
  const auto m = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd jac(m, 3);
  Eigen::VectorXd res(m);
  double lambda = 1e-3;
  double cost = sum_squares(pts, t);
  for (int iter = 0; iter < 1000; ++iter) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double x = pts[i].first;
      const double e = std::exp(std::clamp(t[1] * (x - t[2]), -700.0, 700.0));
      const double s = 1.0 / (1.0 + e);
      res[i] = t[0] * s - pts[i].second;
      const double ds = -t[0] * s * s * e;  // d f / d (k (x - c))
      jac(i, 0) = s;
      jac(i, 1) = ds * (x - t[2]);
      jac(i, 2) = -ds * t[1];
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Vec3 jtr = jac.transpose() * res;
    if (jtr.cwiseAbs().maxCoeff() < 1e-15) break;
    bool improved = false;
    while (lambda < 1e16) {
      Eigen::Matrix3d a = jtj;
      for (int d = 0; d < 3; ++d) a(d, d) += lambda * std::max(jtj(d, d), 1e-12);
      const Vec3 step = a.ldlt().solve(-jtr);
      const Vec3 trial = t + step;
      const double trial_cost = sum_squares(pts, trial);
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        const bool tiny = step.norm() < 1e-15 * (1.0 + t.norm());
        t = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-15);
        improved = !tiny;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  return t;
}

}  // namespace

LogisticFit fit_logistic(std::span<const std::pair<double, double>> points) {
  if (points.size() < 4) throw std::invalid_argument("fit_logistic: need at least 4 points");
  double x_min = points[0].first, x_max = points[0].first;
  double y_min = points[0].second, y_max = points[0].second;
  for (const auto& [x, y] : points) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  if (x_max == x_min) {
    throw std::invalid_argument("fit_logistic: need at least two distinct abscissae");
  }
  LogisticFit fit;
  if (y_max == y_min) {
    fit.flat = true;
    fit.p_max = y_max;
    return fit;
  }
  const double top = std::max(std::abs(y_max), 1e-12);
  std::mt19937_64 rng(0x4c4f47495354ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  fit.residual = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 100; ++s) {
    const double p0 = top * (1.0 + 2.0 * unit(rng));
    const double k0 = std::exp(std::log(0.1) + unit(rng) * std::log(1000.0));
    const double c0 = unit(rng);
    const double sign = (s % 2 == 0) ? 1.0 : -1.0;
    const Vec3 t = levenberg_marquardt(points, Vec3(p0, sign * k0, c0));
    const double r = sum_squares(points, t);
    if (std::isfinite(r) && r < fit.residual) {
      fit.residual = r;
      fit.p_max = t[0];
      fit.k = t[1];
      fit.alpha_c = t[2];
    }
  }
  return fit;
}

ScalingFit fit_linear(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_linear: need at least 3 points");
  const auto n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_linear: abscissae are all equal");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& [x, y] : points) {
    const double r = fit.slope * x + fit.intercept - y;
    fit.residual += r * r;
  }
  fit.points.assign(points.begin(), points.end());
  return fit;
}

double crossover_size(double slope_a, double intercept_a, double slope_b, double intercept_b,
                      double factor) {
  const double denom = slope_a - factor * slope_b;
  if (denom == 0.0) throw std::invalid_argument("crossover_size: parallel lines");
  return (factor * intercept_b - intercept_a) / denom;
}

ParameterVector wrap_angles(const ParameterVector& p) {
  std::vector<double> v(p.values().begin(), p.values().end());
  for (auto& x : v) {
    x = std::remainder(x, 2.0 * std::numbers::pi);  // [-pi, pi]
    if (x <= -std::numbers::pi) x += 2.0 * std::numbers::pi;
  }
  return ParameterVector(p.family(), p.layers(), std::move(v));
}

double parameter_distance(const ParameterVector& a, const ParameterVector& b) {
  if (a.family() != b.family() || a.layers() != b.layers()) {
    throw std::invalid_argument("parameter_distance: layouts differ");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    acc += d * d;
  }
  return acc;
}

double min_cross_distance(std::span<const ParameterVector> a,
                          std::span<const ParameterVector> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("min_cross_distance: empty set");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : a)
    for (const auto& y : b) best = std::min(best, parameter_distance(x, y));
  return best;
}

Eigen::MatrixXd distance_matrix(std::span<const ParameterVector> vectors) {
  const auto n = static_cast<Eigen::Index>(vectors.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = parameter_distance(vectors[i], vectors[j]);
      d(j, i) = d(i, j);
    }
  return d;
}

ConcentrationFit concentration_exponent(std::span<const std::pair<double, double>> distances) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [n, d] : distances) {
    if (!(d > 0.0) || !(n > 0.0)) {
      throw std::invalid_argument("concentration_exponent: sizes and distances must be > 0");
    }
    logs.emplace_back(std::log(n), std::log(d));
  }
  const auto fit = fit_linear(logs);
  return {-fit.slope, fit.residual};
}

}  // namespace dcqaoa
