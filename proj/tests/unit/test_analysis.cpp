#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "dcqaoa/analysis.hpp"
#include "dcqaoa/optimizer.hpp"
#include "oracle.hpp"

using namespace dcqaoa;

namespace {

const Family kFamilies[] = {Family::Qaoa, Family::DcNc, Family::DcYy, Family::DcY};

Graph nonempty_graph(int n, std::mt19937_64& rng) {
  while (true) {
    Graph g = generate_random_graph(n, 0.6, rng());
    if (g.num_edges() > 0) return g;
  }
}

// QFI from central-difference state derivatives.
Eigen::MatrixXd fd_qfi(const AnsatzSpec& spec, ParameterVector params) {
  const std::size_t d = params.size();
  const oracle::Vec psi = oracle::to_vec(run_ansatz(spec, params));
  std::vector<oracle::Vec> tangents;
  for (std::size_t i = 0; i < d; ++i) {
    const double x = params.values()[i];
    params.values()[i] = x + 1e-5;
    const oracle::Vec up = oracle::to_vec(run_ansatz(spec, params));
    params.values()[i] = x - 1e-5;
    const oracle::Vec down = oracle::to_vec(run_ansatz(spec, params));
    params.values()[i] = x;
    tangents.push_back((up - down) / 2e-5);
  }
  Eigen::MatrixXd f(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      f(i, j) = (tangents[i].dot(tangents[j]) - tangents[i].dot(psi) * psi.dot(tangents[j])).real();
  return f;
}

}  // namespace

TEST(Analysis, QfiMatchesFiniteDifferences) {
  std::mt19937_64 rng(61);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 4;
    const Family f = kFamilies[trial % 4];
    const int p = 1 + trial % 2;
    const auto spec = AnsatzSpec::make(f, p, nonempty_graph(n, rng));
    const auto params = random_parameters(f, p, rng(), 0);
    const auto q = qfi_matrix(spec, params);
    worst = std::max(worst, (q.entries - fd_qfi(spec, params)).cwiseAbs().maxCoeff());
  }
  EXPECT_LE(worst, 1e-5);
}

TEST(Analysis, SingleRyQfiIsQuarter) {
  ParametricCircuit c(1, 1);
  c.add_pauli(PauliWord::parse("Y0"), 0.5, 0);
  const double theta[] = {0.37};
  const auto q = qfi_matrix(c, basis_state(1, 0), theta);
  EXPECT_NEAR(q.entries(0, 0), 0.25, 1e-12);
  EXPECT_EQ(qfi_rank(q), 1);
}

TEST(AnalysisProperty, QfiSymmetricPsd) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const Family f = kFamilies[trial % 4];
    const auto spec = AnsatzSpec::make(f, 2, nonempty_graph(4, rng));
    const auto q = qfi_matrix(spec, random_parameters(f, 2, rng(), 0));
    EXPECT_LT((q.entries - q.entries.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GE(q.eigenvalues.minCoeff(), -1e-10);
  }
}

TEST(AnalysisProperty, ZeroGammaQfiRestrictsToQaoa) {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 12; ++trial) {
    const int p = 1 + trial % 3;
    const Graph g = nonempty_graph(4, rng);
    const Family f = kFamilies[1 + trial % 3];
    const auto dc = random_parameters(f, p, rng(), 0).without_cd();
    const ParameterVector qaoa(Family::Qaoa, p,
                               std::vector<double>(dc.values().begin(), dc.values().begin() + 2 * p));
    const auto a = qfi_matrix(AnsatzSpec::make(f, p, g), dc).entries;
    const auto b = qfi_matrix(AnsatzSpec::make(Family::Qaoa, p, g), qaoa).entries;
    EXPECT_LT((a.topLeftCorner(2 * p, 2 * p) - b).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(AnalysisProperty, RankInvariantUnder2PiShift) {
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 12; ++trial) {
    const Family f = kFamilies[trial % 4];
    const int p = 1 + trial % 4;
    const auto spec = AnsatzSpec::make(f, p, nonempty_graph(5, rng));
    auto params = random_parameters(f, p, rng(), 0);
    const int base = qfi_rank(qfi_matrix(spec, params));
    for (auto& v : params.values()) v += 2 * std::numbers::pi;
    EXPECT_EQ(qfi_rank(qfi_matrix(spec, params)), base);
  }
}

TEST(Analysis, EffectiveDimensionBoundedAndReproducible) {
  const auto spec = AnsatzSpec::make(Family::DcNc, 2, complete_graph(4));
  const auto a = effective_dimension_samples(spec, 5, 3);
  EXPECT_EQ(a, effective_dimension_samples(spec, 5, 3));
  for (int r : a) {
    EXPECT_GE(r, 1);
    EXPECT_LE(r, spec.num_params());
  }
  // G_C never exceeds the Hilbert-space bound 2 * 2^n - 2.
  const auto big = AnsatzSpec::make(Family::DcNc, 8, complete_graph(3));
  EXPECT_LE(effective_dimension(big, 3, 0), 2.0 * 8 - 2);
}

TEST(Analysis, SuppressionDelta) {
  const Graph g = generate_random_graph(5, 0.6, 3);
  const auto h = maxcut_hamiltonian(g);
  const auto spec = AnsatzSpec::make(Family::DcNc, 2, g);
  const auto zero = random_parameters(Family::DcNc, 2, 4, 0).without_cd();
  EXPECT_EQ(suppression_delta(spec, zero, h), 0.0);
  const auto params = random_parameters(Family::DcNc, 2, 4, 0);
  EXPECT_EQ(suppression_delta(spec, params, h), suppression_delta(spec, params, h));
  EXPECT_THROW(suppression_delta(AnsatzSpec::make(Family::Qaoa, 2, g),
                                 random_parameters(Family::Qaoa, 2, 0, 0), h),
               std::invalid_argument);
}

TEST(Analysis, LogisticRecoversNoiselessParameters) {
  for (double k : {-12.0, -3.0, 4.0, 15.0}) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i <= 16; ++i) {
      const double x = 0.1 + 0.05 * i;
      pts.emplace_back(x, logistic(9.0, k, 0.55, x));
    }
    const auto fit = fit_logistic(pts);
    EXPECT_NEAR(fit.p_max, 9.0, 9e-6);
    EXPECT_NEAR(fit.k, k, std::abs(k) * 1e-6);
    EXPECT_NEAR(fit.alpha_c, 0.55, 0.55e-6);
    EXPECT_LE(fit.residual, 1e-10);
    EXPECT_FALSE(fit.flat);
  }
}

TEST(Analysis, LogisticFlatInput) {
  const std::vector<std::pair<double, double>> pts = {{0.3, 4}, {0.5, 4}, {0.7, 4}, {0.9, 4}};
  const auto fit = fit_logistic(pts);
  EXPECT_TRUE(fit.flat);
  EXPECT_EQ(fit.p_max, 4.0);
}

TEST(Analysis, LinearFitAndCrossover) {
  const std::vector<std::pair<double, double>> pts = {{6, 4.77}, {8, 6.53}, {10, 8.29}};
  const auto fit = fit_linear(pts);
  EXPECT_NEAR(fit.slope, 0.88, 1e-12);
  EXPECT_NEAR(fit.intercept, -0.51, 1e-12);
  EXPECT_NEAR(fit.residual, 0.0, 1e-20);
  // a1 N + b1 = r (a2 N + b2) solved directly.
  const double n = crossover_size(1.0, 2.0, 0.5, 1.0, 1.0);
  EXPECT_NEAR(n, -2.0, 1e-12);
  EXPECT_NEAR(crossover_size(3.61, -19.01, 0.88, -0.51, 3.0), 17.48 / 0.97, 1e-12);
  EXPECT_THROW(fit_linear(std::vector<std::pair<double, double>>{{1, 1}, {2, 2}}),
               std::invalid_argument);
}

TEST(Analysis, WrapAndDistance) {
  const ParameterVector p(Family::Qaoa, 1, {3 * std::numbers::pi, -std::numbers::pi});
  const auto w = wrap_angles(p);
  EXPECT_NEAR(w.values()[0], std::numbers::pi, 1e-12);
  EXPECT_NEAR(w.values()[1], std::numbers::pi, 1e-12);
  const ParameterVector a(Family::DcNc, 1, {0, 0, 0});
  const ParameterVector b(Family::DcNc, 1, {1, 2, 2});
  EXPECT_DOUBLE_EQ(parameter_distance(a, b), 9.0);
  const std::vector<ParameterVector> set_a = {a, b};
  const std::vector<ParameterVector> set_b = {ParameterVector(Family::DcNc, 1, {1, 2, 3})};
  EXPECT_DOUBLE_EQ(min_cross_distance(set_a, set_b), 1.0);
  const auto m = distance_matrix(set_a);
  EXPECT_DOUBLE_EQ(m(0, 1), 9.0);
  EXPECT_DOUBLE_EQ(m(1, 1), 0.0);
}

TEST(Analysis, ConcentrationExponentOfPowerLaw) {
  std::vector<std::pair<double, double>> pts;
  for (int n = 6; n <= 12; ++n) pts.emplace_back(n, 5.0 * std::pow(n, -7.0));
  EXPECT_NEAR(concentration_exponent(pts).exponent, 7.0, 1e-10);
}
