#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "dcqaoa/ansatz.hpp"
#include "dcqaoa/optimizer.hpp"
#include "oracle.hpp"

using namespace dcqaoa;

namespace {

const Family kFamilies[] = {Family::Qaoa, Family::DcNc, Family::DcYy, Family::DcY};

// Max amplitude error after removing the global phase of b relative to a.
double phase_free_diff(const Statevector& a, const Statevector& b) {
  cplx overlap = inner_product(b, a);
  const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
  double m = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) m = std::max(m, std::abs(a[i] - phase * b[i]));
  return m;
}

Graph connected_graph(int n, std::mt19937_64& rng) {
  while (true) {
    Graph g = generate_random_graph(n, 0.6, rng());
    if (g.num_edges() > 0) return g;
  }
}

}  // namespace

TEST(Ansatz, FamilyNamesAndParams) {
  for (auto f : kFamilies) EXPECT_EQ(parse_family(family_name(f)), f);
  EXPECT_EQ(num_params(Family::Qaoa, 4), 8);
  EXPECT_EQ(num_params(Family::DcNc, 4), 12);
  EXPECT_EQ(parse_family_list("dc-nc, qaoa"), (std::vector<Family>{Family::DcNc, Family::Qaoa}));
  EXPECT_THROW(parse_family("dc-xx"), std::invalid_argument);
  EXPECT_EQ(cnot_per_edge(Family::Qaoa), 2);
  EXPECT_EQ(cnot_per_edge(Family::DcNc), 6);
  EXPECT_EQ(cnot_per_edge(Family::DcYy), 4);
  EXPECT_EQ(cnot_per_edge(Family::DcY), 2);
}

TEST(Ansatz, ParameterLayout) {
  const ParameterVector p(Family::DcNc, 2, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(p.alpha(1), 2);
  EXPECT_EQ(p.beta(0), 3);
  EXPECT_EQ(p.gamma(1), 6);
  EXPECT_EQ(p.without_cd().values()[4], 0.0);
  EXPECT_THROW(ParameterVector(Family::Qaoa, 2, {1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(ParameterVector(Family::Qaoa, 1, {1, 2}).gamma(0), std::logic_error);
}

// Each two-qubit decomposition equals its generator exponential on 1000
// random states.
TEST(AnsatzProperty, DecompositionsMatchExponentials) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  const GateKind kinds[] = {GateKind::RZZ, GateKind::RYY, GateKind::RYZ};
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 5;
    std::uniform_int_distribution<int> q(0, n - 1);
    const int a = q(rng);
    int b = q(rng);
    while (b == a) b = q(rng);
    const GateOp g = GateOp::pair(kinds[trial % 3], a, b, ang(rng));
    const auto s0 = oracle::random_state(n, rng);
    auto direct = s0;
    apply_gate(direct, g);
    const oracle::Vec expected = oracle::gate_unitary(n, g) * oracle::to_vec(s0);
    auto composed = s0;
    apply_gates(composed, decompose(g));
    worst = std::max(worst, phase_free_diff(oracle::from_vec(expected), composed));
    worst = std::max(worst, phase_free_diff(direct, composed));
  }
  EXPECT_LE(worst, 1e-10);
}

// Gate-level circuit, direct-exponential circuit and a dense product of
// per-gate exponentials agree.
TEST(AnsatzProperty, GateListMatchesDirectExponentials) {
  std::mt19937_64 rng(32);
  double worst = 0.0;
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 2 + trial % 5;
    const Family f = kFamilies[trial % 4];
    const int p = 1 + trial % 3;
    const auto spec = AnsatzSpec::make(f, p, connected_graph(n, rng));
    const auto params = random_parameters(f, p, rng(), 0);
    auto gate_level = init_plus_state(n);
    apply_gates(gate_level, build_circuit(spec, params));
    const auto direct = run_ansatz(spec, params);
    worst = std::max(worst, phase_free_diff(direct, gate_level));
    if (n <= 4) {
      const oracle::Vec dense = oracle::circuit_unitary(n, build_logical_circuit(spec, params)) *
                                oracle::to_vec(init_plus_state(n));
      worst = std::max(worst, phase_free_diff(oracle::from_vec(dense), direct));
    }
  }
  EXPECT_LE(worst, 1e-10);
}

// Direct check of one NC layer on K2 against exp(-i g (YZ + ZY)) exp(-i b X) exp(-i a ZZ).
TEST(Ansatz, SingleLayerNcOnK2) {
  const auto spec = AnsatzSpec::make(Family::DcNc, 1, Graph(2, {{0, 1, 1.0}}));
  const ParameterVector params(Family::DcNc, 1, {0.3, -0.7, 0.45});
  using oracle::pauli;
  using oracle::two;
  const oracle::Mat zz = two(2, 0, pauli('Z'), 1, pauli('Z'));
  const oracle::Mat xs = oracle::single(2, 0, pauli('X')) + oracle::single(2, 1, pauli('X'));
  const oracle::Mat cd = two(2, 0, pauli('Y'), 1, pauli('Z')) + two(2, 0, pauli('Z'), 1, pauli('Y'));
  const oracle::Vec expected = oracle::expm_herm(cd, 0.45) * oracle::expm_herm(xs, -0.7) *
                               oracle::expm_herm(zz, 0.3) * oracle::to_vec(init_plus_state(2));
  EXPECT_LT(oracle::max_abs_diff(run_ansatz(spec, params), oracle::from_vec(expected)), 1e-12);
}

// Weighted edges scale the NC words like the commutator [sum X, sum w ZZ].
TEST(Ansatz, NcTermCarriesEdgeWeights) {
  const Graph g(3, {{0, 1, -0.8}, {1, 2, 1.7}});
  const auto spec = AnsatzSpec::make(Family::DcNc, 1, g);
  const ParameterVector params(Family::DcNc, 1, {0.4, 0.9, -0.35});
  using oracle::pauli;
  using oracle::two;
  // Words on the shared qubit do not commute, so the cd block is a product in edge order.
  oracle::Mat zz = oracle::Mat::Zero(8, 8), xs = oracle::Mat::Zero(8, 8);
  oracle::Mat cd = oracle::Mat::Identity(8, 8);
  for (const auto& e : g.edges()) {
    zz += e.weight * two(3, e.u, pauli('Z'), e.v, pauli('Z'));
    const oracle::Mat word =
        e.weight * (two(3, e.u, pauli('Y'), e.v, pauli('Z')) + two(3, e.u, pauli('Z'), e.v, pauli('Y')));
    cd = oracle::expm_herm(word, -0.35) * cd;
  }
  for (int q = 0; q < 3; ++q) xs += oracle::single(3, q, pauli('X'));
  const oracle::Vec expected = cd * oracle::expm_herm(xs, 0.9) * oracle::expm_herm(zz, 0.4) *
                               oracle::to_vec(init_plus_state(3));
  EXPECT_LT(oracle::max_abs_diff(run_ansatz(spec, params), oracle::from_vec(expected)), 1e-12);
  auto gates = init_plus_state(3);
  apply_gates(gates, build_circuit(spec, params));
  EXPECT_LT(phase_free_diff(oracle::from_vec(expected), gates), 1e-10);
}

TEST(AnsatzProperty, CnotCountsMatchClosedForms) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    const Family f = kFamilies[trial % 4];
    const int p = 1 + (trial / 4) % 5;
    const Graph g = connected_graph(n, rng);
    const auto spec = AnsatzSpec::make(f, p, g);
    const auto report = count_gates(spec);
    const long long m = g.num_edges();
    const long long per_layer[] = {2 * m, 6 * m, 4 * m, 2 * m};
    const long long single_extra[] = {0, 6 * m, 5 * m, n};
    EXPECT_EQ(report.cnot_per_layer, per_layer[static_cast<int>(f)]);
    EXPECT_EQ(report.cnot_total, p * per_layer[static_cast<int>(f)]);
    EXPECT_EQ(report.single_qubit_total, p * (m + n + single_extra[static_cast<int>(f)]));
    const auto gates = build_circuit(spec, random_parameters(f, p, 1, 0));
    EXPECT_EQ(scan_gate_counts(gates, p), report);
  }
}

TEST(AnsatzProperty, ZeroGammaReproducesQaoa) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    const Graph g = connected_graph(n, rng);
    const int p = 1 + trial % 3;
    const Family f = kFamilies[1 + trial % 3];
    const auto dc = random_parameters(f, p, rng(), 0).without_cd();
    std::vector<double> qv(dc.values().begin(), dc.values().begin() + 2 * p);
    const auto a = run_ansatz(AnsatzSpec::make(f, p, g), dc);
    const auto b = run_ansatz(AnsatzSpec::make(Family::Qaoa, p, g), ParameterVector(Family::Qaoa, p, qv));
    EXPECT_EQ(oracle::max_abs_diff(a, b), 0.0);
  }
}

TEST(Ansatz, MatchedCnotLayers) {
  EXPECT_EQ(matched_cnot_layers(Family::DcNc, 1, Family::Qaoa), 3);
  EXPECT_EQ(matched_cnot_layers(Family::DcYy, 1, Family::Qaoa), 2);
  EXPECT_THROW(matched_cnot_layers(Family::DcNc, 1, Family::DcYy), std::invalid_argument);
}

TEST(Ansatz, CircuitTextRoundTrip) {
  const auto spec = AnsatzSpec::make(Family::DcYy, 2, complete_graph(3));
  const auto gates = build_circuit(spec, random_parameters(Family::DcYy, 2, 5, 0));
  std::stringstream ss;
  write_circuit(ss, gates);
  const auto back = read_circuit(ss);
  ASSERT_EQ(back.size(), gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    EXPECT_EQ(back[i].kind, gates[i].kind);
    EXPECT_EQ(back[i].qubits, gates[i].qubits);
    EXPECT_NEAR(back[i].angle, gates[i].angle, 1e-15);
  }
}

TEST(Ansatz, RejectsMismatchedParameters) {
  const auto spec = AnsatzSpec::make(Family::DcNc, 2, complete_graph(3));
  EXPECT_THROW(run_ansatz(spec, random_parameters(Family::Qaoa, 2, 0, 0)), std::invalid_argument);
  EXPECT_THROW(run_ansatz(spec, random_parameters(Family::DcNc, 3, 0, 0)), std::invalid_argument);
  EXPECT_THROW(AnsatzSpec::make(Family::Qaoa, 0, complete_graph(3)), std::invalid_argument);
}
