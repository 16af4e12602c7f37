#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dcqaoa/hamiltonian.hpp"
#include "oracle.hpp"

using namespace dcqaoa;

namespace {

// Integer oracle: M - 2 * max over z of the cut, edge by edge.
long long integer_ground(const Graph& g) {
  const int n = g.num_vertices();
  long long best = 0;
  for (std::uint64_t z = 0; z < (1ULL << n); ++z) {
    long long c = 0;
    for (const auto& e : g.edges()) c += ((z >> e.u) & 1) != ((z >> e.v) & 1);
    best = std::max(best, c);
  }
  return g.num_edges() - 2 * best;
}

}  // namespace

TEST(Hamiltonian, K2Diagonal) {
  const auto h = maxcut_hamiltonian(Graph(2, {{0, 1, 1.0}}));
  EXPECT_EQ(h.diagonal, (std::vector<double>{1, -1, -1, 1}));
  EXPECT_EQ(h.ground_energy, -1.0);
  EXPECT_EQ(h.ground_indices, (std::vector<std::uint64_t>{1, 2}));
}

TEST(HamiltonianProperty, GroundEnergyIdentitySmallGraphs) {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 8; ++n) {
    for (int trial = 0; trial < 30; ++trial) {
      const Graph g = generate_random_graph(n, 0.2 + 0.02 * trial, rng());
      EXPECT_EQ(maxcut_hamiltonian(g).ground_energy, static_cast<double>(integer_ground(g)));
      EXPECT_EQ(maxcut_hamiltonian(g).ground_energy,
                g.num_edges() - 2 * brute_force_maxcut(g).cut_value);
    }
  }
}

TEST(HamiltonianProperty, GlobalFlipSymmetry) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 6;
    const auto hs = {maxcut_hamiltonian(generate_random_graph(n, 0.5, rng())),
                     sk_hamiltonian(n, rng())};
    for (const auto& h : hs) {
      const std::uint64_t mask = (1ULL << n) - 1;
      for (std::uint64_t z = 0; z <= mask; ++z) ASSERT_EQ(h.diagonal[z], h.diagonal[z ^ mask]);
    }
  }
}

TEST(HamiltonianProperty, MetricsIgnoreGroundIndexOrder) {
  std::mt19937_64 rng(9);
  const Graph g = generate_random_graph(6, 0.6, 3);
  auto h = maxcut_hamiltonian(g);
  const auto s = oracle::random_state(6, rng);
  const double f = fidelity_to_ground(h, s);
  const double r = approximation_ratio(h, s, g);
  std::reverse(h.ground_indices.begin(), h.ground_indices.end());
  EXPECT_EQ(fidelity_to_ground(h, s), f);
  EXPECT_EQ(approximation_ratio(h, s, g), r);
}

TEST(Hamiltonian, RatioOfGroundStateIsOne) {
  const Graph g = generate_random_graph(6, 0.5, 4);
  const auto h = maxcut_hamiltonian(g);
  const auto s = basis_state(6, h.ground_indices.front());
  EXPECT_NEAR(approximation_ratio(h, s, g), 1.0, 1e-12);
  EXPECT_NEAR(fidelity_to_ground(h, s), 1.0, 1e-12);
}

TEST(Hamiltonian, CostExpectationOfPlusState) {
  // Every ZZ term averages to zero on |+...+>.
  const Graph g = generate_random_graph(7, 0.5, 5);
  EXPECT_NEAR(cost_expectation(maxcut_hamiltonian(g), init_plus_state(7)), 0.0, 1e-12);
}

TEST(Hamiltonian, SkInstanceReproducibleAndComplete) {
  const auto a = sk_instance(6, 10);
  EXPECT_EQ(a.couplings.size(), 15u);
  EXPECT_EQ(sk_from_json(to_json(a)).couplings, a.couplings);
  EXPECT_EQ(sk_instance(6, 10).couplings, a.couplings);
  EXPECT_NE(sk_instance(6, 11).couplings, a.couplings);
  EXPECT_THROW(sk_instance(1, 0), std::invalid_argument);
}
