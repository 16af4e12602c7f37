#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcqaoa/graph.hpp"
#include "dcqaoa/hamiltonian.hpp"
#include "dcqaoa/statevector.hpp"

namespace dcqaoa {

/// Ansatz families. The DC variants append a counterdiabatic block to each
/// QAOA layer:
///   DcNc: sum over edges of (Y_j Z_k + Z_j Y_k), 4 CNOTs per edge
///   DcYy: sum over edges of Y_j Y_k, 2 CNOTs per edge
///   DcY:  sum over qubits of Y_j, no CNOTs
enum class Family { Qaoa, DcNc, DcYy, DcY };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);
std::vector<Family> parse_family_list(std::string_view csv);
bool has_cd_term(Family f);
int num_params(Family f, int layers);

/// CNOTs per edge per layer: 2 (QAOA), 6 (NC), 4 (YY), 2 (Y).
int cnot_per_edge(Family f);

struct AnsatzSpec {
  Family family = Family::Qaoa;
  int layers = 1;
  Graph graph;
  MixerHamiltonian mixer;

  static AnsatzSpec make(Family family, int layers, Graph graph);

  int n_qubits() const { return graph.num_vertices(); }
  int num_params() const { return dcqaoa::num_params(family, layers); }
};

/// Layout [alpha_1..alpha_p, beta_1..beta_p, (gamma_1..gamma_p)]. The layout
/// depends only on family and depth, never on the instance size.
class ParameterVector {
 public:
  ParameterVector() = default;
  ParameterVector(Family family, int layers);
  ParameterVector(Family family, int layers, std::vector<double> values);

  Family family() const { return family_; }
  int layers() const { return layers_; }
  std::size_t size() const { return values_.size(); }

  double alpha(int l) const { return values_.at(l); }
  double beta(int l) const { return values_.at(layers_ + l); }
  double gamma(int l) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Same vector with every gamma set to zero.
  ParameterVector without_cd() const;

  friend bool operator==(const ParameterVector&, const ParameterVector&) = default;

 private:
  Family family_ = Family::Qaoa;
  int layers_ = 0;
  std::vector<double> values_;
};

struct GateCountReport {
  long long cnot_total = 0;
  long long cnot_per_layer = 0;
  long long single_qubit_total = 0;
  int layers = 0;

  friend bool operator==(const GateCountReport&, const GateCountReport&) = default;
};

/// Logical gate at unit parameter: the angle holds the coefficient that
/// multiplies parameter `param`.
struct TemplateGate {
  GateOp gate;
  int param = 0;
};

std::vector<TemplateGate> logical_template(const AnsatzSpec& spec);

/// Logical circuit: RZZ per edge, RX per qubit, then RYZ / RYY / RY
/// cd-terms. Layer l applies U_f(alpha_l), U_i(beta_l), U_cd(gamma_l) in
/// that order; terms within a block follow edge-list order.
std::vector<GateOp> build_logical_circuit(const AnsatzSpec& spec,
                                          const ParameterVector& params);

/// CNOT-level decomposition of one gate into {RX, RY, RZ, HY, CNOT}.
std::vector<GateOp> decompose(const GateOp& gate);

/// Full CNOT-level circuit (decomposed logical circuit).
std::vector<GateOp> build_circuit(const AnsatzSpec& spec, const ParameterVector& params);

GateCountReport count_gates(const AnsatzSpec& spec);

/// Literal scan of a CNOT-level gate list.
GateCountReport scan_gate_counts(std::span<const GateOp> gates, int layers);

/// Depth of family_b that spends exactly the CNOT budget of (family_a, p_a).
int matched_cnot_layers(Family family_a, int p_a, Family family_b);

/// One gate per line: "KIND q0 [q1] [angle]".
void write_circuit(std::ostream& out, std::span<const GateOp> gates);
std::vector<GateOp> read_circuit(std::istream& in);

/// A product of exponentials exp(-i coeff theta_param G) with G either a
/// Pauli word or a real diagonal. This is the direct-exponential route used
/// for simulation and differentiation.
class ParametricCircuit {
 public:
  struct Term {
    PauliWord word;                                  // used when diagonal is null
    std::shared_ptr<const std::vector<double>> diagonal;
    double coeff = 1.0;
    int param = 0;
  };

  ParametricCircuit(int n_qubits, int num_params);

  void add_pauli(PauliWord word, double coeff, int param);
  void add_diagonal(std::shared_ptr<const std::vector<double>> diagonal, double coeff,
                    int param);

  int n_qubits() const { return n_qubits_; }
  int num_params() const { return num_params_; }
  const std::vector<Term>& terms() const { return terms_; }

  void apply(Statevector& s, std::span<const double> params) const;
  Statevector run(const Statevector& initial, std::span<const double> params) const;

  /// <psi|O|psi> for a real diagonal observable O, with its exact gradient by
  /// reverse-mode (adjoint) sweep. grad must have num_params() entries.
  double expectation_and_gradient(const Statevector& initial,
                                  std::span<const double> params,
                                  std::span<const double> observable,
                                  std::span<double> grad) const;

  /// Output state and d|psi>/d theta_k for every parameter (forward mode).
  std::vector<Statevector> state_and_tangents(const Statevector& initial,
                                              std::span<const double> params) const;

 private:
  void apply_term(Statevector& s, const Term& t, double theta) const;
  void apply_generator(Statevector& s, const Term& t) const;
  cplx generator_element(const Statevector& bra, const Term& t,
                         const Statevector& ket) const;

  int n_qubits_;
  int num_params_;
  std::vector<Term> terms_;
};

ParametricCircuit compile_ansatz(const AnsatzSpec& spec);

/// Applies the ansatz to |+>^n through direct generator exponentials.
Statevector run_ansatz(const AnsatzSpec& spec, const ParameterVector& params);

}  // namespace dcqaoa
