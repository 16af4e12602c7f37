#include "dcqaoa/ansatz.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dcqaoa {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Qaoa: return "qaoa";
    case Family::DcNc: return "dc-nc";
    case Family::DcYy: return "dc-yy";
    case Family::DcY: return "dc-y";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (auto f : {Family::Qaoa, Family::DcNc, Family::DcYy, Family::DcY}) {
    if (family_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown ansatz family: " + std::string(name));
}

std::vector<Family> parse_family_list(std::string_view csv) {
  std::vector<Family> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    auto item = csv.substr(start, comma == std::string_view::npos
                                      ? std::string_view::npos
                                      : comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.push_back(parse_family(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty family list");
  return out;
}

bool has_cd_term(Family f) { return f != Family::Qaoa; }

int num_params(Family f, int layers) { return (has_cd_term(f) ? 3 : 2) * layers; }

int cnot_per_edge(Family f) {
  switch (f) {
    case Family::Qaoa: return 2;
    case Family::DcNc: return 6;
    case Family::DcYy: return 4;
    case Family::DcY: return 2;
  }
  return 0;
}

AnsatzSpec AnsatzSpec::make(Family family, int layers, Graph graph) {
  if (layers < 1) throw std::invalid_argument("ansatz: need at least one layer");
  if (graph.num_vertices() < 1) throw std::invalid_argument("ansatz: empty graph");
  AnsatzSpec spec;
  spec.family = family;
  spec.layers = layers;
  spec.mixer = MixerHamiltonian::uniform(graph.num_vertices());
  spec.graph = std::move(graph);
  return spec;
}

ParameterVector::ParameterVector(Family family, int layers)
    : ParameterVector(family, layers,
                      std::vector<double>(dcqaoa::num_params(family, layers), 0.0)) {}

ParameterVector::ParameterVector(Family family, int layers, std::vector<double> values)
    : family_(family), layers_(layers), values_(std::move(values)) {
  if (layers < 1) throw std::invalid_argument("parameters: need at least one layer");
  if (static_cast<int>(values_.size()) != dcqaoa::num_params(family, layers)) {
    throw std::invalid_argument("parameters: length does not match family and depth");
  }
}

double ParameterVector::gamma(int l) const {
  if (!has_cd_term(family_)) throw std::logic_error("parameters: family has no gamma block");
  return values_.at(2 * layers_ + l);
}

ParameterVector ParameterVector::without_cd() const {
  ParameterVector out = *this;
  if (has_cd_term(family_)) {
    for (int l = 0; l < layers_; ++l) out.values_[2 * layers_ + l] = 0.0;
  }
  return out;
}

namespace {

void check_params(const AnsatzSpec& spec, const ParameterVector& params) {
  if (params.family() != spec.family || params.layers() != spec.layers) {
    throw std::invalid_argument("parameters do not match the ansatz spec");
  }
  if (static_cast<int>(spec.mixer.field_weights.size()) != spec.n_qubits()) {
    throw std::invalid_argument("mixer weights do not match the qubit count");
  }
}

}  // namespace

std::vector<TemplateGate> logical_template(const AnsatzSpec& spec) {
  const int n = spec.n_qubits();
  const int p = spec.layers;
  if (static_cast<int>(spec.mixer.field_weights.size()) != n) {
    throw std::invalid_argument("mixer weights do not match the qubit count");
  }
  std::vector<TemplateGate> gates;
  for (int l = 0; l < p; ++l) {
    const int alpha = l;
    const int beta = p + l;
    const int gamma = 2 * p + l;
    for (const auto& e : spec.graph.edges()) {
      gates.push_back({GateOp::pair(GateKind::RZZ, e.u, e.v, e.weight), alpha});
    }
    for (int q = 0; q < n; ++q) {
      gates.push_back({GateOp::single(GateKind::RX, q, 2.0 * spec.mixer.field_weights[q]), beta});
    }
    switch (spec.family) {
      case Family::Qaoa:
        break;
      case Family::DcNc:
        for (const auto& e : spec.graph.edges()) {
          gates.push_back({GateOp::pair(GateKind::RYZ, e.u, e.v, e.weight), gamma});
        }
        break;
      case Family::DcYy:
        for (const auto& e : spec.graph.edges()) {
          gates.push_back({GateOp::pair(GateKind::RYY, e.u, e.v, 1.0), gamma});
        }
        break;
      case Family::DcY:
        for (int q = 0; q < n; ++q) gates.push_back({GateOp::single(GateKind::RY, q, 2.0), gamma});
        break;
    }
  }
  return gates;
}

std::vector<GateOp> build_logical_circuit(const AnsatzSpec& spec,
                                          const ParameterVector& params) {
  check_params(spec, params);
  std::vector<GateOp> gates;
  for (auto t : logical_template(spec)) {
    t.gate.angle *= params.values()[t.param];
    gates.push_back(t.gate);
  }
  return gates;
}

namespace {

// exp(-i theta Z_a Z_b) = CNOT(a,b) RZ_b(2 theta) CNOT(a,b).
void emit_zz(std::vector<GateOp>& out, int a, int b, double theta) {
  out.push_back(GateOp::pair(GateKind::CNOT, a, b));
  out.push_back(GateOp::single(GateKind::RZ, b, 2.0 * theta));
  out.push_back(GateOp::pair(GateKind::CNOT, a, b));
}

}  // namespace

// HY swaps Y and Z under conjugation (HY Z HY = Y), so each Y factor is a
// HY-conjugated Z factor of the ZZ ladder.
std::vector<GateOp> decompose(const GateOp& gate) {
  std::vector<GateOp> out;
  const int a = gate.qubits[0];
  const int b = gate.qubits[1];
  switch (gate.kind) {
    case GateKind::RZZ:
      emit_zz(out, a, b, gate.angle);
      break;
    case GateKind::RYY:
      out.push_back(GateOp::single(GateKind::HY, a));
      out.push_back(GateOp::single(GateKind::HY, b));
      emit_zz(out, a, b, gate.angle);
      out.push_back(GateOp::single(GateKind::HY, a));
      out.push_back(GateOp::single(GateKind::HY, b));
      break;
    case GateKind::RYZ:
      // Y_a Z_b
      out.push_back(GateOp::single(GateKind::HY, a));
      emit_zz(out, a, b, gate.angle);
      out.push_back(GateOp::single(GateKind::HY, a));
      // Z_a Y_b
      out.push_back(GateOp::single(GateKind::HY, b));
      emit_zz(out, a, b, gate.angle);
      out.push_back(GateOp::single(GateKind::HY, b));
      break;
    default:
      out.push_back(gate);
  }
  return out;
}

std::vector<GateOp> build_circuit(const AnsatzSpec& spec, const ParameterVector& params) {
  std::vector<GateOp> out;
  for (const auto& g : build_logical_circuit(spec, params)) {
    auto parts = decompose(g);
    out.insert(out.end(), parts.begin(), parts.end());
  }
  return out;
}

GateCountReport count_gates(const AnsatzSpec& spec) {
  const long long m = spec.graph.num_edges();
  const long long n = spec.n_qubits();
  long long single = m + n;  // RZ per edge in U_f, RX per qubit in U_i
  switch (spec.family) {
    case Family::Qaoa: break;
    case Family::DcNc: single += 6 * m; break;  // 2 RZ + 4 HY per edge
    case Family::DcYy: single += 5 * m; break;  // 1 RZ + 4 HY per edge
    case Family::DcY: single += n; break;
  }
  GateCountReport r;
  r.layers = spec.layers;
  r.cnot_per_layer = cnot_per_edge(spec.family) * m;
  r.cnot_total = r.cnot_per_layer * spec.layers;
  r.single_qubit_total = single * spec.layers;
  return r;
}

GateCountReport scan_gate_counts(std::span<const GateOp> gates, int layers) {
  GateCountReport r;
  r.layers = layers;
  for (const auto& g : gates) {
    if (g.kind == GateKind::CNOT) {
      ++r.cnot_total;
    } else if (g.arity() == 1) {
      ++r.single_qubit_total;
    } else {
      throw std::invalid_argument("scan_gate_counts: gate list is not CNOT-level");
    }
  }
  r.cnot_per_layer = layers > 0 ? r.cnot_total / layers : 0;
  return r;
}

int matched_cnot_layers(Family family_a, int p_a, Family family_b) {
  const int budget = cnot_per_edge(family_a) * p_a;
  const int per_layer = cnot_per_edge(family_b);
  if (p_a < 1 || budget % per_layer != 0) {
    throw std::invalid_argument("matched_cnot_layers: CNOT budgets are not divisible");
  }
  return budget / per_layer;
}

void write_circuit(std::ostream& out, std::span<const GateOp> gates) {
  const auto old_precision = out.precision(17);
  for (const auto& g : gates) {
    out << gate_name(g.kind) << ' ' << g.qubits[0];
    if (g.arity() == 2) out << ' ' << g.qubits[1];
    if (g.has_angle()) out << ' ' << g.angle;
    out << '\n';
  }
  out.precision(old_precision);
}

std::vector<GateOp> read_circuit(std::istream& in) {
  std::vector<GateOp> gates;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name;
    ls >> name;
    GateOp g;
    g.kind = parse_gate_kind(name);
    ls >> g.qubits[0];
    if (g.arity() == 2) ls >> g.qubits[1];
    if (g.has_angle()) ls >> g.angle;
    if (!ls) throw std::invalid_argument("circuit: malformed line: " + line);
    gates.push_back(g.arity() == 2 ? GateOp::pair(g.kind, g.qubits[0], g.qubits[1], g.angle)
                                   : GateOp::single(g.kind, g.qubits[0], g.angle));
  }
  return gates;
}

ParametricCircuit::ParametricCircuit(int n_qubits, int num_params)
    : n_qubits_(n_qubits), num_params_(num_params) {}

void ParametricCircuit::add_pauli(PauliWord word, double coeff, int param) {
  if (param < 0 || param >= num_params_) throw std::out_of_range("circuit: parameter index");
  if (word.max_qubit() >= n_qubits_) throw std::out_of_range("circuit: pauli word qubit");
  terms_.push_back({std::move(word), nullptr, coeff, param});
}

void ParametricCircuit::add_diagonal(std::shared_ptr<const std::vector<double>> diagonal,
                                     double coeff, int param) {
  if (param < 0 || param >= num_params_) throw std::out_of_range("circuit: parameter index");
  if (!diagonal || diagonal->size() != (std::size_t{1} << n_qubits_)) {
    throw std::invalid_argument("circuit: diagonal size");
  }
  terms_.push_back({PauliWord{}, std::move(diagonal), coeff, param});
}

void ParametricCircuit::apply_term(Statevector& s, const Term& t, double theta) const {
  const double angle = t.coeff * theta;
  if (t.diagonal) {
    apply_diagonal_phase(s, *t.diagonal, angle);
  } else {
    apply_pauli_rotation(s, t.word, angle);
  }
}

void ParametricCircuit::apply_generator(Statevector& s, const Term& t) const {
  if (t.diagonal) {
    apply_diagonal(s, *t.diagonal);
  } else {
    apply_pauli(s, t.word);
  }
}

cplx ParametricCircuit::generator_element(const Statevector& bra, const Term& t,
                                          const Statevector& ket) const {
  if (!t.diagonal) return pauli_matrix_element(bra, t.word, ket);
  const auto a = bra.amplitudes();
  const auto b = ket.amplitudes();
  const auto& d = *t.diagonal;
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * (d[i] * b[i]);
  return acc;
}

void ParametricCircuit::apply(Statevector& s, std::span<const double> params) const {
  if (static_cast<int>(params.size()) != num_params_) {
    throw std::invalid_argument("circuit: parameter count mismatch");
  }
  if (s.num_qubits() != n_qubits_) throw std::invalid_argument("circuit: qubit count mismatch");
  for (const auto& t : terms_) apply_term(s, t, params[t.param]);
}

Statevector ParametricCircuit::run(const Statevector& initial,
                                   std::span<const double> params) const {
  Statevector s = initial;
  apply(s, params);
  return s;
}

double ParametricCircuit::expectation_and_gradient(const Statevector& initial,
                                                   std::span<const double> params,
                                                   std::span<const double> observable,
                                                   std::span<double> grad) const {
  if (static_cast<int>(grad.size()) != num_params_) {
    throw std::invalid_argument("circuit: gradient buffer size");
  }
  Statevector phi = run(initial, params);
  Statevector lambda = phi;
  apply_diagonal(lambda, observable);
  const double value = inner_product(phi, lambda).real();
  std::fill(grad.begin(), grad.end(), 0.0);
  // Walk backwards; phi is the state right after term m and lambda is
  // U_{m+1}^dag ... U_K^dag O |psi>. d/dtheta of term m contributes
  // 2 Re <lambda| -i c G |phi> = 2 c Im <lambda|G|phi>.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& t = *it;
    grad[t.param] += 2.0 * t.coeff * generator_element(lambda, t, phi).imag();
    const double theta = params[t.param];
    apply_term(phi, t, -theta);
    apply_term(lambda, t, -theta);
  }
  return value;
}

std::vector<Statevector> ParametricCircuit::state_and_tangents(
    const Statevector& initial, std::span<const double> params) const {
  if (static_cast<int>(params.size()) != num_params_) {
    throw std::invalid_argument("circuit: parameter count mismatch");
  }
  std::vector<Statevector> out(num_params_ + 1, initial);
  for (int k = 1; k <= num_params_; ++k) {
    for (auto& a : out[k].amplitudes()) a = 0.0;
  }
  for (const auto& t : terms_) {
    const double theta = params[t.param];
    for (auto& s : out) apply_term(s, t, theta);
    // d(U phi)/dtheta = U dphi + (-i c G) U phi
    Statevector extra = out[0];
    apply_generator(extra, t);
    auto dst = out[t.param + 1].amplitudes();
    const auto src = extra.amplitudes();
    const cplx factor{0.0, -t.coeff};
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += factor * src[i];
  }
  return out;
}

ParametricCircuit compile_ansatz(const AnsatzSpec& spec) {
  const int n = spec.n_qubits();
  const int p = spec.layers;
  if (static_cast<int>(spec.mixer.field_weights.size()) != n) {
    throw std::invalid_argument("mixer weights do not match the qubit count");
  }
  ParametricCircuit circuit(n, spec.num_params());
  auto cost = std::make_shared<const std::vector<double>>(ising_diagonal(spec.graph));
  for (int l = 0; l < p; ++l) {
    const int alpha = l;
    const int beta = p + l;
    const int gamma = 2 * p + l;
    circuit.add_diagonal(cost, 1.0, alpha);
    for (int q = 0; q < n; ++q) {
      circuit.add_pauli(PauliWord({{q, Pauli::X}}), spec.mixer.field_weights[q], beta);
    }
    switch (spec.family) {
      case Family::Qaoa:
        break;
      case Family::DcNc:
        for (const auto& e : spec.graph.edges()) {
          circuit.add_pauli(PauliWord({{e.u, Pauli::Y}, {e.v, Pauli::Z}}), e.weight, gamma);
          circuit.add_pauli(PauliWord({{e.u, Pauli::Z}, {e.v, Pauli::Y}}), e.weight, gamma);
        }
        break;
      case Family::DcYy:
        for (const auto& e : spec.graph.edges()) {
          circuit.add_pauli(PauliWord({{e.u, Pauli::Y}, {e.v, Pauli::Y}}), 1.0, gamma);
        }
        break;
      case Family::DcY:
        for (int q = 0; q < n; ++q) circuit.add_pauli(PauliWord({{q, Pauli::Y}}), 1.0, gamma);
        break;
    }
  }
  return circuit;
}

Statevector run_ansatz(const AnsatzSpec& spec, const ParameterVector& params) {
  check_params(spec, params);
  return compile_ansatz(spec).run(init_plus_state(spec.n_qubits()), params.values());
}

}  // namespace dcqaoa
