#include "dcqaoa/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dcqaoa {

namespace {


void check_qubit(const Statevector& s, int q) {
  if (q < 0 || q >= s.num_qubits()) {
    throw std::out_of_range("qubit index out of range");
  }
}

// i^k for k mod 4.
cplx i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

Statevector::Statevector(int n_qubits, int max_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > max_qubits) {
    throw std::length_error("statevector: qubit count outside the memory guard");
  }
  amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
  amps_[0] = 1.0;
}

Statevector::Statevector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits < 0 || amps_.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("statevector: amplitude count is not 2^n");
  }
}

double Statevector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

Statevector init_plus_state(int n, int max_qubits) {
  if (n < 1) throw std::length_error("init_plus_state: need at least one qubit");
  Statevector s(n, max_qubits);
  const double a = std::pow(2.0, -0.5 * n);
  std::fill(s.amplitudes().begin(), s.amplitudes().end(), cplx{a, 0.0});
  return s;
}

Statevector basis_state(int n, std::uint64_t index) {
  Statevector s(n);
  if (index >= s.dimension()) throw std::out_of_range("basis_state: index");
  s[0] = 0.0;
  s[index] = 1.0;
  return s;
}

PauliWord::PauliWord(std::vector<std::pair<int, Pauli>> factors) {
  for (const auto& [q, p] : factors) {
    if (q < 0 || q >= 64) throw std::invalid_argument("pauli word: qubit index");
    const std::uint64_t bit = std::uint64_t{1} << q;
    if ((x_mask_ | z_mask_) & bit) {
      throw std::invalid_argument("pauli word: repeated qubit");
    }
    bool seen_before = std::any_of(factors_.begin(), factors_.end(),
                                   [q = q](const auto& f) { return f.first == q; });
    if (seen_before) throw std::invalid_argument("pauli word: repeated qubit");
    switch (p) {
      case Pauli::I: continue;
      case Pauli::X: x_mask_ |= bit; break;
      case Pauli::Z: z_mask_ |= bit; break;
      case Pauli::Y:
        x_mask_ |= bit;
        z_mask_ |= bit;
        ++num_y_;
        break;
    }
    factors_.emplace_back(q, p);
  }
  if (factors_.empty()) throw std::invalid_argument("pauli word: empty");
}

PauliWord PauliWord::parse(std::string_view text) {
  std::vector<std::pair<int, Pauli>> factors;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token.size() < 2) throw std::invalid_argument("pauli word: bad token " + token);
    Pauli p;
    switch (token[0]) {
      case 'X': p = Pauli::X; break;
      case 'Y': p = Pauli::Y; break;
      case 'Z': p = Pauli::Z; break;
      case 'I': p = Pauli::I; break;
      default: throw std::invalid_argument("pauli word: bad token " + token);
    }
    std::size_t used = 0;
    int q = 0;
    try {
      q = std::stoi(token.substr(1), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("pauli word: bad token " + token);
    }
    if (used != token.size() - 1) {
      throw std::invalid_argument("pauli word: bad token " + token);
    }
    factors.emplace_back(q, p);
  }
  return PauliWord(std::move(factors));
}

int PauliWord::max_qubit() const {
  int m = -1;
  for (const auto& f : factors_) m = std::max(m, f.first);
  return m;
}

std::string PauliWord::to_string() const {
  std::string out;
  for (const auto& [q, p] : factors_) {
    if (!out.empty()) out += ' ';
    out += "IXYZ"[static_cast<int>(p)];
    out += std::to_string(q);
  }
  return out;
}

GateOp GateOp::single(GateKind kind, int q, double angle) {
  GateOp g;
  g.kind = kind;
  g.qubits = {q, -1};
  g.angle = angle;
  if (g.arity() != 1) throw std::invalid_argument("gate: expected a single-qubit kind");
  return g;
}

GateOp GateOp::pair(GateKind kind, int q0, int q1, double angle) {
  GateOp g;
  g.kind = kind;
  g.qubits = {q0, q1};
  g.angle = angle;
  if (g.arity() != 2) throw std::invalid_argument("gate: expected a two-qubit kind");
  if (q0 == q1) throw std::invalid_argument("gate: qubits must be distinct");
  return g;
}

int GateOp::arity() const {
  switch (kind) {
    case GateKind::CNOT:
    case GateKind::RZZ:
    case GateKind::RYY:
    case GateKind::RYZ:
      return 2;
    default:
      return 1;
  }
}

bool GateOp::has_angle() const {
  return !(kind == GateKind::H || kind == GateKind::HY || kind == GateKind::CNOT);
}

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::H: return "H";
    case GateKind::HY: return "HY";
    case GateKind::CNOT: return "CNOT";
    case GateKind::RZZ: return "RZZ";
    case GateKind::RYY: return "RYY";
    case GateKind::RYZ: return "RYZ";
  }
  return "?";
}

GateKind parse_gate_kind(std::string_view name) {
  for (auto k : {GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::H, GateKind::HY,
                 GateKind::CNOT, GateKind::RZZ, GateKind::RYY, GateKind::RYZ}) {
    if (gate_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown gate kind: " + std::string(name));
}

Matrix2 single_qubit_matrix(const GateOp& gate) {
  const double c = std::cos(0.5 * gate.angle);
  const double s = std::sin(0.5 * gate.angle);
  const double r = 1.0 / std::sqrt(2.0);
  switch (gate.kind) {
    case GateKind::RX: return {cplx{c, 0}, cplx{0, -s}, cplx{0, -s}, cplx{c, 0}};
    case GateKind::RY: return {cplx{c, 0}, cplx{-s, 0}, cplx{s, 0}, cplx{c, 0}};
    case GateKind::RZ: return {cplx{c, -s}, cplx{0, 0}, cplx{0, 0}, cplx{c, s}};
    case GateKind::H: return {cplx{r, 0}, cplx{r, 0}, cplx{r, 0}, cplx{-r, 0}};
    // (Y + Z)/sqrt(2) = [[1, -i], [i, -1]] / sqrt(2)
    case GateKind::HY: return {cplx{r, 0}, cplx{0, -r}, cplx{0, r}, cplx{-r, 0}};
    default: throw std::invalid_argument("single_qubit_matrix: not a single-qubit gate");
  }
}

void apply_matrix(Statevector& s, int qubit, const Matrix2& m) {
  check_qubit(s, qubit);
  auto amps = s.amplitudes();
  const std::size_t stride = std::size_t{1} << qubit;
  const std::size_t dim = amps.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amps[i];
      const cplx a1 = amps[i + stride];
      amps[i] = m[0] * a0 + m[1] * a1;
      amps[i + stride] = m[2] * a0 + m[3] * a1;
    }
  }
}

void apply_cnot(Statevector& s, int control, int target) {
  check_qubit(s, control);
  check_qubit(s, target);
  if (control == target) throw std::invalid_argument("cnot: control equals target");
  auto amps = s.amplitudes();
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amps[i], amps[i | tbit]);
  }
}

void apply_gate(Statevector& s, const GateOp& gate) {
  switch (gate.kind) {
    case GateKind::CNOT:
      apply_cnot(s, gate.qubits[0], gate.qubits[1]);
      return;
    case GateKind::RZZ:
      check_qubit(s, gate.qubits[0]);
      check_qubit(s, gate.qubits[1]);
      apply_pauli_rotation(
          s, PauliWord({{gate.qubits[0], Pauli::Z}, {gate.qubits[1], Pauli::Z}}),
          gate.angle);
      return;
    case GateKind::RYY:
      check_qubit(s, gate.qubits[0]);
      check_qubit(s, gate.qubits[1]);
      apply_pauli_rotation(
          s, PauliWord({{gate.qubits[0], Pauli::Y}, {gate.qubits[1], Pauli::Y}}),
          gate.angle);
      return;
    case GateKind::RYZ:
      check_qubit(s, gate.qubits[0]);
      check_qubit(s, gate.qubits[1]);
      // Y0 Z1 and Z0 Y1 commute, so the pair exponential factorizes exactly.
      apply_pauli_rotation(
          s, PauliWord({{gate.qubits[0], Pauli::Y}, {gate.qubits[1], Pauli::Z}}),
          gate.angle);
      apply_pauli_rotation(
          s, PauliWord({{gate.qubits[0], Pauli::Z}, {gate.qubits[1], Pauli::Y}}),
          gate.angle);
      return;
    default:
      apply_matrix(s, gate.qubits[0], single_qubit_matrix(gate));
  }
}

void apply_gates(Statevector& s, std::span<const GateOp> gates) {
  for (const auto& g : gates) apply_gate(s, g);
}

namespace {

void check_word(const Statevector& s, const PauliWord& word) {
  if (word.factors().empty()) throw std::invalid_argument("pauli word: empty");
  if (word.max_qubit() >= s.num_qubits()) {
    throw std::out_of_range("pauli word acts outside the register");
  }
}

}  // namespace

// P|b> = i^{#Y} (-1)^{popcount(b & z)} |b ^ x>, with Y qubits in both masks.
void apply_pauli(Statevector& s, const PauliWord& word) {
  check_word(s, word);
  auto amps = s.amplitudes();
  const std::uint64_t x = word.x_mask();
  const std::uint64_t z = word.z_mask();
  const cplx phase = i_power(word.num_y());
  if (x == 0) {
    for (std::size_t b = 0; b < amps.size(); ++b) {
      if (std::popcount(b & z) & 1) amps[b] = -amps[b];
    }
    return;
  }
  for (std::size_t b = 0; b < amps.size(); ++b) {
    const std::size_t bp = b ^ x;
    if (bp < b) continue;
    const cplx pb = (std::popcount(b & z) & 1) ? -phase : phase;
    const cplx pbp = (std::popcount(bp & z) & 1) ? -phase : phase;
    const cplx ab = amps[b];
    amps[b] = pbp * amps[bp];
    amps[bp] = pb * ab;
  }
}

cplx pauli_matrix_element(const Statevector& bra, const PauliWord& word,
                          const Statevector& ket) {
  if (bra.num_qubits() != ket.num_qubits()) {
    throw std::invalid_argument("pauli_matrix_element: dimension mismatch");
  }
  check_word(ket, word);
  const auto a = bra.amplitudes();
  const auto b = ket.amplitudes();
  const std::uint64_t x = word.x_mask();
  const std::uint64_t z = word.z_mask();
  // (P ket)_i = phase(i ^ x) ket_{i ^ x}; sum the sign-split halves first.
  cplx plus{0.0, 0.0};
  cplx minus{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t j = i ^ x;
    const cplx term = std::conj(a[i]) * b[j];
    if (std::popcount(j & z) & 1) {
      minus += term;
    } else {
      plus += term;
    }
  }
  return i_power(word.num_y()) * (plus - minus);
}

void apply_pauli_rotation(Statevector& s, const PauliWord& word, double angle) {
  check_word(s, word);
  auto amps = s.amplitudes();
  const std::uint64_t x = word.x_mask();
  const std::uint64_t z = word.z_mask();
  const double c = std::cos(angle);
  const double sn = std::sin(angle);
  const cplx phase = i_power(word.num_y());
  if (x == 0) {
    // Diagonal word: eigenvalue +-1 per basis state.
    const cplx plus{c, -sn};
    const cplx minus{c, sn};
    for (std::size_t b = 0; b < amps.size(); ++b) {
      amps[b] *= (std::popcount(b & z) & 1) ? minus : plus;
    }
    return;
  }
  const cplx mis{0.0, -sn};
  for (std::size_t b = 0; b < amps.size(); ++b) {
    const std::size_t bp = b ^ x;
    if (bp < b) continue;
    const cplx pb = (std::popcount(b & z) & 1) ? -phase : phase;
    const cplx pbp = (std::popcount(bp & z) & 1) ? -phase : phase;
    const cplx ab = amps[b];
    const cplx abp = amps[bp];
    amps[b] = c * ab + mis * pbp * abp;
    amps[bp] = c * abp + mis * pb * ab;
  }
}

void apply_diagonal_phase(Statevector& s, std::span<const double> diag, double angle) {
  auto amps = s.amplitudes();
  if (diag.size() != amps.size()) {
    throw std::invalid_argument("diagonal phase: dimension mismatch");
  }
  for (std::size_t b = 0; b < amps.size(); ++b) {
    const double t = angle * diag[b];
    amps[b] *= cplx{std::cos(t), -std::sin(t)};
  }
}

void apply_diagonal(Statevector& s, std::span<const double> diag) {
  auto amps = s.amplitudes();
  if (diag.size() != amps.size()) {
    throw std::invalid_argument("diagonal: dimension mismatch");
  }
  for (std::size_t b = 0; b < amps.size(); ++b) amps[b] *= diag[b];
}

cplx inner_product(const Statevector& a, const Statevector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  cplx acc{0.0, 0.0};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

double projector_overlap(const Statevector& s,
                         std::span<const std::uint64_t> basis_indices) {
  double acc = 0.0;
  for (auto i : basis_indices) {
    if (i >= s.dimension()) throw std::out_of_range("projector_overlap: index");
    acc += std::norm(s[i]);
  }
  return acc;
}

nlohmann::json amplitudes_to_json(const Statevector& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : s.amplitudes()) out.push_back({a.real(), a.imag()});
  return out;
}

}  // namespace dcqaoa
