#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dcqaoa {

using cplx = std::complex<double>;

inline constexpr int kDefaultMaxQubits = 26;

/// Dense statevector. Bit q of a basis index is the state of qubit q
/// (little-endian), so |q1 q0> = |10> is index 2.
class Statevector {
 public:
  Statevector() = default;
  /// |0...0>.
  explicit Statevector(int n_qubits, int max_qubits = kDefaultMaxQubits);
  Statevector(int n_qubits, std::vector<cplx> amplitudes);

  int num_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amps_.size(); }

  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;

 private:
  int n_qubits_ = 0;
  std::vector<cplx> amps_;
};

/// Uniform superposition |+>^n.
Statevector init_plus_state(int n, int max_qubits = kDefaultMaxQubits);
Statevector basis_state(int n, std::uint64_t index);

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Tensor product of single-qubit Paulis on distinct qubits, e.g. "Y0 Z3".
class PauliWord {
 public:
  PauliWord() = default;
  explicit PauliWord(std::vector<std::pair<int, Pauli>> factors);
  static PauliWord parse(std::string_view text);

  const std::vector<std::pair<int, Pauli>>& factors() const { return factors_; }
  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }
  int num_y() const { return num_y_; }
  int max_qubit() const;
  std::string to_string() const;

 private:
  std::vector<std::pair<int, Pauli>> factors_;
  std::uint64_t x_mask_ = 0;
  std::uint64_t z_mask_ = 0;
  int num_y_ = 0;
};

enum class GateKind : std::uint8_t { RX, RY, RZ, H, HY, CNOT, RZZ, RYY, RYZ };

/// Single-qubit rotations use R_a(theta) = exp(-i theta sigma_a / 2).
/// Two-qubit rotations use the layer convention without the half angle:
/// RZZ(theta) = exp(-i theta Z Z), RYY(theta) = exp(-i theta Y Y) and
/// RYZ(theta) = exp(-i theta (Y_q0 Z_q1 + Z_q0 Y_q1)). HY = (Y + Z)/sqrt(2).
/// CNOT uses qubits[0] as control and qubits[1] as target.
struct GateOp {
  GateKind kind = GateKind::H;
  std::array<int, 2> qubits{0, -1};
  double angle = 0.0;

  static GateOp single(GateKind kind, int q, double angle = 0.0);
  static GateOp pair(GateKind kind, int q0, int q1, double angle = 0.0);

  int arity() const;
  bool has_angle() const;

  friend bool operator==(const GateOp&, const GateOp&) = default;
};

std::string_view gate_name(GateKind kind);
GateKind parse_gate_kind(std::string_view name);

using Matrix2 = std::array<cplx, 4>;  // row-major

/// 2x2 unitary of a single-qubit gate kind.
Matrix2 single_qubit_matrix(const GateOp& gate);

void apply_matrix(Statevector& s, int qubit, const Matrix2& m);
void apply_cnot(Statevector& s, int control, int target);
void apply_gate(Statevector& s, const GateOp& gate);
void apply_gates(Statevector& s, std::span<const GateOp> gates);

/// Applies the Pauli operator itself (not a rotation).
void apply_pauli(Statevector& s, const PauliWord& word);

/// <bra|P|ket>.
cplx pauli_matrix_element(const Statevector& bra, const PauliWord& word,
                          const Statevector& ket);

/// exp(-i angle P) = cos(angle) I - i sin(angle) P.
void apply_pauli_rotation(Statevector& s, const PauliWord& word, double angle);

/// amp_z <- exp(-i angle diag_z) amp_z.
void apply_diagonal_phase(Statevector& s, std::span<const double> diag,
                          double angle);

/// Multiplies amplitudes by a real diagonal (not unitary).
void apply_diagonal(Statevector& s, std::span<const double> diag);

/// <a|b>, conjugating a.
cplx inner_product(const Statevector& a, const Statevector& b);

/// Sum of |amp_i|^2 over the given basis indices.
double projector_overlap(const Statevector& s,
                         std::span<const std::uint64_t> basis_indices);

nlohmann::json amplitudes_to_json(const Statevector& s);

}  // namespace dcqaoa
