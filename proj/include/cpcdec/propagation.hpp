#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "cpcdec/cpc_code.hpp"
#include "cpcdec/pauli.hpp"

namespace cpcdec {

/// Net effect of a Pauli pushed through the three decode stages:
/// syndrome bit j is the final X component on parity qubit j, the logical
/// masks are the final X/Z components on data qubits.
struct PauliEffect {
  std::uint64_t syndrome = 0;   // n-k bits
  std::uint64_t logical_x = 0;  // k bits
  std::uint64_t logical_z = 0;  // k bits

  PauliEffect& operator^=(const PauliEffect& o) {
    syndrome ^= o.syndrome;
    logical_x ^= o.logical_x;
    logical_z ^= o.logical_z;
    return *this;
  }
  bool operator==(const PauliEffect&) const = default;
};

/// Propagate one Pauli through the decode circuit, stage order
/// cross -> phase -> bit. Stage rules (the convention under which the
/// implicit parity-bit-error treatment is exact; see README):
///   cross: for M_c[j][j'] = 1, Z on parity j adds X on parity j' and
///          Z on parity j' adds X on parity j.
///   phase: for M_p[j][i] = 1, Z on data i adds X on parity j and
///          Z on parity j adds X on data i.
///   bit:   for M_b[j][i] = 1, X on data i adds X on parity j and
///          Z on parity j adds Z on data i.
/// Within a stage all gates act on the stage input (no re-triggering).
PauliEffect propagate(const CpcCode& code, const PauliOperator& error);

/// Linear (GF(2)) tabulation of `propagate` over the 2n elementary errors.
/// Column order: X_0..X_{n-1}, Z_0..Z_{n-1}.
struct PropagationModel {
  int n = 0;
  int k = 0;
  std::vector<PauliEffect> columns;  // size 2n

  int num_parity() const { return n - k; }

  const PauliEffect& x_column(int q) const { return columns[q]; }
  const PauliEffect& z_column(int q) const { return columns[n + q]; }

  /// XOR of elementary columns for the given operator.
  PauliEffect apply(const PauliOperator& error) const;

  /// Logical classes on the k data qubits induced by `error`.
  std::vector<PauliClass> logical_classes(const PauliOperator& error) const;
};

/// Builds the model and asserts INV-X: X on parity qubit j must map to the
/// unit syndrome e_j with trivial logical action. A violation signals a
/// gate-convention mismatch and throws CodeError naming the parity qubit.
PropagationModel build_propagation_model(const CpcCode& code);

/// Explicit error-variable indexing shared by the Ising mapping:
/// 0..k-1 data-bit, k..2k-1 data-phase, 2k..n+k-1 parity-phase.
inline int var_data_bit(int /*k*/, int i) { return i; }
inline int var_data_phase(int k, int i) { return k + i; }
inline int var_parity_phase(int k, int j) { return 2 * k + j; }

/// Per-check variable sets Q_j over the n+k explicit variables.
struct CheckSets {
  int n = 0;
  int k = 0;
  std::vector<std::uint64_t> q_masks;  // size n-k, over explicit variables
  std::vector<bool> self_loop;         // parity-phase_j in Q_j

  int num_explicit() const { return n + k; }
};

CheckSets derive_check_sets(const PropagationModel& model);

/// Elementary-error column index for explicit variable v.
int explicit_var_column(const PropagationModel& model, int v);

/// Sentinel for a code with no undetected nontrivial error.
inline constexpr int kDistanceUnbounded = std::numeric_limits<int>::max();

/// Minimum weight of a Pauli with zero syndrome and nontrivial logical
/// action, by exhaustive search in increasing weight.
int code_distance(const PropagationModel& model);

}  // namespace cpcdec
