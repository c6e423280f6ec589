#include "cpcdec/propagation.hpp"

#include <sstream>

namespace cpcdec {

PauliEffect propagate(const CpcCode& code, const PauliOperator& error) {
  const int n = code.n;
  const int k = code.k;
  const int r = code.num_parity();
  if (error.n != n) throw std::invalid_argument("error length does not match code");

  std::uint64_t x = error.x;
  std::uint64_t z = error.z;

  // Cross stage: Z on parity j adds X on parity j' wherever M_c connects
  // them (in either direction).
  std::uint64_t add_x = 0;
  for (int j = 0; j < r; ++j) {
    if (!((z >> (k + j)) & 1)) continue;
    for (int jp = 0; jp < r; ++jp) {
      if (code.mc.at(j, jp) || code.mc.at(jp, j)) add_x ^= std::uint64_t{1} << (k + jp);
    }
  }
  x ^= add_x;

  // Phase stage: Z on data i adds X on parity j; Z on parity j adds X on
  // data i, for M_p[j][i] = 1.
  add_x = 0;
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < k; ++i) {
      if (!code.mp.at(j, i)) continue;
      if ((z >> i) & 1) add_x ^= std::uint64_t{1} << (k + j);
      if ((z >> (k + j)) & 1) add_x ^= std::uint64_t{1} << i;
    }
  }
  x ^= add_x;

  // Bit stage: X on data i adds X on parity j; Z on parity j adds Z on
  // data i, for M_b[j][i] = 1.
  add_x = 0;
  std::uint64_t add_z = 0;
  for (int j = 0; j < r; ++j) {
    for (int i = 0; i < k; ++i) {
      if (!code.mb.at(j, i)) continue;
      if ((x >> i) & 1) add_x ^= std::uint64_t{1} << (k + j);
      if ((z >> (k + j)) & 1) add_z ^= std::uint64_t{1} << i;
    }
  }
  x ^= add_x;
  z ^= add_z;

  PauliEffect effect;
  effect.syndrome = (x >> k) & ((std::uint64_t{1} << r) - 1);
  const std::uint64_t data_mask = (std::uint64_t{1} << k) - 1;
  effect.logical_x = x & data_mask;
  effect.logical_z = z & data_mask;
  return effect;
}

PauliEffect PropagationModel::apply(const PauliOperator& error) const {
  PauliEffect effect;
  for (int q = 0; q < n; ++q) {
    if ((error.x >> q) & 1) effect ^= columns[q];
    if ((error.z >> q) & 1) effect ^= columns[n + q];
  }
  return effect;
}

std::vector<PauliClass> PropagationModel::logical_classes(const PauliOperator& error) const {
  const PauliEffect e = apply(error);
  std::vector<PauliClass> classes(k);
  for (int q = 0; q < k; ++q) classes[q] = pauli_class((e.logical_x >> q) & 1, (e.logical_z >> q) & 1);
  return classes;
}

PropagationModel build_propagation_model(const CpcCode& code) {
  validate_code(code);
  PropagationModel model;
  model.n = code.n;
  model.k = code.k;
  model.columns.reserve(2 * code.n);
  for (int q = 0; q < code.n; ++q) {
    PauliOperator e = PauliOperator::identity(code.n);
    e.x = std::uint64_t{1} << q;
    model.columns.push_back(propagate(code, e));
  }
  for (int q = 0; q < code.n; ++q) {
    PauliOperator e = PauliOperator::identity(code.n);
    e.z = std::uint64_t{1} << q;
    model.columns.push_back(propagate(code, e));
  }
  // INV-X: an X error on parity qubit j must surface as exactly syndrome
  // bit j with no logical action; otherwise the implicit treatment of
  // parity-qubit bit errors breaks down.
  for (int j = 0; j < code.num_parity(); ++j) {
    const PauliEffect& col = model.columns[code.k + j];
    if (col.syndrome != (std::uint64_t{1} << j) || col.logical_x != 0 || col.logical_z != 0) {
      std::ostringstream os;
      os << "INV-X violated for parity qubit " << j << " (gate-convention mismatch)";
      throw CodeError(os.str());
    }
  }
  return model;
}

int explicit_var_column(const PropagationModel& model, int v) {
  const int n = model.n;
  const int k = model.k;
  if (v < k) return v;                       // X on data qubit v
  if (v < 2 * k) return n + (v - k);         // Z on data qubit v-k
  return n + k + (v - 2 * k);                // Z on parity qubit v-2k
}

CheckSets derive_check_sets(const PropagationModel& model) {
  CheckSets checks;
  checks.n = model.n;
  checks.k = model.k;
  const int r = model.num_parity();
  checks.q_masks.assign(r, 0);
  checks.self_loop.assign(r, false);
  for (int v = 0; v < checks.num_explicit(); ++v) {
    const PauliEffect& col = model.columns[explicit_var_column(model, v)];
    for (int j = 0; j < r; ++j) {
      if ((col.syndrome >> j) & 1) checks.q_masks[j] |= std::uint64_t{1} << v;
    }
  }
  for (int j = 0; j < r; ++j) {
    checks.self_loop[j] =
        ((checks.q_masks[j] >> var_parity_phase(model.k, j)) & 1) != 0;
  }
  return checks;
}

namespace {

bool search_weight(const PropagationModel& model, int weight, int first, int remaining,
                   PauliEffect acc, std::uint64_t used_qubits) {
  if (remaining == 0) {
    return acc.syndrome == 0 && (acc.logical_x != 0 || acc.logical_z != 0);
  }
  for (int q = first; q <= model.n - remaining; ++q) {
    for (int cls = 1; cls < 4; ++cls) {
      PauliEffect next = acc;
      if (cls & 1) next ^= model.columns[q];
      if (cls & 2) next ^= model.columns[model.n + q];
      if (search_weight(model, weight, q + 1, remaining - 1, next, used_qubits)) return true;
    }
  }
  return false;
}

}  // namespace

int code_distance(const PropagationModel& model) {
  for (int w = 1; w <= model.n; ++w) {
    if (search_weight(model, w, 0, w, PauliEffect{}, 0)) return w;
  }
  return kDistanceUnbounded;
}

}  // namespace cpcdec
