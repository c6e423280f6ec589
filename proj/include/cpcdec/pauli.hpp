#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace cpcdec {

/// Single-qubit Pauli class. Y is a simultaneous X and Z component.
enum class PauliClass : int { I = 0, X = 1, Z = 2, Y = 3 };

inline PauliClass pauli_class(int x_bit, int z_bit) {
  return static_cast<PauliClass>((x_bit & 1) | ((z_bit & 1) << 1));
}

inline char pauli_char(PauliClass c) {
  return "IXZY"[static_cast<int>(c)];
}

/// n-qubit Pauli in binary symplectic form. Bit q of `x` (`z`) is the
/// X (Z) component on qubit q. Supports up to 64 qubits.
struct PauliOperator {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int n = 0;

  static PauliOperator identity(int n) { return {0, 0, n}; }

  PauliClass class_on(int q) const { return pauli_class((x >> q) & 1, (z >> q) & 1); }

  void set_class(int q, PauliClass c) {
    const auto v = static_cast<unsigned>(c);
    x = (x & ~(std::uint64_t{1} << q)) | (std::uint64_t{v & 1u} << q);
    z = (z & ~(std::uint64_t{1} << q)) | (std::uint64_t{(v >> 1) & 1u} << q);
  }

  int weight() const { return std::popcount(x | z); }

  bool operator==(const PauliOperator&) const = default;

  std::string str() const {
    std::string s(static_cast<size_t>(n), 'I');
    for (int q = 0; q < n; ++q) s[q] = pauli_char(class_on(q));
    return s;
  }
};

/// Parity of the bits of `mask`: +1 for even, -1 for odd.
inline int parity_sign(std::uint64_t mask) {
  return (std::popcount(mask) & 1) ? -1 : +1;
}

}  // namespace cpcdec
