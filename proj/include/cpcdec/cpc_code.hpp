#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpcdec {

/// Error raised when a code file or matrix violates a structural invariant.
/// The message carries the offending row/column where applicable.
class CodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense binary matrix, row-major, entries in {0,1}.
struct BinaryMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;

  BinaryMatrix() = default;
  BinaryMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0) {}

  std::uint8_t at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  void set(int r, int c, std::uint8_t v) { data[static_cast<size_t>(r) * cols + c] = v; }
};

/// A CPC code: n total qubits, k logical (data) qubits, and the three
/// parity-check matrices. Data qubits are indexed 0..k-1, parity qubits
/// k..n-1 (0-based throughout).
struct CpcCode {
  int n = 0;
  int k = 0;
  BinaryMatrix mb;  // bit checks, (n-k) x k
  BinaryMatrix mp;  // phase checks, (n-k) x k
  BinaryMatrix mc;  // cross checks, (n-k) x (n-k), zero diagonal

  int num_parity() const { return n - k; }
};

/// Throws CodeError unless all CpcCode invariants hold: exact dimensions,
/// binary entries, zero M_c diagonal, n > k >= 1.
void validate_code(const CpcCode& code);

/// JSON code file: {"n":..,"k":..,"mb":[[..]],"mp":[[..]],"mc":[[..]]}
/// with an optional "convention" string. Round-trips bit-exactly.
CpcCode code_from_json_text(const std::string& text);
std::string code_to_json_text(const CpcCode& code);
CpcCode load_code(const std::string& path);
void save_code(const CpcCode& code, const std::string& path);

/// Appendix codes, bundled for tests and as defaults.
CpcCode code_513();
CpcCode code_933();

}  // namespace cpcdec
