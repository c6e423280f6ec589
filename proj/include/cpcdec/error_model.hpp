#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "cpcdec/pauli.hpp"

namespace cpcdec {

/// Independent per-qubit error channel with X, Z and correlated-XZ (Y)
/// rates. The four-outcome distribution over {I, X-only, Z-only, XZ} is
///   p_I    = 1 - p_x - p_z - p_xz + 2 p_x p_z
///   p_X    = p_x (1 - p_z)
///   p_Z    = p_z (1 - p_x)
///   p_XZ   = p_xz = p_x p_z + p_y
struct QubitErrorRates {
  double px = 0.0;
  double pz = 0.0;
  double py = 0.0;

  QubitErrorRates() = default;
  QubitErrorRates(double x, double z, double y);

  double pxz() const { return px * pz + py; }
  double p_identity() const { return 1.0 - px - pz - pxz() + 2.0 * px * pz; }
  double p_x_only() const { return px * (1.0 - pz); }
  double p_z_only() const { return pz * (1.0 - px); }

  double class_probability(PauliClass c) const;
  std::array<double, 4> class_probabilities() const;
};

/// Replaces zero components with `eps` for callers that need the
/// logarithmic quantities on a degenerate channel.
QubitErrorRates with_epsilon_floor(QubitErrorRates r, double eps = 1e-12);

/// The probability ratios of Eqs. relating channel rates to Boltzmann
/// weights: p̄_x = p_X/p_I, p̄_z = p_Z/p_I, p̄_xz = p_XZ/p_I.
/// Throws std::domain_error if p_I <= 0 or any numerator is <= 0.
struct PbarRatios {
  double x = 0.0;
  double z = 0.0;
  double xz = 0.0;
};
PbarRatios pbar(const QubitErrorRates& rates);

/// 1 - p_I: probability that an unprotected qubit suffers any error.
double unprotected_error_rate(const QubitErrorRates& rates);

/// The three single-parameter families used in the sweeps:
///   f1: p_x = p_z = p, p_y = 0
///   f2: p_x = p_z = p, p_y = 0.1 p
///   f3: p_x = p_z = p, p_y = p - 2p^2 (isotropic: X, Z, XZ equiprobable)
enum class ErrorFamily { kF1, kF2, kF3 };

QubitErrorRates family_rates(ErrorFamily family, double p);
ErrorFamily family_from_string(const std::string& s);
std::string family_to_string(ErrorFamily family);

/// Per-qubit channel for an n-qubit register, uniform or per-qubit.
class ErrorModel {
 public:
  ErrorModel() = default;
  static ErrorModel uniform(int n, const QubitErrorRates& rates);
  static ErrorModel per_qubit(std::vector<QubitErrorRates> rates);

  int n() const { return static_cast<int>(rates_.size()); }
  bool is_uniform() const { return uniform_; }
  const QubitErrorRates& rates(int qubit) const { return rates_[qubit]; }

  /// Product over qubits of the four-outcome probability of the pattern.
  double pattern_probability(const PauliOperator& pauli) const;

  /// One i.i.d. draw per qubit from the four-outcome distribution.
  PauliOperator sample_pattern(std::mt19937_64& rng) const;

 private:
  std::vector<QubitErrorRates> rates_;
  bool uniform_ = true;
};

}  // namespace cpcdec
