// Brute-force oracles shared by the test suites. These deliberately avoid
// the library's Ising machinery: probabilities come straight from pattern
// enumeration through the propagation model, so any agreement with the
// Boltzmann route is evidence, not circularity.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cpcdec/decoders.hpp"
#include "cpcdec/error_model.hpp"
#include "cpcdec/propagation.hpp"

namespace oracle {

/// Conditional distribution over explicit-variable assignments given a
/// syndrome, by enumerating all 4^n physical patterns. Index = minus_mask
/// over the n+k explicit variables.
inline std::vector<double> posterior(const cpcdec::PropagationModel& prop,
                                     const cpcdec::ErrorModel& model,
                                     std::uint64_t target_syndrome) {
  const int n = prop.n;
  const int k = prop.k;
  std::vector<double> post(std::uint64_t{1} << (n + k), 0.0);
  double total = 0.0;
  const std::uint64_t patterns = std::uint64_t{1} << (2 * n);
  for (std::uint64_t bits = 0; bits < patterns; ++bits) {
    cpcdec::PauliOperator p = cpcdec::PauliOperator::identity(n);
    p.x = bits & ((std::uint64_t{1} << n) - 1);
    p.z = bits >> n;
    if (prop.apply(p).syndrome != target_syndrome) continue;
    const double prob = model.pattern_probability(p);
    // Explicit variables: data bit errors, data phase errors, parity phase
    // errors (parity bit errors are implied by the syndrome).
    const std::uint64_t data_mask = (std::uint64_t{1} << k) - 1;
    const std::uint64_t config = (p.x & data_mask) | ((p.z & data_mask) << k) |
                                 ((p.z >> k) << (2 * k));
    post[config] += prob;
    total += prob;
  }
  for (double& v : post) v /= total;
  return post;
}

inline double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d / 2.0;
}

/// Exact marginals P(sigma_v = +1) of a Boltzmann distribution.
inline std::vector<double> boltzmann_marginals(const cpcdec::IsingModel& model,
                                               double temperature) {
  const cpcdec::BoltzmannDistribution dist =
      cpcdec::exact_boltzmann(model, temperature);
  std::vector<double> marg(model.num_spins, 0.0);
  for (std::uint64_t a = 0; a < dist.probs.size(); ++a) {
    for (int v = 0; v < model.num_spins; ++v) {
      if (!((a >> v) & 1)) marg[v] += dist.probs[a];
    }
  }
  return marg;
}

}  // namespace oracle
