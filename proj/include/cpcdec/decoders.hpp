#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cpcdec/error_model.hpp"
#include "cpcdec/ising.hpp"
#include "cpcdec/propagation.hpp"

namespace cpcdec {

class EnumerationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense Boltzmann distribution over all 2^num_spins configurations,
/// p_a = exp(-E_a/T) / Z. Index a is the minus_mask of the configuration.
struct BoltzmannDistribution {
  int num_spins = 0;
  std::vector<double> probs;
  double log_partition = 0.0;
};

/// Exact enumeration; throws EnumerationCapExceeded above `spin_cap`
/// (use a sampler backend instead).
BoltzmannDistribution exact_boltzmann(const IsingModel& model, double temperature,
                                      int spin_cap = 24);

/// Reconstructs the full physical error pattern implied by an explicit
/// spin assignment and a syndrome: the parity-qubit X bits are
/// x_j = detected_j XOR parity(Q_j over the errored explicit variables).
PauliOperator reconstruct_pattern(const CheckSets& checks, const SpinConfiguration& config,
                                  const Syndrome& syndrome);

/// Residual logical classes of the reconstructed pattern.
std::vector<PauliClass> logical_action(const PropagationModel& prop, const CheckSets& checks,
                                       const SpinConfiguration& config, const Syndrome& syndrome);

/// Per-logical-qubit correction plus decode diagnostics.
struct Correction {
  std::vector<PauliClass> classes;                 // length k
  std::string strategy;
  std::uint64_t degeneracy = 1;                    // MLE ground-state count
  std::vector<std::array<double, 4>> votes;        // per-qubit class weights
  bool tie = false;
  long num_samples = 0;                            // sampler strategies

  /// Vote margin (best minus runner-up weight) per qubit.
  std::vector<double> margins() const;
};

/// Exact ground-state set (energies within `tol` of the minimum).
struct GroundStates {
  std::vector<SpinConfiguration> states;
  double energy = 0.0;
};
GroundStates exact_ground_states(const IsingModel& model, double tol = 1e-9, int spin_cap = 24);

/// MLE: uniformly random ground state's logical action; `votes` carries the
/// class distribution over ties so expected success can be accumulated.
Correction mle_decode(const IsingModel& model, const PropagationModel& prop,
                      const CheckSets& checks, const Syndrome& syndrome, std::mt19937_64& rng);

/// MaxEnt: per-logical-qubit class vote under `dist`; argmax per qubit,
/// ties broken in the fixed order I > X > Z > Y and flagged.
Correction maxent_decode(const IsingModel& model, const PropagationModel& prop,
                         const CheckSets& checks, const Syndrome& syndrome,
                         const BoltzmannDistribution& dist);

/// MaxEnt vote over an empirical sample set.
Correction vote_over_samples(const PropagationModel& prop, const CheckSets& checks,
                             const Syndrome& syndrome,
                             const std::vector<SpinConfiguration>& samples);

}  // namespace cpcdec
