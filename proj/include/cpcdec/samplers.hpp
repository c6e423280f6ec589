#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "cpcdec/bp.hpp"
#include "cpcdec/decoders.hpp"
#include "cpcdec/ising.hpp"

namespace cpcdec {

struct AnnealStep {
  double temperature = 1.0;
  int sweeps = 1;
};

struct SamplerConfig {
  int sweeps = 1000;        // retained sweeps per chain (one sample per sweep)
  int burn_in = 100;
  int chains = 1;
  std::uint64_t seed = 0;
  double temperature = 1.0;
  std::vector<AnnealStep> schedule;  // for simulated annealing; non-increasing T
  bool metropolis = false;           // default update rule is heat-bath (Gibbs)
};

void validate_config(const SamplerConfig& config);

/// Single-spin-flip Gibbs (heat-bath) chains over the model at temperature
/// `temperature`. Update order is a fixed permutation reshuffled each sweep
/// from the chain generator. One sample is retained per sweep after
/// burn-in; chains are concatenated in chain order. Deterministic in
/// (seed, config). Optional `init` states seed the chains (cycled);
/// otherwise chains start from uniformly random configurations.
std::vector<SpinConfiguration> gibbs_sample(const IsingModel& model, double temperature,
                                            const SamplerConfig& config,
                                            const std::vector<SpinConfiguration>& init = {});

struct AnnealResult {
  std::vector<SpinConfiguration> best_states;  // distinct states at best energy
  double best_energy = 0.0;
  std::vector<double> best_trace;              // best-so-far energy per sweep
};

/// Multi-chain simulated annealing over `config.schedule`. Returns all
/// distinct lowest-energy states seen across chains.
AnnealResult simulated_annealing(const IsingModel& model, const SamplerConfig& config);

/// Geometric schedule helper: `steps` temperatures from t_hi down to t_lo.
std::vector<AnnealStep> geometric_schedule(double t_hi, double t_lo, int steps,
                                           int sweeps_per_step);

struct BackendCapabilities {
  int max_spins = 64;
  int max_term_order = 64;
  bool boltzmann_samples = true;  // false: heuristic optima only
};

/// Pluggable sampling hardware abstraction.
class SamplerBackend {
 public:
  virtual ~SamplerBackend() = default;
  virtual BackendCapabilities capabilities() const = 0;
  virtual std::vector<SpinConfiguration> sample(const IsingModel& model, double temperature,
                                                const SamplerConfig& config) = 0;
};

/// Gibbs-chain backend (Boltzmann-distributed in the long-chain limit).
class GibbsBackend : public SamplerBackend {
 public:
  BackendCapabilities capabilities() const override;
  std::vector<SpinConfiguration> sample(const IsingModel& model, double temperature,
                                        const SamplerConfig& config) override;
};

/// Exact-enumeration backend; draws i.i.d. from the exact distribution.
class ExactBackend : public SamplerBackend {
 public:
  explicit ExactBackend(int spin_cap = 24) : spin_cap_(spin_cap) {}
  BackendCapabilities capabilities() const override;
  std::vector<SpinConfiguration> sample(const IsingModel& model, double temperature,
                                        const SamplerConfig& config) override;

 private:
  int spin_cap_;
};

/// MaxEnt vote over backend samples. Throws std::invalid_argument when the
/// configuration retains zero samples.
Correction sampler_decode(const IsingModel& model, const PropagationModel& prop,
                          const CheckSets& checks, const Syndrome& syndrome,
                          SamplerBackend& backend, const SamplerConfig& config);

/// Pseudo-Boolean quadratization: substitutes variable pairs in >=3-body
/// terms with auxiliary variables plus a Rosenberg penalty of weight
/// 1 + sum |coefficients touching the pair|, until the model is 2-body.
/// Ground states restricted to the original variables are preserved.
struct QuadratizedModel {
  /// 2-body model over original + auxiliary spins. Populated only when the
  /// total spin count fits in the 64-bit state masks (`fits()`); large
  /// inputs (many auxiliaries) are still described by the generic fields.
  IsingModel model;
  int num_spins = 0;   ///< total spin count including auxiliaries
  double offset = 0.0; ///< constant of the generic term list below
  /// Generic 2-body form with no spin-count cap, same convention as
  /// IsingModel: E = -sum c * prod sigma + offset. Each term lists one or
  /// two distinct spin indices.
  std::vector<std::pair<std::vector<int>, double>> terms;
  /// aux spin index -> the (spin, spin) product it stands for (operands may
  /// themselves be auxiliary spins from earlier substitutions).
  std::vector<std::pair<int, std::pair<int, int>>> aux;
  bool fits() const { return num_spins <= 64; }
};
QuadratizedModel quadratize(const IsingModel& model);

enum class HybridHeuristic { kGreedy, kAnneal, kBeliefPropagation };

/// Software analogue of the hybrid flow: a heuristic produces seed states,
/// Gibbs chains are started from the seeds (no random initialization), and
/// the refined samples are voted. A zero-sweep refinement votes over the
/// seeds alone.
Correction hybrid_decode(const IsingModel& model, const PropagationModel& prop,
                         const CheckSets& checks, const Syndrome& syndrome,
                         HybridHeuristic heuristic, const SamplerConfig& refine);

/// Steepest-descent single-flip local minimum from `start`.
SpinConfiguration greedy_descent(const IsingModel& model, SpinConfiguration start);

}  // namespace cpcdec
