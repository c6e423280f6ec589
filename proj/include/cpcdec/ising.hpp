#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cpcdec/error_model.hpp"
#include "cpcdec/propagation.hpp"

namespace cpcdec {

/// One multi-body term: contributes -coeff * prod_{i in vars} sigma_i.
struct IsingTerm {
  std::uint64_t vars = 0;  // bit mask over spins
  double coeff = 0.0;

  int order() const { return std::popcount(vars); }
  bool operator==(const IsingTerm&) const = default;
};

/// Syndrome as measurement signs: s_j = +1 means no error detected.
/// Stored as the mask of detected (-1) checks.
struct Syndrome {
  std::uint64_t detected = 0;
  int size = 0;

  int sign(int j) const { return ((detected >> j) & 1) ? -1 : +1; }
  bool is_detected(int j) const { return ((detected >> j) & 1) != 0; }

  /// "0011": character j is check j; '1' = error detected (s_j = -1).
  static Syndrome from_bit_string(const std::string& bits);
  std::string bit_string() const;
};

/// Spin assignment; bit i of `minus_mask` set means sigma_i = -1 (errored).
struct SpinConfiguration {
  std::uint64_t minus_mask = 0;
  int num_spins = 0;

  int spin(int i) const { return ((minus_mask >> i) & 1) ? -1 : +1; }
  bool operator==(const SpinConfiguration&) const = default;
};

/// Multi-body spin Hamiltonian: E(sigma) = -sum_t c_t prod_{i in t} sigma_i + offset.
/// Terms are kept deduplicated (identical variable sets merged) and sorted
/// by variable mask; coefficients below 1e-15 in magnitude are dropped.
struct IsingModel {
  int num_spins = 0;
  std::vector<IsingTerm> terms;
  double offset = 0.0;
  std::vector<std::string> labels;  // size num_spins when populated
};

inline constexpr double kCoefficientPruneThreshold = 1e-15;

/// Accumulates terms with merging, then emits a pruned, mask-sorted model.
class IsingModelBuilder {
 public:
  explicit IsingModelBuilder(int num_spins);
  /// Empty variable sets fold into the offset.
  void add_term(std::uint64_t vars, double coeff);
  void set_label(int spin, std::string label);
  IsingModel build() &&;

 private:
  IsingModel model_;
  std::map<std::uint64_t, double> coeffs_;
};

double energy(const IsingModel& model, const SpinConfiguration& config);

/// Energy change from flipping `spin` in `config` (exact, local).
double energy_delta(const IsingModel& model, const SpinConfiguration& config, int spin);

/// H^err-count: unit field on each of the n+k explicit variables plus one
/// parity term with coefficient s_j on Q_j. Energy counts errors (x2, up
/// to a constant) when the configuration is consistent with the syndrome.
IsingModel build_error_count_hamiltonian(const CheckSets& checks, const Syndrome& syndrome);

/// T = 2 / ln((1-p)/p); domain (0, 0.5).
double nishimori_temperature(double p);

/// Data-qubit block coefficients solved from the Boltzmann/posterior ratio
/// equations: J = T/4 [-ln p̄x - ln p̄z + ln p̄xz], h1 = -T/2 ln p̄x - J,
/// h2 = -T/2 ln p̄z - J.
struct DataCoefficients {
  double h1 = 0.0;
  double h2 = 0.0;
  double j = 0.0;
};
DataCoefficients data_qubit_coefficients(const QubitErrorRates& rates, double temperature);

/// Parity-block coefficients; `detected` selects the +/- case.
struct ParityCoefficients {
  double h = 0.0;      // field on the parity-phase spin
  double a_q = 0.0;    // coupling over Q_j
  double a_qbp = 0.0;  // coupling over Q_j xor {parity-phase_j}
};
ParityCoefficients parity_coefficients(const QubitErrorRates& rates, double temperature,
                                       bool detected);

/// Full decode Hamiltonian: k data blocks plus n-k parity blocks with the
/// sign case chosen by the syndrome. In the self-loop case the a_qbp term
/// acts on Q_j minus the phase bit (the symmetric difference handles this).
/// Spins follow the explicit-variable indexing; labels are populated.
IsingModel build_decode_hamiltonian(const CheckSets& checks, const Syndrome& syndrome,
                                    const ErrorModel& model, double temperature = 1.0);

/// Time-extended decode model over `syndromes.size()` rounds. Slice 0 is
/// the single-round model; later slices replace data single-body terms with
/// couplings to the previous slice (h1, h2 become two-body, J four-body)
/// and repeat the parity blocks against each round's syndrome.
IsingModel build_time_extended(const CheckSets& checks, const std::vector<Syndrome>& syndromes,
                               const ErrorModel& model, double temperature = 1.0);

/// Weighted bipartite factor graph: one variable per spin, one factor per
/// term, factor weight = term coefficient.
struct Factor {
  std::uint64_t vars = 0;
  double weight = 0.0;
};
struct FactorGraph {
  int num_variables = 0;
  std::vector<Factor> factors;
  double offset = 0.0;
  std::vector<std::string> labels;
};

FactorGraph export_factor_graph(const IsingModel& model);
IsingModel factor_graph_to_ising(const FactorGraph& graph);

/// JSON model file {num_spins, terms:[{vars, coeff}], offset, labels};
/// coefficients at 17 significant digits for bit-exact round-trips.
std::string model_to_json_text(const IsingModel& model);
IsingModel model_from_json_text(const std::string& text);

}  // namespace cpcdec
