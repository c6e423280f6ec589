#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cpcdec/decoders.hpp"
#include "cpcdec/error_model.hpp"
#include "cpcdec/ising.hpp"
#include "cpcdec/propagation.hpp"

namespace cpcdec {

enum class Strategy { kMle, kMaxEnt, kUncorrected };
Strategy strategy_from_string(const std::string& s);
std::string strategy_to_string(Strategy s);

/// Exact logical-error accounting for one (code, channel, strategy) point.
struct LogicalRates {
  double average = 0.0;               // P(residual class != I), averaged over qubits
  std::vector<double> per_qubit;      // length k
  std::array<double, 4> per_class{};  // I, X, Z, Y of the net residual, qubit-averaged
};

/// Enumerates all 4^n physical patterns grouped by syndrome, with one
/// decode per syndrome (MLE ties contribute expected success). Exact to
/// floating precision. Throws EnumerationCapExceeded when n > `qubit_cap`.
LogicalRates exact_logical_error_rate(const PropagationModel& prop, const CheckSets& checks,
                                      const ErrorModel& model, Strategy strategy,
                                      int qubit_cap = 12, int threads = 1);

struct MonteCarloRate {
  double rate = 0.0;
  double std_error = 0.0;
  long trials = 0;
};

/// i.i.d. sampled patterns decoded through a per-syndrome correction cache.
MonteCarloRate monte_carlo_logical_error_rate(const PropagationModel& prop,
                                              const CheckSets& checks, const ErrorModel& model,
                                              Strategy strategy, long trials,
                                              std::uint64_t seed);

struct SweepRow {
  double p = 0.0;
  double mle = 0.0;
  double maxent = 0.0;
  double uncorrected = 0.0;
  double unprotected = 0.0;
  std::array<double, 3> mle_xzy{};     // net residual X, Z, Y under MLE
  std::array<double, 3> maxent_xzy{};
};

/// One row per grid point; invalid points are skipped (reported via the
/// returned row count). MaxEnt models are built at the true family rates.
std::vector<SweepRow> sweep(const PropagationModel& prop, const CheckSets& checks,
                            ErrorFamily family, const std::vector<double>& p_grid,
                            int threads = 1);

std::string sweep_csv_header();
std::string sweep_row_csv(const SweepRow& row);

struct ThresholdResult {
  Strategy strategy = Strategy::kMle;
  ErrorFamily family = ErrorFamily::kF1;
  double p_star = 0.0;
  double bracket_width = 0.0;
  int iterations = 0;
};

/// Bisection on p of (logical rate - unprotected rate). Throws
/// std::invalid_argument when the initial bracket does not change sign.
ThresholdResult threshold_bisection(const PropagationModel& prop, const CheckSets& checks,
                                    ErrorFamily family, Strategy strategy, double tol = 1e-6,
                                    double p_lo = 1e-3, double p_hi = 0.3, int threads = 1);

}  // namespace cpcdec
