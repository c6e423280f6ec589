#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cpcdec/decoders.hpp"
#include "cpcdec/ising.hpp"

namespace cpcdec {

struct BpOptions {
  double temperature = 1.0;
  double damping = 0.5;
  int max_iters = 500;
  double tolerance = 1e-10;
  /// Cycle-cutset size cap for conditioned sum-product. Variables in the
  /// cutset are clamped and the 2^|cutset| conditioned runs are recombined
  /// with Bethe log-Z weights; when the conditioned graphs are trees the
  /// marginals are exact. 0 disables conditioning (plain loopy BP).
  int max_cutset = 10;
};

struct BpResult {
  Correction correction;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;                      // last max message change
  std::vector<double> marginals;              // P(sigma_v = +1) per variable
  std::vector<int> cutset;                    // clamped variables, if any
};

/// Sum-product marginals on the factor graph. Non-convergence is reported
/// in the result, never thrown. Class votes per logical qubit combine the
/// pairwise/clamped information where available and singleton marginals
/// elsewhere.
BpResult bp_decode(const FactorGraph& graph, const PropagationModel& prop,
                   const CheckSets& checks, const Syndrome& syndrome,
                   const BpOptions& options = {});

/// Marginals only (no decode bookkeeping); used for tree-exactness tests.
struct BpMarginals {
  std::vector<double> marginals;
  bool converged = false;
  int iterations = 0;
};
BpMarginals bp_marginals(const FactorGraph& graph, const BpOptions& options = {});

}  // namespace cpcdec
