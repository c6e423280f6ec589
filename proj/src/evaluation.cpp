#include "cpcdec/evaluation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <stdexcept>

namespace cpcdec {

Strategy strategy_from_string(const std::string& s) {
  if (s == "mle") return Strategy::kMle;
  if (s == "maxent") return Strategy::kMaxEnt;
  if (s == "uncorrected") return Strategy::kUncorrected;
  throw std::invalid_argument("unknown strategy: " + s);
}

std::string strategy_to_string(Strategy s) {
  switch (s) {
    case Strategy::kMle:
      return "mle";
    case Strategy::kMaxEnt:
      return "maxent";
    case Strategy::kUncorrected:
      return "uncorrected";
  }
  return "?";
}

namespace {

/// Per-syndrome correction together with, for MLE, the full tie set of
/// candidate corrections (applied with equal probability).
struct SyndromeDecision {
  std::vector<std::uint64_t> candidates;  // packed per-qubit classes (2 bits each)
};

std::uint64_t pack_classes(const std::vector<PauliClass>& classes) {
  std::uint64_t packed = 0;
  for (size_t q = 0; q < classes.size(); ++q) {
    packed |= static_cast<std::uint64_t>(classes[q]) << (2 * q);
  }
  return packed;
}

SyndromeDecision decide(const PropagationModel& prop, const CheckSets& checks,
                        const ErrorModel& model, Strategy strategy, const Syndrome& syndrome) {
  SyndromeDecision decision;
  if (strategy == Strategy::kUncorrected) {
    decision.candidates.push_back(0);  // identity correction
    return decision;
  }
  const IsingModel ising = build_decode_hamiltonian(checks, syndrome, model, 1.0);
  if (strategy == Strategy::kMle) {
    const GroundStates gs = exact_ground_states(ising);
    // Distinct logical actions among the tied ground states; each ground
    // state is equally likely to be picked, so weight by multiplicity.
    for (const SpinConfiguration& state : gs.states) {
      decision.candidates.push_back(
          pack_classes(logical_action(prop, checks, state, syndrome)));
    }
  } else {
    const BoltzmannDistribution dist = exact_boltzmann(ising, 1.0);
    const Correction corr = maxent_decode(ising, prop, checks, syndrome, dist);
    decision.candidates.push_back(pack_classes(corr.classes));
  }
  return decision;
}

struct Accumulator {
  double total = 0.0;            // probability mass processed
  double any_error = 0.0;        // qubit-averaged P(residual != I)
  std::vector<double> per_qubit;
  std::array<double, 4> per_class{};
};

}  // namespace

LogicalRates exact_logical_error_rate(const PropagationModel& prop, const CheckSets& checks,
                                      const ErrorModel& model, Strategy strategy,
                                      int qubit_cap, int threads) {
  const int n = checks.n;
  const int k = checks.k;
  const int r = n - k;
  if (n > qubit_cap) {
    std::ostringstream os;
    os << "exact evaluation over " << n << " qubits exceeds the cap of " << qubit_cap;
    throw EnumerationCapExceeded(os.str());
  }
  if (model.n() != n) throw std::invalid_argument("error model length does not match code");

  // Logical classes of an explicit configuration are syndrome-independent
  // (implied parity bit flips carry no logical action), so precompute them
  // once per configuration.
  const int ne = checks.num_explicit();
  const std::uint64_t num_configs = std::uint64_t{1} << ne;
  std::vector<std::uint64_t> config_classes(num_configs);
  {
    const Syndrome trivial{0, r};
    for (std::uint64_t a = 0; a < num_configs; ++a) {
      config_classes[a] =
          pack_classes(logical_action(prop, checks, {a, ne}, trivial));
    }
  }
  // Per-configuration probability factor over the explicit variables and
  // implied-bit factor per parity qubit: pattern probability splits as
  // prod_data P(class) * prod_parity P(bit, phase).
  std::vector<std::uint64_t> syndromes(std::uint64_t{1} << r);
  for (std::uint64_t s = 0; s < syndromes.size(); ++s) syndromes[s] = s;

  auto process = [&](std::uint64_t s_begin, std::uint64_t s_end) {
    Accumulator acc;
    acc.per_qubit.assign(static_cast<size_t>(k), 0.0);
    for (std::uint64_t s = s_begin; s < s_end; ++s) {
      const Syndrome syndrome{s, r};
      const SyndromeDecision decision = decide(prop, checks, model, strategy, syndrome);
      const double cand_w = 1.0 / static_cast<double>(decision.candidates.size());
      for (std::uint64_t a = 0; a < num_configs; ++a) {
        const PauliOperator pattern = reconstruct_pattern(checks, {a, ne}, syndrome);
        const double prob = model.pattern_probability(pattern);
        if (prob == 0.0) continue;
        acc.total += prob;
        const std::uint64_t actual = config_classes[a];
        for (std::uint64_t corr : decision.candidates) {
          const double w = prob * cand_w;
          for (int q = 0; q < k; ++q) {
            const std::uint64_t net =
                ((actual >> (2 * q)) & 3) ^ ((corr >> (2 * q)) & 3);
            acc.per_class[net] += w / k;
            if (net != 0) {
              acc.per_qubit[static_cast<size_t>(q)] += w;
              acc.any_error += w / k;
            }
          }
        }
      }
    }
    return acc;
  };

  Accumulator acc;
  if (threads <= 1 || syndromes.size() == 1) {
    acc = process(0, syndromes.size());
  } else {
    const int workers = std::min<std::uint64_t>(threads, syndromes.size());
    std::vector<std::future<Accumulator>> futures;
    const std::uint64_t chunk = (syndromes.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, syndromes.size());
      if (begin >= end) break;
      futures.push_back(std::async(std::launch::async, process, begin, end));
    }
    acc.per_qubit.assign(static_cast<size_t>(k), 0.0);
    // Deterministic reduction in launch order.
    for (auto& f : futures) {
      const Accumulator part = f.get();
      acc.total += part.total;
      acc.any_error += part.any_error;
      for (int q = 0; q < k; ++q) acc.per_qubit[q] += part.per_qubit[q];
      for (int c = 0; c < 4; ++c) acc.per_class[c] += part.per_class[c];
    }
  }

  if (std::abs(acc.total - 1.0) > 1e-9) {
    throw std::runtime_error("pattern probabilities do not sum to one");
  }
  LogicalRates rates;
  rates.average = acc.any_error;
  rates.per_qubit = std::move(acc.per_qubit);
  rates.per_class = acc.per_class;
  return rates;
}

MonteCarloRate monte_carlo_logical_error_rate(const PropagationModel& prop,
                                              const CheckSets& checks, const ErrorModel& model,
                                              Strategy strategy, long trials,
                                              std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const int k = checks.k;
  const int r = checks.n - checks.k;
  std::vector<std::vector<std::uint64_t>> cache(std::uint64_t{1} << r);
  std::vector<bool> cached(cache.size(), false);
  std::mt19937_64 rng(seed);

  double errors = 0.0;
  for (long t = 0; t < trials; ++t) {
    const PauliOperator pattern = model.sample_pattern(rng);
    const PauliEffect effect = prop.apply(pattern);
    const std::uint64_t s = effect.syndrome;
    if (!cached[s]) {
      cache[s] = decide(prop, checks, model, strategy, Syndrome{s, r}).candidates;
      cached[s] = true;
    }
    std::uint64_t actual = 0;
    for (int q = 0; q < k; ++q) {
      actual |= static_cast<std::uint64_t>(
                    pauli_class((effect.logical_x >> q) & 1, (effect.logical_z >> q) & 1))
                << (2 * q);
    }
    const double cand_w = 1.0 / static_cast<double>(cache[s].size());
    for (std::uint64_t corr : cache[s]) {
      for (int q = 0; q < k; ++q) {
        if ((((actual ^ corr) >> (2 * q)) & 3) != 0) errors += cand_w / k;
      }
    }
  }
  MonteCarloRate result;
  result.trials = trials;
  result.rate = errors / static_cast<double>(trials);
  result.std_error =
      std::sqrt(std::max(result.rate * (1.0 - result.rate), 0.0) / static_cast<double>(trials));
  return result;
}

std::vector<SweepRow> sweep(const PropagationModel& prop, const CheckSets& checks,
                            ErrorFamily family, const std::vector<double>& p_grid,
                            int threads) {
  std::vector<SweepRow> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) {
    SweepRow row;
    row.p = p;
    QubitErrorRates rates(0, 0, 0);
    try {
      rates = family_rates(family, p);
    } catch (const std::invalid_argument&) {
      continue;  // grid point outside the valid physical range
    }
    const ErrorModel model = ErrorModel::uniform(checks.n, rates);
    const LogicalRates mle =
        exact_logical_error_rate(prop, checks, model, Strategy::kMle, 12, threads);
    const LogicalRates maxent =
        exact_logical_error_rate(prop, checks, model, Strategy::kMaxEnt, 12, threads);
    const LogicalRates raw =
        exact_logical_error_rate(prop, checks, model, Strategy::kUncorrected, 12, threads);
    row.mle = mle.average;
    row.maxent = maxent.average;
    row.uncorrected = raw.average;
    row.unprotected = unprotected_error_rate(rates);
    row.mle_xzy = {mle.per_class[1], mle.per_class[2], mle.per_class[3]};
    row.maxent_xzy = {maxent.per_class[1], maxent.per_class[2], maxent.per_class[3]};
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv_header() {
  return "p,mle,maxent,uncorrected,unprotected,mle_x,mle_z,mle_y,maxent_x,maxent_z,maxent_y";
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string sweep_row_csv(const SweepRow& row) {
  std::ostringstream os;
  os << fmt(row.p) << ',' << fmt(row.mle) << ',' << fmt(row.maxent) << ','
     << fmt(row.uncorrected) << ',' << fmt(row.unprotected);
  for (double v : row.mle_xzy) os << ',' << fmt(v);
  for (double v : row.maxent_xzy) os << ',' << fmt(v);
  return os.str();
}

ThresholdResult threshold_bisection(const PropagationModel& prop, const CheckSets& checks,
                                    ErrorFamily family, Strategy strategy, double tol,
                                    double p_lo, double p_hi, int threads) {
  auto gap = [&](double p) {
    const QubitErrorRates rates = family_rates(family, p);
    const ErrorModel model = ErrorModel::uniform(checks.n, rates);
    const LogicalRates logical =
        exact_logical_error_rate(prop, checks, model, strategy, 12, threads);
    return logical.average - unprotected_error_rate(rates);
  };
  double lo = p_lo, hi = p_hi;
  const double g_lo = gap(lo);
  const double g_hi = gap(hi);
  if (!(g_lo < 0.0 && g_hi > 0.0)) {
    std::ostringstream os;
    os << "bracket [" << lo << ", " << hi << "] does not straddle the threshold (gap "
       << g_lo << " / " << g_hi << ")";
    throw std::invalid_argument(os.str());
  }
  ThresholdResult result;
  result.strategy = strategy;
  result.family = family;
  while (hi - lo > tol) {
    const double mid = (lo + hi) / 2.0;
    if (gap(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++result.iterations;
  }
  result.p_star = (lo + hi) / 2.0;
  result.bracket_width = hi - lo;
  return result;
}

}  // namespace cpcdec
