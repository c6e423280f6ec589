#include "cpcdec/samplers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace cpcdec {

void validate_config(const SamplerConfig& config) {
  if (config.sweeps < 0) throw std::invalid_argument("sweeps must be non-negative");
  if (config.burn_in < 0) throw std::invalid_argument("burn_in must be non-negative");
  if (config.chains < 1) throw std::invalid_argument("chains must be positive");
  if (!(config.temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  double prev = std::numeric_limits<double>::infinity();
  for (const AnnealStep& step : config.schedule) {
    if (!(step.temperature > 0.0)) throw std::invalid_argument("schedule temperatures must be positive");
    if (step.sweeps < 1) throw std::invalid_argument("schedule sweeps must be positive");
    if (step.temperature > prev) {
      throw std::invalid_argument("annealing schedule must be non-increasing in temperature");
    }
    prev = step.temperature;
  }
}

namespace {

/// One full sweep of single-spin-flip updates in a freshly shuffled order.
void sweep_once(const IsingModel& model, SpinConfiguration& state, double temperature,
                bool metropolis, std::vector<int>& order, std::mt19937_64& rng) {
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int spin : order) {
    const double delta = energy_delta(model, state, spin);
    bool flip;
    if (metropolis) {
      flip = delta <= 0.0 || unit(rng) < std::exp(-delta / temperature);
    } else {
      // heat-bath: P(flip) = 1 / (1 + exp(delta / T))
      flip = unit(rng) < 1.0 / (1.0 + std::exp(delta / temperature));
    }
    if (flip) state.minus_mask ^= std::uint64_t{1} << spin;
  }
}

SpinConfiguration random_state(int num_spins, std::mt19937_64& rng) {
  const std::uint64_t mask =
      num_spins >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << num_spins) - 1;
  return {rng() & mask, num_spins};
}

}  // namespace

std::vector<SpinConfiguration> gibbs_sample(const IsingModel& model, double temperature,
                                            const SamplerConfig& config,
                                            const std::vector<SpinConfiguration>& init) {
  validate_config(config);
  if (!(temperature > 0.0)) throw std::domain_error("temperature must be positive");
  std::vector<SpinConfiguration> samples;
  samples.reserve(static_cast<size_t>(config.chains) * config.sweeps);
  std::vector<int> order(model.num_spins);
  for (int chain = 0; chain < config.chains; ++chain) {
    std::mt19937_64 rng(config.seed + 0x9e3779b97f4a7c15ull * (chain + 1));
    SpinConfiguration state = init.empty()
                                  ? random_state(model.num_spins, rng)
                                  : init[chain % init.size()];
    if (state.num_spins != model.num_spins) {
      throw std::invalid_argument("initial state length does not match model");
    }
    std::iota(order.begin(), order.end(), 0);
    for (int s = 0; s < config.burn_in; ++s) {
      sweep_once(model, state, temperature, config.metropolis, order, rng);
    }
    for (int s = 0; s < config.sweeps; ++s) {
      sweep_once(model, state, temperature, config.metropolis, order, rng);
      samples.push_back(state);
    }
  }
  return samples;
}

AnnealResult simulated_annealing(const IsingModel& model, const SamplerConfig& config) {
  validate_config(config);
  if (config.schedule.empty()) throw std::invalid_argument("annealing requires a schedule");

  AnnealResult result;
  result.best_energy = std::numeric_limits<double>::infinity();
  std::map<std::uint64_t, bool> seen;
  std::vector<int> order(model.num_spins);
  for (int chain = 0; chain < config.chains; ++chain) {
    std::mt19937_64 rng(config.seed + 0x9e3779b97f4a7c15ull * (chain + 1));
    SpinConfiguration state = random_state(model.num_spins, rng);
    std::iota(order.begin(), order.end(), 0);
    for (const AnnealStep& step : config.schedule) {
      for (int s = 0; s < step.sweeps; ++s) {
        sweep_once(model, state, step.temperature, config.metropolis, order, rng);
        const double e = energy(model, state);
        if (e < result.best_energy - 1e-12) {
          result.best_energy = e;
          result.best_states.clear();
          seen.clear();
        }
        if (e <= result.best_energy + 1e-12 && !seen.count(state.minus_mask)) {
          seen[state.minus_mask] = true;
          result.best_states.push_back(state);
        }
        result.best_trace.push_back(result.best_energy);
      }
    }
  }
  return result;
}

std::vector<AnnealStep> geometric_schedule(double t_hi, double t_lo, int steps,
                                           int sweeps_per_step) {
  if (!(t_hi >= t_lo && t_lo > 0.0)) throw std::invalid_argument("need t_hi >= t_lo > 0");
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  std::vector<AnnealStep> schedule;
  schedule.reserve(static_cast<size_t>(steps));
  const double ratio = steps > 1 ? std::pow(t_lo / t_hi, 1.0 / (steps - 1)) : 1.0;
  double t = t_hi;
  for (int i = 0; i < steps; ++i) {
    schedule.push_back({t, sweeps_per_step});
    t *= ratio;
  }
  schedule.back().temperature = t_lo;
  return schedule;
}

BackendCapabilities GibbsBackend::capabilities() const { return {64, 64, true}; }

std::vector<SpinConfiguration> GibbsBackend::sample(const IsingModel& model, double temperature,
                                                    const SamplerConfig& config) {
  return gibbs_sample(model, temperature, config);
}

BackendCapabilities ExactBackend::capabilities() const { return {spin_cap_, 64, true}; }

std::vector<SpinConfiguration> ExactBackend::sample(const IsingModel& model, double temperature,
                                                    const SamplerConfig& config) {
  validate_config(config);
  const BoltzmannDistribution dist = exact_boltzmann(model, temperature, spin_cap_);
  std::mt19937_64 rng(config.seed);
  std::discrete_distribution<std::uint64_t> draw(dist.probs.begin(), dist.probs.end());
  std::vector<SpinConfiguration> samples;
  const long total = static_cast<long>(config.sweeps) * config.chains;
  samples.reserve(static_cast<size_t>(total));
  for (long s = 0; s < total; ++s) samples.push_back({draw(rng), model.num_spins});
  return samples;
}

Correction sampler_decode(const IsingModel& model, const PropagationModel& prop,
                          const CheckSets& checks, const Syndrome& syndrome,
                          SamplerBackend& backend, const SamplerConfig& config) {
  const std::vector<SpinConfiguration> samples =
      backend.sample(model, config.temperature, config);
  if (samples.empty()) throw std::invalid_argument("sampler produced no samples");
  // Samples may live on a quadratized model with auxiliary spins; the vote
  // only reads the explicit variables, which come first.
  std::vector<SpinConfiguration> truncated;
  truncated.reserve(samples.size());
  const int ne = checks.num_explicit();
  const std::uint64_t keep = (std::uint64_t{1} << ne) - 1;
  for (const SpinConfiguration& s : samples) truncated.push_back({s.minus_mask & keep, ne});
  Correction corr = vote_over_samples(prop, checks, syndrome, truncated);
  corr.strategy = "sampler";
  return corr;
}

namespace {

// Quadratization can need more spins than the 64-bit state masks hold
// (high-order decode models take dozens of auxiliaries), so monomials over
// original + auxiliary boolean variables are keyed by 128-bit sets.
using MonoKey = unsigned __int128;

int key_popcount(MonoKey k) {
  return std::popcount(static_cast<std::uint64_t>(k)) +
         std::popcount(static_cast<std::uint64_t>(k >> 64));
}

int key_lowest(MonoKey k) {
  const std::uint64_t lo = static_cast<std::uint64_t>(k);
  if (lo != 0) return std::countr_zero(lo);
  return 64 + std::countr_zero(static_cast<std::uint64_t>(k >> 64));
}

MonoKey key_bit(int v) { return MonoKey{1} << v; }

}  // namespace

QuadratizedModel quadratize(const IsingModel& model) {
  // Work in boolean variables x = (1 - sigma)/2 where Rosenberg's
  // substitution y = x_i x_j is exact; convert back to spins afterwards.
  // Spin-product terms expand into multilinear boolean polynomials.
  std::map<MonoKey, double> poly;  // boolean monomial -> coefficient
  double constant = model.offset;
  for (const IsingTerm& t : model.terms) {
    // prod sigma = prod (1 - 2 x_i): expand over subsets of the support.
    std::vector<int> support;
    for (int v = 0; v < model.num_spins; ++v)
      if ((t.vars >> v) & 1) support.push_back(v);
    const std::uint64_t subsets = std::uint64_t{1} << support.size();
    for (std::uint64_t sub = 0; sub < subsets; ++sub) {
      MonoKey mono = 0;
      int bits = 0;
      for (size_t i = 0; i < support.size(); ++i) {
        if ((sub >> i) & 1) {
          mono |= key_bit(support[i]);
          ++bits;
        }
      }
      if (mono == 0) {
        constant += -t.coeff;
      } else {
        poly[mono] += -t.coeff * std::pow(-2.0, static_cast<double>(bits));
      }
    }
  }

  QuadratizedModel out;
  int num_vars = model.num_spins;
  while (true) {
    // Pick the variable pair covering the most degree->=3 monomials, so one
    // auxiliary is shared across as many substitutions as possible.
    std::map<MonoKey, int> pair_count;
    for (const auto& [mono, coeff] : poly) {
      if (std::abs(coeff) < kCoefficientPruneThreshold || key_popcount(mono) < 3) continue;
      std::vector<int> bits;
      MonoKey rest = mono;
      while (rest) {
        bits.push_back(key_lowest(rest));
        rest &= rest - 1;
      }
      for (size_t i = 0; i < bits.size(); ++i) {
        for (size_t j = i + 1; j < bits.size(); ++j) {
          ++pair_count[key_bit(bits[i]) | key_bit(bits[j])];
        }
      }
    }
    if (pair_count.empty()) break;
    MonoKey pair = 0;
    int best = 0;
    for (const auto& [candidate, count] : pair_count) {
      if (count > best) {
        best = count;
        pair = candidate;
      }
    }
    const int i = key_lowest(pair);
    const int j = key_lowest(pair & (pair - 1));

    // Penalty weight: strictly dominate every coefficient the pair touches.
    double touching = 0.0;
    for (const auto& [mono, coeff] : poly) {
      if ((mono & pair) == pair) touching += std::abs(coeff);
    }
    const double m = 1.0 + touching;

    const int a = num_vars++;
    if (num_vars > 128) throw std::invalid_argument("quadratization exceeds 128 spins");
    const MonoKey abit = key_bit(a);
    out.aux.push_back({a, {i, j}});

    // Substitute x_i x_j -> a in every monomial containing the pair.
    std::map<MonoKey, double> next;
    for (const auto& [mono, coeff] : poly) {
      if ((mono & pair) == pair) {
        next[(mono & ~pair) | abit] += coeff;
      } else {
        next[mono] += coeff;
      }
    }
    // Rosenberg penalty M (x_i x_j - 2 x_i a - 2 x_j a + 3 a): zero when
    // a = x_i x_j, at least M otherwise.
    next[pair] += m;
    next[key_bit(i) | abit] += -2.0 * m;
    next[key_bit(j) | abit] += -2.0 * m;
    next[abit] += 3.0 * m;
    poly = std::move(next);
  }

  // Convert the (now quadratic) boolean polynomial back to spins:
  // x = (1 - sigma)/2.
  out.num_spins = num_vars;
  double offset = constant;
  for (const auto& [mono, coeff] : poly) {
    if (std::abs(coeff) < kCoefficientPruneThreshold) continue;
    const int deg = key_popcount(mono);
    if (deg == 1) {
      const int v = key_lowest(mono);
      offset += coeff / 2.0;
      out.terms.push_back({{v}, coeff / 2.0});  // -(-c/2) sigma
    } else {  // deg == 2
      const int v1 = key_lowest(mono);
      const int v2 = key_lowest(mono & (mono - 1));
      offset += coeff / 4.0;
      out.terms.push_back({{v1}, coeff / 4.0});
      out.terms.push_back({{v2}, coeff / 4.0});
      out.terms.push_back({{v1, v2}, -coeff / 4.0});
    }
  }
  out.offset = offset;

  if (!out.fits()) return out;
  IsingModelBuilder b(num_vars);
  for (const auto& [vars, coeff] : out.terms) {
    std::uint64_t mask = 0;
    for (int v : vars) mask |= std::uint64_t{1} << v;
    b.add_term(mask, coeff);
  }
  out.model = std::move(b).build();
  out.model.offset += offset;
  for (int v = 0; v < model.num_spins && v < static_cast<int>(model.labels.size()); ++v) {
    out.model.labels[static_cast<size_t>(v)] = model.labels[static_cast<size_t>(v)];
  }
  for (const auto& [a, pair] : out.aux) {
    out.model.labels[static_cast<size_t>(a)] =
        "aux:" + std::to_string(pair.first) + "*" + std::to_string(pair.second);
  }
  return out;
}

SpinConfiguration greedy_descent(const IsingModel& model, SpinConfiguration start) {
  if (start.num_spins != model.num_spins) {
    throw std::invalid_argument("start state length does not match model");
  }
  bool improved = true;
  while (improved) {
    improved = false;
    double best_delta = -1e-12;
    int best_spin = -1;
    for (int v = 0; v < model.num_spins; ++v) {
      const double delta = energy_delta(model, start, v);
      if (delta < best_delta) {
        best_delta = delta;
        best_spin = v;
      }
    }
    if (best_spin >= 0) {
      start.minus_mask ^= std::uint64_t{1} << best_spin;
      improved = true;
    }
  }
  return start;
}

Correction hybrid_decode(const IsingModel& model, const PropagationModel& prop,
                         const CheckSets& checks, const Syndrome& syndrome,
                         HybridHeuristic heuristic, const SamplerConfig& refine) {
  validate_config(refine);
  std::vector<SpinConfiguration> seeds;
  switch (heuristic) {
    case HybridHeuristic::kGreedy: {
      std::mt19937_64 rng(refine.seed ^ 0xc2b2ae3d27d4eb4full);
      for (int c = 0; c < std::max(refine.chains, 1); ++c) {
        seeds.push_back(greedy_descent(model, random_state(model.num_spins, rng)));
      }
      break;
    }
    case HybridHeuristic::kAnneal: {
      SamplerConfig anneal = refine;
      if (anneal.schedule.empty()) anneal.schedule = geometric_schedule(2.0, 0.1, 20, 5);
      seeds = simulated_annealing(model, anneal).best_states;
      break;
    }
    case HybridHeuristic::kBeliefPropagation: {
      BpOptions options;
      options.temperature = refine.temperature;
      const BpMarginals marg = bp_marginals(export_factor_graph(model), options);
      SpinConfiguration rounded{0, model.num_spins};
      for (int v = 0; v < model.num_spins; ++v) {
        if (marg.marginals[v] < 0.5) rounded.minus_mask |= std::uint64_t{1} << v;
      }
      seeds.push_back(greedy_descent(model, rounded));
      break;
    }
  }
  if (seeds.empty()) throw std::invalid_argument("hybrid heuristic produced no seed states");

  std::vector<SpinConfiguration> samples;
  if (refine.sweeps > 0) {
    samples = gibbs_sample(model, refine.temperature, refine, seeds);
  } else {
    samples = seeds;
  }
  Correction corr = vote_over_samples(prop, checks, syndrome, samples);
  corr.strategy = "hybrid";
  return corr;
}

}  // namespace cpcdec
