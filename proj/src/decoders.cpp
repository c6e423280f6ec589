#include "cpcdec/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cpcdec {

BoltzmannDistribution exact_boltzmann(const IsingModel& model, double temperature,
                                      int spin_cap) {
  if (model.num_spins > spin_cap) {
    std::ostringstream os;
    os << "exact enumeration over " << model.num_spins << " spins exceeds the cap of "
       << spin_cap << "; use a sampler backend";
    throw EnumerationCapExceeded(os.str());
  }
  if (!(temperature > 0.0)) throw std::domain_error("temperature must be positive");

  const std::uint64_t count = std::uint64_t{1} << model.num_spins;
  std::vector<double> energies(count);
  double min_e = model.offset;
  for (std::uint64_t a = 0; a < count; ++a) {
    double e = model.offset;
    for (const IsingTerm& t : model.terms) e -= t.coeff * parity_sign(t.vars & a);
    energies[a] = e;
    if (a == 0 || e < min_e) min_e = e;
  }
  BoltzmannDistribution dist;
  dist.num_spins = model.num_spins;
  dist.probs.resize(count);
  double z = 0.0;
  for (std::uint64_t a = 0; a < count; ++a) {
    dist.probs[a] = std::exp(-(energies[a] - min_e) / temperature);
    z += dist.probs[a];
  }
  for (double& p : dist.probs) p /= z;
  dist.log_partition = std::log(z) - min_e / temperature;
  return dist;
}

PauliOperator reconstruct_pattern(const CheckSets& checks, const SpinConfiguration& config,
                                  const Syndrome& syndrome) {
  const int n = checks.n;
  const int k = checks.k;
  if (config.num_spins != checks.num_explicit()) {
    throw std::invalid_argument("configuration does not cover the explicit variables");
  }
  if (syndrome.size != n - k) throw std::invalid_argument("syndrome length does not match code");

  PauliOperator pattern = PauliOperator::identity(n);
  const std::uint64_t data_mask = (std::uint64_t{1} << k) - 1;
  pattern.x = config.minus_mask & data_mask;
  pattern.z = (config.minus_mask >> k) & data_mask;
  for (int j = 0; j < n - k; ++j) {
    const int q_parity = std::popcount(checks.q_masks[j] & config.minus_mask) & 1;
    const int x_j = (syndrome.is_detected(j) ? 1 : 0) ^ q_parity;
    if (x_j) pattern.x |= std::uint64_t{1} << (k + j);
    if ((config.minus_mask >> var_parity_phase(k, j)) & 1) pattern.z |= std::uint64_t{1} << (k + j);
  }
  return pattern;
}

std::vector<PauliClass> logical_action(const PropagationModel& prop, const CheckSets& checks,
                                       const SpinConfiguration& config, const Syndrome& syndrome) {
  return prop.logical_classes(reconstruct_pattern(checks, config, syndrome));
}

std::vector<double> Correction::margins() const {
  std::vector<double> out;
  out.reserve(votes.size());
  for (const auto& v : votes) {
    std::array<double, 4> sorted = v;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    out.push_back(sorted[0] - sorted[1]);
  }
  return out;
}

GroundStates exact_ground_states(const IsingModel& model, double tol, int spin_cap) {
  if (model.num_spins > spin_cap) {
    throw EnumerationCapExceeded("ground-state enumeration exceeds the spin cap");
  }
  const std::uint64_t count = std::uint64_t{1} << model.num_spins;
  auto config_energy = [&](std::uint64_t a) {
    double e = model.offset;
    for (const IsingTerm& t : model.terms) e -= t.coeff * parity_sign(t.vars & a);
    return e;
  };
  GroundStates gs;
  double best = config_energy(0);
  for (std::uint64_t a = 1; a < count; ++a) best = std::min(best, config_energy(a));
  gs.energy = best;
  for (std::uint64_t a = 0; a < count; ++a) {
    if (config_energy(a) <= best + tol) gs.states.push_back({a, model.num_spins});
  }
  return gs;
}

namespace {

/// Packs per-qubit classes into 2-bit fields.
std::uint64_t pack_classes(const std::vector<PauliClass>& classes) {
  std::uint64_t packed = 0;
  for (size_t q = 0; q < classes.size(); ++q) {
    packed |= static_cast<std::uint64_t>(classes[q]) << (2 * q);
  }
  return packed;
}

int argmax_class(const std::array<double, 4>& votes, bool* tie, double eps = 1e-12) {
  int best = 0;
  for (int c = 1; c < 4; ++c) {
    if (votes[c] > votes[best] + eps) best = c;
  }
  if (tie) {
    *tie = false;
    for (int c = 0; c < 4; ++c) {
      if (c != best && std::abs(votes[c] - votes[best]) <= eps) *tie = true;
    }
  }
  return best;
}

}  // namespace

Correction mle_decode(const IsingModel& model, const PropagationModel& prop,
                      const CheckSets& checks, const Syndrome& syndrome, std::mt19937_64& rng) {
  const GroundStates gs = exact_ground_states(model);
  const int k = checks.k;

  Correction corr;
  corr.strategy = "mle";
  corr.degeneracy = gs.states.size();
  corr.votes.assign(static_cast<size_t>(k), {0.0, 0.0, 0.0, 0.0});
  const double w = 1.0 / static_cast<double>(gs.states.size());
  for (const SpinConfiguration& state : gs.states) {
    const auto classes = logical_action(prop, checks, state, syndrome);
    for (int q = 0; q < k; ++q) corr.votes[q][static_cast<int>(classes[q])] += w;
  }
  std::uniform_int_distribution<size_t> pick(0, gs.states.size() - 1);
  corr.classes = logical_action(prop, checks, gs.states[pick(rng)], syndrome);
  corr.tie = gs.states.size() > 1;
  return corr;
}

Correction maxent_decode(const IsingModel& model, const PropagationModel& prop,
                         const CheckSets& checks, const Syndrome& syndrome,
                         const BoltzmannDistribution& dist) {
  if (dist.num_spins != model.num_spins) {
    throw std::invalid_argument("distribution does not match model");
  }
  const int k = checks.k;
  Correction corr;
  corr.strategy = "maxent";
  corr.votes.assign(static_cast<size_t>(k), {0.0, 0.0, 0.0, 0.0});
  for (std::uint64_t a = 0; a < dist.probs.size(); ++a) {
    if (dist.probs[a] == 0.0) continue;
    const SpinConfiguration config{a, model.num_spins};
    const auto classes = logical_action(prop, checks, config, syndrome);
    for (int q = 0; q < k; ++q) corr.votes[q][static_cast<int>(classes[q])] += dist.probs[a];
  }
  corr.classes.resize(k);
  for (int q = 0; q < k; ++q) {
    bool tie = false;
    corr.classes[q] = static_cast<PauliClass>(argmax_class(corr.votes[q], &tie));
    corr.tie = corr.tie || tie;
  }
  return corr;
}

Correction vote_over_samples(const PropagationModel& prop, const CheckSets& checks,
                             const Syndrome& syndrome,
                             const std::vector<SpinConfiguration>& samples) {
  if (samples.empty()) throw std::invalid_argument("vote requires at least one sample");
  const int k = checks.k;
  Correction corr;
  corr.strategy = "vote";
  corr.num_samples = static_cast<long>(samples.size());
  corr.votes.assign(static_cast<size_t>(k), {0.0, 0.0, 0.0, 0.0});
  const double w = 1.0 / static_cast<double>(samples.size());
  for (const SpinConfiguration& s : samples) {
    const auto classes = logical_action(prop, checks, s, syndrome);
    for (int q = 0; q < k; ++q) corr.votes[q][static_cast<int>(classes[q])] += w;
  }
  corr.classes.resize(k);
  for (int q = 0; q < k; ++q) {
    bool tie = false;
    corr.classes[q] = static_cast<PauliClass>(argmax_class(corr.votes[q], &tie));
    corr.tie = corr.tie || tie;
  }
  return corr;
}

}  // namespace cpcdec
