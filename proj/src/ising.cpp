#include "cpcdec/ising.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace cpcdec {

Syndrome Syndrome::from_bit_string(const std::string& bits) {
  Syndrome s;
  s.size = static_cast<int>(bits.size());
  for (int j = 0; j < s.size; ++j) {
    if (bits[j] == '1') {
      s.detected |= std::uint64_t{1} << j;
    } else if (bits[j] != '0') {
      throw std::invalid_argument("syndrome string must contain only 0 and 1");
    }
  }
  return s;
}

std::string Syndrome::bit_string() const {
  std::string out(static_cast<size_t>(size), '0');
  for (int j = 0; j < size; ++j)
    if (is_detected(j)) out[j] = '1';
  return out;
}

IsingModelBuilder::IsingModelBuilder(int num_spins) {
  if (num_spins < 0 || num_spins > 64) throw std::invalid_argument("num_spins out of range");
  model_.num_spins = num_spins;
  model_.labels.assign(static_cast<size_t>(num_spins), {});
}

void IsingModelBuilder::add_term(std::uint64_t vars, double coeff) {
  if (model_.num_spins < 64 && (vars >> model_.num_spins) != 0) {
    throw std::invalid_argument("term references a spin outside the model");
  }
  if (vars == 0) {
    model_.offset -= coeff;  // a constant term: -coeff * (empty product)
    return;
  }
  coeffs_[vars] += coeff;
}

void IsingModelBuilder::set_label(int spin, std::string label) {
  model_.labels[static_cast<size_t>(spin)] = std::move(label);
}

IsingModel IsingModelBuilder::build() && {
  model_.terms.clear();
  for (const auto& [vars, coeff] : coeffs_) {
    if (std::abs(coeff) >= kCoefficientPruneThreshold) model_.terms.push_back({vars, coeff});
  }
  return std::move(model_);
}

double energy(const IsingModel& model, const SpinConfiguration& config) {
  if (config.num_spins != model.num_spins) {
    throw std::invalid_argument("configuration length does not match model");
  }
  double e = model.offset;
  for (const IsingTerm& t : model.terms) {
    e -= t.coeff * parity_sign(t.vars & config.minus_mask);
  }
  return e;
}

double energy_delta(const IsingModel& model, const SpinConfiguration& config, int spin) {
  const std::uint64_t bit = std::uint64_t{1} << spin;
  double delta = 0.0;
  for (const IsingTerm& t : model.terms) {
    if (t.vars & bit) delta += 2.0 * t.coeff * parity_sign(t.vars & config.minus_mask);
  }
  return delta;
}

namespace {

void label_explicit_vars(IsingModelBuilder& b, const CheckSets& checks, int slice = -1,
                         int slice_size = 0) {
  const int base = slice < 0 ? 0 : slice * slice_size;
  std::string prefix = slice < 0 ? "" : "t" + std::to_string(slice) + ":";
  for (int i = 0; i < checks.k; ++i) {
    b.set_label(base + var_data_bit(checks.k, i), prefix + "data_bit:" + std::to_string(i));
    b.set_label(base + var_data_phase(checks.k, i), prefix + "data_phase:" + std::to_string(i));
  }
  for (int j = 0; j < checks.n - checks.k; ++j) {
    b.set_label(base + var_parity_phase(checks.k, j),
                prefix + "parity_phase:" + std::to_string(j));
  }
}

}  // namespace

IsingModel build_error_count_hamiltonian(const CheckSets& checks, const Syndrome& syndrome) {
  const int r = checks.n - checks.k;
  if (syndrome.size != r) throw std::invalid_argument("syndrome length does not match code");
  IsingModelBuilder b(checks.num_explicit());
  for (int v = 0; v < checks.num_explicit(); ++v) b.add_term(std::uint64_t{1} << v, 1.0);
  for (int j = 0; j < r; ++j) b.add_term(checks.q_masks[j], syndrome.sign(j));
  label_explicit_vars(b, checks);
  return std::move(b).build();
}

double nishimori_temperature(double p) {
  if (!(p > 0.0 && p < 0.5)) throw std::domain_error("Nishimori temperature requires 0 < p < 0.5");
  return 2.0 / std::log((1.0 - p) / p);
}

DataCoefficients data_qubit_coefficients(const QubitErrorRates& rates, double temperature) {
  const PbarRatios r = pbar(rates);
  DataCoefficients c;
  c.j = temperature / 4.0 * (-std::log(r.x) - std::log(r.z) + std::log(r.xz));
  c.h1 = -temperature / 2.0 * std::log(r.x) - c.j;
  c.h2 = -temperature / 2.0 * std::log(r.z) - c.j;
  return c;
}

ParityCoefficients parity_coefficients(const QubitErrorRates& rates, double temperature,
                                       bool detected) {
  const PbarRatios r = pbar(rates);
  ParityCoefficients c;
  if (!detected) {
    c.a_qbp = temperature / 4.0 * (-std::log(r.x) - std::log(r.z) + std::log(r.xz));
    c.a_q = -temperature / 2.0 * std::log(r.x) - c.a_qbp;
    c.h = -temperature / 2.0 * std::log(r.z) - c.a_qbp;
  } else {
    c.a_qbp = temperature / 4.0 * (std::log(r.x) - std::log(r.xz) + std::log(r.z));
    c.a_q = temperature / 2.0 * std::log(r.x) - c.a_qbp;
    c.h = -temperature / 2.0 * (std::log(r.xz) - std::log(r.x)) - c.a_qbp;
  }
  return c;
}

IsingModel build_decode_hamiltonian(const CheckSets& checks, const Syndrome& syndrome,
                                    const ErrorModel& model, double temperature) {
  const int k = checks.k;
  const int r = checks.n - checks.k;
  if (syndrome.size != r) throw std::invalid_argument("syndrome length does not match code");
  if (model.n() != checks.n) throw std::invalid_argument("error model length does not match code");

  IsingModelBuilder b(checks.num_explicit());
  for (int i = 0; i < k; ++i) {
    const DataCoefficients c = data_qubit_coefficients(model.rates(i), temperature);
    const std::uint64_t bit = std::uint64_t{1} << var_data_bit(k, i);
    const std::uint64_t phase = std::uint64_t{1} << var_data_phase(k, i);
    b.add_term(bit, c.h1);
    b.add_term(phase, c.h2);
    b.add_term(bit | phase, c.j);
  }
  for (int j = 0; j < r; ++j) {
    const ParityCoefficients c =
        parity_coefficients(model.rates(k + j), temperature, syndrome.is_detected(j));
    const std::uint64_t bp = std::uint64_t{1} << var_parity_phase(k, j);
    b.add_term(bp, c.h);
    b.add_term(checks.q_masks[j], c.a_q);
    // XOR drops the phase bit again in the self-loop case.
    b.add_term(checks.q_masks[j] ^ bp, c.a_qbp);
  }
  label_explicit_vars(b, checks);
  return std::move(b).build();
}

IsingModel build_time_extended(const CheckSets& checks, const std::vector<Syndrome>& syndromes,
                               const ErrorModel& model, double temperature) {
  if (syndromes.empty()) throw std::invalid_argument("at least one decoding round is required");
  const int k = checks.k;
  const int r = checks.n - checks.k;
  const int slice = checks.num_explicit();
  const int rounds = static_cast<int>(syndromes.size());
  if (rounds * slice > 64) throw std::invalid_argument("time-extended model exceeds 64 spins");

  IsingModelBuilder b(rounds * slice);
  for (int t = 0; t < rounds; ++t) {
    if (syndromes[t].size != r) throw std::invalid_argument("syndrome length does not match code");
    const int base = t * slice;
    for (int i = 0; i < k; ++i) {
      const DataCoefficients c = data_qubit_coefficients(model.rates(i), temperature);
      const std::uint64_t bit = std::uint64_t{1} << (base + var_data_bit(k, i));
      const std::uint64_t phase = std::uint64_t{1} << (base + var_data_phase(k, i));
      if (t == 0) {
        b.add_term(bit, c.h1);
        b.add_term(phase, c.h2);
        b.add_term(bit | phase, c.j);
      } else {
        // Single-body data terms become couplings to the previous round;
        // a persisting error pays no additional cost.
        const std::uint64_t prev_bit = bit >> slice;
        const std::uint64_t prev_phase = phase >> slice;
        b.add_term(bit | prev_bit, c.h1);
        b.add_term(phase | prev_phase, c.h2);
        b.add_term(bit | phase | prev_bit | prev_phase, c.j);
      }
    }
    for (int j = 0; j < r; ++j) {
      const ParityCoefficients c =
          parity_coefficients(model.rates(k + j), temperature, syndromes[t].is_detected(j));
      const std::uint64_t bp = std::uint64_t{1} << (base + var_parity_phase(k, j));
      const std::uint64_t q = checks.q_masks[j] << base;
      b.add_term(bp, c.h);
      b.add_term(q, c.a_q);
      b.add_term(q ^ bp, c.a_qbp);
    }
    label_explicit_vars(b, checks, t, slice);
  }
  return std::move(b).build();
}

FactorGraph export_factor_graph(const IsingModel& model) {
  FactorGraph g;
  g.num_variables = model.num_spins;
  g.offset = model.offset;
  g.labels = model.labels;
  g.factors.reserve(model.terms.size());
  for (const IsingTerm& t : model.terms) g.factors.push_back({t.vars, t.coeff});
  return g;
}

IsingModel factor_graph_to_ising(const FactorGraph& graph) {
  IsingModelBuilder b(graph.num_variables);
  for (const Factor& f : graph.factors) b.add_term(f.vars, f.weight);
  IsingModel model = std::move(b).build();
  model.offset = graph.offset;
  model.labels = graph.labels;
  return model;
}

namespace {

std::vector<int> mask_to_indices(std::uint64_t mask) {
  std::vector<int> out;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1) out.push_back(i);
  return out;
}

}  // namespace

std::string model_to_json_text(const IsingModel& model) {
  nlohmann::json j;
  j["num_spins"] = model.num_spins;
  nlohmann::json terms = nlohmann::json::array();
  // nlohmann serializes doubles with the shortest representation that
  // round-trips bit-exactly, which satisfies the file-format contract.
  for (const IsingTerm& t : model.terms) {
    terms.push_back({{"vars", mask_to_indices(t.vars)}, {"coeff", t.coeff}});
  }
  j["terms"] = std::move(terms);
  j["offset"] = model.offset;
  j["labels"] = model.labels;
  return j.dump(2) + "\n";
}

IsingModel model_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  IsingModelBuilder b(j.at("num_spins").get<int>());
  for (const auto& t : j.at("terms")) {
    std::uint64_t mask = 0;
    for (int v : t.at("vars").get<std::vector<int>>()) mask |= std::uint64_t{1} << v;
    b.add_term(mask, t.at("coeff").get<double>());
  }
  IsingModel model = std::move(b).build();
  model.offset = j.at("offset").get<double>();
  if (j.contains("labels")) model.labels = j.at("labels").get<std::vector<std::string>>();
  return model;
}

}  // namespace cpcdec
