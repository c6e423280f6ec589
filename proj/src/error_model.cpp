#include "cpcdec/error_model.hpp"

#include <cmath>
#include <sstream>

namespace cpcdec {

QubitErrorRates::QubitErrorRates(double x, double z, double y) : px(x), pz(z), py(y) {
  auto bad = [](const char* name, double v) {
    std::ostringstream os;
    os << "rate " << name << " = " << v << " outside [0, 0.5)";
    return std::invalid_argument(os.str());
  };
  if (!(px >= 0.0 && px < 0.5)) throw bad("p_x", px);
  if (!(pz >= 0.0 && pz < 0.5)) throw bad("p_z", pz);
  if (!(py >= 0.0 && py < 0.5)) throw bad("p_y", py);
  if (p_identity() < 0.0) {
    throw std::invalid_argument("rates do not form a probability distribution (p_I < 0)");
  }
}

double QubitErrorRates::class_probability(PauliClass c) const {
  switch (c) {
    case PauliClass::I:
      return p_identity();
    case PauliClass::X:
      return p_x_only();
    case PauliClass::Z:
      return p_z_only();
    case PauliClass::Y:
      return pxz();
  }
  return 0.0;
}

std::array<double, 4> QubitErrorRates::class_probabilities() const {
  return {p_identity(), p_x_only(), p_z_only(), pxz()};
}

QubitErrorRates with_epsilon_floor(QubitErrorRates r, double eps) {
  if (r.px <= 0.0) r.px = eps;
  if (r.pz <= 0.0) r.pz = eps;
  if (r.py <= 0.0) r.py = eps;
  return QubitErrorRates(r.px, r.pz, r.py);
}

PbarRatios pbar(const QubitErrorRates& rates) {
  const double p_i = rates.p_identity();
  if (p_i <= 0.0) throw std::domain_error("pbar undefined: p_I <= 0");
  PbarRatios out;
  out.x = rates.p_x_only() / p_i;
  out.z = rates.p_z_only() / p_i;
  out.xz = rates.pxz() / p_i;
  if (out.x <= 0.0 || out.z <= 0.0 || out.xz <= 0.0) {
    throw std::domain_error("pbar undefined: zero-probability error class (use the epsilon floor)");
  }
  return out;
}

double unprotected_error_rate(const QubitErrorRates& rates) {
  return 1.0 - rates.p_identity();
}

QubitErrorRates family_rates(ErrorFamily family, double p) {
  switch (family) {
    case ErrorFamily::kF1:
      return QubitErrorRates(p, p, 0.0);
    case ErrorFamily::kF2:
      return QubitErrorRates(p, p, 0.1 * p);
    case ErrorFamily::kF3:
      // p_y = p - 2p^2 makes X-only, Z-only and XZ equiprobable at p(1-p).
      return QubitErrorRates(p, p, p - 2.0 * p * p);
  }
  throw std::invalid_argument("unknown error family");
}

ErrorFamily family_from_string(const std::string& s) {
  if (s == "f1") return ErrorFamily::kF1;
  if (s == "f2") return ErrorFamily::kF2;
  if (s == "f3") return ErrorFamily::kF3;
  throw std::invalid_argument("unknown error family: " + s);
}

std::string family_to_string(ErrorFamily family) {
  switch (family) {
    case ErrorFamily::kF1:
      return "f1";
    case ErrorFamily::kF2:
      return "f2";
    case ErrorFamily::kF3:
      return "f3";
  }
  return "?";
}

ErrorModel ErrorModel::uniform(int n, const QubitErrorRates& rates) {
  ErrorModel m;
  m.rates_.assign(static_cast<size_t>(n), rates);
  m.uniform_ = true;
  return m;
}

ErrorModel ErrorModel::per_qubit(std::vector<QubitErrorRates> rates) {
  ErrorModel m;
  m.rates_ = std::move(rates);
  m.uniform_ = false;
  return m;
}

double ErrorModel::pattern_probability(const PauliOperator& pauli) const {
  if (pauli.n != n()) throw std::invalid_argument("pattern length does not match error model");
  double prob = 1.0;
  for (int q = 0; q < n(); ++q) prob *= rates_[q].class_probability(pauli.class_on(q));
  return prob;
}

PauliOperator ErrorModel::sample_pattern(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PauliOperator pattern = PauliOperator::identity(n());
  for (int q = 0; q < n(); ++q) {
    const auto probs = rates_[q].class_probabilities();
    double u = unit(rng);
    int cls = 0;
    for (; cls < 3; ++cls) {
      if (u < probs[cls]) break;
      u -= probs[cls];
    }
    pattern.set_class(q, static_cast<PauliClass>(cls));
  }
  return pattern;
}

}  // namespace cpcdec
