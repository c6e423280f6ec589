#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cpcdec/error_model.hpp"

using namespace cpcdec;

TEST_CASE("rate domain validation") {
  CHECK_THROWS_AS(QubitErrorRates(0.5, 0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(QubitErrorRates(-0.01, 0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(QubitErrorRates(0.1, 0.1, 0.6), std::invalid_argument);
  CHECK_NOTHROW(QubitErrorRates(0.0, 0.0, 0.0));
  CHECK_NOTHROW(QubitErrorRates(0.49, 0.49, 0.0));
}

TEST_CASE("four-outcome distribution normalizes and stays nonnegative") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 0.4);
  for (int trial = 0; trial < 500; ++trial) {
    const double px = unit(rng), pz = unit(rng);
    std::uniform_real_distribution<double> ydist(0.0, 0.2);
    QubitErrorRates r(px, pz, ydist(rng));
    if (r.p_identity() < 0.0) continue;
    double sum = 0.0;
    for (double p : r.class_probabilities()) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("pbar ratios: closed forms and consistency") {
  {
    const double p = 0.1;
    const PbarRatios r = pbar(QubitErrorRates(p, p, 0.0));
    CHECK(r.x == doctest::Approx(p / (1 - p)).epsilon(1e-14));
    CHECK(r.z == doctest::Approx(p / (1 - p)).epsilon(1e-14));
    CHECK(r.xz == doctest::Approx(p * p / ((1 - p) * (1 - p))).epsilon(1e-14));
  }
  {
    // p_y = 0: errors independent, so p_xz ratio factorizes.
    const PbarRatios r = pbar(QubitErrorRates(0.07, 0.21, 0.0));
    CHECK(r.xz == doctest::Approx(r.x * r.z).epsilon(1e-13));
  }
  {
    const QubitErrorRates rates(0.1, 0.1, 0.01);
    const PbarRatios r = pbar(rates);
    CHECK(r.x == doctest::Approx(rates.p_x_only() / rates.p_identity()).epsilon(1e-14));
    CHECK(r.z == doctest::Approx(rates.p_z_only() / rates.p_identity()).epsilon(1e-14));
    CHECK(r.xz == doctest::Approx(rates.pxz() / rates.p_identity()).epsilon(1e-14));
  }
  CHECK_THROWS_AS(pbar(QubitErrorRates(0.0, 0.1, 0.0)), std::domain_error);
  CHECK_NOTHROW(pbar(with_epsilon_floor(QubitErrorRates(0.0, 0.1, 0.0))));
}

TEST_CASE("unprotected error rate") {
  CHECK(unprotected_error_rate(QubitErrorRates(0.0, 0.0, 0.0)) == 0.0);
  CHECK(unprotected_error_rate(QubitErrorRates(0.1, 0.1, 0.0)) ==
        doctest::Approx(0.19).epsilon(1e-14));
  CHECK(unprotected_error_rate(family_rates(ErrorFamily::kF3, 0.1)) ==
        doctest::Approx(0.27).epsilon(1e-14));
}

TEST_CASE("family parameterizations") {
  const double p = 0.08;
  CHECK(family_rates(ErrorFamily::kF1, p).py == 0.0);
  CHECK(family_rates(ErrorFamily::kF2, p).py == doctest::Approx(0.1 * p).epsilon(1e-15));
  const QubitErrorRates f3 = family_rates(ErrorFamily::kF3, p);
  CHECK(f3.py == doctest::Approx(p - 2 * p * p).epsilon(1e-15));
  // Isotropic identity: the three nontrivial classes equiprobable at p(1-p).
  CHECK(f3.p_x_only() == doctest::Approx(p * (1 - p)).epsilon(1e-14));
  CHECK(f3.p_z_only() == doctest::Approx(p * (1 - p)).epsilon(1e-14));
  CHECK(f3.pxz() == doctest::Approx(p * (1 - p)).epsilon(1e-14));
  CHECK(family_from_string("f2") == ErrorFamily::kF2);
  CHECK(family_to_string(ErrorFamily::kF3) == "f3");
  CHECK_THROWS_AS(family_from_string("f4"), std::invalid_argument);
}

TEST_CASE("pattern probabilities multiply and normalize") {
  const QubitErrorRates r(0.1, 0.15, 0.02);
  const ErrorModel model = ErrorModel::uniform(5, r);
  CHECK(model.pattern_probability(PauliOperator::identity(5)) ==
        doctest::Approx(std::pow(r.p_identity(), 5)).epsilon(1e-12));
  PauliOperator single = PauliOperator::identity(5);
  single.set_class(2, PauliClass::X);
  CHECK(model.pattern_probability(single) ==
        doctest::Approx(r.p_x_only() * std::pow(r.p_identity(), 4)).epsilon(1e-12));
  double total = 0.0;
  for (std::uint64_t bits = 0; bits < (1u << 10); ++bits) {
    PauliOperator p = PauliOperator::identity(5);
    p.x = bits & 31;
    p.z = bits >> 5;
    total += model.pattern_probability(p);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampling is deterministic and matches the distribution") {
  const ErrorModel model = ErrorModel::uniform(4, QubitErrorRates(0.1, 0.2, 0.05));
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 50; ++i) CHECK(model.sample_pattern(a) == model.sample_pattern(b));

  std::mt19937_64 rng(123);
  const long trials = 200000;
  std::array<long, 4> counts{};
  for (long t = 0; t < trials; ++t) {
    const PauliOperator p = model.sample_pattern(rng);
    ++counts[static_cast<int>(p.class_on(0))];
  }
  const auto probs = model.rates(0).class_probabilities();
  for (int c = 0; c < 4; ++c) {
    const double expect = probs[c] * trials;
    const double sigma = std::sqrt(probs[c] * (1 - probs[c]) * trials);
    CHECK(std::abs(counts[c] - expect) < 4.0 * sigma + 1.0);
  }
}

TEST_CASE("per-qubit models carry distinct rates") {
  const ErrorModel model = ErrorModel::per_qubit(
      {QubitErrorRates(0.1, 0.1, 0.0), QubitErrorRates(0.2, 0.05, 0.01)});
  CHECK(model.n() == 2);
  CHECK_FALSE(model.is_uniform());
  PauliOperator p = PauliOperator::identity(2);
  p.set_class(1, PauliClass::Z);
  CHECK(model.pattern_probability(p) ==
        doctest::Approx(model.rates(0).p_identity() * model.rates(1).p_z_only())
            .epsilon(1e-13));
}
