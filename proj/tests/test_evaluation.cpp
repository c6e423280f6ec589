#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cpcdec/cpc_code.hpp"
#include "cpcdec/evaluation.hpp"

using namespace cpcdec;

namespace {

struct Setup {
  PropagationModel prop;
  CheckSets checks;
};

Setup setup_513() {
  Setup s;
  s.prop = build_propagation_model(code_513());
  s.checks = derive_check_sets(s.prop);
  return s;
}

}  // namespace

TEST_CASE("strategy string round trip") {
  CHECK(strategy_from_string("mle") == Strategy::kMle);
  CHECK(strategy_from_string("maxent") == Strategy::kMaxEnt);
  CHECK(strategy_to_string(Strategy::kUncorrected) == "uncorrected");
  CHECK_THROWS_AS(strategy_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("uncorrected rate equals the closed-form any-logical-error probability") {
  // With no correction, the [[5,1,3]] logical qubit errs exactly when the
  // net propagated action on the data qubit is nontrivial; cross-check the
  // accumulation against direct enumeration.
  const Setup s = setup_513();
  const QubitErrorRates rates(0.1, 0.07, 0.02);
  const ErrorModel model = ErrorModel::uniform(5, rates);
  const LogicalRates lr =
      exact_logical_error_rate(s.prop, s.checks, model, Strategy::kUncorrected);
  double direct = 0.0;
  for (std::uint64_t bits = 0; bits < (1u << 10); ++bits) {
    PauliOperator p = PauliOperator::identity(5);
    p.x = bits & 31;
    p.z = bits >> 5;
    const PauliEffect e = s.prop.apply(p);
    if (e.logical_x != 0 || e.logical_z != 0) direct += model.pattern_probability(p);
  }
  CHECK(lr.average == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("per-class probabilities normalize") {
  const Setup s = setup_513();
  const ErrorModel model = ErrorModel::uniform(5, family_rates(ErrorFamily::kF2, 0.09));
  for (Strategy st : {Strategy::kMle, Strategy::kMaxEnt, Strategy::kUncorrected}) {
    const LogicalRates lr = exact_logical_error_rate(s.prop, s.checks, model, st);
    double total = 0.0;
    for (double v : lr.per_class) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lr.average ==
          doctest::Approx(lr.per_class[1] + lr.per_class[2] + lr.per_class[3])
              .epsilon(1e-10));
  }
}

TEST_CASE("distance-3 MLE decoding is O(p^2) at small p") {
  const Setup s = setup_513();
  const double p1 = 2e-3, p2 = 1e-3;
  auto rate_at = [&](double p) {
    const ErrorModel model = ErrorModel::uniform(5, family_rates(ErrorFamily::kF1, p));
    return exact_logical_error_rate(s.prop, s.checks, model, Strategy::kMle).average;
  };
  const double r1 = rate_at(p1), r2 = rate_at(p2);
  CHECK(r1 < 100.0 * p1 * p1);  // quadratic with a modest constant, not O(p)
  // Halving p should quarter the rate (within 20% at these scales).
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("Table-1 crossing points (spot checks)") {
  const Setup s = setup_513();
  {
    const double p = 0.07989;
    const QubitErrorRates rates = family_rates(ErrorFamily::kF1, p);
    const LogicalRates lr = exact_logical_error_rate(
        s.prop, s.checks, ErrorModel::uniform(5, rates), Strategy::kMle);
    CHECK(std::abs(lr.average - unprotected_error_rate(rates)) < 1e-3);
  }
  {
    const PropagationModel prop = build_propagation_model(code_933());
    const CheckSets checks = derive_check_sets(prop);
    const double p = 0.01880;
    const QubitErrorRates rates = family_rates(ErrorFamily::kF3, p);
    const LogicalRates lr = exact_logical_error_rate(
        prop, checks, ErrorModel::uniform(9, rates), Strategy::kMaxEnt, 12, 4);
    CHECK(std::abs(lr.average - unprotected_error_rate(rates)) < 1e-3);
  }
}

TEST_CASE("threaded evaluation agrees with single-threaded") {
  const Setup s = setup_513();
  const ErrorModel model = ErrorModel::uniform(5, family_rates(ErrorFamily::kF3, 0.05));
  const LogicalRates one =
      exact_logical_error_rate(s.prop, s.checks, model, Strategy::kMaxEnt, 12, 1);
  const LogicalRates four =
      exact_logical_error_rate(s.prop, s.checks, model, Strategy::kMaxEnt, 12, 4);
  CHECK(one.average == doctest::Approx(four.average).epsilon(1e-12));
  for (int c = 0; c < 4; ++c) {
    CHECK(one.per_class[c] == doctest::Approx(four.per_class[c]).epsilon(1e-12));
  }
}

TEST_CASE("qubit cap throws") {
  const Setup s = setup_513();
  const ErrorModel model = ErrorModel::uniform(5, family_rates(ErrorFamily::kF1, 0.05));
  CHECK_THROWS_AS(
      exact_logical_error_rate(s.prop, s.checks, model, Strategy::kMle, 4),
      EnumerationCapExceeded);
}

TEST_CASE("Monte Carlo agrees with exact within 4 sigma and is deterministic") {
  const Setup s = setup_513();
  const ErrorModel model = ErrorModel::uniform(5, family_rates(ErrorFamily::kF1, 0.08));
  const double exact =
      exact_logical_error_rate(s.prop, s.checks, model, Strategy::kMle).average;
  const MonteCarloRate mc = monte_carlo_logical_error_rate(
      s.prop, s.checks, model, Strategy::kMle, 100000, 7);
  CHECK(std::abs(mc.rate - exact) < 4.0 * mc.std_error + 1e-6);
  const MonteCarloRate again = monte_carlo_logical_error_rate(
      s.prop, s.checks, model, Strategy::kMle, 100000, 7);
  CHECK(mc.rate == again.rate);
  CHECK_THROWS_AS(
      monte_carlo_logical_error_rate(s.prop, s.checks, model, Strategy::kMle, 0, 1),
      std::invalid_argument);
}

TEST_CASE("sweep rows carry consistent columns") {
  const Setup s = setup_513();
  const std::vector<double> grid{0.02, 0.05, 0.08};
  const auto rows = sweep(s.prop, s.checks, ErrorFamily::kF1, grid);
  REQUIRE(rows.size() == 3);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].p == grid[i]);
    CHECK(rows[i].maxent <= rows[i].mle + 1e-12);
    CHECK(rows[i].unprotected ==
          doctest::Approx(unprotected_error_rate(family_rates(ErrorFamily::kF1, grid[i])))
              .epsilon(1e-12));
    CHECK(rows[i].mle ==
          doctest::Approx(rows[i].mle_xzy[0] + rows[i].mle_xzy[1] + rows[i].mle_xzy[2])
              .epsilon(1e-9));
  }
  // Invalid grid points are skipped, not fatal.
  const auto skipped = sweep(s.prop, s.checks, ErrorFamily::kF1, {0.05, 0.7});
  CHECK(skipped.size() == 1);
}

TEST_CASE("sweep CSV format") {
  CHECK(sweep_csv_header() ==
        "p,mle,maxent,uncorrected,unprotected,mle_x,mle_z,mle_y,maxent_x,maxent_z,maxent_y");
  SweepRow row;
  row.p = 0.1;
  row.mle = 0.123456789012345;
  row.maxent = 0.1;
  row.uncorrected = 0.2;
  row.unprotected = 0.19;
  row.mle_xzy = {0.04, 0.05, 0.033456789012345};
  row.maxent_xzy = {0.03, 0.04, 0.03};
  const std::string csv = sweep_row_csv(row);
  CHECK(csv.substr(0, 2) == "0.");
  // 12 significant digits on a non-terminating value
  CHECK(csv.find("0.123456789012") != std::string::npos);
  // 10 commas = 11 fields, matching the header
  CHECK(std::count(csv.begin(), csv.end(), ',') == 10);
}

TEST_CASE("threshold bisection on [[5,1,3]] f1 with a coarse tolerance") {
  const Setup s = setup_513();
  const ThresholdResult mle = threshold_bisection(s.prop, s.checks, ErrorFamily::kF1,
                                                  Strategy::kMle, 1e-4);
  CHECK(std::abs(mle.p_star - 0.07989) < 5e-4);
  CHECK(mle.bracket_width <= 1e-4);
  CHECK(mle.iterations > 0);
  CHECK_THROWS_AS(threshold_bisection(s.prop, s.checks, ErrorFamily::kF1, Strategy::kMle,
                                      1e-4, 0.2, 0.3),
                  std::invalid_argument);
}
