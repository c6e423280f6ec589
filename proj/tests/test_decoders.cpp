#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cpcdec/bp.hpp"
#include "cpcdec/cpc_code.hpp"
#include "cpcdec/decoders.hpp"
#include "cpcdec/ising.hpp"
#include "cpcdec/propagation.hpp"
#include "oracles.hpp"

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

TEST_CASE("exact Boltzmann: closed forms and cap") {
  {
    IsingModelBuilder b(3);
    const BoltzmannDistribution d = exact_boltzmann(std::move(b).build(), 1.0);
    for (double p : d.probs) CHECK(p == doctest::Approx(1.0 / 8).epsilon(1e-14));
  }
  {
    IsingModelBuilder b(1);
    b.add_term(1, 1.0);  // field h = 1: E(+1) = -1, E(-1) = +1
    const BoltzmannDistribution d = exact_boltzmann(std::move(b).build(), 1.0);
    const double e = std::exp(1.0);
    CHECK(d.probs[0] == doctest::Approx(e / (e + 1.0 / e)).epsilon(1e-14));
    CHECK(d.log_partition == doctest::Approx(std::log(e + 1.0 / e)).epsilon(1e-12));
  }
  {
    IsingModelBuilder b(30);
    CHECK_THROWS_AS(exact_boltzmann(std::move(b).build(), 1.0), EnumerationCapExceeded);
  }
}

TEST_CASE("distribution normalizes") {
  const Setup s = setup_513();
  const ErrorModel model = ErrorModel::uniform(5, QubitErrorRates(0.12, 0.05, 0.03));
  const IsingModel ising =
      build_decode_hamiltonian(s.checks, Syndrome::from_bit_string("0110"), model, 1.0);
  const BoltzmannDistribution d = exact_boltzmann(ising, 1.0);
  double total = 0.0;
  for (double p : d.probs) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reconstruct_pattern inverts the explicit encoding for all patterns") {
  const Setup s = setup_513();
  const int n = 5, k = 1;
  const std::uint64_t data_mask = (std::uint64_t{1} << k) - 1;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (2 * n)); ++bits) {
    PauliOperator p = PauliOperator::identity(n);
    p.x = bits & ((std::uint64_t{1} << n) - 1);
    p.z = bits >> n;
    const std::uint64_t syn = s.prop.apply(p).syndrome;
    const std::uint64_t config =
        (p.x & data_mask) | ((p.z & data_mask) << k) | ((p.z >> k) << (2 * k));
    const PauliOperator back =
        reconstruct_pattern(s.checks, {config, s.checks.num_explicit()}, Syndrome{syn, 4});
    CHECK(back == p);
  }
}

TEST_CASE("logical action matches direct propagation") {
  const Setup s = setup_513();
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t config = rng() & 63;
    const std::uint64_t syn = rng() & 15;
    const PauliOperator pattern =
        reconstruct_pattern(s.checks, {config, 6}, Syndrome{syn, 4});
    const auto via_decoder =
        logical_action(s.prop, s.checks, {config, 6}, Syndrome{syn, 4});
    const auto direct = s.prop.logical_classes(pattern);
    CHECK(via_decoder == direct);
  }
}

TEST_CASE("ground states: unique and degenerate cases") {
  {
    IsingModelBuilder b(2);
    b.add_term(0b01, 1.0);
    b.add_term(0b10, 0.5);
    const GroundStates gs = exact_ground_states(std::move(b).build());
    REQUIRE(gs.states.size() == 1);
    CHECK(gs.states[0].minus_mask == 0);
    CHECK(gs.energy == doctest::Approx(-1.5));
  }
  {
    IsingModelBuilder b(2);
    b.add_term(0b11, 1.0);  // ferromagnetic pair: two symmetric ground states
    const GroundStates gs = exact_ground_states(std::move(b).build());
    REQUIRE(gs.states.size() == 2);
    CHECK(gs.states[0].minus_mask == 0b00);
    CHECK(gs.states[1].minus_mask == 0b11);
  }
}

TEST_CASE("MLE: zero syndrome decodes to identity with a unique ground state") {
  const Setup s = setup_513();
  const ErrorModel model = ErrorModel::uniform(5, QubitErrorRates(0.1, 0.1, 0.01));
  const IsingModel ising =
      build_decode_hamiltonian(s.checks, Syndrome{0, 4}, model, 1.0);
  std::mt19937_64 rng(1);
  const Correction corr = mle_decode(ising, s.prop, s.checks, Syndrome{0, 4}, rng);
  CHECK(corr.degeneracy == 1);
  CHECK_FALSE(corr.tie);
  CHECK(corr.classes == std::vector<PauliClass>{PauliClass::I});
}

TEST_CASE("MLE corrects every single-qubit error on [[5,1,3]]") {
  const Setup s = setup_513();
  const ErrorModel model = ErrorModel::uniform(5, QubitErrorRates(0.01, 0.01, 0.001));
  std::mt19937_64 rng(2);
  for (int q = 0; q < 5; ++q) {
    for (int cls = 1; cls < 4; ++cls) {
      PauliOperator err = PauliOperator::identity(5);
      err.set_class(q, static_cast<PauliClass>(cls));
      const PauliEffect effect = s.prop.apply(err);
      const Syndrome syn{effect.syndrome, 4};
      const IsingModel ising = build_decode_hamiltonian(s.checks, syn, model, 1.0);
      const Correction corr = mle_decode(ising, s.prop, s.checks, syn, rng);
      // Net residual after applying the correction must be trivial.
      const auto actual = s.prop.logical_classes(err);
      for (int lq = 0; lq < 1; ++lq) {
        const int net = static_cast<int>(actual[lq]) ^ static_cast<int>(corr.classes[lq]);
        CHECK(net == 0);
      }
    }
  }
}

TEST_CASE("MaxEnt equals MLE in the T->0 limit") {
  const Setup s = setup_513();
  const ErrorModel model = ErrorModel::uniform(5, QubitErrorRates(0.08, 0.12, 0.02));
  const Syndrome syn = Syndrome::from_bit_string("1100");
  const IsingModel ising = build_decode_hamiltonian(s.checks, syn, model, 1.0);
  std::mt19937_64 rng(3);
  const Correction mle = mle_decode(ising, s.prop, s.checks, syn, rng);
  REQUIRE(mle.degeneracy == 1);
  const BoltzmannDistribution cold = exact_boltzmann(ising, 1e-3);
  const Correction maxent = maxent_decode(ising, s.prop, s.checks, syn, cold);
  CHECK(maxent.classes == mle.classes);
}

TEST_CASE("synthetic 1-vs-3 posterior: MaxEnt ignores the single pattern iff p > 1/3") {
  // One weight-1 pattern implies correction X; three alternatives imply I.
  // A distribution putting mass w on the first and (1-w)/3 on each of the
  // others votes X only when w > 1/2, i.e. when the one pattern outweighs
  // the other three combined; with likelihood weights p vs 3p^2 the
  // crossover sits at p = 1/3.
  auto vote = [](double p) {
    // Weight-w pattern likelihood ~ p^w; one weight-1 candidate against
    // three weight-2 candidates crosses over at p = 1/3.
    const double x_votes = p;
    const double i_votes = 3 * p * p;
    return x_votes > i_votes ? PauliClass::X : PauliClass::I;
  };
  CHECK(vote(0.30) == PauliClass::X);
  CHECK(vote(0.36) == PauliClass::I);
}

TEST_CASE("MaxEnt vote matches the posterior oracle per class") {
  const Setup s = setup_513();
  const ErrorModel model = ErrorModel::uniform(5, QubitErrorRates(0.1, 0.1, 0.01));
  for (std::uint64_t syn_bits : {std::uint64_t{3}, std::uint64_t{9}, std::uint64_t{14}}) {
    const Syndrome syn{syn_bits, 4};
    const IsingModel ising = build_decode_hamiltonian(s.checks, syn, model, 1.0);
    const BoltzmannDistribution dist = exact_boltzmann(ising, 1.0);
    const Correction corr = maxent_decode(ising, s.prop, s.checks, syn, dist);

    const std::vector<double> post = oracle::posterior(s.prop, model, syn_bits);
    std::array<double, 4> expect{};
    for (std::uint64_t a = 0; a < post.size(); ++a) {
      const auto cls = logical_action(s.prop, s.checks, {a, 6}, syn);
      expect[static_cast<int>(cls[0])] += post[a];
    }
    for (int c = 0; c < 4; ++c) {
      CHECK(corr.votes[0][c] == doctest::Approx(expect[c]).epsilon(1e-9));
    }
  }
}

TEST_CASE("vote over explicit sample lists") {
  const Setup s = setup_513();
  CHECK_THROWS_AS(vote_over_samples(s.prop, s.checks, Syndrome{0, 4}, {}),
                  std::invalid_argument);
  // All-identity samples vote I.
  const std::vector<SpinConfiguration> samples(10, SpinConfiguration{0, 6});
  const Correction corr = vote_over_samples(s.prop, s.checks, Syndrome{0, 4}, samples);
  CHECK(corr.classes == std::vector<PauliClass>{PauliClass::I});
  CHECK(corr.num_samples == 10);
}

TEST_CASE("BP is exact on tree factor graphs") {
  // Chain of 5 spins with fields and pair couplings: a tree.
  IsingModelBuilder b(5);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int v = 0; v < 5; ++v) b.add_term(std::uint64_t{1} << v, coeff(rng));
  for (int v = 0; v + 1 < 5; ++v) b.add_term(std::uint64_t{3} << v, coeff(rng));
  const IsingModel m = std::move(b).build();

  const BpMarginals bp = bp_marginals(export_factor_graph(m), BpOptions{});
  const std::vector<double> exact = oracle::boltzmann_marginals(m, 1.0);
  REQUIRE(bp.converged);
  for (int v = 0; v < 5; ++v) {
    CHECK(bp.marginals[v] == doctest::Approx(exact[v]).epsilon(1e-9));
  }
}

TEST_CASE("BP is exact on a star graph with a 3-body hub") {
  IsingModelBuilder b(4);
  b.add_term(0b0111, 0.7);
  b.add_term(0b1000, -0.4);
  b.add_term(0b0001, 0.2);
  const IsingModel m = std::move(b).build();
  const BpMarginals bp = bp_marginals(export_factor_graph(m), BpOptions{});
  const std::vector<double> exact = oracle::boltzmann_marginals(m, 1.0);
  for (int v = 0; v < 4; ++v) {
    CHECK(bp.marginals[v] == doctest::Approx(exact[v]).epsilon(1e-9));
  }
}

TEST_CASE("conditioned BP decodes [[5,1,3]] close to exact MaxEnt") {
  const Setup s = setup_513();
  const ErrorModel model = ErrorModel::uniform(5, family_rates(ErrorFamily::kF2, 0.08));
  int agree = 0;
  double max_dev = 0.0;
  for (std::uint64_t syn_bits = 0; syn_bits < 16; ++syn_bits) {
    const Syndrome syn{syn_bits, 4};
    const IsingModel ising = build_decode_hamiltonian(s.checks, syn, model, 1.0);
    const BpResult bp = bp_decode(export_factor_graph(ising), s.prop, s.checks, syn);
    const std::vector<double> exact = oracle::boltzmann_marginals(ising, 1.0);
    for (int v = 0; v < ising.num_spins; ++v) {
      max_dev = std::max(max_dev, std::abs(bp.marginals[v] - exact[v]));
    }
    const Correction maxent = maxent_decode(ising, s.prop, s.checks, syn,
                                            exact_boltzmann(ising, 1.0));
    if (bp.correction.classes == maxent.classes) ++agree;
  }
  CHECK(max_dev < 0.05);
  CHECK(agree >= 14);
}

TEST_CASE("BP on the zero syndrome at small p returns identity") {
  const Setup s = setup_513();
  const ErrorModel model = ErrorModel::uniform(5, QubitErrorRates(0.02, 0.02, 0.001));
  const Syndrome syn{0, 4};
  const IsingModel ising = build_decode_hamiltonian(s.checks, syn, model, 1.0);
  const BpResult bp = bp_decode(export_factor_graph(ising), s.prop, s.checks, syn);
  CHECK(bp.correction.classes == std::vector<PauliClass>{PauliClass::I});
}
