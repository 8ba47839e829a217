#include <cmath>
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include "magicmps/magic.hpp"
#include "magicmps/oracle.hpp"
#include "support.hpp"

using namespace magicmps;
using testing_support::random_circuit_state;

namespace {

MpsState random_clifford_state(std::size_t n, std::size_t n_gates, std::uint64_t seed) {
  MpsState s = MpsState::zeros(n);
  RandomStream rng(seed);
  for (std::size_t i = 0; i < n_gates; ++i) {
    const std::size_t left = rng.next_u64() % (n - 1);
    s.apply_two_qubit_gate(testing_support::random_clifford_gate(rng.next_u64()), left);
  }
  return s;
}

}  // namespace

TEST(PauliSampler, RequiresRightCanonicalState) {
  auto s = random_circuit_state(4, 3, 1);
  ASSERT_NE(s.ortho_center(), std::size_t{0});
  EXPECT_THROW(PauliSampler{s}, std::invalid_argument);
  s.move_center(0);
  EXPECT_NO_THROW(PauliSampler{s});
}

TEST(PauliSampler, RecordsAreConsistentWithExactExpectations) {
  auto s = random_circuit_state(4, 6, 2);
  s.move_center(0);
  const auto c2 = testing_support::brute_force_c2(to_statevector(s), 4);
  const PauliSampler sampler(s);
  RandomStream rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto r = sampler.draw(rng);
    const double exact = c2[r.string.code()];
    EXPECT_NEAR(r.c * r.c, exact, 1e-10);
    EXPECT_NEAR(r.xi, exact / 16.0, 1e-12);
    EXPECT_NEAR(std::exp(r.log_c2), exact, 1e-10);
  }
}

TEST(PauliSampler, SignOfExpectationIsKept) {
  // |1>: <Z> = -1.
  std::vector<LocalState> local = {LocalState(0, 1)};
  const auto s = MpsState::product(local);
  RandomStream rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto r = pauli_sample(s, rng);
    if (r.string[0] == Pauli::Z) EXPECT_NEAR(r.c, -1.0, 1e-14);
    if (r.string[0] == Pauli::I) EXPECT_NEAR(r.c, 1.0, 1e-14);
  }
}

// Empirical string frequencies against the exact Xi map (brute force).
TEST(PauliSampler, EmpiricalDistributionMatchesXi) {
  auto s = random_circuit_state(3, 4, 17);
  s.move_center(0);
  const auto c2 = testing_support::brute_force_c2(to_statevector(s), 3);
  const PauliSampler sampler(s);
  RandomStream rng(5);
  const int n = 50000;
  std::vector<double> counts(64, 0.0);
  for (int i = 0; i < n; ++i) counts[sampler.draw(rng).string.code()] += 1.0;
  double tv = 0.0;
  for (std::size_t code = 0; code < 64; ++code) tv += std::abs(counts[code] / n - c2[code] / 8.0);
  EXPECT_LE(0.5 * tv, 0.02);
}

TEST(EstimateSre, StabilizerStatesGiveZero) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = random_clifford_state(6, 30, seed);
    RandomStream rng(seed);
    const auto est = estimate_sre(s, 500, rng);
    EXPECT_NEAR(est.m1, 0.0, 1e-12);
    EXPECT_NEAR(est.m2, 0.0, 1e-12);
    EXPECT_NEAR(exact_sre_small(s, 1), 0.0, 1e-10);
    EXPECT_NEAR(exact_sre_small(s, 2), 0.0, 1e-10);
  }
}

TEST(EstimateSre, TStateProduct) {
  const std::size_t n = 5;
  std::vector<LocalState> local(n, gates::t_state());
  const auto s = MpsState::product(local);
  const double m2 = n * std::log(4.0 / 3.0);
  const double m1 = n * 0.5 * std::numbers::ln2;
  EXPECT_NEAR(exact_sre_small(s, 2), m2, 1e-10);
  EXPECT_NEAR(exact_sre_small(s, 1), m1, 1e-10);
  RandomStream rng(11);
  const auto est = estimate_sre(s, 20000, rng);
  EXPECT_NEAR(est.m2, m2, 3 * est.se2);
  EXPECT_NEAR(est.m1, m1, 3 * est.se1);
}

TEST(EstimateSre, AgreesWithExactEnumeration) {
  const auto s = random_circuit_state(4, 8, 31);
  const auto [m1, m2] = testing_support::sre_from_c2(testing_support::brute_force_c2(to_statevector(s), 4), 4);
  EXPECT_NEAR(exact_sre_small(s, 1), m1, 1e-10);
  EXPECT_NEAR(exact_sre_small(s, 2), m2, 1e-10);
  RandomStream rng(4);
  const auto est = estimate_sre(s, 100000, rng);
  EXPECT_NEAR(est.m1, m1, 3 * est.se1);
  EXPECT_NEAR(est.m2, m2, 3 * est.se2);
  EXPECT_EQ(est.n_samples, 100000u);
  EXPECT_EQ(est.n_redrawn, 0u);
}

TEST(EstimateSre, GaugesACopyWhenCenterIsNotZero) {
  const auto s = random_circuit_state(5, 5, 6);
  ASSERT_NE(s.ortho_center(), std::size_t{0});
  RandomStream a(8);
  RandomStream b(8);
  auto g = s;
  g.move_center(0);
  const auto e1 = estimate_sre(s, 300, a);
  const auto e2 = estimate_sre(g, 300, b);
  EXPECT_NEAR(e1.m2, e2.m2, 1e-10);
  EXPECT_EQ(s.ortho_center(), random_circuit_state(5, 5, 6).ortho_center());
}

TEST(EstimateSre, RejectsTooFewSamples) {
  RandomStream rng(1);
  EXPECT_THROW(estimate_sre(MpsState::zeros(3), 1, rng), std::invalid_argument);
}

// The identity string is drawn with probability 2^-N. The estimator adds its term
// exactly, so a large chain sampled far fewer than 2^N times is not biased upward.
TEST(EstimateSre, UnbiasedWhenIdentityIsRare) {
  // Product of |T> states: exact M2 is additive and known in closed form.
  const std::size_t n = 24;
  std::vector<LocalState> local(n, gates::t_state());
  const auto s = MpsState::product(local);
  RandomStream rng(2);
  const auto est = estimate_sre(s, 4000, rng);
  EXPECT_NEAR(est.m2, n * std::log(4.0 / 3.0), 3 * est.se2 + 1e-9);
  EXPECT_EQ(est.n_identity, 0u);
}

TEST(EstimateSre, StandardErrorScalesAsInverseSqrtN) {
  auto s = random_circuit_state(6, 10, 3);
  double se_small = 0, se_large = 0;
  for (std::uint64_t r = 0; r < 8; ++r) {
    RandomStream a(100 + r);
    RandomStream b(200 + r);
    se_small += estimate_sre(s, 1000, a).se2;
    se_large += estimate_sre(s, 16000, b).se2;
  }
  EXPECT_NEAR(se_small / se_large, 4.0, 0.6);
}

TEST(MinLogC2, ThresholdScalesBeyondFortySites) {
  EXPECT_DOUBLE_EQ(min_log_c2(10), std::log(1e-24));
  EXPECT_DOUBLE_EQ(min_log_c2(40), std::log(1e-24));
  EXPECT_NEAR(min_log_c2(50), std::log(1e-24) - 10 * std::numbers::ln2, 1e-12);
}

TEST(PairwiseSum, MatchesNaiveSumAndIsExactOnIntegers) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(v.data(), v.size()), 499500.0);
  EXPECT_EQ(pairwise_sum(v.data(), 0), 0.0);
}

// SRE properties: faithfulness, Clifford invariance, additivity.
TEST(SreProperties, CliffordGatesLeaveSreInvariant) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto s = random_circuit_state(6, 6, seed);
    const double m1 = exact_sre_small(s, 1);
    const double m2 = exact_sre_small(s, 2);
    RandomStream a(seed);
    const auto before = estimate_sre(s, 4000, a);
    RandomStream pick(seed + 77);
    for (int i = 0; i < 12; ++i) {
      s.apply_two_qubit_gate(testing_support::random_clifford_gate(pick.next_u64()), pick.next_u64() % 5);
    }
    EXPECT_NEAR(exact_sre_small(s, 1), m1, 1e-10);
    EXPECT_NEAR(exact_sre_small(s, 2), m2, 1e-10);
    RandomStream b(seed + 1000);
    const auto after = estimate_sre(s, 4000, b);
    EXPECT_NEAR(after.m2, before.m2, 3 * std::hypot(after.se2, before.se2));
  }
}

TEST(SreProperties, AdditiveOnProductStates) {
  // Gates never cross the middle bond, so the 8-site state is a product of two 4-site states.
  MpsState joint = MpsState::zeros(8);
  MpsState left = MpsState::zeros(4);
  MpsState right = MpsState::zeros(4);
  std::size_t slot = 0;
  for (int layer = 0; layer < 6; ++layer) {
    for (std::size_t l : {0u, 1u, 2u}) {
      if ((l % 2) != static_cast<std::size_t>(layer % 2)) continue;
      const Gate2 ga = haar_gate(4, 0, slot++);
      const Gate2 gb = haar_gate(4, 0, slot++);
      joint.apply_two_qubit_gate(ga, l);
      left.apply_two_qubit_gate(ga, l);
      joint.apply_two_qubit_gate(gb, l + 4);
      right.apply_two_qubit_gate(gb, l);
    }
  }
  for (int rank : {1, 2}) {
    EXPECT_NEAR(exact_sre_small(joint, rank), exact_sre_small(left, rank) + exact_sre_small(right, rank), 1e-10);
  }
}

TEST(SreProperties, NonnegativeAndBelowHaarBoundScale) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = random_circuit_state(5, 7, seed);
    const double m2 = exact_sre_small(s, 2);
    EXPECT_GE(m2, 0.0);
    EXPECT_LE(m2, std::log(std::exp2(5.0) + 1.0) - std::numbers::ln2 + 1e-12);
    EXPECT_GE(exact_sre_small(s, 1), m2 - 1e-12);  // Renyi entropies do not increase with rank
  }
}
