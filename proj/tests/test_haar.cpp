#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "magicmps/haar.hpp"
#include "magicmps/random.hpp"

using namespace magicmps;

TEST(RandomStream, SplitmixReferenceValue) {
  // First output of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(RandomStream, Mt19937_64ReferenceValue) {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  RandomStream rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(RandomStream, UniformAndNormalMoments) {
  RandomStream rng(7);
  const int n = 200000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0, sn4 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    su2 += u * u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sn4 += z * z * z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.003);
  EXPECT_NEAR(su2 / n, 1.0 / 3.0, 0.003);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.01);
  EXPECT_NEAR(sn4 / n, 3.0, 0.06);
}

TEST(SeedTree, StreamsAreDistinctAndReproducible) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t traj = 0; traj < 20; ++traj)
    for (std::uint64_t g = 0; g < 20; ++g)
      for (auto kind : {StreamKind::gate, StreamKind::sampling}) seen.insert(derive_seed({3, traj, g, kind}));
  EXPECT_EQ(seen.size(), 800u);
  EXPECT_EQ(derive_seed({3, 4, 5, StreamKind::gate}), derive_seed({3, 4, 5, StreamKind::gate}));
  EXPECT_NE(derive_seed({3, 4, 5, StreamKind::gate}), derive_seed({4, 4, 5, StreamKind::gate}));
}

TEST(HaarUnitary, IsUnitary) {
  RandomStream rng(1);
  for (int dim : {2, 4}) {
    for (int i = 0; i < 50; ++i) {
      const Matrix u = sample_haar_unitary(dim, rng);
      EXPECT_LE((u.adjoint() * u - Matrix::Identity(dim, dim)).norm(), 1e-12);
    }
  }
  EXPECT_THROW(sample_haar_unitary(3, rng), std::invalid_argument);
}

// Moments of a single entry of a Haar unitary on U(d): E|u|^2 = 1/d and
// E|u|^4 = 2/(d(d+1)). A QR without the phase fix fails the second moment
// check on the diagonal.
TEST(HaarUnitary, EntryMomentsMatchHaarMeasure) {
  RandomStream rng(42);
  const int n = 40000;
  for (int dim : {2, 4}) {
    double m2_diag = 0, m4_diag = 0, m4_off = 0;
    Complex mean_diag = 0;
    for (int i = 0; i < n; ++i) {
      const Matrix u = sample_haar_unitary(dim, rng);
      const double a = std::norm(u(0, 0));
      m2_diag += a;
      m4_diag += a * a;
      m4_off += std::pow(std::norm(u(dim - 1, 0)), 2);
      mean_diag += u(1, 1);
    }
    const double d = dim;
    EXPECT_NEAR(m2_diag / n, 1.0 / d, 0.01) << dim;
    EXPECT_NEAR(m4_diag / n, 2.0 / (d * (d + 1)), 0.01) << dim;
    EXPECT_NEAR(m4_off / n, 2.0 / (d * (d + 1)), 0.01) << dim;
    EXPECT_NEAR(std::abs(mean_diag / double(n)), 0.0, 0.015) << dim;
  }
}

// Left invariance: V U has the same distribution as U for a fixed unitary V.
TEST(HaarUnitary, LeftInvariance) {
  RandomStream rng(9);
  RandomStream fixed(123);
  const Matrix v = sample_haar_unitary(4, fixed);
  const int n = 40000;
  double trace_moment = 0;
  double trace_moment_rotated = 0;
  for (int i = 0; i < n; ++i) {
    const Matrix u = sample_haar_unitary(4, rng);
    trace_moment += std::norm(u.trace());
    trace_moment_rotated += std::norm((v * u).trace());
  }
  // E|tr U|^2 = 1 for Haar unitaries of any dimension.
  EXPECT_NEAR(trace_moment / n, 1.0, 0.03);
  EXPECT_NEAR(trace_moment_rotated / n, 1.0, 0.03);
}

TEST(HaarGate, DeterministicPerSlot) {
  EXPECT_EQ(haar_gate(1, 2, 3), haar_gate(1, 2, 3));
  EXPECT_NE(haar_gate(1, 2, 3), haar_gate(1, 2, 4));
  EXPECT_NE(haar_gate(1, 2, 3), haar_gate(1, 3, 3));
  EXPECT_NE(haar_gate(1, 2, 3), haar_gate(2, 2, 3));
}

TEST(Brickwork, LayoutAlternatesBonds) {
  const auto s = brickwork(5, 3);
  ASSERT_EQ(s.depth(), 3u);
  EXPECT_EQ(s.layers[0], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(s.layers[1], (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(s.layers[2], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(s.gate_count(), 6u);
  EXPECT_EQ(first_slot_of_layer(s, 0), 0u);
  EXPECT_EQ(first_slot_of_layer(s, 1), 2u);
  EXPECT_EQ(first_slot_of_layer(s, 2), 4u);
}

TEST(Brickwork, EvenChainCountsAndEdgeCases) {
  const auto s = brickwork(6, 4);
  EXPECT_EQ(s.gate_count(), 3u + 2u + 3u + 2u);
  EXPECT_EQ(brickwork(2, 2).layers[1].size(), 0u);
  EXPECT_EQ(brickwork(4, 0).gate_count(), 0u);
  EXPECT_THROW(brickwork(1, 3), std::invalid_argument);
}

TEST(Brickwork, CircuitGatesFollowSlotOrder) {
  const auto s = brickwork(4, 3);
  const auto g = circuit_gates(s, 5, 7);
  ASSERT_EQ(g.size(), s.gate_count());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g[i], haar_gate(5, 7, i));
}
