#include <gtest/gtest.h>

#include "magicmps/mps.hpp"
#include "magicmps/pauli.hpp"

using namespace magicmps;

TEST(PauliString, ParseAndPrintRoundTrip) {
  const auto s = PauliString::parse("IXYZ");
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0], Pauli::I);
  EXPECT_EQ(s[1], Pauli::X);
  EXPECT_EQ(s[2], Pauli::Y);
  EXPECT_EQ(s[3], Pauli::Z);
  EXPECT_EQ(s.str(), "IXYZ");
  EXPECT_THROW(PauliString::parse("IXQ"), std::invalid_argument);
}

TEST(PauliString, CodeIsBase4WithSiteZeroMostSignificant) {
  EXPECT_EQ(PauliString::parse("XI").code(), 4u);
  EXPECT_EQ(PauliString::parse("IX").code(), 1u);
  EXPECT_EQ(PauliString::parse("ZZ").code(), 15u);
  for (std::uint64_t c = 0; c < 256; ++c) EXPECT_EQ(PauliString::from_code(c, 4).code(), c);
  EXPECT_EQ(PauliString::from_code(27, 3).str(), "XYZ");
}

TEST(PauliMatrix, Algebra) {
  const Complex i(0, 1);
  const auto x = pauli_matrix(Pauli::X);
  const auto y = pauli_matrix(Pauli::Y);
  const auto z = pauli_matrix(Pauli::Z);
  EXPECT_LE((x * y - i * z).norm(), 1e-15);
  EXPECT_LE((y * z - i * x).norm(), 1e-15);
  EXPECT_LE((z * x - i * y).norm(), 1e-15);
  for (auto p : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
    const auto m = pauli_matrix(p);
    EXPECT_LE((m * m - Eigen::Matrix2cd::Identity()).norm(), 1e-15);
    EXPECT_LE((m - m.adjoint()).norm(), 1e-15);
  }
  EXPECT_EQ(to_char(Pauli::Y), 'Y');
}

TEST(PauliString, Ordering) {
  EXPECT_LT(PauliString::parse("IX"), PauliString::parse("XI"));
  EXPECT_EQ(PauliString::parse("ZY"), PauliString::parse("ZY"));
}
