#pragma once

// Helpers shared by the test binaries. The brute-force routines here are the
// independent oracles: they build dense operators with Kronecker products and
// never touch the library's fast paths.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "magicmps/haar.hpp"
#include "magicmps/mps.hpp"
#include "magicmps/pauli.hpp"

namespace testing_support {

using namespace magicmps;

inline MpsState random_circuit_state(std::size_t n, std::size_t depth, std::uint64_t seed,
                                     TruncationPolicy policy = TruncationPolicy::infinite(),
                                     std::uint64_t trajectory = 0) {
  MpsState state = MpsState::zeros(n, policy);
  const auto schedule = brickwork(n, depth);
  std::size_t slot = 0;
  for (const auto& layer : schedule.layers) {
    for (std::size_t left : layer) state.apply_two_qubit_gate(haar_gate(seed, trajectory, slot++), left);
  }
  return state;
}

inline Eigen::MatrixXcd dense_kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Dense 2^N x 2^N matrix of a Pauli string (site 0 is the leftmost factor).
inline Eigen::MatrixXcd dense_pauli(const PauliString& s) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t k = 0; k < s.size(); ++k) m = dense_kron(m, pauli_matrix(s[k]));
  return m;
}

/// <psi|sigma|psi>^2 for every Pauli string, by dense matrix-vector products.
inline std::vector<double> brute_force_c2(const Eigen::VectorXcd& psi, std::size_t n) {
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  std::vector<double> out(count);
  for (std::uint64_t code = 0; code < count; ++code) {
    const auto s = PauliString::from_code(code, n);
    const std::complex<double> c = psi.dot(dense_pauli(s) * psi);
    out[code] = std::norm(c);
  }
  return out;
}

/// M1 and M2 from a table of c^2 values.
inline std::pair<double, double> sre_from_c2(const std::vector<double>& c2, std::size_t n) {
  const double dim = std::exp2(static_cast<double>(n));
  double m1 = 0.0;
  double sum4 = 0.0;
  for (double v : c2) {
    if (v > 1e-300) m1 -= v / dim * std::log(v);
    sum4 += v * v;
  }
  return {m1, -std::log(sum4 / dim)};
}

/// Von Neumann entropy (bits) across a cut, from the eigenvalues of the reduced density matrix.
inline double brute_force_entropy(const Eigen::VectorXcd& psi, std::size_t n, std::size_t cut) {
  const Eigen::Index left = Eigen::Index{1} << cut;
  const Eigen::Index right = Eigen::Index{1} << (n - cut);
  Eigen::MatrixXcd m(left, right);
  for (Eigen::Index i = 0; i < left; ++i)
    for (Eigen::Index j = 0; j < right; ++j) m(i, j) = psi(i * right + j);
  const Eigen::MatrixXcd rho = m * m.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double p = es.eigenvalues()(k);
    if (p > 1e-15) s -= p * std::log2(p);
  }
  return s;
}

/// Random Clifford gate from {H x I, I x H, S x I, I x S, CNOT, reversed CNOT}.
inline Gate2 random_clifford_gate(std::uint64_t r) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  switch (r % 6) {
    case 0: return gates::kron(gates::hadamard(), id);
    case 1: return gates::kron(id, gates::hadamard());
    case 2: return gates::kron(gates::phase_s(), id);
    case 3: return gates::kron(id, gates::phase_s());
    case 4: return gates::cnot();
    default: {
      const Gate2 h2 = gates::kron(gates::hadamard(), gates::hadamard());
      return h2 * gates::cnot() * h2;
    }
  }
}

}  // namespace testing_support
