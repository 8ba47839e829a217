#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "magicmps/haar.hpp"
#include "magicmps/mps.hpp"
#include "magicmps/pauli.hpp"

namespace magicmps {

/// Dense 2^N amplitude vector, big-endian (site 0 is the most significant bit).
class Statevector {
 public:
  /// |0...0>.
  explicit Statevector(std::size_t n_sites);
  /// Takes ownership of amplitudes; the length must be a power of two and the norm 1 within 1e-12.
  explicit Statevector(Vector amplitudes);

  std::size_t size() const { return n_sites_; }
  const Vector& amplitudes() const { return amps_; }

  void apply_two_qubit_gate(const Gate2& gate, std::size_t left);
  void apply_one_qubit_gate(const Eigen::Matrix2cd& gate, std::size_t site);

 private:
  std::size_t n_sites_ = 0;
  Vector amps_;
};

inline constexpr std::size_t kMaxOracleSites = 14;
inline constexpr std::size_t kMaxXiMapSites = 6;

/// Every gate of the schedule applied in slot order to |0...0>.
Statevector evolve_exact(std::size_t n_sites, const BrickworkSchedule& schedule, std::span<const Gate2> gates);

/// c_sigma^2 = <psi|sigma|psi>^2 for all 4^N strings, indexed by PauliString::code().
std::vector<double> pauli_expectation_squares(const Statevector& sv);

/// Exact M_n (n in {1, 2}) from full enumeration.
double exact_sre(const Statevector& sv, int rank);

/// Xi(sigma) = c_sigma^2 / 2^N for every Pauli string. N <= 6.
std::map<PauliString, double> exact_xi_distribution(const Statevector& sv);

/// M2 of N-qubit Haar-random states: -ln(4 / (2^N + 3)).
double m2_haar(std::size_t n_sites);

struct HaarSaturation {
  std::size_t n_sites = 0;
  double m2_haar = 0.0;
};
HaarSaturation haar_saturation(std::size_t n_sites);

/// Von Neumann entropy (bits) with `cut` sites on the left, 1 <= cut <= N-1.
double exact_entropy(const Statevector& sv, std::size_t cut);

/// |<a|b>|^2.
double fidelity(const Vector& a, const Vector& b);

}  // namespace magicmps
