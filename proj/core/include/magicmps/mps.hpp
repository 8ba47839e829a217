#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "magicmps/errors.hpp"

namespace magicmps {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Gate2 = Eigen::Matrix4cd;
using LocalState = Eigen::Vector2cd;

/// Bond-dimension control. An empty `chi_max` is the infinite mode: bonds are
/// limited only by the discarded-weight tolerance.
struct TruncationPolicy {
  std::optional<std::size_t> chi_max;
  double svd_tol = 1e-8;

  static TruncationPolicy infinite(double tol = 1e-8) { return {std::nullopt, tol}; }
  static TruncationPolicy finite(std::size_t chi, double tol = 1e-8) { return {chi, tol}; }

  bool operator==(const TruncationPolicy&) const = default;
};

/// Outcome of the SVD split that follows a two-qubit gate.
struct TruncationReport {
  double discarded_weight = 0.0;  ///< sum of dropped s_i^2 over sum of all s_i^2
  std::size_t new_bond = 1;
  std::size_t required_bond = 1;  ///< bond the tolerance alone would keep
  bool capped = false;            ///< chi_max forced new_bond < required_bond
};

/// Von Neumann entropies (bits) at every cut of the chain. `per_cut[l]` is the
/// entropy between sites l and l+1 (0-based), i.e. with l+1 sites on the left.
struct EntropyProfile {
  std::vector<double> per_cut;
  double max_cut_value = 0.0;
  std::size_t max_cut_index = 0;
};

/// One site tensor A[s] with s in {0, 1}; each A[s] is (left bond) x (right bond).
struct SiteTensor {
  std::array<Matrix, 2> a;

  std::size_t left_bond() const { return static_cast<std::size_t>(a[0].rows()); }
  std::size_t right_bond() const { return static_cast<std::size_t>(a[0].cols()); }
};

/// Open-boundary matrix product state of qubits with orthogonality-center
/// bookkeeping. Sites are 0-based, left to right; site 0 is the most
/// significant bit of the statevector index.
///
/// Every public mutator leaves the state normalized and, when the center is
/// known, sites left of it left-canonical and sites right of it right-canonical.
class MpsState {
 public:
  /// Product state from per-site unit vectors. Bonds are 1 and the center is site 0.
  static MpsState product(std::span<const LocalState> local_states, TruncationPolicy policy = {});
  /// |0...0>.
  static MpsState zeros(std::size_t n_sites, TruncationPolicy policy = {});

  std::size_t size() const { return sites_.size(); }
  const TruncationPolicy& policy() const { return policy_; }
  std::optional<std::size_t> ortho_center() const { return center_; }
  const SiteTensor& site(std::size_t k) const { return sites_.at(k); }

  /// Bond dimension between sites `cut` and `cut + 1`.
  std::size_t bond(std::size_t cut) const { return sites_.at(cut).right_bond(); }
  std::vector<std::size_t> bonds() const;

  /// Gauge the state so that `k` becomes the orthogonality center.
  void move_center(std::size_t k);

  /// Apply a 4x4 gate to sites (left, left + 1). The gate's row index is
  /// 2 * s_left + s_right. Truncates per the policy, renormalizes, and leaves
  /// the center at left + 1.
  TruncationReport apply_two_qubit_gate(const Gate2& gate, std::size_t left);

  /// <psi|psi> by full contraction (independent of the gauge bookkeeping).
  double norm_squared() const;

  bool is_left_canonical(std::size_t k, double tol = 1e-10) const;
  bool is_right_canonical(std::size_t k, double tol = 1e-10) const;

  /// Binary snapshot: magic, version, N, d, chi_max (0 = infinite), svd_tol,
  /// center (-1 = none), per-site shapes, then row-major (left, phys, right)
  /// tensor data as (re, im) float64 pairs.
  void save(std::ostream& out) const;
  static MpsState load(std::istream& in);

 private:
  MpsState(std::vector<SiteTensor> sites, TruncationPolicy policy);

  void shift_center_right(std::size_t k);
  void shift_center_left(std::size_t k);
  void canonicalize_to(std::size_t k);

  std::vector<SiteTensor> sites_;
  TruncationPolicy policy_;
  std::optional<std::size_t> center_;
};

EntropyProfile entanglement_profile(const MpsState& state);

/// Largest bond across all cuts.
std::size_t max_required_bond(const MpsState& state);

/// Full contraction to 2^N amplitudes (big-endian, site 0 most significant).
/// Rejects N > kMaxStatevectorSites.
Vector to_statevector(const MpsState& state);

inline constexpr std::size_t kMaxStatevectorSites = 14;

/// Entropy in bits of the distribution s_i^2 / sum(s^2).
double entropy_bits(const Eigen::VectorXd& singular_values);

/// Frequently used one- and two-qubit gates.
namespace gates {
Eigen::Matrix2cd hadamard();
Eigen::Matrix2cd phase_s();
Gate2 cnot();  ///< control on the left site
Gate2 kron(const Eigen::Matrix2cd& left, const Eigen::Matrix2cd& right);
LocalState t_state();  ///< (|0> + e^{i pi/4}|1>)/sqrt(2)
}  // namespace gates

}  // namespace magicmps
