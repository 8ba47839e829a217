#pragma once

#include <cstddef>
#include <vector>

#include "magicmps/mps.hpp"
#include "magicmps/pauli.hpp"
#include "magicmps/random.hpp"

namespace magicmps {

/// One perfectly sampled Pauli string with c = <psi|sigma|psi> and
/// xi = c^2 / 2^N, its probability under the Pauli distribution.
struct SampleRecord {
  PauliString string;
  double c = 0.0;
  double xi = 0.0;
  double log_c2 = 0.0;  ///< ln c^2, kept separately so long chains do not underflow
};

/// Monte Carlo estimates of the stabilizer Renyi entropies (natural log).
struct SreEstimate {
  double m1 = 0.0;
  double m2 = 0.0;
  double se1 = 0.0;
  double se2 = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_redrawn = 0;   ///< samples rejected for numerically negligible c^2
  std::size_t n_identity = 0;  ///< identity draws rejected (their term is added exactly)
};

/// Perfect Pauli sampler over a right-canonical MPS (center at site 0).
///
/// Sweeps the chain once per sample, carrying the left environment
/// L_k(p_1..p_k) = sum_{s,s'} p_{s's} A^{s'}^dagger L_{k-1} A^{s}. Because every
/// site right of k is an isometry, the marginal of the first k letters is
/// ||L_k||_F^2 / 2^k, so each letter is drawn from its exact conditional. The
/// environment is rescaled to unit norm after every site and the scale is
/// accumulated in log space.
///
/// The sampler keeps its own copy of the tensors; draw() is const and thread-safe.
class PauliSampler {
 public:
  /// Throws std::invalid_argument unless the state is right-canonical and normalized.
  explicit PauliSampler(const MpsState& state);

  SampleRecord draw(RandomStream& rng) const;

 private:
  std::size_t n_sites_ = 0;
  std::vector<Matrix> stacked_;  ///< [A0 A1] per site
};

SampleRecord pauli_sample(const MpsState& state, RandomStream& rng);

/// Monte Carlo SRE from n_samples draws of Xi conditioned on sigma != I, with
/// the identity's exact share w_I = 2^-N added back:
///   M1 = (1 - w_I) mean(-ln c^2),  M2 = -ln(w_I + (1 - w_I) mean(c^2)).
/// Both are unbiased for -E_Xi[ln c^2] and E_Xi[c^2] respectively (before the
/// log), and exact (0) for stabilizer states. se1 and se2 follow the delta method.
/// The state is gauged to center 0 on a copy when needed. Draws whose c^2 is
/// below the noise threshold are redrawn and counted in n_redrawn.
SreEstimate estimate_sre(const MpsState& state, std::size_t n_samples, RandomStream& rng);

/// ln of the smallest c^2 accepted by estimate_sre for an n-site chain:
/// ln(1e-24) up to 40 sites, lowered by ln 2 per additional site.
double min_log_c2(std::size_t n_sites);

/// Exact M_n (rank 1 or 2) by enumerating all 4^N Pauli strings. N <= 8.
double exact_sre_small(const MpsState& state, int rank);

inline constexpr std::size_t kMaxExactSreSites = 8;

/// Sum with pairwise (tree) reduction; result independent of how the input was produced.
double pairwise_sum(const double* values, std::size_t count);

}  // namespace magicmps
