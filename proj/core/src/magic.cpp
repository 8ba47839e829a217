#include "magicmps/magic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "magicmps/oracle.hpp"

namespace magicmps {

namespace {

constexpr double kConditionalSumTolerance = 1e-8;
constexpr double kImaginaryTolerance = 1e-10;
constexpr std::size_t kMaxRedrawFactor = 100;

template <class A, class B>
double frobenius_inner_real(const A& a, const B& b) {
  return (a.array().conjugate() * b.array()).sum().real();
}

double sample_sd(const std::vector<double>& values, double mean) {
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  return std::sqrt(pairwise_sum(sq.data(), sq.size()) / static_cast<double>(values.size() - 1));
}

}  // namespace

double pairwise_sum(const double* values, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += values[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

PauliSampler::PauliSampler(const MpsState& state) : n_sites_(state.size()) {
  if (state.ortho_center() != std::size_t{0}) {
    throw std::invalid_argument("Pauli sampling requires a right-canonical state (center at site 0)");
  }
  for (std::size_t k = 1; k < state.size(); ++k) {
    if (!state.is_right_canonical(k)) {
      throw std::invalid_argument("site " + std::to_string(k) + " is not right-canonical");
    }
  }
  stacked_.reserve(state.size());
  for (std::size_t k = 0; k < state.size(); ++k) {
    const auto& a = state.site(k).a;
    Matrix b(a[0].rows(), 2 * a[0].cols());
    b << a[0], a[1];
    stacked_.push_back(std::move(b));
  }
  const auto& first = state.site(0);
  const double norm = first.a[0].squaredNorm() + first.a[1].squaredNorm();
  if (std::abs(norm - 1.0) > 1e-10) throw std::invalid_argument("state is not normalized");
}

SampleRecord PauliSampler::draw(RandomStream& rng) const {
  const std::size_t n = n_sites_;
  const Complex i_unit(0.0, 1.0);
  SampleRecord record;
  record.string = PauliString(n);

  Matrix env = Matrix::Identity(1, 1);
  Matrix t;
  Matrix m;
  double log_c2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    // m = [A0 A1]^dagger env [A0 A1] holds the four Gram blocks M_{s's}.
    const Matrix& b = stacked_[k];
    const Eigen::Index r = b.cols() / 2;
    t.noalias() = env * b;
    m.noalias() = b.adjoint() * t;
    const auto m00 = m.topLeftCorner(r, r);
    const auto m01 = m.topRightCorner(r, r);
    const auto m10 = m.bottomLeftCorner(r, r);
    const auto m11 = m.bottomRightCorner(r, r);

    const double diag = m00.squaredNorm() + m11.squaredNorm();
    const double offd = m01.squaredNorm() + m10.squaredNorm();
    const double cross_d = 2.0 * frobenius_inner_real(m00, m11);
    const double cross_o = 2.0 * frobenius_inner_real(m01, m10);
    // Conditional probabilities; the previous environment has unit norm.
    const double q[4] = {
        0.5 * std::max(diag + cross_d, 0.0),  // I
        0.5 * std::max(offd + cross_o, 0.0),  // X
        0.5 * std::max(offd - cross_o, 0.0),  // Y
        0.5 * std::max(diag - cross_d, 0.0),  // Z
    };
    const double total = q[0] + q[1] + q[2] + q[3];
    if (std::abs(total - 1.0) > kConditionalSumTolerance) {
      throw NumericalFault("Pauli conditionals sum to " + std::to_string(total) + " at site " + std::to_string(k));
    }

    const double u = rng.uniform() * total;
    int letter = 3;
    double acc = 0.0;
    for (int p = 0; p < 4; ++p) {
      acc += q[p];
      if (u < acc && q[p] > 0.0) {
        letter = p;
        break;
      }
    }
    while (q[letter] <= 0.0) --letter;

    switch (static_cast<Pauli>(letter)) {
      case Pauli::I: env = m00 + m11; break;
      case Pauli::X: env = m01 + m10; break;
      case Pauli::Y: env = i_unit * (m10 - m01); break;
      case Pauli::Z: env = m00 - m11; break;
    }
    env /= std::sqrt(2.0 * q[letter]);
    log_c2 += std::log(2.0 * q[letter]);
    record.string[k] = static_cast<Pauli>(letter);
  }

  const Complex last = env(0, 0);
  if (std::abs(last.imag()) > kImaginaryTolerance) {
    throw NumericalFault("Pauli expectation has imaginary part " + std::to_string(last.imag()));
  }
  const double sign = last.real() < 0.0 ? -1.0 : 1.0;
  record.log_c2 = std::min(log_c2, 0.0);
  record.c = sign * std::exp(0.5 * record.log_c2);
  record.xi = std::exp(record.log_c2 - static_cast<double>(n) * std::numbers::ln2);
  return record;
}

SampleRecord pauli_sample(const MpsState& state, RandomStream& rng) {
  return PauliSampler(state).draw(rng);
}

double min_log_c2(std::size_t n_sites) {
  const double extra = n_sites > 40 ? static_cast<double>(n_sites - 40) : 0.0;
  return std::log(1e-24) - extra * std::numbers::ln2;
}

SreEstimate estimate_sre(const MpsState& state, std::size_t n_samples, RandomStream& rng) {
  if (n_samples < 2) throw std::invalid_argument("estimate_sre needs at least 2 samples");

  const MpsState* source = &state;
  std::optional<MpsState> gauged;
  if (state.ortho_center() != std::size_t{0}) {
    gauged = state;
    gauged->move_center(0);
    source = &*gauged;
  }
  const PauliSampler sampler(*source);
  const double threshold = min_log_c2(state.size());

  // The identity string has c^2 = 1 and probability 2^-N exactly, yet carries a
  // fixed share of E[c^2]; once 2^N >> n_samples it is almost never drawn and the
  // plain mean is biased. Its term is therefore added exactly and the samples are
  // drawn from Xi conditioned on sigma != I.
  const double p_identity = std::exp2(-static_cast<double>(state.size()));
  const double w_rest = 1.0 - p_identity;

  std::vector<double> neg_log(n_samples);
  std::vector<double> c2(n_samples);
  SreEstimate est;
  est.n_samples = n_samples;
  auto is_identity = [](const PauliString& s) {
    return std::all_of(s.letters().begin(), s.letters().end(), [](Pauli p) { return p == Pauli::I; });
  };
  for (std::size_t i = 0; i < n_samples; ++i) {
    SampleRecord r = sampler.draw(rng);
    for (;;) {
      if (r.log_c2 < threshold) {
        ++est.n_redrawn;
      } else if (is_identity(r.string)) {
        ++est.n_identity;
      } else {
        break;
      }
      if (est.n_redrawn + est.n_identity > kMaxRedrawFactor * n_samples) {
        throw NumericalFault("too many rejected Pauli samples");
      }
      r = sampler.draw(rng);
    }
    neg_log[i] = -r.log_c2;
    c2[i] = std::exp(r.log_c2);
  }

  const double n = static_cast<double>(n_samples);
  const double mean_neg_log = pairwise_sum(neg_log.data(), n_samples) / n;
  const double mean_c2_rest = pairwise_sum(c2.data(), n_samples) / n;
  const double mean_c2 = p_identity + w_rest * mean_c2_rest;
  est.m1 = std::max(w_rest * mean_neg_log, 0.0);
  est.m2 = std::max(-std::log(mean_c2), 0.0);
  est.se1 = w_rest * sample_sd(neg_log, mean_neg_log) / std::sqrt(n);
  est.se2 = w_rest * sample_sd(c2, mean_c2_rest) / (mean_c2 * std::sqrt(n));
  return est;
}

double exact_sre_small(const MpsState& state, int rank) {
  if (state.size() > kMaxExactSreSites) {
    throw std::invalid_argument("exact SRE enumeration supports at most " + std::to_string(kMaxExactSreSites) +
                                " sites");
  }
  const Statevector sv(to_statevector(state));
  return exact_sre(sv, rank);
}

}  // namespace magicmps
