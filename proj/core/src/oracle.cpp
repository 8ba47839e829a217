#include "magicmps/oracle.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace magicmps {

namespace {

std::size_t site_bit(std::size_t n_sites, std::size_t site) { return n_sites - 1 - site; }

// In-place unnormalized Walsh-Hadamard transform: out[z] = sum_b (-1)^{popcount(b & z)} in[b].
void walsh_hadamard(std::vector<Complex>& v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const Complex a = v[j];
        const Complex b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

}  // namespace

Statevector::Statevector(std::size_t n_sites) : n_sites_(n_sites) {
  if (n_sites == 0 || n_sites > kMaxOracleSites) {
    throw std::invalid_argument("statevector oracle supports 1.." + std::to_string(kMaxOracleSites) + " sites");
  }
  amps_ = Vector::Zero(Eigen::Index{1} << n_sites);
  amps_(0) = 1.0;
}

Statevector::Statevector(Vector amplitudes) : amps_(std::move(amplitudes)) {
  const auto dim = static_cast<std::size_t>(amps_.size());
  if (dim < 2 || !std::has_single_bit(dim)) throw std::invalid_argument("statevector length must be a power of two");
  n_sites_ = static_cast<std::size_t>(std::countr_zero(dim));
  if (n_sites_ > kMaxOracleSites) throw std::invalid_argument("statevector too large for the oracle");
  if (std::abs(amps_.squaredNorm() - 1.0) > 1e-12) throw std::invalid_argument("statevector is not normalized");
}

void Statevector::apply_two_qubit_gate(const Gate2& gate, std::size_t left) {
  if (left + 1 >= n_sites_) throw std::out_of_range("gate site out of range");
  const std::size_t hi = std::size_t{1} << site_bit(n_sites_, left);
  const std::size_t lo = std::size_t{1} << site_bit(n_sites_, left + 1);
  const auto dim = static_cast<std::size_t>(amps_.size());
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & (hi | lo)) continue;
    const std::size_t idx[4] = {base, base | lo, base | hi, base | hi | lo};
    Eigen::Vector4cd in;
    for (int k = 0; k < 4; ++k) in(k) = amps_(static_cast<Eigen::Index>(idx[k]));
    const Eigen::Vector4cd out = gate * in;
    for (int k = 0; k < 4; ++k) amps_(static_cast<Eigen::Index>(idx[k])) = out(k);
  }
}

void Statevector::apply_one_qubit_gate(const Eigen::Matrix2cd& gate, std::size_t site) {
  if (site >= n_sites_) throw std::out_of_range("gate site out of range");
  const std::size_t bit = std::size_t{1} << site_bit(n_sites_, site);
  const auto dim = static_cast<std::size_t>(amps_.size());
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & bit) continue;
    const auto i0 = static_cast<Eigen::Index>(base);
    const auto i1 = static_cast<Eigen::Index>(base | bit);
    const Complex a = amps_(i0);
    const Complex b = amps_(i1);
    amps_(i0) = gate(0, 0) * a + gate(0, 1) * b;
    amps_(i1) = gate(1, 0) * a + gate(1, 1) * b;
  }
}

Statevector evolve_exact(std::size_t n_sites, const BrickworkSchedule& schedule, std::span<const Gate2> gates) {
  if (n_sites > kMaxOracleSites) throw std::invalid_argument("exact evolution supports at most 14 sites");
  if (schedule.n_sites != n_sites) throw std::invalid_argument("schedule size does not match");
  if (gates.size() != schedule.gate_count()) throw std::invalid_argument("one gate per schedule slot is required");
  Statevector sv(n_sites);
  std::size_t slot = 0;
  for (const auto& layer : schedule.layers) {
    for (std::size_t left : layer) sv.apply_two_qubit_gate(gates[slot++], left);
  }
  return sv;
}

std::vector<double> pauli_expectation_squares(const Statevector& sv) {
  const std::size_t n = sv.size();
  if (n > 10) throw std::invalid_argument("Pauli enumeration supports at most 10 sites");
  const std::size_t dim = std::size_t{1} << n;
  const Vector& psi = sv.amplitudes();
  std::vector<double> c2(dim * dim);
  std::vector<Complex> v(dim);

  // Letter at a site from its (x, z) bits: I=(0,0), X=(1,0), Y=(1,1), Z=(0,1);
  // sigma = i^{#Y} X^x Z^z, so <psi|sigma|psi> = i^{#Y} sum_b (-1)^{b.z} conj(psi[b^x]) psi[b].
  for (std::size_t x = 0; x < dim; ++x) {
    for (std::size_t b = 0; b < dim; ++b) {
      v[b] = std::conj(psi(static_cast<Eigen::Index>(b ^ x))) * psi(static_cast<Eigen::Index>(b));
    }
    walsh_hadamard(v);
    for (std::size_t z = 0; z < dim; ++z) {
      std::uint64_t code = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t bit = site_bit(n, k);
        const bool xb = (x >> bit) & 1U;
        const bool zb = (z >> bit) & 1U;
        const std::uint64_t letter = xb ? (zb ? 2U : 1U) : (zb ? 3U : 0U);
        code = (code << 2) | letter;
      }
      // |i^{#Y} w|^2 = |w|^2, and c is real for Hermitian strings.
      c2[code] = std::norm(v[z]);
    }
  }
  return c2;
}

double exact_sre(const Statevector& sv, int rank) {
  if (rank != 1 && rank != 2) throw std::invalid_argument("SRE rank must be 1 or 2");
  const auto c2 = pauli_expectation_squares(sv);
  const double inv_dim = std::ldexp(1.0, -static_cast<int>(sv.size()));
  double acc = 0.0;
  if (rank == 1) {
    for (double v : c2) {
      if (v > 0.0) acc -= inv_dim * v * std::log(v);
    }
    return acc;
  }
  for (double v : c2) acc += inv_dim * v * v;
  return -std::log(acc);
}

std::map<PauliString, double> exact_xi_distribution(const Statevector& sv) {
  if (sv.size() > kMaxXiMapSites) throw std::invalid_argument("Xi map supports at most 6 sites");
  const auto c2 = pauli_expectation_squares(sv);
  const double inv_dim = std::ldexp(1.0, -static_cast<int>(sv.size()));
  std::map<PauliString, double> xi;
  for (std::size_t code = 0; code < c2.size(); ++code) {
    xi.emplace(PauliString::from_code(code, sv.size()), c2[code] * inv_dim);
  }
  return xi;
}

double m2_haar(std::size_t n_sites) {
  if (n_sites == 0) throw std::invalid_argument("m2_haar needs N >= 1");
  // ln((2^N + 3)/4) written to stay accurate for large N.
  const double n = static_cast<double>(n_sites);
  return n * std::numbers::ln2 + std::log1p(3.0 * std::exp2(-n)) - 2.0 * std::numbers::ln2;
}

HaarSaturation haar_saturation(std::size_t n_sites) { return {n_sites, m2_haar(n_sites)}; }

double exact_entropy(const Statevector& sv, std::size_t cut) {
  const std::size_t n = sv.size();
  if (cut < 1 || cut >= n) throw std::out_of_range("cut must lie in 1..N-1");
  const Eigen::Index rows = Eigen::Index{1} << cut;
  const Eigen::Index cols = Eigen::Index{1} << (n - cut);
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor m = Eigen::Map<const RowMajor>(sv.amplitudes().data(), rows, cols);
  Eigen::BDCSVD<RowMajor> svd(m);
  return entropy_bits(svd.singularValues());
}

double fidelity(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity of vectors with different sizes");
  return std::norm(a.dot(b));
}

}  // namespace magicmps
