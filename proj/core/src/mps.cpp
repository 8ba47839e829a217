#include "magicmps/mps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace magicmps {

namespace {

constexpr double kTieTolerance = 1e-12;

struct CutChoice {
  std::size_t keep = 1;
  std::size_t required = 1;
  double discarded = 0.0;
  bool capped = false;
};

// Smallest prefix of the descending singular values whose discarded tail weight
// is within svd_tol, widened to cover ties at the boundary, then capped.
CutChoice choose_cut(const Eigen::VectorXd& s, const TruncationPolicy& policy) {
  const auto n = static_cast<std::size_t>(s.size());
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) tail[i] = tail[i + 1] + s[i] * s[i];
  const double total = tail[0];
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericalFault("two-site tensor has zero or non-finite norm");
  }

  CutChoice cut;
  cut.required = n;
  for (std::size_t k = 1; k <= n; ++k) {
    if (tail[k] <= policy.svd_tol * total) {
      cut.required = k;
      break;
    }
  }
  const double tie = kTieTolerance * std::sqrt(total);
  while (cut.required < n && s[cut.required - 1] - s[cut.required] <= tie) ++cut.required;

  cut.keep = cut.required;
  if (policy.chi_max && cut.keep > *policy.chi_max) {
    cut.keep = *policy.chi_max;
    cut.capped = true;
  }
  cut.discarded = std::clamp(tail[cut.keep] / total, 0.0, 1.0);
  return cut;
}

// Rows are s * Dl + l.
Matrix stack_rows(const SiteTensor& t) {
  const auto dl = t.a[0].rows();
  Matrix m(2 * dl, t.a[0].cols());
  m.topRows(dl) = t.a[0];
  m.bottomRows(dl) = t.a[1];
  return m;
}

// Columns are s * Dr + r.
Matrix stack_cols(const SiteTensor& t) {
  const auto dr = t.a[0].cols();
  Matrix m(t.a[0].rows(), 2 * dr);
  m.leftCols(dr) = t.a[0];
  m.rightCols(dr) = t.a[1];
  return m;
}

double max_abs_deviation_from_identity(const Matrix& m) {
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::invalid_argument("truncated MPS snapshot");
  return value;
}

constexpr char kSnapshotMagic[4] = {'M', 'M', 'P', 'S'};
constexpr std::uint32_t kSnapshotVersion = 1;

}  // namespace

MpsState::MpsState(std::vector<SiteTensor> sites, TruncationPolicy policy)
    : sites_(std::move(sites)), policy_(policy) {}

MpsState MpsState::product(std::span<const LocalState> local_states, TruncationPolicy policy) {
  if (local_states.empty()) throw std::invalid_argument("product state needs at least one site");
  if (policy.chi_max && *policy.chi_max == 0) throw std::invalid_argument("chi_max must be positive");
  if (policy.svd_tol < 0.0) throw std::invalid_argument("svd_tol must be nonnegative");

  std::vector<SiteTensor> sites;
  sites.reserve(local_states.size());
  for (std::size_t k = 0; k < local_states.size(); ++k) {
    const auto& v = local_states[k];
    if (std::abs(v.squaredNorm() - 1.0) > 1e-12) {
      throw std::invalid_argument("local state at site " + std::to_string(k) + " is not normalized");
    }
    SiteTensor t;
    t.a[0] = Matrix::Constant(1, 1, v(0));
    t.a[1] = Matrix::Constant(1, 1, v(1));
    sites.push_back(std::move(t));
  }
  MpsState state(std::move(sites), policy);
  state.center_ = 0;
  return state;
}

MpsState MpsState::zeros(std::size_t n_sites, TruncationPolicy policy) {
  std::vector<LocalState> local(n_sites, LocalState(1.0, 0.0));
  return product(local, policy);
}

std::vector<std::size_t> MpsState::bonds() const {
  std::vector<std::size_t> out;
  if (sites_.size() < 2) return out;
  out.reserve(sites_.size() - 1);
  for (std::size_t l = 0; l + 1 < sites_.size(); ++l) out.push_back(bond(l));
  return out;
}

void MpsState::move_center(std::size_t k) {
  if (k >= sites_.size()) throw std::out_of_range("orthogonality center out of range");
  if (!center_) {
    canonicalize_to(k);
  } else if (*center_ < k) {
    shift_center_right(k);
  } else if (*center_ > k) {
    shift_center_left(k);
  }
}

void MpsState::shift_center_right(std::size_t k) {
  for (std::size_t i = *center_; i < k; ++i) {
    const Matrix m = stack_rows(sites_[i]);
    const auto dl = sites_[i].a[0].rows();
    const auto rank = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Matrix> qr(m);
    const Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), rank);
    const Matrix r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
    sites_[i].a[0] = q.topRows(dl);
    sites_[i].a[1] = q.bottomRows(dl);
    for (auto& a : sites_[i + 1].a) a = r * a;
  }
  center_ = k;
}

void MpsState::shift_center_left(std::size_t k) {
  for (std::size_t i = *center_; i > k; --i) {
    const Matrix m = stack_cols(sites_[i]).adjoint();
    const auto dr = sites_[i].a[0].cols();
    const auto rank = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Matrix> qr(m);
    const Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), rank);
    const Matrix r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
    const Matrix qh = q.adjoint();
    sites_[i].a[0] = qh.leftCols(dr);
    sites_[i].a[1] = qh.rightCols(dr);
    const Matrix rh = r.adjoint();
    for (auto& a : sites_[i - 1].a) a = a * rh;
  }
  center_ = k;
}

void MpsState::canonicalize_to(std::size_t k) {
  center_ = 0;
  shift_center_right(sites_.size() - 1);
  shift_center_left(k);
  const double norm = std::sqrt(stack_rows(sites_[k]).squaredNorm());
  if (!(norm > 0.0)) throw NumericalFault("state has zero norm");
  for (auto& a : sites_[k].a) a /= norm;
}

TruncationReport MpsState::apply_two_qubit_gate(const Gate2& gate, std::size_t left) {
  if (left + 1 >= sites_.size()) throw std::out_of_range("two-qubit gate site out of range");
  if (max_abs_deviation_from_identity(gate.adjoint() * gate) > 1e-10) {
    throw std::invalid_argument("two-qubit gate is not unitary");
  }

  if (!center_ || *center_ < left) {
    move_center(left);
  } else if (*center_ > left + 1) {
    move_center(left + 1);
  }

  SiteTensor& a = sites_[left];
  SiteTensor& b = sites_[left + 1];
  const auto dl = a.a[0].rows();
  const auto dr = b.a[0].cols();

  std::array<Matrix, 4> theta;
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) theta[2 * s1 + s2] = a.a[s1] * b.a[s2];
  }
  Matrix evolved(2 * dl, 2 * dr);
  for (int out = 0; out < 4; ++out) {
    Matrix block = Matrix::Zero(dl, dr);
    for (int in = 0; in < 4; ++in) {
      if (gate(out, in) != Complex(0.0, 0.0)) block.noalias() += gate(out, in) * theta[in];
    }
    evolved.block((out / 2) * dl, (out % 2) * dr, dl, dr) = block;
  }

  Eigen::BDCSVD<Matrix> svd(evolved, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const CutChoice cut = choose_cut(s, policy_);
  const auto keep = static_cast<Eigen::Index>(cut.keep);

  const Matrix u = svd.matrixU().leftCols(keep);
  const Eigen::VectorXd kept = s.head(keep) / s.head(keep).norm();
  const Matrix sv = kept.cast<Complex>().asDiagonal() * svd.matrixV().leftCols(keep).adjoint();

  a.a[0] = u.topRows(dl);
  a.a[1] = u.bottomRows(dl);
  b.a[0] = sv.leftCols(dr);
  b.a[1] = sv.rightCols(dr);
  center_ = left + 1;

  return TruncationReport{cut.discarded, cut.keep, cut.required, cut.capped};
}

double MpsState::norm_squared() const {
  Matrix env = Matrix::Identity(1, 1);
  for (const auto& t : sites_) {
    Matrix next = t.a[0].adjoint() * env * t.a[0];
    next.noalias() += t.a[1].adjoint() * env * t.a[1];
    env = std::move(next);
  }
  return env(0, 0).real();
}

bool MpsState::is_left_canonical(std::size_t k, double tol) const {
  const auto& t = sites_.at(k);
  const Matrix gram = t.a[0].adjoint() * t.a[0] + t.a[1].adjoint() * t.a[1];
  return max_abs_deviation_from_identity(gram) <= tol;
}

bool MpsState::is_right_canonical(std::size_t k, double tol) const {
  const auto& t = sites_.at(k);
  const Matrix gram = t.a[0] * t.a[0].adjoint() + t.a[1] * t.a[1].adjoint();
  return max_abs_deviation_from_identity(gram) <= tol;
}

void MpsState::save(std::ostream& out) const {
  out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  write_pod(out, kSnapshotVersion);
  write_pod(out, static_cast<std::uint64_t>(sites_.size()));
  write_pod(out, static_cast<std::uint32_t>(2));
  write_pod(out, static_cast<std::uint64_t>(policy_.chi_max.value_or(0)));
  write_pod(out, policy_.svd_tol);
  write_pod(out, center_ ? static_cast<std::int64_t>(*center_) : std::int64_t{-1});
  for (const auto& t : sites_) {
    write_pod(out, static_cast<std::uint64_t>(t.left_bond()));
    write_pod(out, static_cast<std::uint64_t>(t.right_bond()));
  }
  for (const auto& t : sites_) {
    for (Eigen::Index l = 0; l < t.a[0].rows(); ++l) {
      for (int s = 0; s < 2; ++s) {
        for (Eigen::Index r = 0; r < t.a[0].cols(); ++r) {
          write_pod(out, t.a[s](l, r).real());
          write_pod(out, t.a[s](l, r).imag());
        }
      }
    }
  }
  if (!out) throw std::runtime_error("failed to write MPS snapshot");
}

MpsState MpsState::load(std::istream& in) {
  char magic[4] = {};
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kSnapshotMagic))) {
    throw std::invalid_argument("not an MPS snapshot");
  }
  if (read_pod<std::uint32_t>(in) != kSnapshotVersion) {
    throw std::invalid_argument("unsupported MPS snapshot version");
  }
  const auto n = read_pod<std::uint64_t>(in);
  if (read_pod<std::uint32_t>(in) != 2) throw std::invalid_argument("snapshot local dimension must be 2");
  TruncationPolicy policy;
  if (const auto chi = read_pod<std::uint64_t>(in); chi != 0) policy.chi_max = chi;
  policy.svd_tol = read_pod<double>(in);
  const auto center = read_pod<std::int64_t>(in);
  if (n == 0 || center >= static_cast<std::int64_t>(n) || center < -1) {
    throw std::invalid_argument("corrupt MPS snapshot header");
  }

  std::vector<SiteTensor> sites(n);
  for (auto& t : sites) {
    const auto dl = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
    const auto dr = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
    for (auto& a : t.a) a.resize(dl, dr);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const bool left_ok = (k == 0) ? sites[k].left_bond() == 1 : sites[k].left_bond() == sites[k - 1].right_bond();
    if (!left_ok || (k + 1 == n && sites[k].right_bond() != 1)) {
      throw std::invalid_argument("MPS snapshot bond shapes are inconsistent");
    }
  }
  for (auto& t : sites) {
    for (Eigen::Index l = 0; l < t.a[0].rows(); ++l) {
      for (int s = 0; s < 2; ++s) {
        for (Eigen::Index r = 0; r < t.a[0].cols(); ++r) {
          const double re = read_pod<double>(in);
          const double im = read_pod<double>(in);
          t.a[s](l, r) = Complex(re, im);
        }
      }
    }
  }
  MpsState state(std::move(sites), policy);
  if (center >= 0) state.center_ = static_cast<std::size_t>(center);
  return state;
}

double entropy_bits(const Eigen::VectorXd& singular_values) {
  const double total = singular_values.squaredNorm();
  if (!(total > 0.0)) return 0.0;
  double h = 0.0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    const double p = singular_values[i] * singular_values[i] / total;
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

EntropyProfile entanglement_profile(const MpsState& state) {
  EntropyProfile profile;
  const std::size_t n = state.size();
  if (n < 2) return profile;

  MpsState work = state;
  work.move_center(0);
  std::vector<SiteTensor> sites(n);
  for (std::size_t k = 0; k < n; ++k) sites[k] = work.site(k);

  profile.per_cut.resize(n - 1);
  for (std::size_t l = 0; l + 1 < n; ++l) {
    const Matrix m = stack_rows(sites[l]);
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    profile.per_cut[l] = entropy_bits(svd.singularValues());
    const Matrix carry = svd.singularValues().cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
    for (auto& a : sites[l + 1].a) a = carry * a;
  }
  const auto it = std::max_element(profile.per_cut.begin(), profile.per_cut.end());
  profile.max_cut_value = *it;
  profile.max_cut_index = static_cast<std::size_t>(it - profile.per_cut.begin());
  return profile;
}

std::size_t max_required_bond(const MpsState& state) {
  std::size_t best = 1;
  for (std::size_t l = 0; l + 1 < state.size(); ++l) best = std::max(best, state.bond(l));
  return best;
}

Vector to_statevector(const MpsState& state) {
  const std::size_t n = state.size();
  if (n > kMaxStatevectorSites) {
    throw std::invalid_argument("to_statevector supports at most " + std::to_string(kMaxStatevectorSites) +
                                " sites");
  }
  Matrix psi = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& t = state.site(k);
    const Matrix t0 = psi * t.a[0];
    const Matrix t1 = psi * t.a[1];
    Matrix next(2 * psi.rows(), t0.cols());
    for (Eigen::Index p = 0; p < psi.rows(); ++p) {
      next.row(2 * p) = t0.row(p);
      next.row(2 * p + 1) = t1.row(p);
    }
    psi = std::move(next);
  }
  return psi.col(0);
}

namespace gates {

Eigen::Matrix2cd hadamard() {
  const double h = std::numbers::sqrt2 / 2.0;
  Eigen::Matrix2cd m;
  m << h, h, h, -h;
  return m;
}

Eigen::Matrix2cd phase_s() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, Complex(0.0, 1.0);
  return m;
}

Gate2 cnot() {
  Gate2 m = Gate2::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return m;
}

Gate2 kron(const Eigen::Matrix2cd& left, const Eigen::Matrix2cd& right) {
  Gate2 m;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) m(2 * a + b, 2 * c + d) = left(a, c) * right(b, d);
  return m;
}

LocalState t_state() {
  const double h = std::numbers::sqrt2 / 2.0;
  return LocalState(h, h * std::exp(Complex(0.0, std::numbers::pi / 4.0)));
}

}  // namespace gates

}  // namespace magicmps
