#include "magicmps/haar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace magicmps {

Matrix sample_haar_unitary(int dim, RandomStream& rng) {
  if (dim != 2 && dim != 4) throw std::invalid_argument("Haar unitaries are supported for dim 2 and 4");
  const double scale = std::numbers::sqrt2 / 2.0;
  Matrix z(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = Complex(re, im) * scale;
    }
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

std::size_t BrickworkSchedule::gate_count() const {
  std::size_t count = 0;
  for (const auto& layer : layers) count += layer.size();
  return count;
}

BrickworkSchedule brickwork(std::size_t n_sites, std::size_t depth) {
  if (n_sites < 2) throw std::invalid_argument("brickwork needs at least 2 sites");
  BrickworkSchedule schedule;
  schedule.n_sites = n_sites;
  schedule.layers.resize(depth);
  for (std::size_t t = 0; t < depth; ++t) {
    for (std::size_t left = t % 2; left + 1 < n_sites; left += 2) schedule.layers[t].push_back(left);
  }
  return schedule;
}

Gate2 haar_gate(std::uint64_t master_seed, std::uint64_t trajectory, std::uint64_t gate_index) {
  auto rng = derive_stream(SeedTree{master_seed, trajectory, gate_index, StreamKind::gate});
  return sample_haar_unitary(4, rng);
}

std::vector<Gate2> circuit_gates(const BrickworkSchedule& schedule, std::uint64_t master_seed,
                                 std::uint64_t trajectory) {
  std::vector<Gate2> out;
  out.reserve(schedule.gate_count());
  for (std::size_t slot = 0; slot < schedule.gate_count(); ++slot) {
    out.push_back(haar_gate(master_seed, trajectory, slot));
  }
  return out;
}

std::size_t first_slot_of_layer(const BrickworkSchedule& schedule, std::size_t layer) {
  std::size_t slot = 0;
  for (std::size_t t = 0; t < layer && t < schedule.layers.size(); ++t) slot += schedule.layers[t].size();
  return slot;
}

}  // namespace magicmps
