#include "magicmps/random.hpp"

#include <cmath>
#include <numbers>

namespace magicmps {

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(const SeedTree& key) {
  std::uint64_t h = splitmix64(key.master_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(key.kind));
  h = splitmix64(h ^ key.trajectory_index);
  h = splitmix64(h ^ key.gate_index);
  return h;
}

RandomStream derive_stream(const SeedTree& key) { return RandomStream(derive_seed(key)); }

}  // namespace magicmps
