#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace magicmps {

/// What a derived stream is used for; keeps gate and sampling streams disjoint.
enum class StreamKind : std::uint64_t { gate = 1, sampling = 2 };

/// Counter-style key of a random stream. (master_seed, trajectory_index)
/// determines every gate of a trajectory regardless of execution order.
struct SeedTree {
  std::uint64_t master_seed = 0;
  std::uint64_t trajectory_index = 0;
  std::uint64_t gate_index = 0;  ///< slot counter for gates, time step for sampling
  StreamKind kind = StreamKind::gate;

  bool operator==(const SeedTree&) const = default;
};

/// Deterministic random stream: std::mt19937_64 (output sequence fixed by the
/// C++ standard) with distributions implemented here, because the standard
/// library distributions are implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via the Box-Muller transform.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Identifier recorded in output metadata.
inline constexpr std::string_view kRngIdentifier =
    "mt19937_64 seeded by splitmix64(master, kind, trajectory, index); uniform53; box-muller";

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(const SeedTree& key);
RandomStream derive_stream(const SeedTree& key);

}  // namespace magicmps
