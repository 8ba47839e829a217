#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "magicmps/mps.hpp"
#include "magicmps/random.hpp"

namespace magicmps {

/// Haar-distributed unitary on U(dim), dim in {2, 4}: complex Ginibre matrix,
/// Householder QR, then Q * diag(R_ii / |R_ii|).
Matrix sample_haar_unitary(int dim, RandomStream& rng);

/// Brick-wall layout. `layers[t]` lists the left sites (0-based) of the gates
/// in layer t. Layer 0 covers bonds (0,1), (2,3), ...; layer 1 covers
/// (1,2), (3,4), ...; and so on alternately.
struct BrickworkSchedule {
  std::size_t n_sites = 0;
  std::vector<std::vector<std::size_t>> layers;

  std::size_t depth() const { return layers.size(); }
  std::size_t gate_count() const;
};

BrickworkSchedule brickwork(std::size_t n_sites, std::size_t depth);

/// The Haar gate in slot `gate_index` of trajectory `trajectory` (slots are
/// numbered in schedule order: layer by layer, left to right).
Gate2 haar_gate(std::uint64_t master_seed, std::uint64_t trajectory, std::uint64_t gate_index);

/// All gates of one trajectory for `schedule`, in slot order.
std::vector<Gate2> circuit_gates(const BrickworkSchedule& schedule, std::uint64_t master_seed,
                                 std::uint64_t trajectory);

/// Gate-slot index of the first gate in `layer`.
std::size_t first_slot_of_layer(const BrickworkSchedule& schedule, std::size_t layer);

}  // namespace magicmps
