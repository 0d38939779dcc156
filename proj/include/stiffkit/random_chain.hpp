#pragma once

#include <cstdint>

#include "stiffkit/chain_model.hpp"

namespace stiffkit {

/// Shape of a randomized test chain. Defaults give rank(J_theta) = 6
/// (guaranteed by any 6-dof spring) and a generic full-column-rank J_q.
/// n_passive is capped at 5 so the chain keeps a resisted direction.
struct RandomChainSpec {
  int n_springs6 = 1;   // 6-dof springs (6 coordinates each)
  int n_actuated = 2;   // 1-dof springs
  int n_passive = 3;    // 0..5
  double k_min = 1e3;   // spring eigenvalue range, log-uniform
  double k_max = 1e5;
};

/// Deterministic generator: same spec + seed always produces the same chain.
/// Element order, axes, link transforms and spring spectra are drawn from a
/// seeded stream; geometry stays O(1) m so conditioning remains benign.
/// Verifies rank(J_theta) >= 6 when n_springs6 == 0 and rank(J_q) = n_passive,
/// redrawing internally on a degenerate draw.
ChainModel make_random_chain(const RandomChainSpec& spec, std::uint64_t seed);

}  // namespace stiffkit
