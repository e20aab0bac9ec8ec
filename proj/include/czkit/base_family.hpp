#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "czkit/cubes.hpp"
#include "czkit/family.hpp"
#include "czkit/forms.hpp"
#include "czkit/solvable.hpp"

namespace czkit {

struct BaseCube {
  std::size_t level = 0;
  std::size_t cube = 0;
  double r = 0.0;        ///< diameter of the cube in W_0 (cell width for single points)
  double t = 0.0;        ///< W_0 coordinate of the centerpoint
  std::optional<std::size_t> parent_level, parent_cube;  ///< smallest strict ancestor
  QuadraticForm d0;      ///< e^{-M r} times d_N conjugated at the centerpoint
  MetricChain chain;     ///< d0 down to the ancestor's d0; only d0 when absent
  ChainCheck check;
  double m = 0.0;        ///< gap parameter exp(M r_S - M r_Q - C2 r_S)
  double radius = 1.0;   ///< ball radius used for this cube's sets
  std::size_t sets_added = 0;
};

struct BaseFamily {
  SetFamily family;
  double M = 0.0;
  double C2_hat = 0.0, C3_hat = 0.0;
  bool M_increased = false;
  std::size_t stride = 1;
  std::size_t raw_sets = 0;  ///< before deduplication
  std::vector<BaseCube> cubes;
};

/// M from the model: Ad(t) grows at most like e^{rho |t|} with rho the
/// spectral radius of the action, so C2 = C3 = rho for the product section.
double model_M(const SolvableProductModel& model);

/// Sets Q x R over the cubes Q of a tree on W_0 (the model's base_space).
/// For r_Q < 1, R ranges over d_{Q,0} balls of radius r_Q; otherwise over
/// radius-1 balls of every metric in the chain from d_{Q,0} to d_{S,0}, with S
/// the smallest strict ancestor. Centers are N-lattice points, every stride-th
/// per coordinate. When a chain gap fails, M is doubled once and the whole
/// family rebuilt; a second failure propagates the GapError.
BaseFamily build_base_family(const SolvableProductModel& model, const DyadicTree& tree, double M,
                             std::size_t stride = 1);

}  // namespace czkit
