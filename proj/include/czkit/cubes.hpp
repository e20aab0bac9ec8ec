#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "czkit/point_set.hpp"
#include "czkit/space.hpp"

namespace czkit {

struct Cube {
  PointSet members;
  PointId center = 0;  ///< net point z; also the cube's centerpoint x_Q
  std::optional<std::size_t> parent;  ///< index into the previous level
  double diam = 0.0;
};

/// Nested partitions of a finite space. Level k has scale
/// delta^{source_level[k]} * scale, where scale is the diameter of the space.
struct DyadicTree {
  double delta = 0.5;
  double scale = 0.0;
  std::vector<int> source_levels;
  std::vector<std::vector<Cube>> levels;
  double C_diam = 0.0;  ///< max diam(Q) / level_scale
  double a0 = 0.0;      ///< min over cubes of dist(center, outside) / level_scale; +inf if unconstrained

  std::size_t depth() const { return levels.size(); }
  double level_scale(std::size_t level) const;
  std::size_t cube_count() const;
};

/// Greedy nested nets with radius delta^k * diam(space), assigned bottom-up so
/// that whole child cubes go to the parent net point nearest their center.
DyadicTree build_cubes(const MetricMeasureSpace& space, double delta, int depth);

/// Recomputes C_diam and a0 from the stored cube data.
void measure_cube_constants(const MetricMeasureSpace& space, DyadicTree& tree);

/// Smallest ratio diam(parent) / diam(child) over parents with positive diameter.
double min_parent_child_ratio(const DyadicTree& tree);

struct SubsampleResult {
  DyadicTree tree;
  double min_ratio = kInfinity;
  bool ratio_ok = true;
  std::optional<int> smallest_m;  ///< set when the requested m fails
};

/// Keeps levels 0, m, 2m, ... and relinks parents.
SubsampleResult subsample_scales(const MetricMeasureSpace& space, const DyadicTree& tree, int m);

struct CubeCheck {
  std::string name;
  bool pass = true;
  std::string witness;
};

struct CubeReport {
  std::vector<CubeCheck> checks;
  double C_diam = 0.0;
  double a0 = 0.0;
  double min_ratio = kInfinity;
  bool pass = true;
};

/// Partition, nesting, unique parents, children union, diameter bound and
/// inner ball; with check_ratio also the parent/child diameter ratio >= 3.
CubeReport verify_cubes(const MetricMeasureSpace& space, const DyadicTree& tree, bool check_ratio = false);

}  // namespace czkit
