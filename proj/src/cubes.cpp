#include "czkit/cubes.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "czkit/error.hpp"
#include "czkit/parallel.hpp"

namespace czkit {

double DyadicTree::level_scale(std::size_t level) const {
  return std::pow(delta, source_levels.at(level)) * scale;
}

std::size_t DyadicTree::cube_count() const {
  std::size_t c = 0;
  for (const auto& l : levels) c += l.size();
  return c;
}

namespace {

// Nested greedy nets: a point joins the level-k net iff it is farther than
// rho_k from every net point chosen so far (earlier levels included).
std::vector<PointSet> nested_nets(const MetricMeasureSpace& space, double delta, int depth, double diam) {
  const std::size_t n = space.size();
  std::vector<PointSet> nets;
  std::vector<PointId> net;
  for (int k = 0; k < depth; ++k) {
    const double rho = std::pow(delta, k) * diam;
    std::vector<char> covered(n, 0);
    if (!net.empty()) {
      auto d = space.distances_to_set(PointSet::from_unsorted(net), rho);
      for (std::size_t y = 0; y < n; ++y) covered[y] = d[y] <= rho;
    }
    for (PointId p = 0; p < n; ++p) {
      if (covered[p]) continue;
      net.push_back(p);
      auto d = space.distances_to_set(PointSet{p}, rho);
      for (std::size_t y = 0; y < n; ++y) {
        if (d[y] <= rho) covered[y] = 1;
      }
    }
    nets.push_back(PointSet::from_unsorted(net));
  }
  return nets;
}

void compute_diameters(const MetricMeasureSpace& space, DyadicTree& tree) {
  std::vector<Cube*> all;
  for (auto& level : tree.levels) {
    for (auto& c : level) all.push_back(&c);
  }
  parallel_for(all.size(), [&](std::size_t i) { all[i]->diam = space.diameter(all[i]->members); });
}

}  // namespace

DyadicTree build_cubes(const MetricMeasureSpace& space, double delta, int depth) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (depth < 1) throw InputError("depth must be at least 1");
  if (space.size() == 0) throw InputError("space is empty");

  DyadicTree tree;
  tree.delta = delta;
  tree.scale = space.diameter(space.all_points());
  for (int k = 0; k < depth; ++k) tree.source_levels.push_back(k);
  tree.levels.resize(static_cast<std::size_t>(depth));

  const auto nets = nested_nets(space, delta, depth, tree.scale);

  // Finest level: nearest net point, ties to the lowest id.
  {
    auto owner = space.nearest_source(nets.back());
    std::map<PointId, std::vector<PointId>> groups;
    for (PointId y = 0; y < space.size(); ++y) groups[owner[y]].push_back(y);
    for (auto& [center, ids] : groups) {
      Cube c;
      c.center = center;
      c.members = PointSet::from_sorted(std::move(ids));
      tree.levels.back().push_back(std::move(c));
    }
  }
  // Coarser levels: whole child cubes go to the net point nearest the child's center.
  for (int k = depth - 2; k >= 0; --k) {
    auto owner = space.nearest_source(nets[static_cast<std::size_t>(k)]);
    auto& children = tree.levels[static_cast<std::size_t>(k) + 1];
    std::map<PointId, std::vector<std::size_t>> groups;
    for (std::size_t ci = 0; ci < children.size(); ++ci) groups[owner[children[ci].center]].push_back(ci);
    auto& level = tree.levels[static_cast<std::size_t>(k)];
    for (auto& [center, kids] : groups) {
      std::vector<PointId> ids;
      for (auto ci : kids) {
        children[ci].parent = level.size();
        ids.insert(ids.end(), children[ci].members.begin(), children[ci].members.end());
      }
      Cube c;
      c.center = center;
      c.members = PointSet::from_unsorted(std::move(ids));
      level.push_back(std::move(c));
    }
  }
  compute_diameters(space, tree);
  measure_cube_constants(space, tree);
  return tree;
}

void measure_cube_constants(const MetricMeasureSpace& space, DyadicTree& tree) {
  double cdiam = 0.0;
  double a0 = kInfinity;
  const std::size_t n = space.size();
  for (std::size_t l = 0; l < tree.levels.size(); ++l) {
    const double s = tree.level_scale(l);
    const auto& level = tree.levels[l];
    std::vector<double> inner(level.size(), kInfinity);
    parallel_for(level.size(), [&](std::size_t i) {
      const auto& c = level[i];
      if (c.members.size() == n) return;
      auto d = space.distances_from(c.center);
      double best = kInfinity;
      for (PointId y = 0; y < n; ++y) {
        if (!c.members.contains(y)) best = std::min(best, d[y]);
      }
      inner[i] = best;
    });
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (s > 0.0) {
        cdiam = std::max(cdiam, level[i].diam / s);
        a0 = std::min(a0, inner[i] / s);
      } else if (level[i].diam > 0.0) {
        cdiam = kInfinity;
      }
    }
  }
  tree.C_diam = cdiam;
  tree.a0 = a0;
}

double min_parent_child_ratio(const DyadicTree& tree) {
  double best = kInfinity;
  for (std::size_t l = 1; l < tree.levels.size(); ++l) {
    for (const auto& c : tree.levels[l]) {
      if (!c.parent) continue;
      const double pd = tree.levels[l - 1][*c.parent].diam;
      if (pd <= 0.0) continue;
      const double ratio = c.diam > 0.0 ? pd / c.diam : kInfinity;
      best = std::min(best, ratio);
    }
  }
  return best;
}

namespace {

DyadicTree keep_levels(const MetricMeasureSpace& space, const DyadicTree& tree, int m) {
  DyadicTree out;
  out.delta = tree.delta;
  out.scale = tree.scale;
  std::vector<std::size_t> kept;
  for (std::size_t l = 0; l < tree.levels.size(); l += static_cast<std::size_t>(m)) kept.push_back(l);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    out.source_levels.push_back(tree.source_levels[kept[j]]);
    auto level = tree.levels[kept[j]];
    if (j == 0) {
      for (auto& c : level) c.parent.reset();
    } else {
      // Parent is the cube of the previous kept level holding the center.
      const auto& prev = out.levels[j - 1];
      std::vector<std::size_t> owner(space.size(), 0);
      for (std::size_t i = 0; i < prev.size(); ++i) {
        for (PointId y : prev[i].members) owner[y] = i;
      }
      for (auto& c : level) c.parent = owner[c.center];
    }
    out.levels.push_back(std::move(level));
  }
  measure_cube_constants(space, out);
  return out;
}

// Diameters are sums of grid steps, so an exact ratio of 3 can round just below.
bool ratio_at_least_three(double r) { return r >= 3.0 * (1.0 - 1e-9); }

}  // namespace

SubsampleResult subsample_scales(const MetricMeasureSpace& space, const DyadicTree& tree, int m) {
  if (m < 1) throw InputError("subsample factor m must be at least 1");
  SubsampleResult res;
  res.tree = m == 1 ? tree : keep_levels(space, tree, m);
  res.min_ratio = min_parent_child_ratio(res.tree);
  res.ratio_ok = ratio_at_least_three(res.min_ratio);
  if (!res.ratio_ok) {
    for (int mm = 1; mm < static_cast<int>(tree.levels.size()); ++mm) {
      if (ratio_at_least_three(min_parent_child_ratio(keep_levels(space, tree, mm)))) {
        res.smallest_m = mm;
        break;
      }
    }
  }
  return res;
}

CubeReport verify_cubes(const MetricMeasureSpace& space, const DyadicTree& tree, bool check_ratio) {
  CubeReport rep;
  const std::size_t n = space.size();
  auto cube_name = [](std::size_t l, std::size_t i) {
    return "cube (" + std::to_string(l) + "," + std::to_string(i) + ")";
  };

  CubeCheck partition{"partition", true, ""};
  CubeCheck nesting{"nesting", true, ""};
  CubeCheck unique_parent{"unique_parent", true, ""};
  CubeCheck children_union{"children_union", true, ""};
  std::vector<std::vector<long>> owner(tree.levels.size(), std::vector<long>(n, -1));
  for (std::size_t l = 0; l < tree.levels.size(); ++l) {
    const auto& level = tree.levels[l];
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (PointId y : level[i].members) {
        if (y >= n) {
          partition.pass = false;
          if (partition.witness.empty()) partition.witness = "point id " + std::to_string(y) + " out of range";
          continue;
        }
        if (owner[l][y] >= 0 && partition.pass) {
          partition.pass = false;
          partition.witness = "point " + std::to_string(y) + " in two cubes at level " + std::to_string(l);
        }
        owner[l][y] = static_cast<long>(i);
      }
    }
    for (PointId y = 0; y < n; ++y) {
      if (owner[l][y] < 0 && partition.pass) {
        partition.pass = false;
        partition.witness = "point " + std::to_string(y) + " uncovered at level " + std::to_string(l);
      }
    }
  }
  for (std::size_t l = 1; l < tree.levels.size(); ++l) {
    const auto& level = tree.levels[l];
    const auto& prev = tree.levels[l - 1];
    std::vector<std::vector<PointId>> child_union(prev.size());
    for (std::size_t i = 0; i < level.size(); ++i) {
      const auto& c = level[i];
      if (!c.parent || *c.parent >= prev.size()) {
        if (unique_parent.pass) {
          unique_parent.pass = false;
          unique_parent.witness = cube_name(l, i) + " has no parent";
        }
        continue;
      }
      // All members must sit in a single cube of the previous level, the recorded parent.
      for (PointId y : c.members) {
        if (y < n && owner[l - 1][y] != static_cast<long>(*c.parent)) {
          if (owner[l - 1][y] >= 0 && unique_parent.pass) {
            unique_parent.pass = false;
            unique_parent.witness = cube_name(l, i) + " meets " + cube_name(l - 1, owner[l - 1][y]) +
                                    " besides its parent";
          }
        }
      }
      if (!c.members.is_subset_of(prev[*c.parent].members) && nesting.pass) {
        nesting.pass = false;
        nesting.witness = cube_name(l, i) + " not inside its parent";
      }
      auto& u = child_union[*c.parent];
      u.insert(u.end(), c.members.begin(), c.members.end());
    }
    for (std::size_t p = 0; p < prev.size(); ++p) {
      if (!(PointSet::from_unsorted(child_union[p]) == prev[p].members) && children_union.pass) {
        children_union.pass = false;
        children_union.witness = "children of " + cube_name(l - 1, p) + " do not cover it exactly";
      }
    }
  }

  // Constants from the stored members, recomputed here.
  DyadicTree copy = tree;
  for (auto& level : copy.levels) {
    for (auto& c : level) c.diam = space.diameter(c.members);
  }
  measure_cube_constants(space, copy);
  rep.C_diam = copy.C_diam;
  rep.a0 = copy.a0;
  CubeCheck diam{"diameter_bound", std::isfinite(rep.C_diam), ""};
  if (!diam.pass) diam.witness = "cube with positive diameter at zero scale";
  CubeCheck inner{"inner_ball", rep.a0 > 0.0, ""};
  if (!inner.pass) inner.witness = "a cube center touches the complement at distance 0";
  CubeCheck centers{"centers_inside", true, ""};
  for (std::size_t l = 0; l < tree.levels.size(); ++l) {
    for (std::size_t i = 0; i < tree.levels[l].size(); ++i) {
      if (!tree.levels[l][i].members.contains(tree.levels[l][i].center) && centers.pass) {
        centers.pass = false;
        centers.witness = cube_name(l, i) + " does not contain its center";
      }
    }
  }
  rep.min_ratio = min_parent_child_ratio(copy);

  rep.checks = {partition, nesting, unique_parent, children_union, diam, inner, centers};
  if (check_ratio) {
    CubeCheck ratio{"diameter_ratio", ratio_at_least_three(rep.min_ratio), ""};
    if (!ratio.pass) ratio.witness = "min parent/child diameter ratio " + std::to_string(rep.min_ratio);
    rep.checks.push_back(ratio);
  }
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace czkit
