#include "czkit/base_family.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "czkit/error.hpp"
#include "czkit/parallel.hpp"

namespace czkit {

double model_M(const SolvableProductModel& model) {
  const double rho = model.action_spectral_radius();
  return choose_M(rho, rho);
}

namespace {

struct CubeRef {
  std::size_t level, cube;
};

QuadraticForm base_form(const SolvableProductModel& model) {
  QuadraticForm q;
  q.dim = model.dim_n();
  q.coeffs = model.descriptor().base_form;
  return q;
}

std::vector<std::size_t> ball_in_lattice(const std::vector<std::vector<double>>& lattice, std::size_t z,
                                         const QuadraticForm& G, double radius) {
  std::vector<std::size_t> out;
  std::vector<double> diff(lattice[z].size());
  for (std::size_t ni = 0; ni < lattice.size(); ++ni) {
    for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = lattice[ni][c] - lattice[z][c];
    if (G.length(diff) < radius) out.push_back(ni);
  }
  return out;
}

BaseFamily build_once(const SolvableProductModel& model, const DyadicTree& tree, double M, std::size_t stride) {
  BaseFamily out;
  out.M = M;
  out.C2_hat = out.C3_hat = model.action_spectral_radius();
  out.stride = stride;
  const auto base = base_form(model);
  const double cell = model.descriptor().eps_w;

  // Distinct cubes: a cube whose parent has the same members is represented by the parent.
  std::vector<CubeRef> refs;
  for (std::size_t l = 0; l < tree.depth(); ++l) {
    for (std::size_t c = 0; c < tree.levels[l].size(); ++c) {
      const auto& cube = tree.levels[l][c];
      if (l > 0 && cube.parent && tree.levels[l - 1][*cube.parent].members.size() == cube.members.size()) continue;
      refs.push_back({l, c});
    }
  }

  std::vector<std::vector<double>> lattice(model.n_count());
  std::vector<std::size_t> centers;
  for (std::size_t ni = 0; ni < model.n_count(); ++ni) {
    lattice[ni] = model.n_at(ni);
    const auto coords = model.n_coords(ni);
    bool keep = true;
    for (long c : coords) keep = keep && (c % static_cast<long>(stride) == 0);
    if (keep) centers.push_back(ni);
  }

  auto cube_d0 = [&](const Cube& cube, double r) {
    const double t = model.t_at(cube.center);
    return conjugated_metric(base, model.ad(-t), M, r);
  };
  auto radius_of = [&](const Cube& cube) { return cube.members.size() == 1 ? cell : cube.diam; };

  out.cubes.resize(refs.size());
  std::vector<std::vector<std::vector<std::size_t>>> balls(refs.size());
  std::vector<std::vector<int>> ball_j(refs.size());
  std::vector<std::vector<std::size_t>> ball_center(refs.size());
  parallel_for(refs.size(), [&](std::size_t i) {
    const auto& cube = tree.levels[refs[i].level][refs[i].cube];
    auto& info = out.cubes[i];
    info.level = refs[i].level;
    info.cube = refs[i].cube;
    info.r = radius_of(cube);
    info.t = model.t_at(cube.center);
    info.d0 = cube_d0(cube, info.r);
    info.chain.forms = {info.d0};

    if (info.r >= 1.0) {
      // Smallest strict ancestor.
      std::size_t l = refs[i].level, c = refs[i].cube;
      while (l > 0) {
        c = *tree.levels[l][c].parent;
        --l;
        if (tree.levels[l][c].members.size() > cube.members.size()) {
          info.parent_level = l;
          info.parent_cube = c;
          break;
        }
      }
      if (info.parent_level) {
        const auto& S = tree.levels[*info.parent_level][*info.parent_cube];
        const double r_S = radius_of(S);
        info.m = std::exp(M * r_S - M * info.r - out.C2_hat * r_S);
        if (!(info.m >= 2.0)) {
          std::ostringstream msg;
          msg << "chain gap m = " << info.m << " < 2 between cube (" << info.level << "," << info.cube
              << ") and its ancestor (" << *info.parent_level << "," << *info.parent_cube << ")";
          throw GapError(msg.str(), info.m);
        }
        try {
          info.chain = doubling_chain(info.d0, cube_d0(S, r_S), info.m);
        } catch (const GapError& e) {
          std::ostringstream msg;
          msg << e.what() << " between cube (" << info.level << "," << info.cube << ") and its ancestor ("
              << *info.parent_level << "," << *info.parent_cube << ")";
          throw GapError(msg.str(), e.eigenvalue());
        }
        info.check = check_chain(info.chain);
      }
      info.radius = 1.0;
    } else {
      info.radius = info.r;
    }

    std::set<std::vector<std::size_t>> seen;
    for (std::size_t j = 0; j < info.chain.forms.size(); ++j) {
      for (std::size_t z : centers) {
        auto R = ball_in_lattice(lattice, z, info.chain.forms[j], info.radius);
        if (R.empty() || !seen.insert(R).second) continue;
        balls[i].push_back(std::move(R));
        ball_j[i].push_back(static_cast<int>(j));
        ball_center[i].push_back(z);
      }
    }
  });

  out.family = SetFamily(model.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const auto& cube = tree.levels[refs[i].level][refs[i].cube];
    out.raw_sets += out.cubes[i].chain.forms.size() * centers.size();
    for (std::size_t b = 0; b < balls[i].size(); ++b) {
      std::vector<PointId> ids;
      ids.reserve(cube.members.size() * balls[i][b].size());
      for (PointId ti : cube.members)
        for (std::size_t ni : balls[i][b]) ids.push_back(model.point(ti, ni));
      SetMeta meta;
      meta.level = refs[i].level;
      meta.cube = refs[i].cube;
      meta.j = ball_j[i][b];
      meta.center = model.point(cube.center, ball_center[i][b]);
      out.family.add(PointSet::from_sorted(std::move(ids)), meta);
      ++out.cubes[i].sets_added;
    }
  }
  if (!out.family.contains_whole_space()) {
    std::vector<PointId> all(model.size());
    for (std::size_t p = 0; p < all.size(); ++p) all[p] = static_cast<PointId>(p);
    out.family.add(PointSet::from_sorted(std::move(all)));
  }
  return out;
}

}  // namespace

BaseFamily build_base_family(const SolvableProductModel& model, const DyadicTree& tree, double M,
                             std::size_t stride) {
  if (!(M >= 0.0) || !std::isfinite(M)) throw InputError("M must be a finite nonnegative number");
  if (stride < 1) throw InputError("stride must be >= 1");
  if (tree.depth() == 0) throw InputError("tree has no levels");
  if (tree.levels[0].empty() || tree.levels[0][0].members.size() != model.t_count()) {
    throw InputError("tree must partition the model's W_0 grid");
  }
  try {
    return build_once(model, tree, M, stride);
  } catch (const GapError&) {
    auto out = build_once(model, tree, 2.0 * M, stride);
    out.M_increased = true;
    return out;
  }
}

}  // namespace czkit
