#include "czkit/family.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "czkit/error.hpp"
#include "czkit/parallel.hpp"

namespace czkit {

std::size_t SetFamily::add(PointSet s, SetMeta meta) {
  if (s.empty()) throw InputError("family sets must be nonempty");
  s.check_range(n_);
  sets_.push_back(std::move(s));
  meta_.push_back(meta);
  return sets_.size() - 1;
}

bool SetFamily::contains_whole_space() const {
  return std::any_of(sets_.begin(), sets_.end(), [&](const PointSet& s) { return s.size() == n_; });
}

SetFamily family_from_tree(const DyadicTree& tree, std::size_t n_points) {
  SetFamily fam(n_points);
  std::map<std::vector<PointId>, std::size_t> seen;
  for (std::size_t l = 0; l < tree.levels.size(); ++l) {
    for (std::size_t i = 0; i < tree.levels[l].size(); ++i) {
      const auto& c = tree.levels[l][i];
      std::vector<PointId> key(c.members.begin(), c.members.end());
      if (seen.count(key)) continue;
      SetMeta meta;
      meta.level = l;
      meta.cube = i;
      meta.center = c.center;
      seen.emplace(std::move(key), fam.add(c.members, meta));
    }
  }
  if (!fam.contains_whole_space()) fam.add(PointSet::range(0, static_cast<PointId>(n_points)));
  return fam;
}

SetFamily ball_family(const MetricMeasureSpace& space, std::span<const double> radii) {
  SetFamily fam(space.size());
  std::map<std::vector<PointId>, std::size_t> seen;
  for (double r : radii) {
    std::vector<PointSet> balls(space.size());
    parallel_for(space.size(), [&](std::size_t x) { balls[x] = space.ball(static_cast<PointId>(x), r); });
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (balls[x].empty()) continue;
      std::vector<PointId> key(balls[x].begin(), balls[x].end());
      if (seen.count(key)) continue;
      SetMeta meta;
      meta.center = static_cast<PointId>(x);
      seen.emplace(std::move(key), fam.add(std::move(balls[x]), meta));
    }
  }
  if (!fam.contains_whole_space()) fam.add(space.all_points());
  return fam;
}

FamilyIndex::FamilyIndex(const MetricMeasureSpace& space, const SetFamily& family)
    : space_(&space), family_(&family) {
  if (family.n_points() != space.size()) throw InputError("family and space disagree on the point count");
  const std::size_t n = space.size();
  measures_.resize(family.size());
  std::vector<std::size_t> counts(n + 1, 0);
  for (std::size_t i = 0; i < family.size(); ++i) {
    measures_[i] = space.measure(family.set(i));
    for (PointId x : family.set(i)) ++counts[x + 1];
    if (!whole_ && family.set(i).size() == n) whole_ = i;
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t x = 0; x < n; ++x) offsets_[x + 1] = offsets_[x] + counts[x + 1];
  incidence_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (PointId x : family.set(i)) incidence_[fill[x]++] = i;
  }
  order_.resize(family.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::size_t a, std::size_t b) { return measures_[a] > measures_[b]; });
}

namespace {

// Per-thread visit stamps for family sets and points.
struct Stamps {
  std::vector<std::uint32_t> sets;
  std::vector<std::uint32_t> points;
  std::uint32_t epoch = 0;

  void prepare(std::size_t n_sets, std::size_t n_points) {
    if (sets.size() != n_sets || points.size() != n_points || epoch == UINT32_MAX) {
      sets.assign(n_sets, 0);
      points.assign(n_points, 0);
      epoch = 0;
    }
    ++epoch;
  }
};

thread_local Stamps stamps;

}  // namespace

PointSet tilde_of(const FamilyIndex& index, const PointSet& Q, double mu_q, TildeVariant variant) {
  const double factor = variant == TildeVariant::loose ? 2.0 : 1.0;
  const double limit = factor * mu_q * (1.0 + kMeasureSlack);
  const auto& fam = index.family();
  stamps.prepare(fam.size(), fam.n_points());
  const auto epoch = stamps.epoch;
  std::vector<PointId> out;
  for (PointId x : Q) {
    if (stamps.points[x] != epoch) {
      stamps.points[x] = epoch;
      out.push_back(x);
    }
  }
  for (PointId x : Q) {
    for (std::size_t r : index.sets_containing(x)) {
      if (stamps.sets[r] == epoch) continue;
      stamps.sets[r] = epoch;
      if (index.measure(r) > limit) continue;
      for (PointId y : fam.set(r)) {
        if (stamps.points[y] != epoch) {
          stamps.points[y] = epoch;
          out.push_back(y);
        }
      }
    }
  }
  return PointSet::from_unsorted(std::move(out));
}

PointSet tilde_set(const FamilyIndex& index, std::size_t q, TildeVariant variant) {
  return tilde_of(index, index.family().set(q), index.measure(q), variant);
}

std::vector<double> constant_grid(double max_value) {
  std::vector<double> grid;
  for (double base = 1.0; base <= max_value; base *= 2.0) {
    for (double f : {1.0, 1.25, 1.5}) {
      if (base * f <= max_value) grid.push_back(base * f);
    }
  }
  return grid;
}

double snap_to_grid(double c) {
  if (!std::isfinite(c)) return c;
  for (double g : constant_grid(1e15)) {
    if (g >= c * (1.0 - kMeasureSlack)) return g;
  }
  return c;
}

double doubling_set_constant(const MetricMeasureSpace& space, const PointSet& Q) {
  if (Q.empty()) throw InputError("doubling constant of an empty set");
  if (Q.size() == 1) return 1.0;
  const auto stats = space.set_stats(Q);
  if (stats.diam == 0.0) return 1.0;
  const auto dist = space.distances_to_set(Q, stats.diam);
  for (double C : constant_grid(64.0)) {
    const double r = stats.diam / C;
    double mu = 0.0;
    for (std::size_t y = 0; y < dist.size(); ++y) {
      if (dist[y] <= r) mu += space.weight(static_cast<PointId>(y));
    }
    if (mu <= C * stats.measure * (1.0 + kMeasureSlack)) return C;
  }
  return kInfinity;
}

SetRequirement set_requirement(const FamilyIndex& index, std::size_t q, TildeVariant variant) {
  SetRequirement req;
  const auto& fam = index.family();
  const auto& Q = fam.set(q);
  const double mu_q = index.measure(q);
  const auto T = tilde_set(index, q, variant);

  req.containment = kInfinity;
  for (std::size_t s : index.sets_containing(T.front())) {
    const auto& S = fam.set(s);
    if (S.size() < T.size()) continue;
    const double ratio = index.measure(s) / mu_q;
    if (ratio < req.containment && T.is_subset_of(S)) {
      req.containment = ratio;
      req.containment_witness = s;
    }
  }

  req.growth = kInfinity;
  if (auto m = index.whole_space()) {
    req.growth = index.measure(*m) / mu_q;
    req.growth_witness = *m;
  }
  const double floor = 2.0 * mu_q * (1.0 - kMeasureSlack);
  for (std::size_t r : index.sets_containing(Q.front())) {
    const double mu_r = index.measure(r);
    if (mu_r < floor) continue;
    const double ratio = mu_r / mu_q;
    if (ratio < req.growth && Q.is_subset_of(fam.set(r))) {
      req.growth = ratio;
      req.growth_witness = r;
    }
  }
  return req;
}

FamilyVerification verify_doubling_family(const FamilyIndex& index, double C, TildeVariant variant) {
  if (!(C >= 1.0)) throw InputError("doubling family constant must be >= 1");
  FamilyVerification v;
  v.C = C;
  v.variant = variant;
  const std::size_t m = index.size();
  std::vector<SetRequirement> reqs(m);
  parallel_for(m, [&](std::size_t q) { reqs[q] = set_requirement(index, q, variant); });
  const double bound = C * (1.0 + kMeasureSlack);
  for (std::size_t q = 0; q < m; ++q) {
    v.required_constant = std::max(v.required_constant, reqs[q].required());
    for (int cond = 0; cond < 2; ++cond) {
      const double need = cond == 0 ? reqs[q].containment : reqs[q].growth;
      if (need <= bound) continue;
      (cond == 0 ? v.containment_ok : v.growth_ok) = false;
      ++v.failure_count;
      if (v.failures.size() < 16) v.failures.push_back({q, cond == 0 ? "containment" : "growth", need});
    }
  }
  if (variant == TildeVariant::strict && v.pass()) {
    v.crosscheck_loose_at_C2 = verify_doubling_family(index, C * C, TildeVariant::loose).pass();
  }
  return v;
}

DensityResult is_dense(const FamilyIndex& index) {
  DensityResult res;
  const auto& fam = index.family();
  const auto& space = index.space();
  const std::size_t n = space.size();
  std::vector<double> diam(fam.size(), -1.0);
  auto diam_of = [&](std::size_t s) {
    if (diam[s] < 0.0) diam[s] = fam.set(s).size() == 1 ? 0.0 : space.diameter(fam.set(s));
    return diam[s];
  };
  res.dense = true;
  for (PointId x = 0; x < n; ++x) {
    auto sets = index.sets_containing(x);
    if (sets.empty()) {
      ++res.uncovered;
      res.dense = false;
      res.finest_scale = kInfinity;
      continue;
    }
    double best = kInfinity;
    std::size_t smallest = sets.front();
    for (std::size_t s : sets) {
      if (fam.set(s).size() == 1) {
        best = 0.0;
        break;
      }
      if (fam.set(s).size() < fam.set(smallest).size()) smallest = s;
    }
    if (best > 0.0) {
      // Diameter is monotone under inclusion only; scan every containing set.
      for (std::size_t s : sets) best = std::min(best, diam_of(s));
      res.dense = false;
    }
    res.finest_scale = std::max(res.finest_scale, best);
  }
  return res;
}

FamilyReport family_report(const FamilyIndex& index, bool per_set_doubling) {
  FamilyReport rep;
  const std::size_t m = index.size();
  auto compute = [&](TildeVariant variant) {
    std::vector<SetRequirement> reqs(m);
    parallel_for(m, [&](std::size_t q) { reqs[q] = set_requirement(index, q, variant); });
    double need = 1.0;
    for (const auto& r : reqs) need = std::max(need, r.required());
    return need;
  };
  rep.required_constant = compute(TildeVariant::loose);
  rep.family_constant = snap_to_grid(rep.required_constant);
  if (std::isfinite(rep.family_constant)) {
    rep.verification = verify_doubling_family(index, rep.family_constant, TildeVariant::loose);
  } else {
    rep.verification.C = kInfinity;
    rep.verification.containment_ok = false;
    rep.verification.required_constant = rep.required_constant;
  }
  const double strict_need = compute(TildeVariant::strict);
  rep.strict_constant = snap_to_grid(strict_need);
  if (std::isfinite(rep.strict_constant)) {
    const double c2 = rep.strict_constant * rep.strict_constant;
    rep.crosscheck = verify_doubling_family(index, c2, TildeVariant::loose).pass();
  }
  if (per_set_doubling) {
    rep.per_set_doubling.resize(m);
    parallel_for(m, [&](std::size_t q) {
      rep.per_set_doubling[q] = doubling_set_constant(index.space(), index.family().set(q));
    });
  }
  rep.density = is_dense(index);
  return rep;
}

}  // namespace czkit
