#include "czkit/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "czkit/error.hpp"
#include "czkit/parallel.hpp"

namespace czkit {

void check_function(const MetricMeasureSpace& space, std::span<const double> f) {
  if (f.size() != space.size()) throw InputError("function must have one value per point");
  for (double v : f) {
    if (!std::isfinite(v)) throw InputError("function values must be finite");
  }
}

double l1_norm(const MetricMeasureSpace& space, std::span<const double> f) {
  double s = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) s += std::abs(f[x]) * space.weight(static_cast<PointId>(x));
  return s;
}

std::vector<double> set_averages(const FamilyIndex& index, std::span<const double> f) {
  check_function(index.space(), f);
  const auto& fam = index.family();
  std::vector<double> avg(fam.size());
  parallel_for(fam.size(), [&](std::size_t q) {
    double s = 0.0;
    for (PointId x : fam.set(q)) s += std::abs(f[x]) * index.space().weight(x);
    avg[q] = s / index.measure(q);
  });
  return avg;
}

MaximalResult maximal_function(const FamilyIndex& index, std::span<const double> f) {
  const auto avg = set_averages(index, f);
  MaximalResult res;
  const std::size_t n = index.space().size();
  res.values.assign(n, 0.0);
  for (PointId x = 0; x < n; ++x) {
    auto sets = index.sets_containing(x);
    if (sets.empty()) {
      ++res.uncovered;
      continue;
    }
    double best = 0.0;
    for (std::size_t q : sets) best = std::max(best, avg[q]);
    res.values[x] = best;
  }
  return res;
}

std::vector<double> breakpoint_grid(const FamilyIndex& index, std::span<const double> f) {
  auto avg = set_averages(index, f);
  std::vector<double> grid;
  for (double a : avg) {
    if (a > 0.0) grid.push_back(a * (1.0 - 1e-9));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

Weak11Result weak11_check(const FamilyIndex& index, std::span<const double> f,
                          std::optional<std::vector<double>> lambda_grid, std::optional<double> family_C) {
  const auto& space = index.space();
  const double norm = l1_norm(space, f);
  if (!(norm > 0.0)) throw InputError("weak (1,1) check needs a function with positive L1 norm");
  const auto grid = lambda_grid ? *lambda_grid : breakpoint_grid(index, f);
  const auto M = maximal_function(index, f).values;

  // mu{M f > lambda} for all lambdas via a sort of the maximal values.
  std::vector<std::pair<double, double>> vals;
  for (PointId x = 0; x < M.size(); ++x) vals.emplace_back(M[x], space.weight(x));
  std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<double> prefix(vals.size() + 1, 0.0);
  for (std::size_t i = 0; i < vals.size(); ++i) prefix[i + 1] = prefix[i] + vals[i].second;

  Weak11Result res;
  res.lambdas = grid.size();
  res.family_C = family_C;
  for (double lam : grid) {
    if (!(lam > 0.0)) continue;
    // count of values strictly greater than lam
    auto it = std::partition_point(vals.begin(), vals.end(), [&](const auto& v) { return v.first > lam; });
    const double mu = prefix[static_cast<std::size_t>(it - vals.begin())];
    const double c = lam * mu / norm;
    if (c > res.constant) {
      res.constant = c;
      res.argmax_lambda = lam;
    }
  }
  if (family_C) res.within_bound = res.constant <= *family_C * (1.0 + kMeasureSlack);
  return res;
}

DifferentiationResult differentiation_check(const FamilyIndex& index, std::span<const double> f) {
  check_function(index.space(), f);
  const auto density = is_dense(index);
  DifferentiationResult res;
  res.dense = density.dense;
  res.finest_scale = density.finest_scale;
  const auto& fam = index.family();
  const auto& space = index.space();
  const auto avg = set_averages(index, f);
  std::vector<double> diam(fam.size(), -1.0);
  for (PointId x = 0; x < space.size(); ++x) {
    auto sets = index.sets_containing(x);
    if (sets.empty()) continue;
    double best_diam = kInfinity;
    for (std::size_t q : sets) {
      if (diam[q] < 0.0) diam[q] = fam.set(q).size() == 1 ? 0.0 : space.diameter(fam.set(q));
      best_diam = std::min(best_diam, diam[q]);
    }
    double sup = 0.0;
    for (std::size_t q : sets) {
      if (diam[q] == best_diam) sup = std::max(sup, avg[q]);
    }
    const double dev = std::abs(sup - std::abs(f[x]));
    if (dev > res.deviation) {
      res.deviation = dev;
      res.worst_point = x;
    }
  }
  return res;
}

}  // namespace czkit
