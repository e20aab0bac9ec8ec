#include <algorithm>
#include <cmath>

#include "czkit/cz.hpp"
#include "czkit/error.hpp"
#include "czkit/parallel.hpp"

namespace czkit {

double SparseFunction::at(PointId x) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), x);
  if (it == ids.end() || *it != x) return 0.0;
  return values[static_cast<std::size_t>(it - ids.begin())];
}

double SparseFunction::integral(const MetricMeasureSpace& space) const {
  double s = 0.0;
  for (std::size_t k = 0; k < ids.size(); ++k) s += values[k] * space.weight(ids[k]);
  return s;
}

double SparseFunction::l1(const MetricMeasureSpace& space) const {
  double s = 0.0;
  for (std::size_t k = 0; k < ids.size(); ++k) s += std::abs(values[k]) * space.weight(ids[k]);
  return s;
}

std::string to_string(CZMode mode) {
  switch (mode) {
    case CZMode::full:
      return "full";
    case CZMode::large_scale:
      return "large_scale";
    case CZMode::small_scale:
      return "small_scale";
  }
  return "full";
}

CZMode mode_from_string(const std::string& s) {
  if (s == "full") return CZMode::full;
  if (s == "large_scale" || s == "large") return CZMode::large_scale;
  if (s == "small_scale" || s == "small") return CZMode::small_scale;
  throw InputError("unknown mode '" + s + "' (full | large_scale | small_scale)");
}

CZDecomposition decompose(const FamilyIndex& index, std::span<const double> f, double lambda, double C) {
  const auto& space = index.space();
  const auto& fam = index.family();
  CZDecomposition dec;
  dec.trace = select_stopping_sets(index, f, lambda, C);
  dec.lambda = lambda;
  dec.C = C;
  dec.mode = CZMode::full;
  dec.f.assign(f.begin(), f.end());

  const std::size_t k = dec.trace.rounds.size();
  std::vector<PointSet> tildes(k);
  parallel_for(k, [&](std::size_t i) { tildes[i] = tilde_set(index, dec.trace.rounds[i].R, TildeVariant::loose); });

  std::vector<char> in_e(space.size(), 0);
  dec.items.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto& item = dec.items[i];
    const auto& round = dec.trace.rounds[i];
    item.R_index = round.R;
    item.Q_index = round.Q;
    item.R = fam.set(round.R);
    item.Q = fam.set(round.Q);
    std::vector<PointId> u;
    for (PointId x : tildes[i]) {
      if (!in_e[x]) {
        in_e[x] = 1;
        u.push_back(x);
      }
    }
    item.U = PointSet::from_sorted(std::move(u));
  }

  parallel_for(k, [&](std::size_t i) {
    auto& item = dec.items[i];
    double int_h = 0.0;
    for (PointId x : item.U) int_h += f[x] * space.weight(x);
    const double c = int_h / index.measure(*item.R_index);
    const auto support = set_union(item.U, item.R);
    item.f.ids.assign(support.begin(), support.end());
    item.f.values.resize(item.f.ids.size());
    for (std::size_t j = 0; j < item.f.ids.size(); ++j) {
      const PointId x = item.f.ids[j];
      const double h = item.U.contains(x) ? f[x] : 0.0;
      item.f.values[j] = item.R.contains(x) ? h - c : h;
    }
    item.r = space.diameter(item.Q) / C;
    item.x = item.Q.front();
  });

  dec.g = dec.f;
  for (const auto& item : dec.items) {
    for (std::size_t j = 0; j < item.f.ids.size(); ++j) dec.g[item.f.ids[j]] -= item.f.values[j];
  }
  return dec;
}

}  // namespace czkit
