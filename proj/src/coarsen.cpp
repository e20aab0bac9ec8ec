#include <algorithm>
#include <cmath>
#include <map>

#include "czkit/cz.hpp"
#include "czkit/error.hpp"
#include "czkit/parallel.hpp"

namespace czkit {

namespace {

SparseFunction add_sparse(const SparseFunction& a, const SparseFunction& b) {
  SparseFunction out;
  std::size_t i = 0, j = 0;
  while (i < a.ids.size() || j < b.ids.size()) {
    if (j == b.ids.size() || (i < a.ids.size() && a.ids[i] < b.ids[j])) {
      out.ids.push_back(a.ids[i]);
      out.values.push_back(a.values[i++]);
    } else if (i == a.ids.size() || b.ids[j] < a.ids[i]) {
      out.ids.push_back(b.ids[j]);
      out.values.push_back(b.values[j++]);
    } else {
      out.ids.push_back(a.ids[i]);
      out.values.push_back(a.values[i++] + b.values[j++]);
    }
  }
  return out;
}

}  // namespace

CoarsenResult coarsen_decomposition(const MetricMeasureSpace& space, const CZDecomposition& dec, double C_cz) {
  if (!(C_cz >= 2.0)) throw InputError("coarsening constant C_cz must be >= 2");
  const std::size_t n = space.size();
  const double half = C_cz / 2.0;
  CoarsenResult res;

  // Maximal family of pairwise disjoint balls B(x, C_cz/2), greedy in id order.
  std::vector<long> owner(n, -1);
  for (PointId x = 0; x < n; ++x) {
    if (owner[x] >= 0) continue;
    const auto B = space.ball(x, half);
    if (std::any_of(B.begin(), B.end(), [&](PointId y) { return owner[y] >= 0; })) continue;
    const long idx = static_cast<long>(res.centers.size());
    res.centers.push_back(x);
    for (PointId y : B) owner[y] = idx;
  }

  res.dec.lambda = dec.lambda;
  res.dec.C = dec.C;
  res.dec.mode = CZMode::large_scale;
  res.dec.f = dec.f;
  res.dec.g = dec.g;
  res.dec.trace = dec.trace;

  std::map<long, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dec.items.size(); ++i) {
    const auto& it = dec.items[i];
    if (it.r > 0.5) {
      res.dec.items.push_back(it);
      ++res.passed_through;
      continue;
    }
    const auto B = space.ball(it.x, half);
    long alpha = -1;
    for (PointId y : B) {
      if (owner[y] >= 0 && (alpha < 0 || owner[y] < alpha)) alpha = owner[y];
    }
    groups[alpha].push_back(i);
  }

  std::vector<PointId> absorbed_centers;
  for (const auto& [beta, members] : groups) {
    const PointId xb = res.centers.at(static_cast<std::size_t>(beta));
    SparseFunction h;
    std::vector<PointId> e_ids, u_ids, r_ids;
    for (std::size_t i : members) {
      const auto& it = dec.items[i];
      h = add_sparse(h, it.f);
      e_ids.insert(e_ids.end(), it.Q.begin(), it.Q.end());
      u_ids.insert(u_ids.end(), it.U.begin(), it.U.end());
      r_ids.insert(r_ids.end(), it.R.begin(), it.R.end());
    }
    const double mass = h.l1(space);
    const double cap = C_cz * dec.lambda * space.measure(space.ball(xb, C_cz));
    if (mass <= cap) {
      for (std::size_t j = 0; j < h.ids.size(); ++j) res.dec.g[h.ids[j]] += h.values[j];
      absorbed_centers.push_back(xb);
      ++res.groups_absorbed;
      continue;
    }
    CZItem item;
    item.Q = PointSet::from_unsorted(std::move(e_ids));
    item.U = PointSet::from_unsorted(std::move(u_ids));
    item.R = PointSet::from_unsorted(std::move(r_ids));
    item.x = xb;
    item.r = 1.0;
    item.f = std::move(h);
    res.dec.items.push_back(std::move(item));
    ++res.groups_kept;
  }

  // Composite bound on unit-ball averages of the new good part.
  double sup_g = 0.0;
  for (double v : dec.g) sup_g = std::max(sup_g, std::abs(v));
  const double c_good_in = dec.lambda > 0.0 ? sup_g / dec.lambda : 0.0;
  std::vector<std::vector<std::size_t>> touching(n);
  std::vector<double> big_measure(absorbed_centers.size());
  for (std::size_t b = 0; b < absorbed_centers.size(); ++b) {
    const auto B = space.ball(absorbed_centers[b], C_cz);
    big_measure[b] = space.measure(B);
    for (PointId y : B) touching[y].push_back(b);
  }
  std::vector<double> per_point(n, 0.0);
  parallel_for(n, [&](std::size_t x) {
    const auto B1 = space.ball(static_cast<PointId>(x), 1.0);
    std::vector<std::size_t> betas;
    for (PointId y : B1) betas.insert(betas.end(), touching[y].begin(), touching[y].end());
    std::sort(betas.begin(), betas.end());
    betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
    double s = 0.0;
    for (auto b : betas) s += big_measure[b];
    per_point[x] = s / space.measure(B1);
  });
  const double worst = per_point.empty() ? 0.0 : *std::max_element(per_point.begin(), per_point.end());
  res.composite_bound = c_good_in + C_cz * worst;
  return res;
}

}  // namespace czkit
