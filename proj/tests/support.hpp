#pragma once

// Generators and brute-force oracles shared by the unit tests and the
// acceptance runner. Oracles use only distance() and weight(), never the
// library's ball, dilation or family helpers.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "czkit/cz.hpp"
#include "czkit/family.hpp"
#include "czkit/forms.hpp"
#include "czkit/space.hpp"

namespace czkit::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Connected weighted graph: a random spanning tree plus extra edges,
/// integer edge lengths in [1, 4] and weights in [0.5, 3].
inline MetricMeasureSpace random_graph_space(Rng& rng, std::size_t n, std::size_t extra_edges = 0) {
  std::vector<WeightedEdge> edges;
  for (std::size_t v = 1; v < n; ++v) {
    edges.push_back({static_cast<PointId>(pick(rng, v)), static_cast<PointId>(v),
                     static_cast<double>(1 + pick(rng, 4))});
  }
  for (std::size_t e = 0; e < extra_edges && n > 1; ++e) {
    const auto a = pick(rng, n), b = pick(rng, n);
    if (a != b) edges.push_back({static_cast<PointId>(a), static_cast<PointId>(b), static_cast<double>(1 + pick(rng, 4))});
  }
  std::vector<double> w(n);
  for (auto& x : w) x = uniform(rng, 0.5, 3.0);
  return MetricMeasureSpace::from_graph(n, edges, std::move(w));
}

/// Random points on a line with table distances |x - y| (ties possible).
inline MetricMeasureSpace random_line_space(Rng& rng, std::size_t n) {
  std::vector<double> pos(n);
  for (auto& p : pos) p = static_cast<double>(pick(rng, 4 * n));
  std::sort(pos.begin(), pos.end());
  for (std::size_t i = 1; i < n; ++i) pos[i] = std::max(pos[i], pos[i - 1] + 1.0);
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::abs(pos[i] - pos[j]);
  return MetricMeasureSpace::from_table(n, std::move(d), std::vector<double>(n, 1.0));
}

/// Sparse signed function: a few bumps, otherwise zero.
inline std::vector<double> random_function(Rng& rng, std::size_t n, std::size_t bumps = 0) {
  std::vector<double> f(n, 0.0);
  if (bumps == 0) bumps = 1 + pick(rng, std::max<std::size_t>(1, n / 3));
  for (std::size_t i = 0; i < bumps; ++i) f[pick(rng, n)] = uniform(rng, -5.0, 5.0);
  if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) f[pick(rng, n)] = 1.0;
  return f;
}

/// lambda strictly above the admissible threshold, log-uniform up to a bit
/// past sup|f| so that both busy and empty selections occur.
inline double random_lambda(Rng& rng, const MetricMeasureSpace& space, std::span<const double> f, double C) {
  const double lo = lambda_threshold(space, f, C) * 1.001;
  double top = 0.0;
  for (double v : f) top = std::max(top, std::abs(v));
  const double hi = std::max(lo * 1.5, top * 1.2);
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

/// Random SPD form Pᵀ diag(d) P with P well conditioned.
inline std::vector<double> random_invertible(Rng& rng, int dim) {
  std::vector<double> P(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) P[static_cast<std::size_t>(i * dim + j)] = (i == j ? 2.0 : 0.0) + uniform(rng, -0.5, 0.5);
  return P;
}

/// Pᵀ diag(d) P, exactly symmetrized.
inline QuadraticForm congruence(std::span<const double> P, std::span<const double> d) {
  const int n = static_cast<int>(d.size());
  QuadraticForm q{n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0)};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += P[static_cast<std::size_t>(k * n + i)] * d[static_cast<std::size_t>(k)] * P[static_cast<std::size_t>(k * n + j)];
      q.coeffs[static_cast<std::size_t>(i * n + j)] = s;
      q.coeffs[static_cast<std::size_t>(j * n + i)] = s;
    }
  return q;
}

// ---- oracles ---------------------------------------------------------------

inline double brute_measure(const MetricMeasureSpace& s, const PointSet& A) {
  double m = 0.0;
  for (PointId x : A) m += s.weight(x);
  return m;
}

inline double brute_dist_to_set(const MetricMeasureSpace& s, PointId y, const PointSet& A) {
  double best = kInfinity;
  for (PointId a : A) best = std::min(best, s.distance(a, y));
  return best;
}

/// Brute-force tilde set (loose: mu(R) <= 2 mu(Q); strict: mu(R) <= mu(Q)).
inline PointSet brute_tilde(const MetricMeasureSpace& s, const SetFamily& fam, const PointSet& Q, bool loose) {
  const double mq = brute_measure(s, Q);
  PointSet out;
  for (const auto& R : fam.sets()) {
    if (!R.intersects(Q)) continue;
    const double mr = brute_measure(s, R);
    if (mr <= (loose ? 2.0 : 1.0) * mq * (1.0 + kMeasureSlack)) out = set_union(out, R);
  }
  return out;
}

/// Bullet measurements computed from scratch; names match VerificationReport.
struct OracleResult {
  std::vector<std::pair<std::string, bool>> bullets;
  bool pass = true;
  bool get(const std::string& name) const {
    for (const auto& [n, p] : bullets)
      if (n == name) return p;
    return false;
  }
};

inline OracleResult oracle_verify(const MetricMeasureSpace& s, const CZDecomposition& dec, CZMode mode,
                                  const VerifyBounds& b) {
  const double slack = 1e-9;
  auto within = [&](double v, double bound) { return std::isfinite(v) && v <= bound * (1.0 + slack); };
  const std::size_t n = s.size();
  double fl1 = 0.0;
  for (PointId x = 0; x < n; ++x) fl1 += std::abs(dec.f[x]) * s.weight(x);
  auto rel = [&](double v) { return fl1 > 0.0 ? v / fl1 : (v > 0.0 ? kInfinity : 0.0); };

  std::vector<std::vector<double>> dense;
  for (const auto& it : dec.items) {
    std::vector<double> fi(n, 0.0);
    for (std::size_t k = 0; k < it.f.ids.size(); ++k) fi[it.f.ids[k]] = it.f.values[k];
    dense.push_back(std::move(fi));
  }

  OracleResult r;
  bool support = true, mean_zero = true;
  double ball_ratio = 0.0, dil = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < dec.items.size(); ++i) {
    const auto& it = dec.items[i];
    double integral = 0.0, norm = 0.0;
    for (PointId x = 0; x < n; ++x) {
      if (dense[i][x] != 0.0 && !it.Q.contains(x)) support = false;
      integral += dense[i][x] * s.weight(x);
      norm += std::abs(dense[i][x]) * s.weight(x);
    }
    if ((fl1 > 0.0 ? std::abs(integral) / fl1 : std::abs(integral)) > kMeanZeroTol) mean_zero = false;
    l1 += norm;
    double far = 0.0;
    for (PointId q : it.Q) far = std::max(far, s.distance(it.x, q));
    ball_ratio = std::max(ball_ratio, far == 0.0 ? 0.0 : it.r > 0.0 ? far / it.r : kInfinity);
    if (it.r > 0.0) {
      for (PointId y = 0; y < n; ++y)
        if (brute_dist_to_set(s, y, it.Q) < it.r) dil += s.weight(y);
    }
  }
  double good = 0.0;
  if (mode == CZMode::large_scale) {
    for (PointId x = 0; x < n; ++x) {
      double mass = 0.0, mu = 0.0;
      for (PointId y = 0; y < n; ++y)
        if (s.distance(x, y) < 1.0) {
          mass += std::abs(dec.g[y]) * s.weight(y);
          mu += s.weight(y);
        }
      good = std::max(good, mass / (dec.lambda * mu));
    }
  } else {
    for (PointId x = 0; x < n; ++x) good = std::max(good, std::abs(dec.g[x]) / dec.lambda);
  }
  double worst = 0.0, scale = 0.0;
  for (PointId x = 0; x < n; ++x) {
    double sum = dec.g[x];
    for (const auto& fi : dense) sum += fi[x];
    worst = std::max(worst, std::abs(sum - dec.f[x]));
    scale = std::max(scale, std::abs(dec.f[x]));
  }
  r.bullets = {{"support", support},
               {"mean_zero", mean_zero},
               {"ball_containment", within(ball_ratio, b.support)},
               {"dilation_measure", within(dec.lambda * rel(dil) , b.measure)},
               {"l1_sum", within(rel(l1), b.l1)},
               {"good_part", within(good, b.good)},
               {"reconstruction", (scale > 0.0 ? worst / scale : worst) <= kMeanZeroTol}};
  if (mode == CZMode::large_scale) {
    bool radius = true;
    for (const auto& it : dec.items) radius = radius && it.r > 0.5;
    r.bullets.push_back({"radius", radius});
  }
  for (const auto& [name, p] : r.bullets) r.pass = r.pass && p;
  return r;
}

/// All dyadic-cube families used by the exhaustive oracle runs share this
/// shape: every distinct cube of the tree plus the whole space.
inline bool is_partition(const std::vector<PointSet>& parts, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (const auto& p : parts)
    for (PointId x : p) {
      if (x >= n) return false;
      ++seen[x];
    }
  return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

}  // namespace czkit::testing
