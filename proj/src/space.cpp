#include "czkit/space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <random>
#include <string>
#include <tuple>

#include "czkit/error.hpp"
#include "czkit/parallel.hpp"

namespace czkit {

namespace {

void check_weights(const std::vector<double>& weights, std::size_t n) {
  if (weights.size() != n) throw InputError("weights must have one entry per point");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("point weights must be positive and finite");
  }
}

}  // namespace

void MetricMeasureSpace::finish_weights() {
  total_measure_ = 0.0;
  for (double w : weights_) total_measure_ += w;
}

MetricMeasureSpace MetricMeasureSpace::from_table(std::size_t n, std::vector<double> distances,
                                                  std::vector<double> weights, MetricKind kind) {
  if (n == 0) throw InputError("space must have at least one point");
  if (distances.size() != n * n) throw InputError("distance table must be n x n");
  check_weights(weights, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (distances[i * n + i] != 0.0) throw InputError("distance table must have zero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      const double d = distances[i * n + j];
      if (!(d >= 0.0) || !std::isfinite(d)) throw InputError("distances must be finite and >= 0");
      if (d != distances[j * n + i]) throw InputError("distance table must be symmetric");
    }
  }
  MetricMeasureSpace s;
  s.n_ = n;
  s.backend_ = Backend::table;
  s.kind_ = kind;
  s.table_ = std::move(distances);
  s.weights_ = std::move(weights);
  s.finish_weights();
  return s;
}

MetricMeasureSpace MetricMeasureSpace::from_graph(std::size_t n,
                                                  std::span<const WeightedEdge> edges,
                                                  std::vector<double> weights, MetricKind kind) {
  if (n == 0) throw InputError("space must have at least one point");
  check_weights(weights, n);
  MetricMeasureSpace s;
  s.n_ = n;
  s.backend_ = Backend::graph;
  s.kind_ = kind;
  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw InputError("edge endpoint out of range");
    if (!(e.w > 0.0) || !std::isfinite(e.w)) throw InputError("edge weights must be positive");
    if (e.u == e.v) continue;
    ++degree[e.u];
    ++degree[e.v];
  }
  s.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) s.offsets_[i + 1] = s.offsets_[i] + degree[i];
  s.targets_.resize(s.offsets_[n]);
  s.edge_weights_.resize(s.offsets_[n]);
  std::vector<std::size_t> fill(s.offsets_.begin(), s.offsets_.end() - 1);
  for (const auto& e : edges) {
    if (e.u == e.v) continue;
    s.targets_[fill[e.u]] = e.v;
    s.edge_weights_[fill[e.u]++] = e.w;
    s.targets_[fill[e.v]] = e.u;
    s.edge_weights_[fill[e.v]++] = e.w;
    if (e.w != 1.0) s.unit_edges_ = false;
  }
  // Sort each adjacency list so traversal order depends only on the edge set.
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<PointId, double>> adj;
    for (std::size_t k = s.offsets_[i]; k < s.offsets_[i + 1]; ++k) {
      adj.emplace_back(s.targets_[k], s.edge_weights_[k]);
    }
    std::sort(adj.begin(), adj.end());
    for (std::size_t k = 0; k < adj.size(); ++k) {
      s.targets_[s.offsets_[i] + k] = adj[k].first;
      s.edge_weights_[s.offsets_[i] + k] = adj[k].second;
    }
  }
  s.weights_ = std::move(weights);
  s.finish_weights();
  // Disconnected graphs would give infinite distances.
  std::size_t reached = 0;
  const PointId origin = 0;
  s.graph_search(std::span<const PointId>(&origin, 1), kInfinity, [&](PointId, double) {
    ++reached;
    return true;
  });
  if (reached != n) throw InputError("graph-backed space must be connected");
  return s;
}

MetricMeasureSpace MetricMeasureSpace::from_function(std::shared_ptr<const DistanceFunction> fn,
                                                     std::vector<double> weights,
                                                     MetricKind kind) {
  if (!fn || fn->size() == 0) throw InputError("distance function must cover at least one point");
  check_weights(weights, fn->size());
  MetricMeasureSpace s;
  s.n_ = fn->size();
  s.backend_ = Backend::function;
  s.kind_ = kind;
  s.fn_ = std::move(fn);
  s.weights_ = std::move(weights);
  s.finish_weights();
  return s;
}

void MetricMeasureSpace::check_point(PointId x) const {
  if (x >= n_) {
    throw InputError("point id " + std::to_string(x) + " out of range [0, " + std::to_string(n_) +
                     ")");
  }
}

namespace {

// Per-thread scratch for graph searches; only touched entries are reset.
struct SearchScratch {
  std::vector<double> dist;
  std::vector<char> done;
  std::vector<PointId> touched;

  void prepare(std::size_t n) {
    if (dist.size() != n) {
      dist.assign(n, kInfinity);
      done.assign(n, 0);
      touched.clear();
    }
  }
  void reset() {
    for (PointId v : touched) {
      dist[v] = kInfinity;
      done[v] = 0;
    }
    touched.clear();
  }
};

struct ScratchGuard {
  SearchScratch& s;
  ~ScratchGuard() { s.reset(); }
};

}  // namespace

void MetricMeasureSpace::graph_search(std::span<const PointId> sources, double limit,
                                      const std::function<bool(PointId, double)>& visit) const {
  thread_local SearchScratch scratch;
  scratch.prepare(n_);
  ScratchGuard guard{scratch};
  auto& dist = scratch.dist;
  auto& done = scratch.done;
  auto& touched = scratch.touched;
  if (unit_edges_) {
    std::deque<PointId> queue;
    for (PointId s : sources) {
      if (dist[s] != 0.0) {
        dist[s] = 0.0;
        touched.push_back(s);
        queue.push_back(s);
      }
    }
    while (!queue.empty()) {
      const PointId u = queue.front();
      queue.pop_front();
      if (dist[u] > limit) break;
      if (!visit(u, dist[u])) return;
      for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) {
        const PointId v = targets_[k];
        if (dist[v] == kInfinity) {
          dist[v] = dist[u] + 1.0;
          touched.push_back(v);
          queue.push_back(v);
        }
      }
    }
    return;
  }
  using Item = std::pair<double, PointId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (PointId s : sources) {
    if (dist[s] != 0.0) {
      dist[s] = 0.0;
      touched.push_back(s);
      heap.emplace(0.0, s);
    }
  }
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u] || d != dist[u]) continue;
    if (d > limit) break;
    done[u] = 1;
    if (!visit(u, d)) return;
    for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) {
      const PointId v = targets_[k];
      const double nd = d + edge_weights_[k];
      if (nd < dist[v]) {
        if (dist[v] == kInfinity) touched.push_back(v);
        dist[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
}

std::vector<PointId> MetricMeasureSpace::nearest_source(const PointSet& sources,
                                                        std::vector<double>* dist_out) const {
  if (sources.empty()) throw InputError("nearest_source needs a nonempty source set");
  sources.check_range(n_);
  std::vector<double> dist(n_, kInfinity);
  std::vector<PointId> owner(n_, 0);
  if (backend_ == Backend::graph) {
    // Dijkstra on (distance, source id) labels: lexicographic minimum wins.
    using Item = std::tuple<double, PointId, PointId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<char> done(n_, 0);
    for (PointId s : sources) {
      dist[s] = 0.0;
      owner[s] = s;
      heap.emplace(0.0, s, s);
    }
    while (!heap.empty()) {
      const auto [d, src, u] = heap.top();
      heap.pop();
      if (done[u] || d != dist[u] || src != owner[u]) continue;
      done[u] = 1;
      for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) {
        const PointId v = targets_[k];
        const double nd = d + edge_weights_[k];
        if (nd < dist[v] || (nd == dist[v] && src < owner[v])) {
          dist[v] = nd;
          owner[v] = src;
          heap.emplace(nd, src, v);
        }
      }
    }
  } else {
    for (std::size_t y = 0; y < n_; ++y) {
      for (PointId s : sources) {
        const double d = distance(s, static_cast<PointId>(y));
        if (d < dist[y]) {
          dist[y] = d;
          owner[y] = s;
        }
      }
    }
  }
  if (dist_out) *dist_out = std::move(dist);
  return owner;
}

double MetricMeasureSpace::distance(PointId x, PointId y) const {
  check_point(x);
  check_point(y);
  if (x == y) return 0.0;
  switch (backend_) {
    case Backend::table:
      return table_[static_cast<std::size_t>(x) * n_ + y];
    case Backend::function:
      return fn_->distance(x, y);
    case Backend::graph: {
      double out = kInfinity;
      graph_search(std::span<const PointId>(&x, 1), kInfinity, [&](PointId v, double d) {
        if (v == y) {
          out = d;
          return false;
        }
        return true;
      });
      return out;
    }
  }
  return kInfinity;
}

std::vector<double> MetricMeasureSpace::distances_from(PointId x) const {
  check_point(x);
  return distances_to_set(PointSet{x});
}

std::vector<double> MetricMeasureSpace::distances_to_set(const PointSet& Q, double limit) const {
  if (Q.empty()) throw InputError("distances_to_set needs a nonempty set");
  Q.check_range(n_);
  std::vector<double> out(n_, kInfinity);
  switch (backend_) {
    case Backend::graph:
      graph_search(Q.ids(), limit, [&](PointId v, double d) {
        out[v] = d;
        return true;
      });
      break;
    case Backend::table:
    case Backend::function:
      for (std::size_t y = 0; y < n_; ++y) {
        double best = kInfinity;
        for (PointId q : Q) {
          const double d = backend_ == Backend::table ? table_[static_cast<std::size_t>(q) * n_ + y]
                           : q == y                   ? 0.0
                                                      : fn_->distance(q, static_cast<PointId>(y));
          best = std::min(best, d);
        }
        if (best <= limit) out[y] = best;
      }
      break;
  }
  return out;
}

namespace {

PointSet select(const std::vector<double>& dist, double r, bool closed) {
  std::vector<PointId> ids;
  for (std::size_t y = 0; y < dist.size(); ++y) {
    if (closed ? dist[y] <= r : dist[y] < r) ids.push_back(static_cast<PointId>(y));
  }
  return PointSet::from_sorted(std::move(ids));
}

}  // namespace

PointSet MetricMeasureSpace::ball(PointId x, double r) const {
  check_point(x);
  if (!(r >= 0.0)) throw InputError("ball radius must be nonnegative");
  if (r == 0.0) return {};
  return select(distances_to_set(PointSet{x}, r), r, false);
}

PointSet MetricMeasureSpace::closed_ball(PointId x, double r) const {
  check_point(x);
  if (!(r >= 0.0)) throw InputError("ball radius must be nonnegative");
  return select(distances_to_set(PointSet{x}, r), r, true);
}

PointSet MetricMeasureSpace::dilate(const PointSet& Q, double r) const {
  if (Q.empty()) throw InputError("dilate needs a nonempty set");
  if (!(r >= 0.0)) throw InputError("dilation radius must be nonnegative");
  if (r == 0.0) return {};
  return select(distances_to_set(Q, r), r, false);
}

PointSet MetricMeasureSpace::closed_dilate(const PointSet& Q, double r) const {
  if (Q.empty()) throw InputError("dilate needs a nonempty set");
  if (!(r >= 0.0)) throw InputError("dilation radius must be nonnegative");
  return select(distances_to_set(Q, r), r, true);
}

double MetricMeasureSpace::measure(const PointSet& Q) const {
  Q.check_range(n_);
  double m = 0.0;
  for (PointId x : Q) m += weights_[x];
  return m;
}

double MetricMeasureSpace::diameter(const PointSet& Q) const {
  if (Q.empty()) throw InputError("diameter of an empty set");
  Q.check_range(n_);
  double diam = 0.0;
  if (backend_ == Backend::graph) {
    std::vector<char> in_q(n_, 0);
    for (PointId q : Q) in_q[q] = 1;
    for (PointId q : Q) {
      std::size_t seen = 0;
      graph_search(std::span<const PointId>(&q, 1), kInfinity, [&](PointId v, double d) {
        if (in_q[v]) {
          diam = std::max(diam, d);
          if (++seen == Q.size()) return false;
        }
        return true;
      });
    }
    return diam;
  }
  const auto ids = Q.ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const double d = backend_ == Backend::table
                           ? table_[static_cast<std::size_t>(ids[i]) * n_ + ids[j]]
                           : fn_->distance(ids[i], ids[j]);
      diam = std::max(diam, d);
    }
  }
  return diam;
}

SetStats MetricMeasureSpace::set_stats(const PointSet& Q) const {
  if (Q.empty()) throw InputError("set_stats needs a nonempty set");
  return {diameter(Q), measure(Q)};
}

MetricMeasureSpace MetricMeasureSpace::to_table() const {
  if (backend_ == Backend::table) return *this;
  std::vector<double> d(n_ * n_, 0.0);
  parallel_for(n_, [&](std::size_t x) {
    const auto row = distances_from(static_cast<PointId>(x));
    std::copy(row.begin(), row.end(), d.begin() + static_cast<std::ptrdiff_t>(x * n_));
  });
  // Enforce exact symmetry; path sums agree bit-for-bit for integral weights.
  for (std::size_t x = 0; x < n_; ++x) {
    for (std::size_t y = x + 1; y < n_; ++y) d[y * n_ + x] = d[x * n_ + y];
  }
  return from_table(n_, std::move(d), weights_, kind_);
}

std::vector<WeightedEdge> MetricMeasureSpace::edges() const {
  std::vector<WeightedEdge> out;
  for (std::size_t u = 0; u < offsets_.size() - (offsets_.empty() ? 0 : 1); ++u) {
    for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) {
      if (u < targets_[k]) out.push_back({static_cast<PointId>(u), targets_[k], edge_weights_[k]});
    }
  }
  return out;
}

MetricCheck check_metric(const MetricMeasureSpace& space, std::size_t exhaustive_limit,
                         std::size_t samples, unsigned long long seed) {
  MetricCheck out;
  const std::size_t n = space.size();
  const double K = space.metric_kind().K;
  std::vector<std::vector<double>> rows;
  auto dist = [&](PointId a, PointId b) { return rows.empty() ? space.distance(a, b) : rows[a][b]; };
  auto triple = [&](PointId x, PointId y, PointId z) {
    ++out.triples_checked;
    const double lhs = dist(x, z);
    const double rhs = dist(x, y) + dist(y, z);
    if (rhs > 0.0) {
      const double ratio = lhs / rhs;
      if (ratio > out.worst_K) out.worst_K = ratio;
    }
    if (lhs > K * rhs * (1.0 + 1e-12) && out.triangle_ok) {
      out.triangle_ok = false;
      out.witness[0] = x;
      out.witness[1] = y;
      out.witness[2] = z;
    }
  };
  if (n <= exhaustive_limit) {
    rows.resize(n);
    parallel_for(n, [&](std::size_t x) { rows[x] = space.distances_from(static_cast<PointId>(x)); });
    for (PointId x = 0; x < n; ++x) {
      if (rows[x][x] != 0.0) out.zero_diagonal = false;
      for (PointId y = 0; y < n; ++y) {
        if (rows[x][y] != rows[y][x]) out.symmetric = false;
        if (x != y && !(rows[x][y] > 0.0)) out.positive_off_diagonal = false;
      }
    }
    for (PointId x = 0; x < n; ++x)
      for (PointId y = 0; y < n; ++y)
        for (PointId z = 0; z < n; ++z) triple(x, y, z);
    return out;
  }
  out.exhaustive = false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PointId> pick(0, static_cast<PointId>(n - 1));
  for (std::size_t s = 0; s < samples; ++s) {
    const PointId x = pick(rng), y = pick(rng), z = pick(rng);
    if (space.distance(x, y) != space.distance(y, x)) out.symmetric = false;
    if (x != y && !(space.distance(x, y) > 0.0)) out.positive_off_diagonal = false;
    triple(x, y, z);
  }
  return out;
}

std::vector<std::pair<PointId, PointId>> radius_collisions(const MetricMeasureSpace& space,
                                                           double r, std::size_t max_hits) {
  std::vector<std::pair<PointId, PointId>> hits;
  const std::size_t n = space.size();
  for (PointId x = 0; x < n && hits.size() < max_hits; ++x) {
    const auto row = space.distances_to_set(PointSet{x}, r);
    for (PointId y = x + 1; y < n && hits.size() < max_hits; ++y) {
      if (row[y] == r) hits.emplace_back(x, y);
    }
  }
  return hits;
}

}  // namespace czkit
