#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "czkit/point_set.hpp"

namespace czkit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Exact metric, or quasi-metric with d(x,z) <= K (d(x,y) + d(y,z)).
struct MetricKind {
  bool quasi = false;
  double K = 1.0;

  static MetricKind exact() { return {}; }
  static MetricKind quasi_with(double k) { return {true, k}; }
  friend bool operator==(const MetricKind&, const MetricKind&) = default;
};

struct WeightedEdge {
  PointId u;
  PointId v;
  double w;
};

/// Closed-form distance on an implicit point set (model-backed spaces).
class DistanceFunction {
 public:
  virtual ~DistanceFunction() = default;
  virtual std::size_t size() const = 0;
  virtual double distance(PointId x, PointId y) const = 0;
  /// Parameters sufficient to rebuild the function.
  virtual nlohmann::ordered_json to_json() const = 0;
};

struct SetStats {
  double diam = 0.0;
  double measure = 0.0;
};

/// Finite metric measure space (M, d, mu). Immutable after construction.
///
/// Three distance backends share one interface: a dense table, a weighted
/// graph whose shortest-path metric is evaluated on demand, and a closed-form
/// DistanceFunction. Set membership in balls and dilations uses strict
/// inequality; the closed_* variants use <=.
class MetricMeasureSpace {
 public:
  enum class Backend { table, graph, function };

  MetricMeasureSpace() = default;

  static MetricMeasureSpace from_table(std::size_t n, std::vector<double> distances,
                                       std::vector<double> weights,
                                       MetricKind kind = MetricKind::exact());
  static MetricMeasureSpace from_graph(std::size_t n, std::span<const WeightedEdge> edges,
                                       std::vector<double> weights,
                                       MetricKind kind = MetricKind::exact());
  static MetricMeasureSpace from_function(std::shared_ptr<const DistanceFunction> fn,
                                          std::vector<double> weights, MetricKind kind);

  std::size_t size() const { return n_; }
  Backend backend() const { return backend_; }
  MetricKind metric_kind() const { return kind_; }
  std::span<const double> weights() const { return weights_; }
  double weight(PointId x) const { return weights_[x]; }
  double total_measure() const { return total_measure_; }
  PointSet all_points() const { return PointSet::range(0, static_cast<PointId>(n_)); }

  double distance(PointId x, PointId y) const;
  std::vector<double> distances_from(PointId x) const;
  /// min_{q in Q} d(q, y) for every y, exact where <= limit and +inf beyond.
  std::vector<double> distances_to_set(const PointSet& Q, double limit = kInfinity) const;

  /// For every point, the source minimizing (distance, source id).
  std::vector<PointId> nearest_source(const PointSet& sources,
                                      std::vector<double>* dist_out = nullptr) const;

  PointSet ball(PointId x, double r) const;
  PointSet closed_ball(PointId x, double r) const;
  PointSet dilate(const PointSet& Q, double r) const;
  PointSet closed_dilate(const PointSet& Q, double r) const;

  double measure(const PointSet& Q) const;
  double diameter(const PointSet& Q) const;
  SetStats set_stats(const PointSet& Q) const;

  /// Dense copy of the distance table (row-major, n*n).
  MetricMeasureSpace to_table() const;

  // Backend data, for serialization.
  std::span<const double> table() const { return table_; }
  std::vector<WeightedEdge> edges() const;
  const DistanceFunction* function() const { return fn_.get(); }

 private:
  void check_point(PointId x) const;
  void finish_weights();
  /// Bounded multi-source shortest-path search on the graph backend. Calls
  /// visit(id, dist) in nondecreasing dist for every settled id with
  /// dist <= limit; stops early when visit returns false.
  void graph_search(std::span<const PointId> sources, double limit,
                    const std::function<bool(PointId, double)>& visit) const;

  std::size_t n_ = 0;
  Backend backend_ = Backend::table;
  MetricKind kind_;
  std::vector<double> weights_;
  double total_measure_ = 0.0;

  std::vector<double> table_;

  std::vector<std::size_t> offsets_;
  std::vector<PointId> targets_;
  std::vector<double> edge_weights_;
  bool unit_edges_ = true;

  std::shared_ptr<const DistanceFunction> fn_;
};

struct MetricCheck {
  bool symmetric = true;
  bool zero_diagonal = true;
  bool positive_off_diagonal = true;
  bool triangle_ok = true;
  bool exhaustive = true;
  double worst_K = 0.0;  ///< max d(x,z) / (d(x,y) + d(y,z)) over checked triples
  std::size_t triples_checked = 0;
  PointId witness[3] = {0, 0, 0};
};

/// Checks the metric axioms; exhaustive for n <= exhaustive_limit, otherwise
/// on `samples` seeded random triples. Triangle test uses the space's K.
MetricCheck check_metric(const MetricMeasureSpace& space, std::size_t exhaustive_limit = 500,
                         std::size_t samples = 100000, unsigned long long seed = 1);

/// Distances from every point of the space that coincide with r exactly,
/// used to warn about radius/distance collisions. Returns up to `max_hits`
/// (x, y) pairs with x < y.
std::vector<std::pair<PointId, PointId>> radius_collisions(const MetricMeasureSpace& space,
                                                           double r, std::size_t max_hits = 4);

}  // namespace czkit
