#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "czkit/groups.hpp"
#include "czkit/point_set.hpp"
#include "czkit/space.hpp"

namespace czkit {

/// How B(r)A was formed: left products with the open identity ball, or the
/// metric dilation {x : d(x, A) < r} on spaces without a group law.
enum class DilationSemantics { left_product, metric_dilation };
std::string to_string(DilationSemantics s);

struct DoublingCertificate {
  double r = 0.0;
  PointSet A;
  double measure_A = 0.0;
  double measure_BrA = 0.0;
  bool found = false;
  DilationSemantics semantics = DilationSemantics::left_product;
  std::string strategy;  ///< strategy that produced A, or the last one tried
  std::size_t evaluations = 0;
  std::size_t budget = 0;
  std::vector<std::string> log;
  std::string boundary;  ///< what was exhausted when nothing was found
};

/// Open word ball {g : |g| < r} around the identity.
PointSet identity_ball(const GroupModel& group, const MetricMeasureSpace& cayley, double r);

/// B(r)A = {b a : b in B(r), a in A}; throws TruncationError if a product
/// leaves the enumerated region.
PointSet product_with_ball(const GroupModel& group, const PointSet& ball, const PointSet& A);

/// Exact check of |B(r)A| <= 2|A| (counting measure).
DoublingCertificate is_r_doubling(const GroupModel& group, const PointSet& A, double r);
/// Same with metric dilation on an arbitrary space.
DoublingCertificate is_r_doubling(const MetricMeasureSpace& space, const PointSet& A, double r);

struct SearchOptions {
  std::size_t budget = 100000;       ///< candidate evaluations
  std::size_t exhaustive_size = 12;  ///< free-involution groups: connected sets up to this size
  int exhaustive_radius = 6;         ///< ... within this distance of the identity
  bool balls = true, boxes = true, rectangles = true, connected_sets = true;
};

/// Balls of growing radius, then axis boxes (lattices), then t^{-i} a^j
/// rectangles (BS(1,2)), then for free-involution groups every connected set
/// containing the identity up to the size bound, one per rooted shape.
/// Deterministic: the first hit in this order is returned.
DoublingCertificate find_r_doubling(const GroupModel& group, double r, const SearchOptions& options = {});
/// Metric-dilation fallback: balls B(x, R) around the first point.
DoublingCertificate find_r_doubling(const MetricMeasureSpace& space, double r, const SearchOptions& options = {});

struct ProductInequality {
  std::size_t A = 0, B = 0, Y = 0;
  std::size_t BY = 0, BA = 0, AinvY = 0;
  double lhs = 0.0;  ///< |A| |BY|
  double rhs = 0.0;  ///< |BA| |A^-1 Y|
  bool holds = true;
};

/// |A| |BY| <= |BA| |A^-1 Y|; throws TruncationError when products or
/// inverses leave the region.
ProductInequality product_inequality_check(const GroupModel& group, const PointSet& A, const PointSet& B,
                                           const PointSet& Y);

struct UnidoubleRow {
  int r = 0;
  std::size_t ball_r = 0, ball_2r = 0, ball_3r = 0;
  double doubling = 0.0;  ///< |B(2r)| / |B(r)|
  double derived_C = 0.0;  ///< |B(3r)| / |B(r)| from the inequality with A = B(r), B = B(2r), Y = {e}
  bool holds = true;
};

/// Closed word balls B(r), r = 1..max_r; needs the region to contain B(3 max_r).
std::vector<UnidoubleRow> unidouble_table(const GroupModel& group, int max_r);

}  // namespace czkit
