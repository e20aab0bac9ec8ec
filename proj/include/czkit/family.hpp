#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "czkit/cubes.hpp"
#include "czkit/point_set.hpp"
#include "czkit/space.hpp"

namespace czkit {

struct SetMeta {
  std::optional<std::size_t> level;  ///< cube level (base-case and dyadic families)
  std::optional<std::size_t> cube;   ///< cube index within its level
  std::optional<int> j;              ///< metric index along a chain
  std::optional<PointId> center;     ///< ball center, where meaningful
  friend bool operator==(const SetMeta&, const SetMeta&) = default;
};

/// Indexed collection of nonempty point sets over a space of n points.
class SetFamily {
 public:
  explicit SetFamily(std::size_t n_points = 0) : n_(n_points) {}

  std::size_t add(PointSet s, SetMeta meta = {});
  std::size_t size() const { return sets_.size(); }
  std::size_t n_points() const { return n_; }
  const PointSet& set(std::size_t i) const { return sets_.at(i); }
  const SetMeta& meta(std::size_t i) const { return meta_.at(i); }
  const std::vector<PointSet>& sets() const { return sets_; }
  bool contains_whole_space() const;

 private:
  std::size_t n_;
  std::vector<PointSet> sets_;
  std::vector<SetMeta> meta_;
};

/// All distinct cubes of the tree (coarsest copy kept), whole space included.
SetFamily family_from_tree(const DyadicTree& tree, std::size_t n_points);

/// Balls B(x, r) for every x and every r in radii, deduplicated, plus the whole space.
SetFamily ball_family(const MetricMeasureSpace& space, std::span<const double> radii);

/// Precomputed measures and point-to-set incidence for a family on a space.
/// Holds references; the space and family must outlive it.
class FamilyIndex {
 public:
  FamilyIndex(const MetricMeasureSpace& space, const SetFamily& family);

  const MetricMeasureSpace& space() const { return *space_; }
  const SetFamily& family() const { return *family_; }
  std::size_t size() const { return family_->size(); }
  double measure(std::size_t i) const { return measures_[i]; }
  std::span<const std::size_t> sets_containing(PointId x) const {
    return {incidence_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }
  std::optional<std::size_t> whole_space() const { return whole_; }
  /// Sets ordered by decreasing measure, ties by index.
  const std::vector<std::size_t>& by_measure_desc() const { return order_; }

 private:
  const MetricMeasureSpace* space_;
  const SetFamily* family_;
  std::vector<double> measures_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> incidence_;
  std::optional<std::size_t> whole_;
  std::vector<std::size_t> order_;
};

enum class TildeVariant { loose, strict };

/// Relative slack on measure comparisons between sums of weights.
inline constexpr double kMeasureSlack = 1e-9;

/// Union of family sets R meeting Q with mu(R) <= 2 mu(Q) (loose) or
/// mu(R) <= mu(Q) (strict).
PointSet tilde_set(const FamilyIndex& index, std::size_t q, TildeVariant variant);
PointSet tilde_of(const FamilyIndex& index, const PointSet& Q, double mu_q, TildeVariant variant);

/// Smallest C on {1, 1.25, 1.5, 2, 2.5, 3, 4, ..., 64} with
/// mu({x : d(x,Q) <= diam(Q)/C}) <= C mu(Q); 1 for singletons, +inf if none.
double doubling_set_constant(const MetricMeasureSpace& space, const PointSet& Q);
/// The tested grid of constants.
std::vector<double> constant_grid(double max_value);
/// Smallest grid value >= c (c itself when beyond the grid).
double snap_to_grid(double c);

struct SetRequirement {
  double containment = 1.0;  ///< min mu(S)/mu(Q) over S in family with tilde(Q) inside S
  double growth = 1.0;       ///< min ratio achieving the growth condition
  std::optional<std::size_t> containment_witness;
  std::optional<std::size_t> growth_witness;
  double required() const { return containment > growth ? containment : growth; }
};

/// Exact smallest constants for which set q satisfies each condition.
SetRequirement set_requirement(const FamilyIndex& index, std::size_t q, TildeVariant variant);

struct FamilyFailure {
  std::size_t set = 0;
  std::string condition;  ///< "containment" or "growth"
  double required = 0.0;
};

struct FamilyVerification {
  double C = 0.0;
  TildeVariant variant = TildeVariant::loose;
  bool containment_ok = true;
  bool growth_ok = true;
  std::vector<FamilyFailure> failures;  ///< first failures, capped
  std::size_t failure_count = 0;
  double required_constant = 1.0;  ///< max over sets of the exact requirement
  // Strict at C implies loose at C^2; evaluated when the strict run passes.
  std::optional<bool> crosscheck_loose_at_C2;
  bool pass() const { return containment_ok && growth_ok; }
};

FamilyVerification verify_doubling_family(const FamilyIndex& index, double C, TildeVariant variant);

struct DensityResult {
  bool dense = false;
  double finest_scale = 0.0;  ///< max over points of min diam of containing sets
  std::size_t uncovered = 0;
};

DensityResult is_dense(const FamilyIndex& index);

struct FamilyReport {
  double family_constant = kInfinity;  ///< grid-snapped smallest passing C (loose)
  double required_constant = kInfinity;
  double strict_constant = kInfinity;
  std::vector<double> per_set_doubling;
  DensityResult density;
  std::optional<bool> crosscheck;  ///< loose passes at strict_constant^2
  FamilyVerification verification;  ///< loose run at family_constant
};

/// Full report; per-set doubling constants only when requested (costly on large families).
FamilyReport family_report(const FamilyIndex& index, bool per_set_doubling = true);

}  // namespace czkit
