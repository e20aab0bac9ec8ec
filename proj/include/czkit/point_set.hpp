#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace czkit {

using PointId = std::uint32_t;

/// Strictly increasing list of point ids.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::initializer_list<PointId> ids);

  /// Sorts and removes duplicates.
  static PointSet from_unsorted(std::vector<PointId> ids);
  /// Throws InputError unless `ids` is strictly increasing.
  static PointSet from_sorted(std::vector<PointId> ids);
  static PointSet range(PointId first, PointId last);  // [first, last)

  std::span<const PointId> ids() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  PointId front() const { return members_.front(); }
  PointId back() const { return members_.back(); }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool contains(PointId x) const;
  bool intersects(const PointSet& other) const;
  bool is_subset_of(const PointSet& other) const;

  /// Throws InputError if any id is >= n.
  void check_range(std::size_t n) const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<PointId> members_;
};

PointSet set_union(const PointSet& a, const PointSet& b);
PointSet set_intersection(const PointSet& a, const PointSet& b);
PointSet set_difference(const PointSet& a, const PointSet& b);

/// Union of many sets via a membership mask over [0, n).
PointSet union_all(std::span<const PointSet* const> sets, std::size_t n);

}  // namespace czkit
