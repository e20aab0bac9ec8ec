#include "czkit/point_set.hpp"

#include <algorithm>
#include <iterator>
#include <string>

#include "czkit/error.hpp"

namespace czkit {

PointSet::PointSet(std::initializer_list<PointId> ids) : members_(ids) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

PointSet PointSet::from_unsorted(std::vector<PointId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  PointSet s;
  s.members_ = std::move(ids);
  return s;
}

PointSet PointSet::from_sorted(std::vector<PointId> ids) {
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (ids[i - 1] >= ids[i]) throw InputError("point set ids must be strictly increasing");
  }
  PointSet s;
  s.members_ = std::move(ids);
  return s;
}

PointSet PointSet::range(PointId first, PointId last) {
  PointSet s;
  if (last > first) {
    s.members_.resize(last - first);
    for (PointId i = first; i < last; ++i) s.members_[i - first] = i;
  }
  return s;
}

bool PointSet::contains(PointId x) const {
  return std::binary_search(members_.begin(), members_.end(), x);
}

bool PointSet::intersects(const PointSet& other) const {
  auto a = members_.begin();
  auto b = other.members_.begin();
  while (a != members_.end() && b != other.members_.end()) {
    if (*a == *b) return true;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return false;
}

bool PointSet::is_subset_of(const PointSet& other) const {
  if (size() > other.size()) return false;
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

void PointSet::check_range(std::size_t n) const {
  if (!members_.empty() && members_.back() >= n) {
    throw InputError("point id " + std::to_string(members_.back()) + " out of range [0, " +
                     std::to_string(n) + ")");
  }
}

PointSet set_union(const PointSet& a, const PointSet& b) {
  std::vector<PointId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return PointSet::from_sorted(std::move(out));
}

PointSet set_intersection(const PointSet& a, const PointSet& b) {
  std::vector<PointId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return PointSet::from_sorted(std::move(out));
}

PointSet set_difference(const PointSet& a, const PointSet& b) {
  std::vector<PointId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return PointSet::from_sorted(std::move(out));
}

PointSet union_all(std::span<const PointSet* const> sets, std::size_t n) {
  std::vector<char> mask(n, 0);
  for (const PointSet* s : sets) {
    for (PointId x : *s) mask[x] = 1;
  }
  std::vector<PointId> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) out.push_back(static_cast<PointId>(i));
  }
  return PointSet::from_sorted(std::move(out));
}

}  // namespace czkit
