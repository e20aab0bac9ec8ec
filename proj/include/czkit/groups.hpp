#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "czkit/point_set.hpp"
#include "czkit/space.hpp"

namespace czkit {

/// Group element in a law-specific integer encoding.
using Element = std::vector<std::int64_t>;

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept;
};

/// Multiplication law of a finitely generated group.
class GroupLaw {
 public:
  virtual ~GroupLaw() = default;
  virtual std::string name() const = 0;
  virtual Element identity() const = 0;
  virtual Element multiply(const Element& a, const Element& b) const = 0;
  virtual Element inverse(const Element& a) const = 0;
};

/// Z^d under addition.
std::shared_ptr<const GroupLaw> integer_lattice_law(int dim);
/// Free product of `letters` copies of Z/2; its Cayley graph is the regular tree.
/// Elements are reduced words (letter indices).
std::shared_ptr<const GroupLaw> free_involutions_law(int letters);
/// Discrete Heisenberg group, (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
std::shared_ptr<const GroupLaw> heisenberg_law();
/// BS(1,2) realized as affine maps x -> 2^k x + q with q dyadic.
/// Elements are (k, m, e) with q = m / 2^e, e >= 0 and m odd whenever e > 0.
std::shared_ptr<const GroupLaw> bs12_law();

/// A finite region of a group together with its Cayley graph.
///
/// Cayley edges join x and s*x for generators s, so the word metric is
/// right-invariant, d(xg, yg) = d(x, y), and the left product B(r)A of the
/// open identity ball with a set A is the metric dilation of A.
class GroupModel {
 public:
  /// Closed word ball {g : |g| <= radius}, ids in breadth-first order.
  static GroupModel word_ball(std::shared_ptr<const GroupLaw> law, std::vector<Element> generators,
                              int radius, std::size_t budget = 1000000);
  /// Arbitrary finite region listed in id order (e.g. a lattice box).
  static GroupModel region(std::shared_ptr<const GroupLaw> law, std::vector<Element> generators,
                           std::vector<Element> elements, std::string description);

  const GroupLaw& law() const { return *law_; }
  std::shared_ptr<const GroupLaw> law_ptr() const { return law_; }
  const std::vector<Element>& generators() const { return generators_; }
  std::size_t size() const { return elements_.size(); }
  const Element& element(PointId id) const { return elements_[id]; }
  PointId origin() const { return origin_; }
  int radius() const { return radius_; }  ///< -1 for non-ball regions
  const std::string& description() const { return description_; }

  std::optional<PointId> find(const Element& e) const;
  /// Partial multiplication on the region.
  std::optional<PointId> multiply(PointId a, PointId b) const;
  std::optional<PointId> inverse(PointId a) const;
  /// As multiply, but throws TruncationError when the product leaves the region.
  PointId multiply_in_region(PointId a, PointId b) const;

  std::vector<WeightedEdge> cayley_edges() const;
  /// Cayley graph with counting measure.
  MetricMeasureSpace cayley_space() const;

 private:
  GroupModel() = default;
  void index_elements();

  std::shared_ptr<const GroupLaw> law_;
  std::vector<Element> generators_;
  std::vector<Element> elements_;
  std::unordered_map<Element, PointId, ElementHash> index_;
  PointId origin_ = 0;
  int radius_ = -1;
  std::string description_;
};

/// Generator sets, closed under inverses.
std::vector<Element> lattice_generators(int dim);
std::vector<Element> involution_generators(int letters);
std::vector<Element> heisenberg_generators();           ///< x^{+-1}, y^{+-1}
std::vector<Element> heisenberg_extended_generators();  ///< adds (xy)^{+-1}
std::vector<Element> bs12_generators();                 ///< a^{+-1}, t^{+-1}

/// BS(1,2) element t^k a^j (i.e. x -> 2^k x + 2^k j).
Element bs12_element(std::int64_t k, std::int64_t j);

}  // namespace czkit
