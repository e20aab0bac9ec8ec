#include "czkit/groups.hpp"

#include <deque>
#include <utility>

#include "czkit/error.hpp"

namespace czkit {

std::size_t ElementHash::operator()(const Element& e) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto v : e) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

namespace {

class LatticeLaw final : public GroupLaw {
 public:
  explicit LatticeLaw(int dim) : dim_(dim) {}
  std::string name() const override { return "Z^" + std::to_string(dim_); }
  Element identity() const override { return Element(dim_, 0); }
  Element multiply(const Element& a, const Element& b) const override {
    Element out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = a[i] + b[i];
    return out;
  }
  Element inverse(const Element& a) const override {
    Element out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = -a[i];
    return out;
  }

 private:
  int dim_;
};

class InvolutionLaw final : public GroupLaw {
 public:
  explicit InvolutionLaw(int letters) : letters_(letters) {}
  std::string name() const override { return "free_Z2^" + std::to_string(letters_); }
  Element identity() const override { return {}; }
  Element multiply(const Element& a, const Element& b) const override {
    Element out = a;
    std::size_t j = 0;
    while (j < b.size() && !out.empty() && out.back() == b[j]) {
      out.pop_back();
      ++j;
    }
    out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
    return out;
  }
  Element inverse(const Element& a) const override { return Element(a.rbegin(), a.rend()); }

 private:
  int letters_;
};

class HeisenbergLaw final : public GroupLaw {
 public:
  std::string name() const override { return "heisenberg"; }
  Element identity() const override { return {0, 0, 0}; }
  Element multiply(const Element& x, const Element& y) const override {
    return {x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]};
  }
  Element inverse(const Element& x) const override { return {-x[0], -x[1], -x[2] + x[0] * x[1]}; }
};

// (k, m, e): x -> 2^k x + m / 2^e.
class Bs12Law final : public GroupLaw {
 public:
  std::string name() const override { return "bs12"; }
  Element identity() const override { return {0, 0, 0}; }

  Element multiply(const Element& x, const Element& y) const override {
    // q1 + 2^{k1} q2 with q2 = m2 / 2^{e2}.
    std::int64_t e2 = y[2] - x[0];
    std::int64_t E = std::max<std::int64_t>({x[2], e2, 0});
    __int128 m = shifted(x[1], E - x[2]) + shifted(y[1], E - e2);
    return normalize(x[0] + y[0], m, E);
  }

  Element inverse(const Element& x) const override {
    // (-k, -2^{-k} q) = (-k, -m / 2^{e+k}).
    std::int64_t e = x[2] + x[0];
    if (e >= 0) return normalize(-x[0], -static_cast<__int128>(x[1]), e);
    return normalize(-x[0], shifted(-x[1], -e), 0);
  }

 private:
  static __int128 shifted(std::int64_t m, std::int64_t s) {
    if (s > 60) throw RangeError("bs12 element exceeds integer range");
    return static_cast<__int128>(m) << s;
  }
  static Element normalize(std::int64_t k, __int128 m, std::int64_t e) {
    if (m == 0) return {k, 0, 0};
    while (e > 0 && (m & 1) == 0) {
      m /= 2;
      --e;
    }
    constexpr __int128 lim = static_cast<__int128>(1) << 62;
    if (m > lim || m < -lim) throw RangeError("bs12 element exceeds integer range");
    return {k, static_cast<std::int64_t>(m), e};
  }
};

}  // namespace

std::shared_ptr<const GroupLaw> integer_lattice_law(int dim) {
  if (dim < 1) throw InputError("lattice dimension must be positive");
  return std::make_shared<LatticeLaw>(dim);
}

std::shared_ptr<const GroupLaw> free_involutions_law(int letters) {
  if (letters < 2) throw InputError("tree degree must be at least 2");
  return std::make_shared<InvolutionLaw>(letters);
}

std::shared_ptr<const GroupLaw> heisenberg_law() { return std::make_shared<HeisenbergLaw>(); }

std::shared_ptr<const GroupLaw> bs12_law() { return std::make_shared<Bs12Law>(); }

std::vector<Element> lattice_generators(int dim) {
  std::vector<Element> gens;
  for (int i = 0; i < dim; ++i) {
    Element plus(dim, 0), minus(dim, 0);
    plus[i] = 1;
    minus[i] = -1;
    gens.push_back(plus);
    gens.push_back(minus);
  }
  return gens;
}

std::vector<Element> involution_generators(int letters) {
  std::vector<Element> gens;
  for (int i = 0; i < letters; ++i) gens.push_back({i});
  return gens;
}

std::vector<Element> heisenberg_generators() {
  return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
}

std::vector<Element> heisenberg_extended_generators() {
  auto gens = heisenberg_generators();
  gens.push_back({1, 1, 0});
  gens.push_back({-1, -1, 1});
  return gens;
}

std::vector<Element> bs12_generators() {
  return {{0, 1, 0}, {0, -1, 0}, {1, 0, 0}, {-1, 0, 0}};
}

Element bs12_element(std::int64_t k, std::int64_t j) {
  auto law = bs12_law();
  Element t{k, 0, 0};
  Element a{0, j, 0};
  return law->multiply(t, a);
}

GroupModel GroupModel::word_ball(std::shared_ptr<const GroupLaw> law, std::vector<Element> generators,
                                 int radius, std::size_t budget) {
  if (radius < 0) throw InputError("word ball radius must be nonnegative");
  for (const auto& g : generators) {
    auto inv = law->inverse(g);
    bool found = false;
    for (const auto& h : generators) found = found || h == inv;
    if (!found) throw InputError("generator set is not closed under inverses");
  }
  GroupModel m;
  m.law_ = std::move(law);
  m.generators_ = std::move(generators);
  m.radius_ = radius;
  m.description_ = m.law_->name() + " word ball radius " + std::to_string(radius);

  std::vector<int> depth;
  std::deque<PointId> frontier;
  auto add = [&](Element e, int d) {
    if (m.elements_.size() >= budget) throw InputError("model exceeds point budget");
    auto id = static_cast<PointId>(m.elements_.size());
    m.index_.emplace(e, id);
    m.elements_.push_back(std::move(e));
    depth.push_back(d);
    frontier.push_back(id);
  };
  add(m.law_->identity(), 0);
  while (!frontier.empty()) {
    PointId x = frontier.front();
    frontier.pop_front();
    if (depth[x] == radius) continue;
    for (const auto& s : m.generators_) {
      Element y = m.law_->multiply(s, m.elements_[x]);
      if (!m.index_.count(y)) add(std::move(y), depth[x] + 1);
    }
  }
  m.origin_ = 0;
  return m;
}

GroupModel GroupModel::region(std::shared_ptr<const GroupLaw> law, std::vector<Element> generators,
                              std::vector<Element> elements, std::string description) {
  GroupModel m;
  m.law_ = std::move(law);
  m.generators_ = std::move(generators);
  m.elements_ = std::move(elements);
  m.description_ = std::move(description);
  m.index_elements();
  auto origin = m.find(m.law_->identity());
  if (!origin) throw InputError("region does not contain the identity");
  m.origin_ = *origin;
  return m;
}

void GroupModel::index_elements() {
  index_.clear();
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (!index_.emplace(elements_[i], static_cast<PointId>(i)).second) {
      throw InputError("duplicate group element in region");
    }
  }
}

std::optional<PointId> GroupModel::find(const Element& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<PointId> GroupModel::multiply(PointId a, PointId b) const {
  return find(law_->multiply(elements_.at(a), elements_.at(b)));
}

std::optional<PointId> GroupModel::inverse(PointId a) const { return find(law_->inverse(elements_.at(a))); }

PointId GroupModel::multiply_in_region(PointId a, PointId b) const {
  auto p = multiply(a, b);
  if (!p) throw TruncationError("product leaves the enumerated region of " + description_);
  return *p;
}

std::vector<WeightedEdge> GroupModel::cayley_edges() const {
  std::vector<WeightedEdge> edges;
  for (std::size_t x = 0; x < elements_.size(); ++x) {
    for (const auto& s : generators_) {
      auto y = find(law_->multiply(s, elements_[x]));
      if (y && *y > x) edges.push_back({static_cast<PointId>(x), *y, 1.0});
    }
  }
  return edges;
}

MetricMeasureSpace GroupModel::cayley_space() const {
  auto edges = cayley_edges();
  return MetricMeasureSpace::from_graph(size(), edges, std::vector<double>(size(), 1.0));
}

}  // namespace czkit
