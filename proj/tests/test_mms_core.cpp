#include <doctest.h>

#include "czkit/error.hpp"
#include "czkit/models.hpp"
#include "czkit/parallel.hpp"
#include "support.hpp"

using namespace czkit;
using namespace czkit::testing;

TEST_CASE("open balls on the unit path") {
  const auto p5 = path_space(5);
  CHECK(p5.ball(2, 0.0).empty());
  CHECK(p5.ball(2, 1.5) == PointSet{1, 2, 3});
  CHECK(p5.ball(2, 1.0) == PointSet{2});
  CHECK(p5.closed_ball(2, 1.0) == PointSet{1, 2, 3});
}

TEST_CASE("tree ball around the root") {
  const auto t = tree_model(3, 4);
  CHECK(t.space.ball(t.group->origin(), 1.5).size() == 4);
  const auto B2 = t.space.closed_ball(t.group->origin(), 2.0);
  const auto st = t.space.set_stats(B2);
  CHECK(st.diam == 4.0);
  CHECK(st.measure == 10.0);
}

TEST_CASE("dilations") {
  const auto p5 = path_space(5);
  CHECK(p5.dilate(PointSet{2}, 1.5) == p5.ball(2, 1.5));
  CHECK(p5.dilate(p5.all_points(), 0.1) == p5.all_points());
  const auto g = grid_model(2, 4);
  // id 0 is the corner of the 4x4 box
  CHECK(g.space.dilate(PointSet{0}, 2.5).size() == 6);
}

TEST_CASE("set statistics") {
  const auto p5 = path_space(5);
  auto s = p5.set_stats(PointSet{3});
  CHECK(s.diam == 0.0);
  CHECK(s.measure == 1.0);
  s = p5.set_stats(PointSet{0, 4});
  CHECK(s.diam == 4.0);
  CHECK(s.measure == 2.0);
}

TEST_CASE("bad input is rejected") {
  const auto p5 = path_space(5);
  CHECK_THROWS_AS(p5.ball(7, 1.0), InputError);
  CHECK_THROWS_AS(PointSet::from_sorted({3, 1}), InputError);
  CHECK_THROWS_AS(PointSet({0, 9}).check_range(5), InputError);
  CHECK_THROWS_AS(MetricMeasureSpace::from_table(2, {0, 1, 1, 0}, {1.0, -1.0}), InputError);
  CHECK_THROWS_AS(MetricMeasureSpace::from_table(2, {0, 1, 1, 0, 5}, {1.0, 1.0}), InputError);
}

TEST_CASE("point set algebra") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PointId> a, b;
    for (int i = 0; i < 12; ++i) {
      a.push_back(static_cast<PointId>(pick(rng, 30)));
      b.push_back(static_cast<PointId>(pick(rng, 30)));
    }
    const auto A = PointSet::from_unsorted(a), B = PointSet::from_unsorted(b);
    const auto U = set_union(A, B), I = set_intersection(A, B), D = set_difference(A, B);
    CHECK(U.size() == A.size() + B.size() - I.size());
    CHECK(I.is_subset_of(A));
    CHECK(D.is_subset_of(A));
    CHECK_FALSE(D.intersects(B));
    CHECK(set_union(D, I) == A);
    CHECK(A.intersects(B) == !I.empty());
  }
}

TEST_CASE("graph and table backends agree") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + pick(rng, 30);
    const auto g = random_graph_space(rng, n, pick(rng, n));
    const auto t = g.to_table();
    REQUIRE(t.backend() == MetricMeasureSpace::Backend::table);
    const auto x = static_cast<PointId>(pick(rng, n));
    const double r = uniform(rng, 0.0, 12.0);
    CHECK(g.ball(x, r) == t.ball(x, r));
    CHECK(g.closed_ball(x, r) == t.closed_ball(x, r));
    const auto Q = PointSet{x, static_cast<PointId>(pick(rng, n))};
    CHECK(g.dilate(Q, r) == t.dilate(Q, r));
    CHECK(g.diameter(Q) == t.diameter(Q));
    std::vector<double> dg, dt;
    CHECK(g.nearest_source(Q, &dg) == t.nearest_source(Q, &dt));
    CHECK(dg == dt);
    const auto lim = g.distances_to_set(Q, r);
    for (PointId y = 0; y < n; ++y) {
      const double d = brute_dist_to_set(g, y, Q);
      if (d <= r) CHECK(lim[y] == d); else CHECK(lim[y] == kInfinity);
    }
  }
}

TEST_CASE("ball and dilation match brute force") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_line_space(rng, 3 + pick(rng, 20));
    const auto x = static_cast<PointId>(pick(rng, s.size()));
    const double r = static_cast<double>(pick(rng, 10));  // integral radii hit distances exactly
    std::vector<PointId> open, closed;
    for (PointId y = 0; y < s.size(); ++y) {
      if (s.distance(x, y) < r) open.push_back(y);
      if (s.distance(x, y) <= r) closed.push_back(y);
    }
    CHECK(s.ball(x, r) == PointSet::from_sorted(open));
    CHECK(s.closed_ball(x, r) == PointSet::from_sorted(closed));
    CHECK(s.dilate(PointSet{x}, r) == s.ball(x, r));
  }
}

TEST_CASE("metric axioms") {
  Rng rng(8);
  const auto s = random_graph_space(rng, 40, 20);
  const auto c = check_metric(s);
  CHECK(c.symmetric);
  CHECK(c.zero_diagonal);
  CHECK(c.positive_off_diagonal);
  CHECK(c.triangle_ok);
  CHECK(c.exhaustive);

  // d = |x - y|^2 on {0, 1, 2} is a quasi-metric with K = 2.
  std::vector<double> d{0, 1, 4, 1, 0, 1, 4, 1, 0};
  const auto exact = MetricMeasureSpace::from_table(3, d, {1, 1, 1});
  CHECK_FALSE(check_metric(exact).triangle_ok);
  const auto quasi = MetricMeasureSpace::from_table(3, d, {1, 1, 1}, MetricKind::quasi_with(2.0));
  const auto q = check_metric(quasi);
  CHECK(q.triangle_ok);
  CHECK(q.worst_K == doctest::Approx(2.0));
}

TEST_CASE("radius collisions are reported") {
  const auto p5 = path_space(5);
  CHECK_FALSE(radius_collisions(p5, 2.0).empty());
  CHECK(radius_collisions(p5, 2.5).empty());
}

TEST_CASE("results do not depend on the thread count") {
  Rng rng(21);
  const auto s = random_graph_space(rng, 300, 100);
  const PointSet Q{1, 50, 120};
  set_thread_count(1);
  const auto a = s.dilate(Q, 5.0);
  const auto na = s.nearest_source(Q);
  set_thread_count(0);
  CHECK(s.dilate(Q, 5.0) == a);
  CHECK(s.nearest_source(Q) == na);
}
