#include <doctest.h>

#include "czkit/cubes.hpp"
#include "czkit/error.hpp"
#include "czkit/family.hpp"
#include "czkit/models.hpp"
#include "support.hpp"

using namespace czkit;
using namespace czkit::testing;

namespace {

SetFamily dyadic(const MetricMeasureSpace& s, int depth) {
  return family_from_tree(build_cubes(s, 0.5, depth), s.size());
}

/// Smallest constant of the grid passing the brute-force growth test.
double brute_set_constant(const MetricMeasureSpace& s, const PointSet& Q) {
  if (Q.size() == 1) return 1.0;
  const double diam = s.diameter(Q), mq = brute_measure(s, Q);
  for (double C : constant_grid(64)) {
    double m = 0.0;
    for (PointId y = 0; y < s.size(); ++y)
      if (brute_dist_to_set(s, y, Q) <= diam / C) m += s.weight(y);
    if (m <= C * mq * (1 + kMeasureSlack)) return C;
  }
  return kInfinity;
}

}  // namespace

TEST_CASE("doubling set constants") {
  const auto p9 = path_space(9);
  CHECK(doubling_set_constant(p9, PointSet{3, 4, 5}) == 2.0);
  CHECK(doubling_set_constant(p9, p9.all_points()) == 1.0);
  CHECK(doubling_set_constant(p9, PointSet{6}) == 1.0);
  CHECK(constant_grid(4) == std::vector<double>{1, 1.25, 1.5, 2, 2.5, 3, 4});
  CHECK(snap_to_grid(2.1) == 2.5);
  CHECK(snap_to_grid(1000.0) == 1024.0);
  CHECK(snap_to_grid(kInfinity) == kInfinity);
}

TEST_CASE("doubling set constant matches brute force") {
  Rng rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = random_graph_space(rng, 4 + pick(rng, 20), pick(rng, 5));
    std::vector<PointId> q;
    for (int i = 0; i < 1 + static_cast<int>(pick(rng, 4)); ++i) q.push_back(static_cast<PointId>(pick(rng, s.size())));
    const auto Q = PointSet::from_unsorted(q);
    CHECK(doubling_set_constant(s, Q) == brute_set_constant(s, Q));
  }
}

TEST_CASE("tilde sets") {
  const auto p4 = path_space(4);
  SetFamily singles(4);
  for (PointId x = 0; x < 4; ++x) singles.add(PointSet{x});
  const FamilyIndex si(p4, singles);
  CHECK(tilde_set(si, 1, TildeVariant::loose) == PointSet{1});

  const auto fam = dyadic(p4, 3);
  const FamilyIndex idx(p4, fam);
  std::optional<std::size_t> q01;
  for (std::size_t i = 0; i < fam.size(); ++i)
    if (fam.set(i) == PointSet{0, 1}) q01 = i;
  REQUIRE(q01);
  CHECK(tilde_set(idx, *q01, TildeVariant::loose) == PointSet{0, 1, 2, 3});
  CHECK(tilde_set(idx, *q01, TildeVariant::strict) == PointSet{0, 1});
}

TEST_CASE("tilde sets match brute force") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_graph_space(rng, 5 + pick(rng, 25), pick(rng, 6));
    const auto fam = family_from_tree(build_cubes(s, uniform(rng, 0.2, 0.6), 6), s.size());
    const FamilyIndex idx(s, fam);
    for (std::size_t q = 0; q < fam.size(); ++q) {
      CHECK(tilde_set(idx, q, TildeVariant::loose) == brute_tilde(s, fam, fam.set(q), true));
      CHECK(tilde_set(idx, q, TildeVariant::strict) == brute_tilde(s, fam, fam.set(q), false));
    }
  }
}

TEST_CASE("dyadic intervals of P8 form a doubling family") {
  const auto p8 = path_space(8);
  const auto fam = dyadic(p8, 4);
  CHECK(fam.size() == 15);
  CHECK(fam.contains_whole_space());
  const FamilyIndex idx(p8, fam);
  const auto v = verify_doubling_family(idx, 4.0, TildeVariant::loose);
  CHECK(v.pass());
  CHECK(v.failure_count == 0);
}

TEST_CASE("two disjoint singletons fail the growth condition") {
  const auto p4 = path_space(4);
  SetFamily fam(4);
  fam.add(PointSet{0});
  fam.add(PointSet{3});
  const FamilyIndex idx(p4, fam);
  const auto v = verify_doubling_family(idx, 64.0, TildeVariant::loose);
  CHECK_FALSE(v.growth_ok);
  REQUIRE_FALSE(v.failures.empty());
  CHECK(v.failures[0].condition == "growth");
}

TEST_CASE("density") {
  const auto p4 = path_space(4);
  const auto fam = dyadic(p4, 3);
  const auto d = is_dense(FamilyIndex(p4, fam));
  CHECK(d.dense);
  CHECK(d.finest_scale == 0.0);

  SetFamily whole(4);
  whole.add(p4.all_points());
  const auto w = is_dense(FamilyIndex(p4, whole));
  CHECK_FALSE(w.dense);
  CHECK(w.finest_scale == 3.0);
}

TEST_CASE("family constants are consistent") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_graph_space(rng, 6 + pick(rng, 40), pick(rng, 10));
    const auto fam = family_from_tree(build_cubes(s, uniform(rng, 0.2, 0.6), 6), s.size());
    const FamilyIndex idx(s, fam);
    const auto rep = family_report(idx);
    REQUIRE(std::isfinite(rep.family_constant));
    CHECK(rep.required_constant <= rep.family_constant);
    CHECK(rep.verification.pass());
    // one grid step below the reported constant must fail
    const auto grid = constant_grid(rep.family_constant);
    if (grid.size() > 1 && rep.family_constant == grid.back()) {
      CHECK_FALSE(verify_doubling_family(idx, grid[grid.size() - 2], TildeVariant::loose).pass());
    }
    // strict at C implies loose at C^2
    if (std::isfinite(rep.strict_constant)) {
      CHECK(verify_doubling_family(idx, rep.strict_constant * rep.strict_constant, TildeVariant::loose).pass());
    }
    CHECK(rep.per_set_doubling.size() == fam.size());
  }
}

TEST_CASE("ball families") {
  const auto p8 = path_space(8);
  const std::vector<double> radii{1.0, 2.0};
  const auto fam = ball_family(p8, radii);
  CHECK(fam.contains_whole_space());
  for (std::size_t i = 0; i < fam.size(); ++i) CHECK_FALSE(fam.set(i).empty());
  CHECK_THROWS_AS(ball_family(p8, std::vector<double>{-1.0}), InputError);
}
