#include <cmath>

#include <doctest.h>

#include "czkit/base_family.hpp"
#include "czkit/cubes.hpp"
#include "czkit/error.hpp"
#include "czkit/forms.hpp"
#include "czkit/models.hpp"
#include "support.hpp"

using namespace czkit;
using namespace czkit::testing;

namespace {

QuadraticForm diag(std::vector<double> d) { return QuadraticForm::diagonal(d); }

}  // namespace

TEST_CASE("simultaneous diagonalization") {
  const auto I = QuadraticForm::identity(3);
  auto s = simultaneous_diagonalize(I, I);
  for (double v : s.diag_A) CHECK(v == doctest::Approx(1.0));
  for (double v : s.diag_B) CHECK(v == doctest::Approx(1.0));

  s = simultaneous_diagonalize(diag({4, 1}), QuadraticForm::identity(2));
  CHECK(s.diag_A[0] == doctest::Approx(1.0));
  CHECK(s.diag_A[1] == doctest::Approx(4.0));
  CHECK(s.residual < 1e-12);

  const QuadraticForm A{2, {2, 1, 1, 2}};
  const auto ev = generalized_eigenvalues(A, QuadraticForm::identity(2));
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(3.0));
}

TEST_CASE("chains in one dimension") {
  auto c = doubling_chain(diag({16}), diag({1}), 2.0);
  REQUIRE(c.k() == 1);
  CHECK(c.forms[0] == diag({16}));
  CHECK(c.forms[1] == diag({1}));

  c = doubling_chain(diag({4096}), diag({1}), 8.0);
  REQUIRE(c.k() == 2);
  CHECK(c.forms[1].at(0, 0) == doctest::Approx(64.0));
  CHECK(check_chain(c).pass);
}

TEST_CASE("chains use the fewest steps") {
  // metric ratios 4 and 8; one step already lies in [2, 16]
  const auto c = doubling_chain(diag({16, 64}), QuadraticForm::identity(2), 4.0);
  CHECK(c.k() == 1);
  const auto chk = check_chain(c);
  CHECK(chk.pass);
  CHECK(std::sqrt(chk.steps[0].min_eig) == doctest::Approx(4.0));
  CHECK(std::sqrt(chk.steps[0].max_eig) == doctest::Approx(8.0));
}

TEST_CASE("chain errors") {
  CHECK_THROWS_AS(doubling_chain(diag({16}), diag({1}), 1.5), InputError);
  try {
    doubling_chain(diag({2}), diag({1}), 2.0);
    FAIL("expected a gap error");
  } catch (const GapError& e) {
    CHECK(e.eigenvalue() == doctest::Approx(2.0));
  }
  CHECK_THROWS_AS(doubling_chain(diag({1e9}), diag({1}), 2.0), GapError);
  CHECK_THROWS_AS(QuadraticForm({2, {1, 0.5, 0.4, 1}}).validate(), InputError);
  CHECK_THROWS_AS(QuadraticForm({2, {1, 0, 0, -1}}).validate(), InputError);
}

TEST_CASE("random chains satisfy the step bounds") {
  Rng rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + static_cast<int>(pick(rng, 6));
    const double m = std::exp(uniform(rng, std::log(2.0), std::log(1000.0)));
    const auto P = random_invertible(rng, dim);
    std::vector<double> ones(static_cast<std::size_t>(dim), 1.0), lam(static_cast<std::size_t>(dim));
    for (auto& l : lam) l = std::pow(m, uniform(rng, 2.0, 4.0));
    const auto G_rho = congruence(P, ones);
    const auto G_d = congruence(P, lam);
    const auto c = doubling_chain(G_d, G_rho, m);
    CHECK(c.forms.front() == G_d);
    CHECK(c.forms.back() == G_rho);
    const auto chk = check_chain(c);
    CHECK(chk.pass);
    for (const auto& s : chk.steps) {
      CHECK(s.min_eig >= 4.0 * (1 - 1e-9));
      CHECK(s.max_eig <= 256.0 * (1 + 1e-9));
    }
  }
}

TEST_CASE("conjugated metrics and the choice of M") {
  const auto base = QuadraticForm::identity(1);
  const std::vector<double> one{1.0};
  CHECK(conjugated_metric(base, one, 0.0, 3.0) == base);
  const std::vector<double> ad{std::exp(2.0)};
  const auto q = conjugated_metric(base, ad, 6.0, 1.0);
  CHECK(q.at(0, 0) == doctest::Approx(std::exp(-8.0)));
  CHECK(choose_M(0, 0) == 1.5);
  CHECK(choose_M(1, 1) == 6.0);
  CHECK_THROWS_AS(choose_M(-1, 0), InputError);
}

TEST_CASE("base family on a single small cube") {
  SolvableDescriptor d;
  d.eps_w = 0.25;
  d.half_width_w = 0.25;
  d.eps_n = 0.25;
  d.half_width_n = 1.0;
  const auto model = SolvableProductModel::create(d);
  const auto W = model->base_space();
  const auto tree = build_cubes(W, 0.5, 1);
  REQUIRE(tree.levels[0].size() == 1);
  const auto bf = build_base_family(*model, tree, model_M(*model));
  CHECK(bf.M == 6.0);
  REQUIRE(bf.cubes.size() == 1);
  CHECK(bf.cubes[0].r == 0.5);
  CHECK(bf.cubes[0].radius == 0.5);
  CHECK(bf.cubes[0].chain.k() == 0);
  CHECK(bf.family.contains_whole_space());
  const auto& Q = tree.levels[0][0].members;
  for (std::size_t i = 0; i < bf.family.size(); ++i) {
    const auto& s = bf.family.set(i);
    // every set is Q x R for an N-ball R
    std::vector<std::size_t> fiber;
    for (PointId p : s)
      if (model->t_index_of(p) == Q.front()) fiber.push_back(model->n_index_of(p));
    CHECK(s.size() == fiber.size() * Q.size());
  }
  const auto space = model->space();
  const FamilyIndex idx(space, bf.family);
  CHECK(std::isfinite(family_report(idx, false).family_constant));
}

TEST_CASE("base family chains on a deeper tree") {
  SolvableDescriptor d;
  d.eps_w = 0.25;
  d.half_width_w = 3.0;
  d.eps_n = 0.5;
  d.half_width_n = 4.0;
  d.action = {0.05};
  const auto model = SolvableProductModel::create(d);
  const auto W = model->base_space();
  const auto tree = build_cubes(W, 0.2, 8);
  const auto bf = build_base_family(*model, tree, model_M(*model));
  bool any_chain = false;
  for (const auto& c : bf.cubes) {
    CHECK(c.check.pass);
    if (c.chain.k() > 0) {
      any_chain = true;
      CHECK(c.m >= 2.0);
      CHECK(c.radius == 1.0);
    }
  }
  CHECK(any_chain);
  CHECK_THROWS_AS(build_base_family(*model, build_cubes(path_space(3), 0.5, 2), 1.0), InputError);
  CHECK_THROWS_AS(build_base_family(*model, tree, -1.0), InputError);
}
