#include <fstream>
#include <sstream>

#include <doctest.h>

#include "czkit/cubes.hpp"
#include "czkit/error.hpp"
#include "czkit/models.hpp"
#include "czkit/serialize.hpp"
#include "support.hpp"

using namespace czkit;
using namespace czkit::testing;

namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(CZKIT_GOLDEN_DIR) + "/" + name, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing golden file " << name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void same_space(const MetricMeasureSpace& a, const MetricMeasureSpace& b) {
  REQUIRE(a.size() == b.size());
  CHECK(a.backend() == b.backend());
  CHECK(a.metric_kind() == b.metric_kind());
  for (PointId x = 0; x < a.size(); ++x) {
    CHECK(a.weight(x) == b.weight(x));
    for (PointId y = 0; y < a.size(); ++y) CHECK(a.distance(x, y) == b.distance(x, y));
  }
}

}  // namespace

TEST_CASE("numbers keep infinities") {
  CHECK(number(kInfinity) == "inf");
  CHECK(read_number(number(-kInfinity)) == -kInfinity);
  CHECK(std::isnan(read_number(number(NAN))));
  CHECK(read_number(number(2.5)) == 2.5);
  CHECK_THROWS(read_number(Json("many")));
}

TEST_CASE("hashes are stable") {
  CHECK(hash_hex("") == "cbf29ce484222325");
  CHECK(hash_hex("a") == "af63dc4c8601ec8c");
  CHECK(dump(Json{{"a", 1}}) == "{\n  \"a\": 1\n}\n");
}

TEST_CASE("spaces round trip in every backend") {
  Rng rng(5);
  const auto g = random_graph_space(rng, 12, 4);
  same_space(g, space_from_json(to_json(g)));
  same_space(g.to_table(), space_from_json(to_json(g.to_table())));
  SolvableDescriptor d;
  d.half_width_w = 0.5;
  d.half_width_n = 0.5;
  const auto m = SolvableProductModel::create(d);
  const auto fs = m->space();
  same_space(fs, space_from_json(to_json(fs)));
  const auto q = MetricMeasureSpace::from_table(2, {0, 1, 1, 0}, {1, 2}, MetricKind::quasi_with(3.0));
  CHECK(space_from_json(to_json(q)).metric_kind() == MetricKind::quasi_with(3.0));
}

TEST_CASE("malformed spaces are input errors") {
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"n": 2, "mode": "table"})")), Error);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"n": 2, "mode": "cloud", "weights": [1, 1]})")), Error);
  CHECK_THROWS_AS(family_from_json(Json::parse(R"([{"id": 0, "members": [0, 7]}])"), 4), InputError);
  CHECK_THROWS_AS(family_from_json(Json::parse(R"([{"id": 0, "members": []}])"), 4), InputError);
}

TEST_CASE("trees, families and decompositions round trip") {
  const auto g = grid_model(2, 6);
  const auto tree = build_cubes(g.space, 0.5, 5);
  const auto t2 = tree_from_json(to_json(tree));
  CHECK(dump(to_json(t2)) == dump(to_json(tree)));

  const auto fam = family_from_tree(tree, g.space.size());
  const auto f2 = family_from_json(to_json(fam), g.space.size());
  REQUIRE(f2.size() == fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    CHECK(f2.set(i) == fam.set(i));
    CHECK(f2.meta(i) == fam.meta(i));
  }

  const FamilyIndex idx(g.space, fam);
  std::vector<double> f(36, 0.0);
  f[7] = 3.0;
  f[20] = -2.0;
  const double C = family_report(idx, false).family_constant;
  const auto dec = decompose(idx, f, 1.5 * lambda_threshold(g.space, f, C), C);
  const auto back = decomposition_from_json(to_json(dec));
  CHECK(dump(to_json(back)) == dump(to_json(dec)));
  CHECK(function_from_json(function_to_json(f)) == f);
  CHECK(function_from_json(Json::parse("[1, 2]")) == std::vector<double>{1, 2});
}

TEST_CASE("P4 cube tree matches the golden file") {
  const auto tree = build_cubes(path_space(4), 0.5, 3);
  CHECK(dump(to_json(tree)) == golden("p4_tree.json"));
}
