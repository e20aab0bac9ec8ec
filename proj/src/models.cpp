#include "czkit/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "czkit/error.hpp"

namespace czkit {

nlohmann::ordered_json ModelDescriptor::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  if (kind == "grid") {
    j["dim"] = dim;
    j["side"] = side;
  } else if (kind == "tree") {
    j["degree"] = degree;
    j["depth"] = depth;
  } else if (kind == "heisenberg") {
    j["radius"] = radius;
    j["generators"] = generators;
  } else if (kind == "bs12") {
    j["radius"] = radius;
  } else if (kind == "solvable") {
    j["solvable"] = solvable.to_json();
  }
  return j;
}

ModelDescriptor ModelDescriptor::from_json(const nlohmann::ordered_json& j) {
  ModelDescriptor d;
  d.kind = j.at("kind").get<std::string>();
  d.dim = j.value("dim", d.dim);
  d.side = j.value("side", d.side);
  d.degree = j.value("degree", d.degree);
  d.depth = j.value("depth", d.depth);
  d.radius = j.value("radius", d.radius);
  d.generators = j.value("generators", d.generators);
  if (j.contains("solvable")) d.solvable = SolvableDescriptor::from_json(j["solvable"]);
  return d;
}

MetricMeasureSpace path_space(std::size_t n) {
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.push_back({static_cast<PointId>(i), static_cast<PointId>(i + 1), 1.0});
  }
  return MetricMeasureSpace::from_graph(n, edges, std::vector<double>(n, 1.0));
}

GeneratedModel grid_model(int dim, int side) {
  if (dim < 1 || side < 1) throw InputError("grid needs dim >= 1 and side >= 1");
  double count = std::pow(static_cast<double>(side), dim);
  if (count > 1e6) throw InputError("grid exceeds point budget");
  const auto n = static_cast<std::size_t>(count);
  std::vector<Element> elements(n, Element(static_cast<std::size_t>(dim)));
  for (std::size_t id = 0; id < n; ++id) {
    std::size_t rest = id;
    for (int i = 0; i < dim; ++i) {
      elements[id][i] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(side)) - side / 2;
      rest /= static_cast<std::size_t>(side);
    }
  }
  auto group = GroupModel::region(integer_lattice_law(dim), lattice_generators(dim), std::move(elements),
                                  "Z^" + std::to_string(dim) + " box side " + std::to_string(side));
  GeneratedModel m;
  m.descriptor.kind = "grid";
  m.descriptor.dim = dim;
  m.descriptor.side = side;
  m.space = group.cayley_space();
  m.group = std::move(group);
  return m;
}

GeneratedModel tree_model(int degree, int depth) {
  auto group = GroupModel::word_ball(free_involutions_law(degree), involution_generators(degree), depth);
  GeneratedModel m;
  m.descriptor.kind = "tree";
  m.descriptor.degree = degree;
  m.descriptor.depth = depth;
  m.space = group.cayley_space();
  m.group = std::move(group);
  return m;
}

GeneratedModel heisenberg_model(int radius, bool extended_generators) {
  auto gens = extended_generators ? heisenberg_extended_generators() : heisenberg_generators();
  auto group = GroupModel::word_ball(heisenberg_law(), std::move(gens), radius);
  GeneratedModel m;
  m.descriptor.kind = "heisenberg";
  m.descriptor.radius = radius;
  m.descriptor.generators = extended_generators ? "extended" : "standard";
  m.space = group.cayley_space();
  m.group = std::move(group);
  return m;
}

GeneratedModel bs12_model(int radius) {
  auto group = GroupModel::word_ball(bs12_law(), bs12_generators(), radius);
  GeneratedModel m;
  m.descriptor.kind = "bs12";
  m.descriptor.radius = radius;
  m.space = group.cayley_space();
  m.group = std::move(group);
  return m;
}

GeneratedModel solvable_model(const SolvableDescriptor& desc) {
  GeneratedModel m;
  m.descriptor.kind = "solvable";
  m.descriptor.solvable = desc;
  m.solvable = SolvableProductModel::create(desc);
  m.space = m.solvable->space();
  return m;
}

GeneratedModel generate(const ModelDescriptor& d) {
  if (d.kind == "grid") return grid_model(d.dim, d.side);
  if (d.kind == "tree") return tree_model(d.degree, d.depth);
  if (d.kind == "heisenberg") {
    if (d.generators != "standard" && d.generators != "extended") {
      throw InputError("heisenberg generators must be standard or extended");
    }
    return heisenberg_model(d.radius, d.generators == "extended");
  }
  if (d.kind == "bs12") return bs12_model(d.radius);
  if (d.kind == "solvable") return solvable_model(d.solvable);
  throw InputError("unknown model kind '" + d.kind + "'");
}

nlohmann::ordered_json GeneratedModel::sidecar() const {
  nlohmann::ordered_json j;
  j["model"] = descriptor.to_json();
  if (group) {
    nlohmann::ordered_json g;
    g["law"] = group->law().name();
    g["region"] = group->description();
    g["origin"] = group->origin();
    g["generators"] = group->generators();
    auto& els = g["elements"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < group->size(); ++i) els.push_back(group->element(static_cast<PointId>(i)));
    j["group"] = std::move(g);
  }
  if (solvable) {
    nlohmann::ordered_json s;
    s["t_count"] = solvable->t_count();
    s["n_count"] = solvable->n_count();
    s["cell_weight"] = solvable->cell_weight();
    s["point_order"] = "t_index * n_count + n_index";
    j["product"] = std::move(s);
  }
  return j;
}

std::vector<std::size_t> word_ball_sizes(const GroupModel& group, int max_r) {
  auto space = group.cayley_space();
  auto dist = space.distances_from(group.origin());
  std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(max_r, 0)) + 1, 0);
  for (double d : dist) {
    for (int r = 0; r <= max_r; ++r) {
      if (d <= r) ++sizes[static_cast<std::size_t>(r)];
    }
  }
  return sizes;
}

GroupAxiomReport check_group_axioms(const GroupModel& group, const MetricMeasureSpace& space,
                                    std::size_t samples, unsigned long long seed) {
  GroupAxiomReport rep;
  const auto& law = group.law();
  for (const auto& g : group.generators()) {
    auto inv = law.inverse(g);
    if (std::find(group.generators().begin(), group.generators().end(), inv) == group.generators().end()) {
      rep.generators_symmetric = false;
    }
  }
  const auto e = law.identity();
  for (std::size_t i = 0; i < group.size(); ++i) {
    const auto& x = group.element(static_cast<PointId>(i));
    if (law.multiply(e, x) != x || law.multiply(x, e) != x) {
      rep.identity_ok = false;
      rep.witnesses.push_back("identity fails at id " + std::to_string(i));
      break;
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PointId> pick(0, static_cast<PointId>(group.size() - 1));
  for (std::size_t attempt = 0; rep.triples_checked < samples && attempt < 100 * samples; ++attempt) {
    PointId x = pick(rng), y = pick(rng), z = pick(rng);
    auto xy = group.multiply(x, y), yz = group.multiply(y, z);
    if (!xy || !yz) continue;
    auto l = group.multiply(*xy, z), r = group.multiply(x, *yz);
    if (!l || !r) continue;
    ++rep.triples_checked;
    if (*l != *r) {
      rep.associative = false;
      rep.witnesses.push_back("associativity fails at (" + std::to_string(x) + "," + std::to_string(y) +
                              "," + std::to_string(z) + ")");
    }
  }
  // Right-invariance on pairs whose geodesics stay inside the region.
  auto origin_dist = space.distances_from(group.origin());
  const double reach = group.radius() >= 0 ? group.radius() / 4.0 : kInfinity;
  std::vector<PointId> inner;
  for (PointId i = 0; i < group.size(); ++i) {
    if (origin_dist[i] <= reach) inner.push_back(i);
  }
  std::uniform_int_distribution<std::size_t> pick_inner(0, inner.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_gen(0, group.generators().size() - 1);
  for (std::size_t attempt = 0; rep.invariance_checked < samples && attempt < 100 * samples; ++attempt) {
    PointId x = inner[pick_inner(rng)], y = inner[pick_inner(rng)];
    auto g = group.find(group.generators()[pick_gen(rng)]);
    if (!g) continue;
    auto xg = group.multiply(x, *g), yg = group.multiply(y, *g);
    if (!xg || !yg) continue;
    ++rep.invariance_checked;
    if (space.distance(*xg, *yg) != space.distance(x, y)) {
      rep.right_invariant = false;
      rep.witnesses.push_back("right-invariance fails at (" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
  }
  return rep;
}

namespace {

nlohmann::ordered_json metric_json(const MetricCheck& c) {
  nlohmann::ordered_json j;
  j["symmetric"] = c.symmetric;
  j["zero_diagonal"] = c.zero_diagonal;
  j["positive_off_diagonal"] = c.positive_off_diagonal;
  j["triangle_ok"] = c.triangle_ok;
  j["exhaustive"] = c.exhaustive;
  j["worst_K"] = c.worst_K;
  j["triples_checked"] = c.triples_checked;
  if (!c.triangle_ok) j["witness"] = {c.witness[0], c.witness[1], c.witness[2]};
  return j;
}

}  // namespace

nlohmann::ordered_json model_invariant_report(const GeneratedModel& model, unsigned long long seed) {
  nlohmann::ordered_json rep;
  rep["model"] = model.descriptor.to_json();
  rep["n"] = model.space.size();
  auto mc = check_metric(model.space, 500, 100000, seed);
  rep["metric"] = metric_json(mc);
  bool pass = mc.symmetric && mc.zero_diagonal && mc.positive_off_diagonal && mc.triangle_ok;

  if (model.group) {
    const auto& group = *model.group;
    auto ax = check_group_axioms(group, model.space, 200, seed);
    nlohmann::ordered_json a;
    a["generators_symmetric"] = ax.generators_symmetric;
    a["identity"] = ax.identity_ok;
    a["associative"] = ax.associative;
    a["triples_checked"] = ax.triples_checked;
    a["right_invariant"] = ax.right_invariant;
    a["invariance_pairs_checked"] = ax.invariance_checked;
    if (!ax.witnesses.empty()) a["witnesses"] = ax.witnesses;
    rep["group_axioms"] = a;
    pass = pass && ax.generators_symmetric && ax.identity_ok && ax.associative && ax.right_invariant;

    auto dist = model.space.distances_from(group.origin());
    int reach = 0;
    for (double d : dist) reach = std::max(reach, static_cast<int>(d));
    auto sizes = word_ball_sizes(group, reach);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    std::vector<double> ratios;
    for (int r = 1; 2 * r <= reach; ++r) {
      double ratio = static_cast<double>(sizes[2 * r]) / static_cast<double>(sizes[r]);
      ratios.push_back(ratio);
      rows.push_back({{"r", r}, {"ball_r", sizes[r]}, {"ball_2r", sizes[2 * r]}, {"ratio", ratio}});
    }
    nlohmann::ordered_json bd;
    bd["convention"] = "closed word balls {g : |g| <= r} around the origin";
    bd["rows"] = rows;
    // Exponential growth: the doubling ratio itself keeps growing geometrically.
    bool exponential = false;
    if (ratios.size() >= 3) {
      auto k = ratios.size();
      exponential = ratios[k - 1] / ratios[k - 2] >= 1.5 && ratios[k - 2] / ratios[k - 3] >= 1.5;
    }
    bd["growth"] = exponential ? "exponential" : "polynomial-or-undetermined";
    rep["ball_doubling"] = bd;
    if (model.descriptor.kind == "heisenberg") {
      double c = 0.0;
      for (int r = 1; r <= reach; ++r) {
        c = std::max(c, static_cast<double>(sizes[r]) / std::pow(static_cast<double>(r), 4));
      }
      rep["polynomial_growth_c"] = c;
    }
  }

  if (model.solvable) {
    auto inv = measure_invariants(*model.solvable, 100000, seed);
    nlohmann::ordered_json s;
    s["C1_hat"] = inv.C1_hat;
    s["C2_hat"] = inv.C2_hat;
    s["ad_constant"] = inv.ad_constant;
    s["quasi_K"] = inv.quasi_K;
    s["triples_checked"] = inv.triples_checked;
    s["product_measure_exact"] = inv.product_measure_ok;
    s["boxes_checked"] = inv.boxes_checked;
    s["ball_product_inclusion"] = inv.ball_product_ok;
    s["ball_product_points"] = inv.ball_product_points;
    if (!inv.ball_product_ok) s["witness"] = inv.ball_product_witness;
    rep["solvable"] = s;
    pass = pass && inv.product_measure_ok && inv.ball_product_ok && inv.quasi_K <= 3.0 && inv.C1_hat > 0.0;
  }
  rep["pass"] = pass;
  return rep;
}

}  // namespace czkit
