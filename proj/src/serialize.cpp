#include "czkit/serialize.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "czkit/error.hpp"
#include "czkit/solvable.hpp"

namespace czkit {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double read_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::nan("");
  }
  throw InputError("expected a number, got " + j.dump());
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::string_view bytes) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << fnv1a(bytes);
  return s.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

Json ids(const PointSet& s) { return Json(std::vector<PointId>(s.begin(), s.end())); }

PointSet read_set(const Json& j) { return PointSet::from_sorted(j.get<std::vector<PointId>>()); }

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json metric_kind_json(MetricKind k) {
  if (!k.quasi) return "exact";
  return Json{{"quasi", k.K}};
}

MetricKind read_metric_kind(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "exact") return MetricKind::exact();
  if (j.is_object() && j.contains("quasi")) return MetricKind::quasi_with(j.at("quasi").get<double>());
  throw InputError("metric_kind must be \"exact\" or {\"quasi\": K}");
}

Json bullets_json(const std::vector<BulletResult>& bullets) {
  Json arr = Json::array();
  for (const auto& b : bullets) {
    Json e{{"name", b.name}, {"pass", b.pass}, {"measured", number(b.measured)}};
    if (!b.witness.empty()) e["witness"] = b.witness;
    arr.push_back(std::move(e));
  }
  return arr;
}

}  // namespace

Json to_json(const MetricMeasureSpace& space) {
  Json j;
  j["n"] = space.size();
  switch (space.backend()) {
    case MetricMeasureSpace::Backend::table: {
      j["mode"] = "table";
      Json rows = Json::array();
      const auto t = space.table();
      for (std::size_t x = 0; x < space.size(); ++x) {
        rows.push_back(std::vector<double>(t.begin() + static_cast<long>(x * space.size()),
                                           t.begin() + static_cast<long>((x + 1) * space.size())));
      }
      j["distances"] = std::move(rows);
      break;
    }
    case MetricMeasureSpace::Backend::graph: {
      j["mode"] = "graph";
      Json edges = Json::array();
      for (const auto& e : space.edges()) edges.push_back(Json::array({e.u, e.v, e.w}));
      j["edges"] = std::move(edges);
      break;
    }
    case MetricMeasureSpace::Backend::function:
      j["mode"] = "function";
      j["model"] = space.function()->to_json();
      break;
  }
  j["weights"] = std::vector<double>(space.weights().begin(), space.weights().end());
  j["metric_kind"] = metric_kind_json(space.metric_kind());
  return j;
}

MetricMeasureSpace space_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    const auto mode = j.at("mode").get<std::string>();
    auto weights = j.at("weights").get<std::vector<double>>();
    const auto kind = j.contains("metric_kind") ? read_metric_kind(j.at("metric_kind")) : MetricKind::exact();
    if (weights.size() != n) throw InputError("weights length differs from n");
    if (mode == "table") {
      std::vector<double> table;
      table.reserve(n * n);
      const auto& rows = j.at("distances");
      if (rows.size() != n) throw InputError("distance table has the wrong number of rows");
      for (const auto& row : rows) {
        if (row.size() != n) throw InputError("distance table row has the wrong length");
        for (const auto& v : row) table.push_back(v.get<double>());
      }
      return MetricMeasureSpace::from_table(n, std::move(table), std::move(weights), kind);
    }
    if (mode == "graph") {
      std::vector<WeightedEdge> edges;
      for (const auto& e : j.at("edges")) {
        if (e.size() != 3) throw InputError("edges must be [i, j, w] triples");
        edges.push_back({e[0].get<PointId>(), e[1].get<PointId>(), e[2].get<double>()});
      }
      return MetricMeasureSpace::from_graph(n, edges, std::move(weights), kind);
    }
    if (mode == "function") {
      auto model = SolvableProductModel::create(SolvableDescriptor::from_json(j.at("model")));
      if (model->size() != n) throw InputError("model size differs from n");
      return model->space();
    }
    throw InputError("unknown space mode '" + mode + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed space JSON: ") + e.what());
  }
}

Json to_json(const DyadicTree& tree) {
  Json j;
  j["delta"] = tree.delta;
  j["scale"] = tree.scale;
  j["source_levels"] = tree.source_levels;
  j["C_diam"] = number(tree.C_diam);
  j["a0"] = number(tree.a0);
  Json levels = Json::array();
  for (const auto& level : tree.levels) {
    Json cubes = Json::array();
    for (const auto& c : level) {
      cubes.push_back(Json{{"members", ids(c.members)}, {"center", c.center}, {"parent", opt(c.parent)},
                           {"diam", c.diam}});
    }
    levels.push_back(std::move(cubes));
  }
  j["levels"] = std::move(levels);
  return j;
}

DyadicTree tree_from_json(const Json& j) {
  try {
    DyadicTree t;
    t.delta = j.at("delta").get<double>();
    t.scale = j.at("scale").get<double>();
    t.source_levels = j.at("source_levels").get<std::vector<int>>();
    t.C_diam = read_number(j.at("C_diam"));
    t.a0 = read_number(j.at("a0"));
    for (const auto& level : j.at("levels")) {
      std::vector<Cube> cubes;
      for (const auto& c : level) {
        Cube cube;
        cube.members = read_set(c.at("members"));
        cube.center = c.at("center").get<PointId>();
        if (!c.at("parent").is_null()) cube.parent = c.at("parent").get<std::size_t>();
        cube.diam = c.at("diam").get<double>();
        cubes.push_back(std::move(cube));
      }
      t.levels.push_back(std::move(cubes));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed tree JSON: ") + e.what());
  }
}

Json to_json(const SetFamily& family) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& m = family.meta(i);
    Json meta = Json::object();
    if (m.level) meta["level"] = *m.level;
    if (m.cube) meta["cube"] = *m.cube;
    if (m.j) meta["j"] = *m.j;
    if (m.center) meta["center"] = *m.center;
    arr.push_back(Json{{"id", i}, {"members", ids(family.set(i))}, {"meta", std::move(meta)}});
  }
  return arr;
}

SetFamily family_from_json(const Json& j, std::size_t n_points) {
  try {
    if (!j.is_array()) throw InputError("family JSON must be an array of {id, members, meta}");
    SetFamily fam(n_points);
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto& e = j[i];
      if (e.at("id").get<std::size_t>() != i) throw InputError("family ids must be 0, 1, 2, ... in order");
      auto s = read_set(e.at("members"));
      s.check_range(n_points);
      SetMeta meta;
      if (e.contains("meta")) {
        const auto& m = e.at("meta");
        if (m.contains("level")) meta.level = m.at("level").get<std::size_t>();
        if (m.contains("cube")) meta.cube = m.at("cube").get<std::size_t>();
        if (m.contains("j")) meta.j = m.at("j").get<int>();
        if (m.contains("center")) meta.center = m.at("center").get<PointId>();
      }
      fam.add(std::move(s), meta);
    }
    return fam;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed family JSON: ") + e.what());
  }
}

Json function_to_json(std::span<const double> f) {
  return Json{{"values", std::vector<double>(f.begin(), f.end())}};
}

std::vector<double> function_from_json(const Json& j) {
  try {
    if (j.is_array()) return j.get<std::vector<double>>();
    return j.at("values").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed function JSON: ") + e.what());
  }
}

Json to_json(const SparseFunction& f) { return Json{{"ids", f.ids}, {"values", f.values}}; }

Json to_json(const CZDecomposition& dec) {
  Json j;
  j["lambda"] = dec.lambda;
  j["C"] = dec.C;
  j["mode"] = to_string(dec.mode);
  j["f"] = dec.f;
  j["g"] = dec.g;
  Json items = Json::array();
  for (const auto& it : dec.items) {
    items.push_back(Json{{"R_index", opt(it.R_index)},
                         {"Q_index", opt(it.Q_index)},
                         {"R", ids(it.R)},
                         {"Q", ids(it.Q)},
                         {"U", ids(it.U)},
                         {"x", it.x},
                         {"r", it.r},
                         {"f", to_json(it.f)}});
  }
  j["items"] = std::move(items);
  Json rounds = Json::array();
  for (const auto& r : dec.trace.rounds) rounds.push_back(Json{{"R", r.R}, {"v", r.v}, {"Q", r.Q}});
  j["trace"] = Json{{"lambda", dec.trace.lambda},
                    {"C", dec.trace.C},
                    {"eligible", dec.trace.eligible},
                    {"rounds", std::move(rounds)}};
  return j;
}

CZDecomposition decomposition_from_json(const Json& j) {
  try {
    CZDecomposition dec;
    dec.lambda = j.at("lambda").get<double>();
    dec.C = j.at("C").get<double>();
    dec.mode = mode_from_string(j.at("mode").get<std::string>());
    dec.f = j.at("f").get<std::vector<double>>();
    dec.g = j.at("g").get<std::vector<double>>();
    if (dec.f.size() != dec.g.size()) throw InputError("f and g lengths differ");
    for (const auto& e : j.at("items")) {
      CZItem it;
      if (!e.at("R_index").is_null()) it.R_index = e.at("R_index").get<std::size_t>();
      if (!e.at("Q_index").is_null()) it.Q_index = e.at("Q_index").get<std::size_t>();
      it.R = read_set(e.at("R"));
      it.Q = read_set(e.at("Q"));
      it.U = read_set(e.at("U"));
      for (const auto* s : {&it.R, &it.Q, &it.U}) s->check_range(dec.f.size());
      it.x = e.at("x").get<PointId>();
      it.r = e.at("r").get<double>();
      it.f.ids = e.at("f").at("ids").get<std::vector<PointId>>();
      it.f.values = e.at("f").at("values").get<std::vector<double>>();
      if (it.f.ids.size() != it.f.values.size()) throw InputError("item function ids and values differ in length");
      PointSet::from_sorted(it.f.ids).check_range(dec.f.size());
      dec.items.push_back(std::move(it));
    }
    if (j.contains("trace")) {
      const auto& t = j.at("trace");
      dec.trace.lambda = t.at("lambda").get<double>();
      dec.trace.C = t.at("C").get<double>();
      dec.trace.eligible = t.at("eligible").get<std::size_t>();
      for (const auto& r : t.at("rounds")) {
        dec.trace.rounds.push_back({r.at("R").get<std::size_t>(), r.at("v").get<double>(), r.at("Q").get<std::size_t>()});
      }
    }
    return dec;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed decomposition JSON: ") + e.what());
  }
}

Json to_json(const CubeReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json e{{"name", c.name}, {"pass", c.pass}};
    if (!c.witness.empty()) e["witness"] = c.witness;
    checks.push_back(std::move(e));
  }
  return Json{{"pass", rep.pass},
              {"C_diam", number(rep.C_diam)},
              {"a0", number(rep.a0)},
              {"min_ratio", number(rep.min_ratio)},
              {"checks", std::move(checks)}};
}

Json to_json(const FamilyVerification& v) {
  Json failures = Json::array();
  for (const auto& f : v.failures) {
    failures.push_back(Json{{"set", f.set}, {"condition", f.condition}, {"required", number(f.required)}});
  }
  Json j{{"pass", v.pass()},
         {"C", number(v.C)},
         {"variant", v.variant == TildeVariant::loose ? "loose" : "strict"},
         {"containment_ok", v.containment_ok},
         {"growth_ok", v.growth_ok},
         {"required_constant", number(v.required_constant)},
         {"failure_count", v.failure_count},
         {"failures", std::move(failures)}};
  j["crosscheck_loose_at_C2"] = opt(v.crosscheck_loose_at_C2);
  return j;
}

Json to_json(const FamilyReport& rep) {
  Json j{{"family_constant", number(rep.family_constant)},
         {"required_constant", number(rep.required_constant)},
         {"strict_constant", number(rep.strict_constant)},
         {"dense", rep.density.dense},
         {"finest_scale", number(rep.density.finest_scale)},
         {"uncovered", rep.density.uncovered},
         {"crosscheck", opt(rep.crosscheck)},
         {"verification", to_json(rep.verification)}};
  if (!rep.per_set_doubling.empty()) {
    Json per = Json::array();
    for (double c : rep.per_set_doubling) per.push_back(number(c));
    j["per_set_doubling"] = std::move(per);
  }
  return j;
}

Json to_json(const MaximalResult& m) { return Json{{"values", m.values}, {"uncovered", m.uncovered}}; }

Json to_json(const Weak11Result& w) {
  return Json{{"constant", number(w.constant)},
              {"argmax_lambda", number(w.argmax_lambda)},
              {"lambdas", w.lambdas},
              {"family_C", opt(w.family_C)},
              {"within_bound", w.within_bound}};
}

Json to_json(const DifferentiationResult& d) {
  return Json{{"deviation", number(d.deviation)},
              {"worst_point", d.worst_point},
              {"dense", d.dense},
              {"finest_scale", number(d.finest_scale)}};
}

Json to_json(const VerificationReport& rep) {
  return Json{{"pass", rep.pass},
              {"mode", to_string(rep.mode)},
              {"lambda", rep.lambda},
              {"f_l1", rep.f_l1},
              {"constants",
               Json{{"C_support", number(rep.C_support)},
                    {"C_measure", number(rep.C_measure)},
                    {"C_l1", number(rep.C_l1)},
                    {"C_good", number(rep.C_good)},
                    {"C_l2", number(rep.C_l2)},
                    {"C_input", number(rep.C_input)},
                    {"C_max", number(rep.C_max)}}},
              {"bullets", bullets_json(rep.bullets)}};
}

Json to_json(const CoarsenResult& c) {
  return Json{{"centers", c.centers},
              {"passed_through", c.passed_through},
              {"groups_kept", c.groups_kept},
              {"groups_absorbed", c.groups_absorbed},
              {"composite_bound", number(c.composite_bound)},
              {"decomposition", to_json(c.dec)}};
}

Json to_json(const ScanTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json e{{"f_index", r.f_index}, {"lambda", r.lambda}, {"skipped", r.skipped}};
    if (r.skipped) {
      e["reason"] = r.skip_reason;
    } else {
      e["C_support"] = number(r.C_support);
      e["C_measure"] = number(r.C_measure);
      e["C_l1"] = number(r.C_l1);
      e["C_good"] = number(r.C_good);
      e["C_max"] = number(r.C_max);
    }
    rows.push_back(std::move(e));
  }
  return Json{{"max_constant", number(t.max_constant)}, {"skipped", t.skipped}, {"rows", std::move(rows)}};
}

std::string scan_csv(const ScanTable& t) {
  std::ostringstream s;
  s << std::setprecision(17);
  s << "f_index,lambda,skipped,C_support,C_measure,C_l1,C_good,C_max\n";
  for (const auto& r : t.rows) {
    s << r.f_index << ',' << r.lambda << ',' << (r.skipped ? 1 : 0);
    if (r.skipped) {
      s << ",,,,,\n";
    } else {
      s << ',' << r.C_support << ',' << r.C_measure << ',' << r.C_l1 << ',' << r.C_good << ',' << r.C_max << '\n';
    }
  }
  return s.str();
}

Json to_json(const QuadraticForm& q) { return Json{{"dim", q.dim}, {"coeffs", q.coeffs}}; }

Json to_json(const MetricChain& chain, const ChainCheck& check) {
  Json forms = Json::array();
  for (const auto& f : chain.forms) forms.push_back(to_json(f));
  Json steps = Json::array();
  for (const auto& s : check.steps) {
    steps.push_back(Json{{"min_eig", s.min_eig}, {"max_eig", s.max_eig}, {"pass", s.pass}});
  }
  return Json{{"m", number(chain.m)},
              {"k", chain.k()},
              {"convention", "form level: 4 G_{j+1} <= G_j <= 256 G_{j+1}"},
              {"pass", check.pass},
              {"forms", std::move(forms)},
              {"steps", std::move(steps)}};
}

Json to_json(const BaseFamily& bf) {
  Json cubes = Json::array();
  for (const auto& c : bf.cubes) {
    Json e{{"level", c.level},
           {"cube", c.cube},
           {"r", c.r},
           {"t", c.t},
           {"radius", c.radius},
           {"parent_level", opt(c.parent_level)},
           {"parent_cube", opt(c.parent_cube)},
           {"sets", c.sets_added},
           {"chain", to_json(c.chain, c.check)}};
    cubes.push_back(std::move(e));
  }
  return Json{{"M", bf.M},
              {"C2_hat", bf.C2_hat},
              {"C3_hat", bf.C3_hat},
              {"M_increased", bf.M_increased},
              {"stride", bf.stride},
              {"raw_sets", bf.raw_sets},
              {"sets", bf.family.size()},
              {"cubes", std::move(cubes)}};
}

Json to_json(const DoublingCertificate& c) {
  return Json{{"found", c.found},
              {"r", c.r},
              {"semantics", to_string(c.semantics)},
              {"strategy", c.strategy},
              {"measure_A", c.measure_A},
              {"measure_BrA", c.measure_BrA},
              {"A", ids(c.A)},
              {"evaluations", c.evaluations},
              {"budget", c.budget},
              {"boundary", c.boundary},
              {"log", c.log}};
}

Json to_json(const ProductInequality& p) {
  return Json{{"A", p.A},   {"B", p.B},     {"Y", p.Y},     {"BY", p.BY},     {"BA", p.BA},
              {"AinvY", p.AinvY}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"holds", p.holds}};
}

Json to_json(const std::vector<UnidoubleRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back(Json{{"r", r.r},
                       {"ball_r", r.ball_r},
                       {"ball_2r", r.ball_2r},
                       {"ball_3r", r.ball_3r},
                       {"doubling", r.doubling},
                       {"derived_C", r.derived_C},
                       {"holds", r.holds}});
  }
  return arr;
}

}  // namespace czkit
