#include "czkit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "czkit/amenability.hpp"
#include "czkit/base_family.hpp"
#include "czkit/cubes.hpp"
#include "czkit/cz.hpp"
#include "czkit/error.hpp"
#include "czkit/family.hpp"
#include "czkit/maximal.hpp"
#include "czkit/models.hpp"
#include "czkit/parallel.hpp"
#include "czkit/serialize.hpp"

namespace czkit {

namespace {

namespace fs = std::filesystem;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

/// Report envelope: tool, version and content hashes of the inputs.
class Report {
 public:
  explicit Report(std::string kind) { j_["tool"] = "czkit"; j_["version"] = kToolVersion; j_["kind"] = kind; }
  void input(const std::string& role, const std::string& path) { inputs_[role] = hash_hex(read_text(path)); }
  Json& body() { return j_; }
  std::string text() {
    j_["inputs"] = inputs_;
    return dump(j_);
  }

 private:
  Json j_;
  Json inputs_ = Json::object();
};

void require_distinct(const std::vector<std::string>& paths) {
  for (std::size_t a = 0; a < paths.size(); ++a) {
    for (std::size_t b = a + 1; b < paths.size(); ++b) {
      if (!paths[a].empty() && paths[a] != "-" && paths[a] == paths[b]) {
        throw InputError("paths must be distinct: '" + paths[a] + "' is used twice");
      }
    }
  }
}

GeneratedModel load_model(const std::string& path) {
  const auto j = read_json(path);
  if (j.contains("model")) return generate(ModelDescriptor::from_json(j.at("model")));
  if (j.contains("kind")) return generate(ModelDescriptor::from_json(j));
  throw InputError("'" + path + "' is neither a model descriptor nor a model sidecar");
}

std::string sidecar_path(const std::string& out) {
  fs::path p(out);
  return (p.parent_path() / (p.stem().string() + ".model.json")).string();
}

double auto_constant(const FamilyIndex& index, const std::string& spec) {
  if (spec != "auto") {
    try {
      return std::stod(spec);
    } catch (const std::exception&) {
      throw InputError("--C must be a number or 'auto'");
    }
  }
  return family_report(index, false).family_constant;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw InputError("not a number: '" + tok + "'");
    }
  }
  return out;
}

std::vector<double> random_function(std::size_t n, std::mt19937_64& rng) {
  std::vector<double> f(n, 0.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_real_distribution<double> val(-4.0, 4.0);
  const std::size_t k = 1 + pick(rng) % std::max<std::size_t>(1, n / 4);
  for (std::size_t i = 0; i < k; ++i) f[pick(rng)] = val(rng);
  if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) f[0] = 1.0;
  return f;
}

std::string schema_text(const std::string& name) {
  const fs::path dir(CZKIT_SCHEMA_DIR);
  if (name == "list") {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) {
      const auto f = e.path().filename().string();
      const auto pos = f.find(".schema.json");
      if (pos != std::string::npos) names.push_back(f.substr(0, pos));
    }
    std::sort(names.begin(), names.end());
    std::string s;
    for (const auto& n : names) s += n + "\n";
    return s;
  }
  return read_text((dir / (name + ".schema.json")).string());
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"czkit: Calderon-Zygmund decompositions on finite metric measure spaces"};
  app.set_version_flag("--version", std::string(kToolVersion));
  int threads = 0;
  std::string schema;
  app.add_option("--threads", threads, "cap on worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  app.add_option("--schema", schema, "print a JSON schema (space, tree, family, function, decomposition, model, "
                                     "certificate, report) or 'list'");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a model space");
  std::string gen_kind, gen_out, gen_spec, gen_generators = "standard", gen_report;
  int gen_dim = 2, gen_side = 8, gen_degree = 3, gen_depth = 4, gen_radius = 4;
  SolvableDescriptor gen_solv;
  unsigned long long gen_seed = 1;
  gen->add_option("--model", gen_kind, "grid | tree | heisenberg | bs12 | solvable | path")
      ->check(CLI::IsMember({"grid", "tree", "heisenberg", "bs12", "solvable", "path"}));
  gen->add_option("--spec", gen_spec, "model descriptor JSON instead of flags");
  gen->add_option("--dim", gen_dim);
  gen->add_option("--side", gen_side);
  gen->add_option("--degree", gen_degree);
  gen->add_option("--depth", gen_depth);
  gen->add_option("--radius", gen_radius);
  gen->add_option("--generators", gen_generators)->check(CLI::IsMember({"standard", "extended"}));
  gen->add_option("--dim-n", gen_solv.dim_n);
  gen->add_option("--eps-w", gen_solv.eps_w);
  gen->add_option("--half-width-w", gen_solv.half_width_w);
  gen->add_option("--eps-n", gen_solv.eps_n);
  gen->add_option("--half-width-n", gen_solv.half_width_n);
  gen->add_option("--action", gen_solv.action, "action matrix, row-major");
  gen->add_option("--base-form", gen_solv.base_form, "base form at the identity, row-major");
  gen->add_option("--report", gen_report, "model invariant report");
  gen->add_option("--seed", gen_seed);
  gen->add_option("-o,--output", gen_out)->required();

  // cubes
  auto* cubes = app.add_subcommand("cubes", "build dyadic cubes");
  std::string cubes_in, cubes_out, cubes_report;
  double cubes_delta = 0.5;
  int cubes_depth = 6, cubes_sub = 1;
  cubes->add_option("-i,--input", cubes_in)->required();
  cubes->add_option("--delta", cubes_delta)->check(CLI::Range(1e-6, 0.999999));
  cubes->add_option("--depth", cubes_depth)->check(CLI::Range(1, 64));
  cubes->add_option("--subsample", cubes_sub)->check(CLI::Range(1, 64));
  cubes->add_option("--report", cubes_report);
  cubes->add_option("-o,--output", cubes_out)->required();

  // family build | verify
  auto* family = app.add_subcommand("family", "build or verify a set family");
  family->require_subcommand(1);
  auto* fbuild = family->add_subcommand("build", "family from a tree or from balls");
  std::string fb_in, fb_tree, fb_balls, fb_out;
  fbuild->add_option("-i,--input", fb_in)->required();
  fbuild->add_option("--tree", fb_tree);
  fbuild->add_option("--balls", fb_balls, "comma-separated radii");
  fbuild->add_option("-o,--output", fb_out)->required();
  auto* fverify = family->add_subcommand("verify", "doubling-family verification");
  std::string fv_in, fv_fam, fv_variant = "loose", fv_report;
  std::optional<double> fv_C;
  bool fv_per_set = false;
  fverify->add_option("-i,--input", fv_in)->required();
  fverify->add_option("-f,--family", fv_fam)->required();
  fverify->add_option("--C", fv_C, "constant to verify; omitted = smallest grid constant");
  fverify->add_option("--variant", fv_variant)->check(CLI::IsMember({"loose", "strict"}));
  fverify->add_flag("--per-set", fv_per_set, "per-set doubling constants");
  fverify->add_option("--report", fv_report);

  // basefamily
  auto* base = app.add_subcommand("basefamily", "base-case family on a solvable product model");
  std::string bf_in, bf_tree, bf_M = "auto", bf_out, bf_chains, bf_report;
  double bf_delta = 0.2;
  int bf_depth = 12;
  std::size_t bf_stride = 1;
  base->add_option("-i,--input", bf_in)->required();
  base->add_option("--tree", bf_tree, "tree on W_0; built from --delta/--depth when omitted");
  base->add_option("--delta", bf_delta);
  base->add_option("--depth", bf_depth);
  base->add_option("--M", bf_M);
  base->add_option("--stride", bf_stride)->check(CLI::PositiveNumber);
  base->add_option("--chains", bf_chains, "chain dump with eigenvalue certificates");
  base->add_option("--report", bf_report, "family verification report");
  base->add_option("-o,--output", bf_out)->required();

  // maximal
  auto* maximal = app.add_subcommand("maximal", "maximal function and weak (1,1) check");
  std::string mx_in, mx_fam, mx_fn, mx_report, mx_values;
  std::optional<double> mx_C;
  maximal->add_option("-i,--input", mx_in)->required();
  maximal->add_option("-f,--family", mx_fam)->required();
  maximal->add_option("--fn", mx_fn)->required();
  maximal->add_option("--C", mx_C, "family constant bounding the weak (1,1) constant");
  maximal->add_option("--values", mx_values, "write M f");
  maximal->add_option("--report", mx_report);

  // decompose
  auto* decompose_cmd = app.add_subcommand("decompose", "Calderon-Zygmund decomposition");
  std::string dc_in, dc_fam, dc_fn, dc_C = "auto", dc_out;
  double dc_lambda = 0.0;
  decompose_cmd->add_option("-i,--input", dc_in)->required();
  decompose_cmd->add_option("-f,--family", dc_fam)->required();
  decompose_cmd->add_option("--fn", dc_fn)->required();
  decompose_cmd->add_option("--lambda", dc_lambda)->required();
  decompose_cmd->add_option("--C", dc_C, "family constant or 'auto'");
  std::string dc_mode = "full";
  decompose_cmd->add_option("--mode", dc_mode)->check(CLI::IsMember({"full"}));
  decompose_cmd->add_option("-o,--output", dc_out)->required();

  // verify
  auto* verify = app.add_subcommand("verify", "verify a decomposition");
  std::string vf_in, vf_dec, vf_mode, vf_report;
  std::optional<double> vf_C;
  verify->add_option("-i,--input", vf_in)->required();
  verify->add_option("--dec", vf_dec)->required();
  verify->add_option("--mode", vf_mode)->check(CLI::IsMember({"full", "large_scale", "small_scale"}));
  verify->add_option("--C", vf_C, "uniform bound on the measured constants");
  verify->add_option("--report", vf_report);

  // coarsen
  auto* coarsen = app.add_subcommand("coarsen", "large-scale coarsening of a decomposition");
  std::string co_in, co_dec, co_out, co_report;
  double co_C = 2.0;
  coarsen->add_option("-i,--input", co_in)->required();
  coarsen->add_option("--dec", co_dec)->required();
  coarsen->add_option("--C-cz", co_C)->check(CLI::Range(2.0, 1e12));
  coarsen->add_option("--report", co_report);
  coarsen->add_option("-o,--output", co_out)->required();

  // scan
  auto* scan = app.add_subcommand("scan", "measured constants over functions and lambdas");
  std::string sc_in, sc_fam, sc_C = "auto", sc_lambdas, sc_out, sc_csv;
  std::vector<std::string> sc_fns;
  std::size_t sc_random = 0;
  unsigned long long sc_seed = 1;
  scan->add_option("-i,--input", sc_in)->required();
  scan->add_option("-f,--family", sc_fam)->required();
  scan->add_option("--C", sc_C);
  scan->add_option("--fn", sc_fns, "function files");
  scan->add_option("--random", sc_random, "number of seeded random functions");
  scan->add_option("--seed", sc_seed);
  scan->add_option("--lambdas", sc_lambdas, "comma-separated multiples of the admissible threshold");
  scan->add_option("--csv", sc_csv);
  scan->add_option("-o,--output", sc_out)->required();

  // folner
  auto* folner = app.add_subcommand("folner", "search for r-doubling sets");
  std::string fo_in, fo_out;
  double fo_r = 2.0;
  SearchOptions fo_opts;
  folner->add_option("-i,--input", fo_in, "model JSON (group search) or space JSON (metric dilation)")->required();
  folner->add_option("--r", fo_r)->check(CLI::NonNegativeNumber);
  folner->add_option("--budget", fo_opts.budget)->check(CLI::PositiveNumber);
  folner->add_option("--max-size", fo_opts.exhaustive_size);
  folner->add_option("-o,--output", fo_out)->required();

  // report
  auto* report = app.add_subcommand("report", "merge reports into a summary and CSV tables");
  std::vector<std::string> rp_files;
  std::string rp_out, rp_csv_dir;
  report->add_option("reports", rp_files)->required();
  report->add_option("--csv-dir", rp_csv_dir);
  report->add_option("-o,--output", rp_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (threads > 0) set_thread_count(static_cast<std::size_t>(threads));
    if (!schema.empty()) {
      write_text("-", schema_text(schema));
      return 0;
    }

    if (*gen) {
      require_distinct({gen_out, gen_report});
      GeneratedModel model;
      MetricMeasureSpace space;
      Json sidecar;
      if (!gen_spec.empty()) {
        model = load_model(gen_spec);
      } else if (gen_kind == "path") {
        if (gen_side < 1) throw InputError("path needs --side >= 1");
        space = path_space(static_cast<std::size_t>(gen_side));
        sidecar = Json{{"model", Json{{"kind", "path"}, {"side", gen_side}}}};
      } else if (gen_kind.empty()) {
        throw InputError("gen needs --model or --spec");
      } else {
        ModelDescriptor d;
        d.kind = gen_kind;
        d.dim = gen_dim;
        d.side = gen_side;
        d.degree = gen_degree;
        d.depth = gen_depth;
        d.radius = gen_radius;
        d.generators = gen_generators;
        d.solvable = gen_solv;
        model = generate(d);
      }
      if (sidecar.is_null()) {
        space = model.space;
        sidecar = model.sidecar();
      }
      write_text(gen_out, dump(to_json(space)));
      if (!gen_out.empty() && gen_out != "-") write_text(sidecar_path(gen_out), dump(sidecar));
      if (!gen_report.empty() && gen_kind != "path") {
        Report rep("model_invariants");
        rep.body()["invariants"] = model_invariant_report(model, gen_seed);
        const bool pass = rep.body()["invariants"].value("pass", true);
        rep.body()["pass"] = pass;
        write_text(gen_report, rep.text());
        return pass ? 0 : 1;
      }
      return 0;
    }

    if (*cubes) {
      require_distinct({cubes_in, cubes_out, cubes_report});
      const auto space = space_from_json(read_json(cubes_in));
      auto tree = build_cubes(space, cubes_delta, cubes_depth);
      Report rep("cubes");
      rep.input("space", cubes_in);
      if (cubes_sub > 1) {
        auto sub = subsample_scales(space, tree, cubes_sub);
        rep.body()["subsample"] = Json{{"m", cubes_sub},
                                       {"min_ratio", number(sub.min_ratio)},
                                       {"ratio_ok", sub.ratio_ok},
                                       {"smallest_m", sub.smallest_m ? Json(*sub.smallest_m) : Json(nullptr)}};
        tree = std::move(sub.tree);
      }
      const auto check = verify_cubes(space, tree, cubes_sub > 1);
      rep.body()["pass"] = check.pass;
      rep.body()["check"] = to_json(check);
      write_text(cubes_out, dump(to_json(tree)));
      if (!cubes_report.empty()) write_text(cubes_report, rep.text());
      return check.pass ? 0 : 1;
    }

    if (*fbuild) {
      require_distinct({fb_in, fb_tree, fb_out});
      const auto space = space_from_json(read_json(fb_in));
      if (fb_tree.empty() == fb_balls.empty()) throw InputError("family build needs exactly one of --tree, --balls");
      const auto fam = fb_tree.empty() ? ball_family(space, parse_list(fb_balls))
                                       : family_from_tree(tree_from_json(read_json(fb_tree)), space.size());
      write_text(fb_out, dump(to_json(fam)));
      return 0;
    }

    if (*fverify) {
      require_distinct({fv_in, fv_fam, fv_report});
      const auto space = space_from_json(read_json(fv_in));
      const auto fam = family_from_json(read_json(fv_fam), space.size());
      const FamilyIndex index(space, fam);
      Report rep("family");
      rep.input("space", fv_in);
      rep.input("family", fv_fam);
      bool pass = true;
      if (fv_C) {
        const auto v = verify_doubling_family(index, *fv_C, fv_variant == "loose" ? TildeVariant::loose : TildeVariant::strict);
        pass = v.pass();
        rep.body()["verification"] = to_json(v);
      } else {
        const auto r = family_report(index, fv_per_set);
        pass = std::isfinite(r.family_constant);
        rep.body()["report"] = to_json(r);
      }
      rep.body()["pass"] = pass;
      write_text(fv_report, rep.text());
      return pass ? 0 : 1;
    }

    if (*base) {
      require_distinct({bf_in, bf_tree, bf_out, bf_chains, bf_report});
      const auto model = load_model(bf_in);
      if (!model.solvable) throw InputError("basefamily needs a solvable product model");
      const auto W = model.solvable->base_space();
      DyadicTree tree;
      if (!bf_tree.empty()) {
        tree = tree_from_json(read_json(bf_tree));
      } else {
        auto full = build_cubes(W, bf_delta, bf_depth);
        auto sub = subsample_scales(W, full, 1);
        tree = sub.ratio_ok ? std::move(sub.tree) : subsample_scales(W, full, *sub.smallest_m).tree;
      }
      const double M = bf_M == "auto" ? model_M(*model.solvable) : std::stod(bf_M);
      const auto bf = build_base_family(*model.solvable, tree, M, bf_stride);
      bool chains_ok = true;
      for (const auto& c : bf.cubes) chains_ok = chains_ok && c.check.pass;
      write_text(bf_out, dump(to_json(bf.family)));
      if (!bf_chains.empty()) {
        Report rep("chains");
        rep.input("model", bf_in);
        rep.body()["pass"] = chains_ok;
        rep.body()["base_family"] = to_json(bf);
        write_text(bf_chains, rep.text());
      }
      bool pass = chains_ok;
      if (!bf_report.empty()) {
        const auto space = model.solvable->space();
        const FamilyIndex index(space, bf.family);
        const auto r = family_report(index, false);
        pass = pass && std::isfinite(r.family_constant);
        Report rep("basefamily");
        rep.input("model", bf_in);
        rep.body()["pass"] = pass;
        rep.body()["M"] = bf.M;
        rep.body()["chains_ok"] = chains_ok;
        rep.body()["family"] = to_json(r);
        write_text(bf_report, rep.text());
      }
      return pass ? 0 : 1;
    }

    if (*maximal) {
      require_distinct({mx_in, mx_fam, mx_fn, mx_report, mx_values});
      const auto space = space_from_json(read_json(mx_in));
      const auto fam = family_from_json(read_json(mx_fam), space.size());
      const auto f = function_from_json(read_json(mx_fn));
      const FamilyIndex index(space, fam);
      const auto m = maximal_function(index, f);
      const auto w = weak11_check(index, f, std::nullopt, mx_C);
      const auto d = differentiation_check(index, f);
      Report rep("maximal");
      rep.input("space", mx_in);
      rep.input("family", mx_fam);
      rep.input("function", mx_fn);
      rep.body()["pass"] = w.within_bound;
      rep.body()["weak11"] = to_json(w);
      rep.body()["differentiation"] = to_json(d);
      rep.body()["uncovered"] = m.uncovered;
      if (!mx_values.empty()) write_text(mx_values, dump(function_to_json(m.values)));
      write_text(mx_report, rep.text());
      return w.within_bound ? 0 : 1;
    }

    if (*decompose_cmd) {
      require_distinct({dc_in, dc_fam, dc_fn, dc_out});
      const auto space = space_from_json(read_json(dc_in));
      const auto fam = family_from_json(read_json(dc_fam), space.size());
      const auto f = function_from_json(read_json(dc_fn));
      const FamilyIndex index(space, fam);
      const double C = auto_constant(index, dc_C);
      write_text(dc_out, dump(to_json(decompose(index, f, dc_lambda, C))));
      return 0;
    }

    if (*verify) {
      require_distinct({vf_in, vf_dec, vf_report});
      const auto space = space_from_json(read_json(vf_in));
      const auto dec = decomposition_from_json(read_json(vf_dec));
      if (dec.f.size() != space.size()) throw InputError("decomposition does not match the space size");
      const auto mode = vf_mode.empty() ? dec.mode : mode_from_string(vf_mode);
      auto bounds = vf_C ? VerifyBounds::uniform(*vf_C) : VerifyBounds{};
      if (mode == CZMode::full) bounds.l1 = std::min(bounds.l1, 2.0);
      const auto rep_v = verify_decomposition(space, dec, mode, bounds);
      Report rep("verify");
      rep.input("space", vf_in);
      rep.input("decomposition", vf_dec);
      rep.body()["pass"] = rep_v.pass;
      rep.body()["verification"] = to_json(rep_v);
      write_text(vf_report, rep.text());
      return rep_v.pass ? 0 : 1;
    }

    if (*coarsen) {
      require_distinct({co_in, co_dec, co_out, co_report});
      const auto space = space_from_json(read_json(co_in));
      const auto dec = decomposition_from_json(read_json(co_dec));
      if (dec.f.size() != space.size()) throw InputError("decomposition does not match the space size");
      const auto res = coarsen_decomposition(space, dec, co_C);
      VerifyBounds bounds;
      bounds.good = res.composite_bound;
      const auto v = verify_decomposition(space, res.dec, CZMode::large_scale, bounds);
      write_text(co_out, dump(to_json(res.dec)));
      Report rep("coarsen");
      rep.input("space", co_in);
      rep.input("decomposition", co_dec);
      rep.body()["pass"] = v.pass;
      Json summary = to_json(res);
      summary.erase("decomposition");
      rep.body()["coarsening"] = std::move(summary);
      rep.body()["verification"] = to_json(v);
      if (!co_report.empty()) write_text(co_report, rep.text());
      return v.pass ? 0 : 1;
    }

    if (*scan) {
      require_distinct({sc_in, sc_fam, sc_out, sc_csv});
      const auto space = space_from_json(read_json(sc_in));
      const auto fam = family_from_json(read_json(sc_fam), space.size());
      const FamilyIndex index(space, fam);
      const double C = auto_constant(index, sc_C);
      std::vector<std::vector<double>> fs;
      for (const auto& p : sc_fns) fs.push_back(function_from_json(read_json(p)));
      std::mt19937_64 rng(sc_seed);
      for (std::size_t i = 0; i < sc_random; ++i) fs.push_back(random_function(space.size(), rng));
      if (fs.empty()) throw InputError("scan needs --fn or --random");
      const auto factors = sc_lambdas.empty() ? std::vector<double>{1.5, 3, 10, 30, 100} : parse_list(sc_lambdas);
      ScanTable table;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        std::vector<double> lambdas;
        const double th = lambda_threshold(space, fs[i], C);
        for (double k : factors) lambdas.push_back(k * th);
        auto t = constant_scan(index, C, std::span(&fs[i], 1), lambdas);
        for (auto& row : t.rows) {
          row.f_index = i;
          table.rows.push_back(row);
        }
        table.max_constant = std::max(table.max_constant, t.max_constant);
        table.skipped += t.skipped;
      }
      Report rep("scan");
      rep.input("space", sc_in);
      rep.input("family", sc_fam);
      rep.body()["pass"] = true;
      rep.body()["C"] = C;
      rep.body()["seed"] = sc_seed;
      rep.body()["scan"] = to_json(table);
      write_text(sc_out, rep.text());
      if (!sc_csv.empty()) write_text(sc_csv, scan_csv(table));
      return 0;
    }

    if (*folner) {
      require_distinct({fo_in, fo_out});
      const auto j = read_json(fo_in);
      Report rep("folner");
      rep.input("input", fo_in);
      DoublingCertificate cert;
      if (j.contains("mode") && j.contains("weights")) {
        cert = find_r_doubling(space_from_json(j), fo_r, fo_opts);
      } else {
        const auto model = load_model(fo_in);
        if (model.group) {
          cert = find_r_doubling(*model.group, fo_r, fo_opts);
        } else {
          cert = find_r_doubling(model.space, fo_r, fo_opts);
        }
      }
      rep.body()["pass"] = true;
      rep.body()["certificate"] = to_json(cert);
      write_text(fo_out, rep.text());
      return 0;
    }

    if (*report) {
      Json summary{{"tool", "czkit"}, {"version", kToolVersion}, {"kind", "summary"}};
      Json items = Json::array();
      bool all = true;
      for (const auto& path : rp_files) {
        const auto text = read_text(path);
        Json j;
        try {
          j = Json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
          throw InputError("'" + path + "' is not valid JSON: " + e.what());
        }
        const bool pass = j.value("pass", true);
        all = all && pass;
        Json item{{"file", fs::path(path).filename().string()},
                  {"fnv1a", hash_hex(text)},
                  {"kind", j.value("kind", std::string("unknown"))},
                  {"pass", pass}};
        if (j.contains("verification") && j["verification"].contains("constants")) {
          item["constants"] = j["verification"]["constants"];
        }
        if (j.contains("scan") && !rp_csv_dir.empty()) {
          std::ostringstream csv;
          csv << std::setprecision(17) << "f_index,lambda,skipped,C_support,C_measure,C_l1,C_good,C_max\n";
          for (const auto& r : j["scan"]["rows"]) {
            csv << r["f_index"].get<std::size_t>() << ',' << r["lambda"].get<double>() << ','
                << (r["skipped"].get<bool>() ? 1 : 0);
            for (const char* k : {"C_support", "C_measure", "C_l1", "C_good", "C_max"}) {
              csv << ',';
              if (r.contains(k)) csv << read_number(r[k]);
            }
            csv << '\n';
          }
          const auto out = fs::path(rp_csv_dir) / (fs::path(path).stem().string() + ".csv");
          fs::create_directories(rp_csv_dir);
          write_text(out.string(), csv.str());
          item["csv"] = out.filename().string();
        }
        items.push_back(std::move(item));
      }
      summary["all_pass"] = all;
      summary["reports"] = std::move(items);
      write_text(rp_out, dump(summary));
      return all ? 0 : 1;
    }

    std::cerr << app.help();
    return 2;
  } catch (const RangeError& e) {
    std::cerr << "range error: " << e.what() << "\n";
    return 2;
  } catch (const FamilyNotDoublingError& e) {
    std::cerr << "family is not doubling at this constant: " << e.what() << "\n";
    return 1;
  } catch (const GapError& e) {
    std::cerr << "chain gap: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace czkit
