#include "jb/runner.hpp"

#include <cfloat>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "jb/error.hpp"

namespace jb {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "field '" + field + "': " + what);
}

void only_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) bad(where.empty() ? "<root>" : where, "expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) bad(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
}

template <class T>
void read(const Json& j, const char* key, const std::string& where, T& out) {
  if (!j.contains(key)) return;
  const std::string path = where.empty() ? key : where + "." + key;
  const Json& v = j.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) bad(path, "expected true or false");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) bad(path, "expected an integer");
    if (std::is_unsigned_v<T> && v.get<long long>() < 0) bad(path, "expected a non-negative integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) bad(path, "expected a number");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) bad(path, "expected a string");
  } else {
    if (!v.is_array()) bad(path, "expected an array of numbers");
    for (const auto& e : v)
      if (!e.is_number()) bad(path, "expected an array of numbers");
  }
  out = v.get<T>();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_source(const Json& s) {
  if (!s.is_object() || !s.contains("kind") || !s["kind"].is_string()) bad("source.kind", "expected a string");
  const std::string kind = s["kind"];
  if (kind == "zero") {
    only_keys(s, "source", {"kind"});
  } else if (kind == "conformal") {
    only_keys(s, "source", {"kind", "map", "a", "c", "lambda", "shift"});
    if (!s.contains("map") || !s["map"].is_string()) bad("source.map", "expected a catalog name");
  } else if (kind == "series") {
    only_keys(s, "source", {"kind", "terms"});
    if (!s.contains("terms") || !s["terms"].is_array()) bad("source.terms", "expected an array");
    for (const auto& t : s["terms"]) only_keys(t, "source.terms[]", {"amplitude", "frequency", "phase"});
  } else if (kind == "martingale") {
    only_keys(s, "source", {"kind", "generator", "levels", "seed", "depth", "root_value", "step_bound"});
    const std::string g = s.value("generator", "cascade");
    if (g != "cascade" && g != "balanced") bad("source.generator", "expected cascade or balanced");
  } else {
    bad("source.kind", "expected zero, conformal, series or martingale");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t pos = std::min(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n'));
    const std::size_t nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
    const std::size_t col = nl == std::string::npos ? pos : pos - nl - 1;
    throw Error(ErrorCode::InvalidConfig,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
  }
  RunConfig c;
  only_keys(j, "", {"source", "base", "alpha", "M", "n_max", "test_mode", "seed", "sampling", "z", "hardy", "sweep"});
  if (j.contains("source")) {
    check_source(j["source"]);
    c.source = j["source"];
  }
  if (j.contains("base")) {
    only_keys(j["base"], "base", {"left", "length"});
    read(j["base"], "left", "base", c.base_left);
    read(j["base"], "length", "base", c.base_length);
  }
  read(j, "alpha", "", c.alpha);
  if (j.contains("M")) {
    if (j["M"].is_number()) c.M = fmt(j["M"].get<double>());
    else read(j, "M", "", c.M);
  }
  read(j, "n_max", "", c.n_max);
  read(j, "test_mode", "", c.test_mode);
  read(j, "seed", "", c.seed);
  if (j.contains("sampling")) {
    const Json& s = j["sampling"];
    only_keys(s, "sampling",
              {"growth_samples", "content_samples", "john_samples", "image_samples", "x_cells", "max_rel_depth", "pitch",
               "ratio_floor"});
    auto& o = c.sampling;
    read(s, "growth_samples", "sampling", o.growth_samples);
    read(s, "content_samples", "sampling", o.content_samples);
    read(s, "john_samples", "sampling", o.john_samples);
    read(s, "image_samples", "sampling", o.image_samples);
    read(s, "x_cells", "sampling", o.x_cells);
    read(s, "max_rel_depth", "sampling", o.max_rel_depth);
    read(s, "pitch", "sampling", o.pitch);
    read(s, "ratio_floor", "sampling", o.ratio_floor);
    if (o.growth_samples < 0 || o.content_samples < 0 || o.john_samples < 1 || o.image_samples < 1)
      bad("sampling", "sample counts must be positive");
    if (o.x_cells < 2 || (o.x_cells & (o.x_cells - 1))) bad("sampling.x_cells", "expected a power of two");
    if (!(o.pitch > 0.0 && o.pitch < 1.0)) bad("sampling.pitch", "expected a number in (0, 1)");
  }
  if (j.contains("z")) {
    std::vector<double> z;
    read(j, "z", "", z);
    if (z.size() != 2) bad("z", "expected [re, im]");
    c.z = Complex(z[0], z[1]);
  }
  if (j.contains("hardy")) {
    const Json& h = j["hardy"];
    only_keys(h, "hardy",
              {"domain", "radius", "p", "q", "beta", "radii", "cells", "samples_per_side", "integral_cells", "collar_eps"});
    auto& o = c.hardy;
    read(h, "domain", "hardy", o.domain);
    read(h, "radius", "hardy", o.radius);
    read(h, "p", "hardy", o.cfg.p);
    read(h, "q", "hardy", o.cfg.q);
    read(h, "beta", "hardy", o.cfg.beta);
    read(h, "radii", "hardy", o.cfg.radii);
    read(h, "cells", "hardy", o.cfg.cells);
    read(h, "samples_per_side", "hardy", o.samples_per_side);
    read(h, "integral_cells", "hardy", o.integral_cells);
    read(h, "collar_eps", "hardy", o.collar_eps);
    if (o.domain != "disk" && o.domain != "image") bad("hardy.domain", "expected disk or image");
    if (!(o.radius > 0.0)) bad("hardy.radius", "expected a positive number");
    for (double e : o.collar_eps)
      if (!(e > 0.0)) bad("hardy.collar_eps", "expected positive numbers");
    try {
      o.cfg.validate();
    } catch (const Error& e) {
      bad("hardy", e.what());
    }
  }
  if (j.contains("sweep")) {
    only_keys(j["sweep"], "sweep", {"param", "values"});
    read(j["sweep"], "param", "sweep", c.sweep.param);
    read(j["sweep"], "values", "sweep", c.sweep.values);
    static const std::set<std::string> params{"alpha", "M", "beta", "p", "depth"};
    if (!params.count(c.sweep.param)) bad("sweep.param", "expected alpha, M, beta, p or depth");
  }
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) bad("alpha", "expected a number in (0, 1)");
  if (!(c.base_length > 0.0)) bad("base.length", "expected a positive number");
  if (c.n_max < 0) bad("n_max", "expected a non-negative integer");
  if (c.M != "auto" && c.M != "cascade") {
    char* end = nullptr;
    const double m = std::strtod(c.M.c_str(), &end);
    if (end == c.M.c_str() || *end != '\0' || !(m > 0.0)) bad("M", "expected auto, cascade or a positive number");
  }
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["source"] = c.source;
  j["base"] = {{"left", c.base_left}, {"length", c.base_length}};
  j["alpha"] = c.alpha;
  if (c.M == "auto" || c.M == "cascade") j["M"] = c.M;
  else j["M"] = std::strtod(c.M.c_str(), nullptr);
  j["n_max"] = c.n_max;
  j["test_mode"] = c.test_mode;
  j["seed"] = c.seed;
  const auto& s = c.sampling;
  j["sampling"] = {{"growth_samples", s.growth_samples}, {"content_samples", s.content_samples},
                   {"john_samples", s.john_samples},     {"image_samples", s.image_samples},
                   {"x_cells", s.x_cells},               {"max_rel_depth", s.max_rel_depth},
                   {"pitch", s.pitch},                   {"ratio_floor", s.ratio_floor}};
  if (c.z) j["z"] = Json::array({c.z->real(), c.z->imag()});
  const auto& h = c.hardy;
  j["hardy"] = {{"domain", h.domain},       {"radius", h.radius},
                {"p", h.cfg.p},             {"q", h.cfg.q_value()},
                {"beta", h.cfg.beta},       {"radii", h.cfg.radii},
                {"cells", h.cfg.cells},     {"samples_per_side", h.samples_per_side},
                {"integral_cells", h.integral_cells}, {"collar_eps", h.collar_eps}};
  if (!c.sweep.param.empty()) j["sweep"] = {{"param", c.sweep.param}, {"values", c.sweep.values}};
  return j;
}


HarmonicSource make_source(const RunConfig& cfg) {
  const Json& s = cfg.source;
  const std::string kind = s.value("kind", "zero");
  if (kind == "zero") return HarmonicSource::zero();
  if (kind == "conformal") {
    ConformalMapSpec spec;
    try {
      spec.id = catalog_id_from_string(s.at("map").get<std::string>());
    } catch (const Error&) {
      bad("source.map", "unknown catalog entry");
    }
    switch (spec.id) {
      case CatalogId::MobiusToDisk: break;
      case CatalogId::PowerSector: spec = ConformalMapSpec::power_sector(s.value("a", 1.0)); break;
      case CatalogId::PolynomialPerturbation: spec = ConformalMapSpec::polynomial_perturbation(s.value("c", 0.0)); break;
      case CatalogId::SlitHalfplane: spec = ConformalMapSpec::slit_halfplane(); break;
      case CatalogId::Affine: spec = ConformalMapSpec::affine(s.value("lambda", 1.0), s.value("shift", 0.0)); break;
    }
    return HarmonicSource::conformal(spec);
  }
  if (kind == "series") {
    std::vector<SeriesTerm> terms;
    for (const auto& t : s.at("terms"))
      terms.push_back({t.value("amplitude", 0.0), t.value("frequency", 1.0), t.value("phase", 0.0)});
    return HarmonicSource::series(std::move(terms));
  }
  const DyadicInterval base(cfg.base_left, cfg.base_length);
  const double root = s.value("root_value", 0.0), step = s.value("step_bound", 1.0);
  if (s.value("generator", "cascade") == "balanced")
    return HarmonicSource::martingale(
        MartingaleModel(base, root, step, BalancedGenerator{s.value("seed", std::uint64_t{0}), s.value("depth", 8)}));
  return HarmonicSource::martingale(MartingaleModel(base, root, step, CascadeGenerator{s.value("levels", 6)}));
}

double resolve_M(const RunConfig& cfg, const HarmonicSource& src) {
  double M = 0.0;
  if (cfg.M == "auto") {
    M = M_min(cfg.alpha);
  } else if (cfg.M == "cascade") {
    const auto* model = src.martingale_model();
    if (!model) bad("M", "cascade needs a martingale source");
    M = model->cascade_threshold();
  } else {
    M = std::strtod(cfg.M.c_str(), nullptr);
  }
  if (!cfg.test_mode && M < M_min(cfg.alpha))
    bad("M", fmt(M) + " is below M_min(alpha) = " + fmt(M_min(cfg.alpha)) + "; use test mode for small M");
  return M;
}

void to_json(Json& j, const Check& c) {
  j = {{"name", c.name},
       {"measured", c.measured},
       {"bound", c.bound},
       {"margin", c.bound - c.measured},
       {"pass", c.pass},
       {"asserted", c.asserted}};
}

namespace {

struct Pipeline {
  Pipeline(const RunConfig& c, HarmonicSource s, double m) : cfg(c), src(std::move(s)), M(m) {}

  const RunConfig& cfg;
  HarmonicSource src;
  double M = 0.0;
  RunResult out;
  Json results = Json::object();
  std::optional<GenerationTree> tree;
  int level = 0;
  IntervalUnion E;

  void check(std::string name, double measured, double bound, bool pass, bool asserted = true) {
    out.checks.push_back({std::move(name), measured, bound, pass, asserted});
  }

  void construct() {
    if (tree) return;
    BuildParams bp;
    bp.test_mode = cfg.test_mode;
    bp.good.x_cells = cfg.sampling.x_cells;
    bp.max_rel_depth = cfg.sampling.max_rel_depth;
    tree = build(src, DyadicInterval(cfg.base_left, cfg.base_length), cfg.alpha, M, cfg.n_max, bp);
    const GenerationTree& t = *tree;
    level = static_cast<int>(t.levels.size()) - 1;
    E = extract_E(t, level);

    // Member lengths against 2^{-M'/(A sqrt2)} |I|.
    double worst = 0.0;
    std::size_t members = 0;
    for (const auto& node : t.nodes)
      for (std::size_t c : node.children) {
        const double bound = std::exp2(-node.M_local / (t.A * std::numbers::sqrt2)) * node.interval.length();
        worst = std::max(worst, t.nodes[c].interval.length() / bound);
        ++members;
      }
    check("member_length", worst, 1.0, worst <= 1.0);
    check("tree_invariants", static_cast<double>(t.violations.size()), 0.0, t.violations.empty());
    const auto dist = verify_distortion(t, src, level, global_floor(t, level));
    check("distortion", dist.max_deviation, dist.bound + dist.slack, dist.max_deviation <= dist.bound + dist.slack);
    for (const auto& n : t.notes) out.warnings.push_back("construct: " + n);
    std::size_t indeterminate = 0;
    for (const auto& node : t.nodes) indeterminate += node.indeterminate ? 1 : 0;
    if (indeterminate) out.warnings.push_back("construct: " + std::to_string(indeterminate) + " indeterminate verdicts");
    results["construct"] = {{"tree", t},
                            {"level", level},
                            {"family_members", members},
                            {"E_length", E.empty() ? 0.0 : E.total_length()},
                            {"E_components", E.size()},
                            {"distortion", dist}};
    out.files["tree.csv"] = tree_csv(t);
    out.files["E.csv"] = E.to_csv();
  }

  void measure() {
    construct();
    const FrostmanMeasure mu = build_measure(*tree, level);
    const auto growth = measure_growth(mu, *tree, cfg.alpha, M, cfg.sampling.growth_samples, cfg.seed);
    check("growth", std::max(growth.max_ratio_linear, growth.max_ratio_alpha), 5.0, growth.pass);
    const auto cover = content_1d(E, cfg.alpha);
    const auto lb = content_lower_bound(mu, cfg.alpha, cover.intervals, cfg.sampling.content_samples, cfg.seed);
    check("content_sandwich", lb.estimate, cover.value, lb.estimate <= cover.value * (1.0 + 1e-12));
    check("content_certified", lb.certified, cover.value, lb.certified <= cover.value * (1.0 + 1e-12));
    for (const auto& w : mu.warnings) out.warnings.push_back("measure: " + w);
    results["measure"] = {{"total_mass", mu.total_mass()},
                          {"pieces", mu.pieces().size()},
                          {"growth", growth},
                          {"content_1d", cover},
                          {"lower_bound", lb}};
    out.files["measure.csv"] = measure_csv(mu);
  }

  void transfer() {
    construct();
    const ConformalMapSpec* map = src.map_spec();
    if (!map) throw Error(ErrorCode::UnsupportedSource, "transfer needs a conformal catalog source");
    Lemma33Params lp;
    lp.image_samples = cfg.sampling.image_samples;
    lp.john_samples = cfg.sampling.john_samples;
    lp.ratio_floor = cfg.sampling.ratio_floor;
    lp.pitch = cfg.sampling.pitch;
    const auto rep = verify_lemma33(src, *tree, cfg.alpha, lp);
    check("transfer_sandwich", rep.lower, rep.upper, rep.sandwich_pass);
    check("transfer_ratio", rep.ratio, rep.ratio_floor, rep.ratio_pass);
    check("distortion_bridge", rep.max_log_distortion, rep.distortion_bound, rep.distortion_pass);
    check("image_john_finite", rep.john_image, std::numeric_limits<double>::infinity(), std::isfinite(rep.john_image));
    Json j = {{"lemma", rep}};
    if (cfg.z) {
      EndToEndParams ep;
      ep.M = M;
      ep.n_max = cfg.n_max;
      ep.build.test_mode = cfg.test_mode;
      ep.build.good.x_cells = cfg.sampling.x_cells;
      ep.transfer = lp;
      const auto e2e = theorem11_endtoend(src, *cfg.z, cfg.alpha, ep);
      check("endtoend_lower", e2e.lower, 0.0, e2e.lower > 0.0);
      check("endtoend_curve", e2e.curve_length, e2e.curve_length_bound, e2e.curve_length <= e2e.curve_length_bound);
      j["endtoend"] = e2e;
    }
    results["transfer"] = j;
    out.files["image.csv"] = points_csv(boundary_image(E, *map, 1024));
    const double y0 = cfg.base_length;
    const SawtoothRegion region(tree->base, E, y0);
    const auto curve = map_curve(john_curve(region, {E.hull_left(), y0 / 16}, john_center(region)), *map, y0 / 256);
    out.files["curve.csv"] = points_csv(curve.image);
  }

  void hardy() {
    const auto& h = cfg.hardy;
    std::optional<DomainApprox> omega;
    double size = h.radius;
    Complex mid = 0.0;
    if (h.domain == "disk") {
      omega = DomainApprox::disk(0.0, h.radius);
    } else {
      construct();
      const ConformalMapSpec* map = src.map_spec();
      if (!map) throw Error(ErrorCode::UnsupportedSource, "an image domain needs a conformal catalog source");
      const SawtoothRegion region(tree->base, E, cfg.base_length);
      omega = DomainApprox::image_of(region, *map, cfg.sampling.pitch);
      const Point c = john_center(region);
      mid = eval_map(*map, MapPart::F, Complex(c.x, c.y));
      size = omega->boundary_distance(mid);
    }
    std::vector<TestFunction> suite;
    for (double e : h.collar_eps) suite.push_back(TestFunction::collar(e * size));
    const double room = omega->boundary_distance(mid);
    suite.push_back(TestFunction::radial(mid, 0.5 * room));
    suite.push_back(TestFunction::product(mid, 0.4 * room, 0.3 * room));
    const auto samples = interior_samples(*omega, h.samples_per_side);
    const auto pw = verify_pointwise(*omega, h.cfg, suite, samples);
    check("hardy_pointwise", pw.C_emp, std::numeric_limits<double>::infinity(), pw.pass);
    std::vector<TestFunction> integrable;
    for (const auto& tf : suite)
      if (tf.family != TestFamily::Collar || h.cfg.beta > -1.0) integrable.push_back(tf);
    if (integrable.size() < suite.size()) out.warnings.push_back("hardy: collars skipped in the integral (beta <= -1)");
    const auto in = verify_integral(*omega, h.cfg.p, h.cfg.beta, integrable, h.integral_cells);
    check("hardy_integral", in.max_ratio, std::numeric_limits<double>::infinity(), std::isfinite(in.max_ratio), false);
    Json fam = Json::array();
    for (const auto& tf : suite) fam.push_back(to_string(tf.family));
    results["hardy"] = {{"domain", h.domain}, {"q", h.cfg.q_value()}, {"suite", fam}, {"samples", samples.size()},
                        {"pointwise", pw},    {"integral", in}};
    out.files["hardy_points.csv"] = hardy_csv(pw);
  }
};

std::string environment_fingerprint() {
#if defined(__clang__)
  return "clang " __clang_version__;
#elif defined(__GNUC__)
  return "gcc " __VERSION__;
#else
  return "unknown";
#endif
}

}  // namespace

RunResult run(const std::string& subcommand, const RunConfig& cfg) {
  static const std::set<std::string> known{"construct", "measure", "transfer", "hardy", "full"};
  RunResult fail;
  Json report = {{"schema_version", kSchemaVersion},
                 {"tool", {{"name", "jbtool"}, {"version", "0.1.0"}}},
                 {"environment", {{"compiler", environment_fingerprint()}, {"double_digits", DBL_DIG}}},
                 {"subcommand", subcommand},
                 {"config", config_to_json(cfg)}};
  std::optional<Pipeline> p;
  try {
    if (!known.count(subcommand)) throw Error(ErrorCode::InvalidConfig, "unknown subcommand '" + subcommand + "'");
    HarmonicSource src = make_source(cfg);
    const double M = resolve_M(cfg, src);
    p.emplace(cfg, std::move(src), M);
    report["M"] = M;
    if (subcommand == "construct") p->construct();
    if (subcommand == "measure") p->measure();
    if (subcommand == "transfer") p->transfer();
    if (subcommand == "hardy") p->hardy();
    if (subcommand == "full") {
      p->measure();
      if (p->src.map_spec()) p->transfer();
      else p->results["transfer"] = "skipped: not a conformal source";
      p->hardy();
    }
  } catch (const Error& e) {
    RunResult& r = p ? p->out : fail;
    r.exit_code = e.code() == ErrorCode::InvalidConfig ? 3 : 1;
    report["error"] = e.what();
  }
  RunResult& r = p ? p->out : fail;
  if (p) report["results"] = p->results;
  report["checks"] = r.checks;
  report["warnings"] = r.warnings;
  if (r.exit_code == 0) {
    bool asserted_ok = true, reported_ok = true;
    for (const auto& c : r.checks) (c.asserted ? asserted_ok : reported_ok) &= c.pass;
    r.exit_code = !asserted_ok ? 1 : (!reported_ok || !r.warnings.empty()) ? 2 : 0;
  }
  report["exit_code"] = r.exit_code;
  r.report = report;
  r.files["report.json"] = canonical_dump(report);
  return std::move(r);
}

std::string run_sweep(const RunConfig& cfg) {
  std::ostringstream os;
  os << "param,value,exit_code,E_length,content_1d,content_lower,max_member_ratio,member_length_bound,C_emp,"
        "integral_ratio,error\n";
  const std::string& param = cfg.sweep.param;
  for (double v : cfg.sweep.values) {
    RunConfig c = cfg;
    std::string sub = "measure";
    if (param == "alpha") c.alpha = v;
    if (param == "M") c.M = fmt(v);
    if (param == "depth") c.n_max = static_cast<int>(v);
    if (param == "beta" || param == "p") {
      (param == "beta" ? c.hardy.cfg.beta : c.hardy.cfg.p) = v;
      sub = "hardy";
    }
    const RunResult r = run(sub, c);
    const Json& res = r.report.contains("results") ? r.report["results"] : Json::object();
    auto num = [](const Json& j, std::initializer_list<const char*> path) -> std::string {
      const Json* p = &j;
      for (const char* k : path) {
        if (!p->is_object() || !p->contains(k)) return "";
        p = &(*p)[k];
      }
      return p->is_number() ? fmt(p->get<double>()) : "";
    };
    std::string member_ratio, member_bound;
    if (res.contains("construct")) {
      for (const auto& ch : r.checks)
        if (ch.name == "member_length") member_ratio = fmt(ch.measured);
      const double A = res["construct"]["tree"]["A"].get<double>();
      const double M = r.report["M"].get<double>();
      if (A > 0.0) member_bound = fmt(std::exp2(-M / (A * std::numbers::sqrt2)));
    }
    std::string err = r.report.value("error", "");
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    os << param << ',' << fmt(v) << ',' << r.exit_code << ',' << num(res, {"construct", "E_length"}) << ','
       << num(res, {"measure", "content_1d", "value"}) << ',' << num(res, {"measure", "lower_bound", "estimate"}) << ','
       << member_ratio << ',' << member_bound << ',' << num(res, {"hardy", "pointwise", "C_emp"}) << ','
       << num(res, {"hardy", "integral", "max_ratio"}) << ',' << err << '\n';
  }
  return os.str();
}

void write_files(const std::map<std::string, std::string>& files, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, text] : files) {
    std::ofstream f(dir / name, std::ios::binary);
    f << text;
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + (dir / name).string());
  }
}

}  // namespace jb
