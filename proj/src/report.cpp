#include "jb/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace jb {

namespace {

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep doubles recognisable as floating point on re-parse.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void emit(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: sorted
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        emit(it.value(), indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        out += inner;
        emit(j[k], indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: out += number(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

std::string fmt(double v) { return number(v); }

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  emit(j, 0, out);
  out += "\n";
  return out;
}

void to_json(Json& j, const Point& p) { j = Json::array({p.x, p.y}); }
void to_json(Json& j, const Segment& s) { j = Json::array({s.left, s.right}); }

void to_json(Json& j, const IntervalUnion& u) {
  j = Json::array();
  for (const auto& s : u.components()) j.push_back(s);
}

void to_json(Json& j, const CoverBox& b) { j = Json::array({b.x0, b.y0, b.x1, b.y1}); }

void to_json(Json& j, const CoverSolution& c) {
  j = {{"alpha", c.alpha}, {"value", c.value}, {"exact", c.exact}};
  j["intervals"] = Json::array();
  for (const auto& s : c.intervals) j["intervals"].push_back(s);
  j["boxes"] = Json::array();
  for (const auto& b : c.boxes) j["boxes"].push_back(b);
}

void to_json(Json& j, const LevelSummary& s) {
  j = {{"level", s.level},
       {"good_nodes", s.good_nodes},
       {"bad_nodes", s.bad_nodes},
       {"good_length", s.good_length},
       {"bad_length", s.bad_length}};
}

void to_json(Json& j, const GenerationTree& t) {
  j = {{"base", Json::array({t.base.left(), t.base.right()})},
       {"alpha", t.alpha},
       {"M", t.M},
       {"A", t.A},
       {"u_root", t.u_root},
       {"n_max", t.n_max},
       {"test_mode", t.test_mode},
       {"node_count", t.nodes.size()},
       {"violations", t.violations},
       {"notes", t.notes}};
  j["levels"] = Json::array();
  for (const auto& s : t.levels) j["levels"].push_back(s);
}

void to_json(Json& j, const DistortionReport& r) {
  j = {{"level", r.level},
       {"y_floor", r.y_floor},
       {"max_deviation", r.max_deviation},
       {"max_deviation_on_E", r.max_deviation_on_E},
       {"bound", r.bound},
       {"bound_on_E", r.bound_on_E},
       {"slack", r.slack},
       {"samples", r.samples},
       {"pass", r.pass}};
}

void to_json(Json& j, const GrowthWitness& w) {
  j = {{"left", w.left}, {"right", w.right}, {"mass", w.mass}, {"j", w.j}};
}

void to_json(Json& j, const GrowthReport& r) {
  j = {{"alpha", r.alpha},
       {"M", r.M},
       {"exponent", r.exponent},
       {"max_ratio_linear", r.max_ratio_linear},
       {"max_ratio_alpha", r.max_ratio_alpha},
       {"worst_linear", r.worst_linear},
       {"worst_alpha", r.worst_alpha},
       {"dyadic_checked", r.dyadic_checked},
       {"random_checked", r.random_checked},
       {"max_density_ratio", r.max_density_ratio},
       {"pass", r.pass}};
}

void to_json(Json& j, const ContentLowerBound& c) {
  j = {{"alpha", c.alpha},
       {"c_star", c.c_star},
       {"estimate", c.estimate},
       {"c_dyadic", c.c_dyadic},
       {"certified", c.certified},
       {"reference_constant", c.reference_constant},
       {"reference_bound", c.reference_bound}};
}

void to_json(Json& j, const PushforwardEstimate& e) {
  j = {{"value", e.value},
       {"sup_ratio", e.sup_ratio},
       {"total_mass", e.total_mass},
       {"min_radius", e.min_radius},
       {"atoms", e.atoms},
       {"certified", e.certified}};
}

void to_json(Json& j, const JohnConstant& c) {
  j = {{"C", c.C},
       {"worst_start", c.worst_start},
       {"worst_point", c.worst_point},
       {"resolution", c.resolution},
       {"curves", c.curves},
       {"points", c.points}};
}

void to_json(Json& j, const Lemma33Report& r) {
  j = {{"level", r.level},
       {"alpha", r.alpha},
       {"M", r.M},
       {"lower", r.lower},
       {"upper", r.upper},
       {"content_E", r.content_E},
       {"fprime_z0", r.fprime_z0},
       {"ratio", r.ratio},
       {"ratio_floor", r.ratio_floor},
       {"john_preimage", r.john_preimage},
       {"john_image", r.john_image},
       {"max_log_distortion", r.max_log_distortion},
       {"distortion_bound", r.distortion_bound},
       {"max_length_ratio", r.max_length_ratio},
       {"length_bound", r.length_bound},
       {"sandwich_pass", r.sandwich_pass},
       {"ratio_pass", r.ratio_pass},
       {"distortion_pass", r.distortion_pass},
       {"pass", r.pass}};
}

void to_json(Json& j, const EndToEndReport& r) {
  j = {{"z", complex_json(r.z)},
       {"z0", complex_json(r.z0)},
       {"d_omega", r.d_omega},
       {"lower", r.lower},
       {"c", r.c},
       {"curve_length", r.curve_length},
       {"curve_length_bound", r.curve_length_bound},
       {"tree", r.tree},
       {"lemma", r.lemma},
       {"pass", r.pass}};
}

void to_json(Json& j, const PointwiseReport& r) {
  j = {{"C_emp", r.C_emp},
       {"pairs", r.pairs},
       {"excluded", r.excluded},
       {"vacuous", r.vacuous},
       {"worst_x", complex_json(r.worst_x)},
       {"worst_function", r.worst_function},
       {"pass", r.pass}};
}

void to_json(Json& j, const IntegralReport& r) {
  j = {{"ratios", r.ratios}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"max_ratio", r.max_ratio}};
}

std::string tree_csv(const GenerationTree& t) {
  std::ostringstream os;
  os << "level,left,right,kind,stop,deviation,M_local,sign,indeterminate,good_length\n";
  for (const auto& n : t.nodes)
    os << n.level << ',' << fmt(n.interval.left()) << ',' << fmt(n.interval.right()) << ',' << to_string(n.kind) << ','
       << to_string(n.stop) << ',' << fmt(n.deviation) << ',' << fmt(n.M_local) << ',' << n.sign << ','
       << (n.indeterminate ? 1 : 0) << ',' << fmt(n.good_set.empty() ? 0.0 : n.good_set.total_length()) << '\n';
  return os.str();
}

std::string measure_csv(const FrostmanMeasure& mu) {
  std::ostringstream os;
  os << "left,right,density\n";
  for (const auto& p : mu.pieces()) os << fmt(p.segment.left) << ',' << fmt(p.segment.right) << ',' << fmt(p.density) << '\n';
  return os.str();
}

std::string points_csv(const std::vector<Complex>& pts) {
  std::ostringstream os;
  os << "x,y\n";
  for (const Complex& w : pts) os << fmt(w.real()) << ',' << fmt(w.imag()) << '\n';
  return os.str();
}

std::string hardy_csv(const PointwiseReport& r) {
  std::ostringstream os;
  os << "x,y,u,rhs,ratio\n";
  for (const auto& p : r.records)
    os << fmt(p.x.real()) << ',' << fmt(p.x.imag()) << ',' << fmt(p.u) << ',' << fmt(p.rhs) << ','
       << fmt(p.rhs > 0.0 ? p.u / p.rhs : 0.0) << '\n';
  return os.str();
}

}  // namespace jb
