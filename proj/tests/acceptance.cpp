// One line per acceptance criterion; exit status 1 if any fails.
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jb/builder.hpp"
#include "jb/classifier.hpp"
#include "jb/content.hpp"
#include "jb/error.hpp"
#include "jb/frostman.hpp"
#include "jb/hardy.hpp"
#include "jb/runner.hpp"
#include "jb/transfer.hpp"

using namespace jb;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string str(auto&&... parts) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << parts);
  return os.str();
}

struct Run {
  std::string name;
  HarmonicSource src;
  GenerationTree tree;
  double M;
};

BuildParams test_params() {
  BuildParams p;
  p.test_mode = true;
  return p;
}

// Construction runs shared by criteria 1, 5, 6 and 7.
const std::vector<Run>& runs() {
  static const std::vector<Run> all = [] {
    std::vector<Run> v;
    const DyadicInterval base(-0.5, 1.0);
    auto add = [&](std::string name, HarmonicSource src, double M, int n, BuildParams bp, DyadicInterval b) {
      GenerationTree t = build(src, b, 0.5, M, n, bp);
      v.push_back({std::move(name), std::move(src), std::move(t), M});
    };
    add("zero", HarmonicSource::zero(), M_min(0.5), 3, {}, base);
    add("mobius", HarmonicSource::conformal(ConformalMapSpec::mobius_to_disk()), M_min(0.5), 2, {}, base);
    {
      // A = 6 and M = 147: members need 25 steps.
      ExplicitIncrements path;
      for (int d = 1; d <= 25; ++d) path.entries.push_back({d, 0, 6.0});
      const DyadicInterval b(0.0, 1.0);
      BuildParams bp;
      bp.max_rel_depth = 30;
      add("explicit path", HarmonicSource::martingale(MartingaleModel(b, 0.0, 6.0, path)), 147.0, 1, bp, b);
    }
    for (int levels : {2, 6}) {
      MartingaleModel m(base, 0.0, 1.0, CascadeGenerator{levels});
      BuildParams bp = test_params();
      bp.good.y_floor_rel = 0x1p-16;
      add(str("cascade(", levels, ")"), HarmonicSource::martingale(m), m.cascade_threshold(), 3, bp, base);
    }
    add("balanced", HarmonicSource::martingale(MartingaleModel(base, 0.0, 1.0, BalancedGenerator{7, 10})), 2.0, 3,
        test_params(), base);
    for (auto spec : {ConformalMapSpec::slit_halfplane(), ConformalMapSpec::power_sector(0.4)}) {
      auto src = HarmonicSource::conformal(spec);
      const double A = src.certified_A();
      add(to_string(spec.id), std::move(src), 1.5 * A, 2, test_params(), DyadicInterval(-0.5, 1.0));
    }
    return v;
  }();
  return all;
}

// 1. Every selected member obeys |I_j| <= 2^{-M'/(A sqrt2)} |I|, zero tolerance.
Outcome member_lengths() {
  std::size_t members = 0, bad = 0, martingale = 0, conformal = 0;
  for (const auto& r : runs()) {
    const auto& t = r.tree;
    for (const auto& node : t.nodes)
      for (std::size_t c : node.children) {
        const double cap = std::exp2(-node.M_local / (t.A * kSqrt2)) * node.interval.length();
        ++members;
        (r.src.martingale_model() ? martingale : conformal) += 1;
        if (t.nodes[c].interval.length() > cap) ++bad;
      }
  }
  // Conformal roots in the catalog classify Good, so their families are
  // selected directly.
  for (auto spec : {ConformalMapSpec::mobius_to_disk(), ConformalMapSpec::power_sector(2.0),
                    ConformalMapSpec::power_sector(0.4), ConformalMapSpec::slit_halfplane()}) {
    const auto src = HarmonicSource::conformal(spec);
    const double A = src.certified_A();
    for (double M : {0.5 * A, A, 2.0 * A})
      for (int sign : {1, -1})
        for (const DyadicInterval& I : {DyadicInterval(-1.0, 2.0, 1, 0), DyadicInterval(-0.5, 1.0)})
          for (const auto& m : maximal_family(I, src, M, sign, 14).members) {
            ++members;
            ++conformal;
            if (m.interval.length() > std::exp2(-M / (A * kSqrt2)) * I.length()) ++bad;
          }
  }
  return {bad == 0 && martingale > 0 && conformal > 0,
          str(members, " members (", martingale, " martingale, ", conformal, " conformal), ", bad, " over the cap")};
}

// 2. Outside the boxes of both maximal families, |u - u(z_I)| <= M + A sqrt2 + A log(y_ratio).
Outcome bracket() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const DyadicInterval base(-0.5, 1.0);
  const std::vector<HarmonicSource> sources{
      HarmonicSource::conformal(ConformalMapSpec::mobius_to_disk()),
      HarmonicSource::conformal(ConformalMapSpec::power_sector(2.0)),
      HarmonicSource::conformal(ConformalMapSpec::power_sector(0.4)),
      HarmonicSource::conformal(ConformalMapSpec::polynomial_perturbation(0.5)),
      HarmonicSource::conformal(ConformalMapSpec::slit_halfplane()),
      HarmonicSource::series({{0.6, 16.0, 0.0}, {0.3, 64.0, 2.0}}),
      HarmonicSource::martingale(MartingaleModel(base, 0.0, 0.5, BalancedGenerator{3, 12})),
  };
  const int depth = 10;
  const double y_ratio = GoodSetParams{}.y_ratio;
  std::size_t points = 0, violations = 0, with_members = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& src = sources[static_cast<std::size_t>(trial) % sources.size()];
    const int d = static_cast<int>(rng() % 4);
    const DyadicInterval I(base.left(), base.length(), d, rng() % (std::uint64_t{1} << d));
    const double A = src.certified_A();
    const double M = (0.5 + 3.0 * U(rng)) * A;
    std::vector<DyadicInterval> boxes;
    for (int sign : {1, -1})
      for (const auto& m : maximal_family(I, src, M, sign, depth).members) boxes.push_back(m.interval);
    if (!boxes.empty()) ++with_members;
    const double bound = M + A * kSqrt2 + A * std::log(y_ratio);
    const double y_floor = std::ldexp(I.length(), -(depth - 1));
    const double uI = src.u(I.anchor());
    for (int i = 0; i < 128; ++i) {
      const double x = I.left() + (i + 0.5) * I.length() / 128;
      for (int k = 0; k <= 60; ++k) {
        const double y = I.length() * std::pow(y_floor / I.length(), k / 60.0);
        bool covered = false;
        for (const auto& J : boxes) covered |= x >= J.left() && x <= J.right() && y <= J.length();
        if (covered) continue;
        ++points;
        const double dev = std::abs(src.u({x, y}) - uI);
        worst = std::max(worst, dev / bound);
        if (dev > bound) ++violations;
      }
    }
  }
  return {violations == 0 && with_members > 0,
          str("50 cases (", with_members, " with members), ", points, " points, worst ratio ", worst, ", ", violations,
              " violations")};
}

// 3. Engineered martingales with M above the configured M0: both family sums >= |I|/4.
Outcome family_mass() {
  const DyadicInterval base(-0.5, 1.0);
  std::size_t checked = 0, short_sums = 0;
  double min_rel = std::numeric_limits<double>::infinity();
  ClassifierConfig cc;
  cc.M0_factor = 2.0;
  for (double B : {0.5, 1.0, 3.0})
    for (int levels : {2, 4, 6}) {
      MartingaleModel m(base, 0.0, B, CascadeGenerator{levels});
      const auto src = HarmonicSource::martingale(m);
      const double M = m.cascade_threshold();
      if (M <= cc.M0_factor * src.certified_A()) return {false, str("M = ", M, " is not above M0")};
      BuildParams bp = test_params();
      bp.good.y_floor_rel = 0x1p-20;
      const auto tree = build(src, base, 0.5, M, levels, bp);
      for (const auto& node : tree.nodes) {
        if (node.kind != NodeKind::BadInternal) continue;
        for (int sign : {1, -1}) {
          const auto fam = maximal_family(node.interval, src, node.M_local, sign, bp.max_rel_depth);
          const double rel = fam.total_length() / node.interval.length();
          ++checked;
          min_rel = std::min(min_rel, rel);
          if (fam.members.empty() || rel < 0.25) ++short_sums;
        }
      }
    }
  // Conformal sums are reported only.
  const auto slit = HarmonicSource::conformal(ConformalMapSpec::slit_halfplane());
  const DyadicInterval I(-0.5, 1.0);
  const double M = 1.5 * slit.certified_A();
  const double plus = maximal_family(I, slit, M, 1, 12).total_length();
  const double minus = maximal_family(I, slit, M, -1, 12).total_length();
  return {checked > 0 && short_sums == 0,
          str(checked, " bad-node families, min sum/|I| ", min_rel, ", ", short_sums,
              " short; slit (reported): ", plus, " / ", minus)};
}

// 4. Green residual |delta| <= 20 A with quadrature error < 0.1 A.
Outcome residual() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(41);
  std::size_t bad = 0;
  double worst = 0.0, worst_q = 0.0;
  for (auto spec : {ConformalMapSpec::mobius_to_disk(), ConformalMapSpec::power_sector(2.0)}) {
    const auto src = HarmonicSource::conformal(spec);
    const double A = src.certified_A();
    for (int trial = 0; trial < 100; ++trial) {
      const int d = static_cast<int>(rng() % 5);
      const DyadicInterval I(-1.0, 2.0, d, rng() % (std::uint64_t{1} << d));
      const int fd = 1 + static_cast<int>(rng() % 4);
      std::vector<DyadicInterval> fam;
      for (std::uint64_t k = 0; k < (std::uint64_t{1} << fd); ++k) {
        if (rng() % 3) continue;
        DyadicInterval J = I;
        for (int b = fd - 1; b >= 0; --b) J = J.child(static_cast<int>((k >> b) & 1));
        fam.push_back(J);
      }
      const auto r = green_residual(I, fam, src, std::ldexp(I.length(), -12));
      worst = std::max(worst, std::abs(r.delta) / A);
      worst_q = std::max(worst_q, r.quadrature_error / A);
      if (std::abs(r.delta) > 20.0 * A || r.quadrature_error >= 0.1 * A) ++bad;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {bad == 0 && secs < 30.0,
          str("200 cases, max |delta|/A ", worst, ", max quadrature error/A ", worst_q, ", ", secs, " s")};
}

// 5. Distortion on every run, and cancellation at level-2 bad anchors.
Outcome distortion() {
  std::size_t failed = 0;
  double worst = 0.0;
  for (const auto& r : runs()) {
    const int n = static_cast<int>(r.tree.levels.size()) - 1;
    const auto rep = verify_distortion(r.tree, r.src, n, global_floor(r.tree, n));
    worst = std::max(worst, rep.max_deviation / (rep.bound + rep.slack));
    if (!rep.pass) ++failed;
  }
  double anchors = 0.0;
  std::size_t bad_nodes = 0;
  for (double B : {0.5, 1.0, 2.0}) {
    MartingaleModel m(DyadicInterval(-0.5, 1.0), 0.0, B, CascadeGenerator{6});
    BuildParams bp = test_params();
    bp.good.y_floor_rel = 0x1p-16;
    const auto tree = build(HarmonicSource::martingale(m), m.base(), 0.5, m.cascade_threshold(), 2, bp);
    for (const auto& node : tree.nodes)
      if (node.level == 2 && node.kind != NodeKind::GoodTerminal) {
        anchors = std::max(anchors, std::abs(node.deviation));
        ++bad_nodes;
      }
  }
  return {failed == 0 && bad_nodes > 0 && anchors <= 12.0 * kSqrt2,
          str(runs().size(), " runs, worst deviation/bound ", worst, ", ", failed, " failed; level-2 bad anchors max ",
              anchors, " <= ", 12.0 * kSqrt2, " over ", bad_nodes, " nodes")};
}

// 6. Frostman growth, exhaustive dyadic plus 10^4 random J.
Outcome growth() {
  std::size_t failed = 0, dyadic = 0, random = 0;
  double worst = 0.0;
  for (const auto& r : runs()) {
    const int n = static_cast<int>(r.tree.levels.size()) - 1;
    const auto mu = build_measure(r.tree, n);
    const auto g = measure_growth(mu, r.tree, r.tree.alpha, r.M, 10000, 1);
    dyadic += g.dyadic_checked;
    random += g.random_checked;
    worst = std::max({worst, g.max_ratio_linear, g.max_ratio_alpha});
    if (!g.pass) ++failed;
  }
  return {failed == 0, str(dyadic, " dyadic and ", random, " random J, worst ratio ", worst, " <= 5, ", failed,
                           " runs failed")};
}

// 7. Content sandwich on every run; trivial source equals 1.
Outcome sandwich() {
  std::size_t bad = 0;
  for (const auto& r : runs())
    for (double alpha : {0.3, 0.5}) {
      const int n = static_cast<int>(r.tree.levels.size()) - 1;
      const auto E = extract_E(r.tree, n);
      const auto cover = content_1d(E, alpha);
      const auto lb = content_lower_bound(build_measure(r.tree, n), alpha, cover.intervals);
      if (lb.estimate > cover.value * (1 + 1e-12)) ++bad;
    }
  double err = 0.0;
  const auto& zero = runs().front().tree;
  for (double alpha : {0.1, 0.3, 0.5, 0.9}) {
    const auto cover = content_1d(extract_E(zero, 0), alpha);
    const auto lb = content_lower_bound(build_measure(zero, 0), alpha, cover.intervals);
    err = std::max({err, std::abs(cover.value - 1.0), std::abs(lb.estimate - 1.0)});
  }
  return {bad == 0 && err <= 1e-12, str(2 * runs().size(), " sandwiches, ", bad, " inverted; trivial error ", err)};
}

double partition_oracle(const IntervalUnion& set, double alpha) {
  const auto comps = set.components();
  const std::size_t n = comps.size();
  std::vector<int> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int groups) {
    if (k == n) {
      double total = 0.0;
      for (int g = 0; g < groups; ++g) {
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (std::size_t i = 0; i < n; ++i)
          if (label[i] == g) {
            if (first) lo = comps[i].left;
            first = false;
            hi = comps[i].right;
          }
        total += std::pow(hi - lo, alpha);
      }
      best = std::min(best, total);
      return;
    }
    for (int g = 0; g <= groups; ++g) {
      label[k] = g;
      rec(k + 1, std::max(groups, g + 1));
    }
  };
  rec(0, 0);
  return best;
}

// 8. DP equals exhaustive partition enumeration.
Outcome oracle_1d() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 4);
    std::vector<Segment> segs;
    double x = U(rng);
    for (int i = 0; i < k; ++i) {
      const double len = U(rng) < 0.2 ? 0.0 : 0.3 * U(rng) * U(rng);
      segs.push_back({x, x + len});
      x += len + 0.4 * U(rng) * U(rng) + 1e-3;
    }
    const IntervalUnion set(segs);
    const double alpha = 0.05 + 0.9 * U(rng);
    if (content_1d(set, alpha).value != partition_oracle(set, alpha)) ++mismatches;
  }
  return {mismatches == 0, str("200 instances, ", mismatches, " mismatches")};
}

// 9. Content transfer: affine covariance, mobius sandwich and John constant.
Outcome transfer() {
  const DyadicInterval base(-0.5, 1.0);
  double worst = 0.0;
  const auto zero = build(HarmonicSource::zero(), base, 0.5, M_min(0.5), 2);
  for (double alpha : {0.3, 0.7}) {
    const double id = verify_lemma33(HarmonicSource::zero(), zero, alpha).ratio;
    for (double lambda : {0.5, 2.0, 8.0}) {
      const auto src = HarmonicSource::conformal(ConformalMapSpec::affine(lambda, 1.0));
      const auto rep = verify_lemma33(src, build(src, base, 0.5, M_min(0.5), 2), alpha);
      worst = std::max(worst, std::abs(rep.ratio / id - 1.0));
    }
  }
  const auto mob = HarmonicSource::conformal(ConformalMapSpec::mobius_to_disk());
  const auto rep = verify_lemma33(mob, build(mob, base, 0.5, M_min(0.5), 2), 0.5);
  return {worst <= 1e-9 && rep.sandwich_pass && std::isfinite(rep.john_image) && rep.distortion_pass,
          str("affine |ratio / identity ratio - 1| ", worst, "; mobius L ", rep.lower, " <= U ", rep.upper, ", image John ",
              rep.john_image, ", log distortion ", rep.max_log_distortion, " <= ", rep.distortion_bound)};
}

// 10. Slope of log(content lower estimate) against log d.
Outcome scaling() {
  const auto mob = HarmonicSource::conformal(ConformalMapSpec::mobius_to_disk());
  EndToEndParams p;
  p.n_max = 1;
  std::string detail;
  bool pass = true;
  for (double alpha : {0.3, 0.5}) {
    std::vector<double> lx, ly;
    for (double d : {0.25, 0.125, 0.0625}) {
      const auto q = theorem11_endtoend(mob, -1.0 + d, alpha, p);
      lx.push_back(std::log(q.d_omega));
      ly.push_back(std::log(q.lower));
    }
    const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
    double sxy = 0.0, sxx = 0.0;
    for (int k = 0; k < 3; ++k) {
      sxy += (lx[k] - mx) * (ly[k] - my);
      sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    const double slope = sxy / sxx;
    pass &= std::abs(slope - alpha) <= 0.1;
    detail += str(detail.empty() ? "" : ", ", "alpha ", alpha, ": slope ", slope);
  }
  return {pass, detail};
}

double radial_ratio(double eps, double beta) {
  using boost::math::quadrature::gauss_kronrod;
  auto lhs = [&](double rho) {
    const double d = 1.0 - rho;
    return std::pow(std::min(1.0, d / eps), 2.0) * std::pow(d, beta - 2.0) * rho;
  };
  auto rhs = [&](double rho) { return std::pow(1.0 / eps, 2.0) * std::pow(1.0 - rho, beta) * rho; };
  const double l = gauss_kronrod<double, 31>::integrate(lhs, 0.0, 1.0 - eps, 15, 1e-12) +
                   gauss_kronrod<double, 31>::integrate(lhs, 1.0 - eps, 1.0, 15, 1e-12);
  return l / gauss_kronrod<double, 31>::integrate(rhs, 1.0 - eps, 1.0, 15, 1e-12);
}

// 11. Hardy inequalities on the unit disk with p = 2.
Outcome hardy() {
  const auto disk = DomainApprox::disk(0.0, 1.0);
  const std::vector<TestFunction> suite{TestFunction::collar(0.25), TestFunction::collar(0.125),
                                        TestFunction::radial(Complex(0.2, -0.1), 0.5),
                                        TestFunction::product(Complex(-0.1, 0.3), 0.4, 0.3)};
  const auto samples = interior_samples(disk, 16);
  bool pass = true;
  std::string detail;
  for (double beta : {0.0, 0.5}) {
    HardyConfig a, b;
    a.beta = b.beta = beta;
    a.cells = 16;
    b.cells = 32;
    try {
      const auto ra = verify_pointwise(disk, a, suite, samples);
      const auto rb = verify_pointwise(disk, b, suite, samples);
      const double drift = std::abs(rb.C_emp / ra.C_emp - 1.0);
      const auto in = verify_integral(disk, 2.0, beta, {TestFunction::collar(0.125)}, 1024);
      const double oracle = radial_ratio(0.125, beta);
      const double err = std::abs(in.ratios[0] / oracle - 1.0);
      pass &= std::isfinite(rb.C_emp) && drift <= 0.1 && err <= 0.15;
      detail += str(detail.empty() ? "" : "; ", "beta ", beta, ": C_emp ", ra.C_emp, " -> ", rb.C_emp, ", integral ",
                    in.ratios[0], " vs radial ", oracle);
    } catch (const Error& e) {
      pass = false;
      detail += str(" beta ", beta, ": ", e.what());
    }
  }
  return {pass, detail};
}

// 12. Two full runs give byte-identical reports.
Outcome determinism() {
  const RunConfig cfg = parse_config(R"({"source": {"kind": "martingale", "generator": "cascade", "levels": 6},
                                         "n_max": 3, "test_mode": true, "M": "cascade"})");
  const auto a = run("full", cfg).files.at("report.json");
  const auto b = run("full", cfg).files.at("report.json");
  return {a == b, str("report.json ", a.size(), " bytes, ", a == b ? "identical" : "differs")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Outcome (*)()>> criteria{
      {"member lengths", member_lengths}, {"good-set bracket", bracket},  {"family mass", family_mass},
      {"Green residual", residual},       {"distortion", distortion},     {"Frostman growth", growth},
      {"content sandwich", sandwich},     {"1-D oracle", oracle_1d},      {"content transfer", transfer},
      {"scaling law", scaling},           {"Hardy", hardy},               {"determinism", determinism}};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, str("threw: ", e.what())};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2zu %-17s %s  %s\n", k + 1, criteria[k].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed ? 1 : 0;
}
