#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "jb/classifier.hpp"
#include "jb/error.hpp"

using namespace jb;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

// Dense-sampling oracle: measure of x in I whose sampled vertical sup over
// [y_floor, |I|] stays within T. The x grid has `sub` points per estimator
// cell and the y grid refines the estimator's log-spaced grid `fine` times.
double oracle_good_measure(const DyadicInterval& I, const HarmonicSource& src, double T, const GoodSetParams& p,
                           int sub, int fine) {
  const double len = I.length();
  const double y_floor = p.y_floor_rel * len;
  const double span = std::log(len / y_floor);
  const int K = std::max(1, static_cast<int>(std::ceil(span / std::log(p.y_ratio))));
  const double log_r = span / K;
  const double center = src.u(I.anchor());
  const int nx = p.x_cells * sub;
  int good = 0;
  for (int i = 0; i < nx; ++i) {
    const double x = I.left() + (i + 0.5) * len / nx;
    double sup = 0.0;
    for (int j = 0; j <= K * fine; ++j) {
      const double y = j == K * fine ? y_floor : len * std::exp(-(j / fine) * log_r - (j % fine) * log_r / fine);
      sup = std::max(sup, std::abs(src.u({x, y}) - center));
    }
    if (sup <= T) ++good;
  }
  return len * good / nx;
}

ExplicitIncrements right_half_ramp(int depth) {
  // +1 at every node of depths 1..depth inside the right half of the base.
  ExplicitIncrements inc;
  for (int d = 1; d <= depth; ++d) {
    const std::uint64_t n = std::uint64_t{1} << d;
    for (std::uint64_t k = n / 2; k < n; ++k) inc.entries.push_back({d, k, 1.0});
  }
  return inc;
}

ExplicitIncrements full_ramp(int depth) {
  ExplicitIncrements inc;
  for (int d = 1; d <= depth; ++d)
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << d); ++k) inc.entries.push_back({d, k, 1.0});
  return inc;
}

}  // namespace

TEST_CASE("good set of the zero source is the whole interval") {
  const DyadicInterval I(-0.5, 1.0);
  const auto est = good_set(I, HarmonicSource::zero(), 1.0);
  CHECK(est.inner == IntervalUnion({{-0.5, 0.5}}));
  CHECK(est.outer == IntervalUnion({{-0.5, 0.5}}));
  CHECK(est.y_floor == std::ldexp(1.0, -10));
  CHECK(est.threshold == doctest::Approx(1.0 + kMinCertifiedA * kSqrt2));
}

TEST_CASE("good set excludes a half with a large increment") {
  const DyadicInterval base(-0.5, 1.0);
  // B = 1, M = 1: threshold 1 + sqrt2; the right half climbs to 5 >= 2(1 + sqrt2).
  MartingaleModel m(base, 0.0, 1.0, right_half_ramp(5));
  const auto src = HarmonicSource::martingale(m);
  const double T = 1.0 + kSqrt2;
  CHECK(m.node_value(DyadicInterval(-0.5, 1.0, 5, 31)) >= 2 * T);
  const auto est = good_set(base, src, 1.0);
  CHECK(est.outer == IntervalUnion({{-0.5, 0.0}}));
  CHECK(est.inner == IntervalUnion({{-0.5, 0.0}}));
  // Direct evaluation at child anchors.
  CHECK(std::abs(m.node_value(base.child(0)) - m.node_value(base)) <= T);
  CHECK(std::abs(m.node_value(base.child(1).child(1).child(1)) - m.node_value(base)) > T);
}

TEST_CASE("mobius on the centered unit interval is good everywhere") {
  const DyadicInterval I(-0.5, 1.0);
  const auto src = HarmonicSource::conformal(ConformalMapSpec::mobius_to_disk());
  const GoodSetParams p;
  const auto est = good_set(I, src, 10.0, p);
  CHECK(est.inner == IntervalUnion({{-0.5, 0.5}}));
  GoodSetParams coarse = p;
  coarse.x_cells = 64;
  CHECK(oracle_good_measure(I, src, est.threshold, coarse, 10, 10) == 1.0);
}

TEST_CASE("bracket correctness against the dense-sampling oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const DyadicInterval base(-0.5, 1.0);
  std::vector<HarmonicSource> sources{
      HarmonicSource::conformal(ConformalMapSpec::mobius_to_disk()),
      HarmonicSource::conformal(ConformalMapSpec::power_sector(2.0)),
      HarmonicSource::conformal(ConformalMapSpec::power_sector(0.4)),
      HarmonicSource::conformal(ConformalMapSpec::polynomial_perturbation(0.5)),
      HarmonicSource::conformal(ConformalMapSpec::slit_halfplane()),
      HarmonicSource::series({{0.6, 16.0, 0.0}, {0.3, 64.0, 2.0}}),
      HarmonicSource::martingale(MartingaleModel(base, 0.0, 0.5, BalancedGenerator{3, 12})),
  };
  GoodSetParams p;
  p.x_cells = 64;
  p.y_ratio = 1.1;
  p.y_floor_rel = 0x1p-8;
  int nontrivial = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& src = sources[static_cast<std::size_t>(trial) % sources.size()];
    const int d = static_cast<int>(rng() % 4);
    const DyadicInterval I(base.left(), base.length(), d, rng() % (std::uint64_t{1} << d));
    // M relative to A so that the brackets land in the interesting range.
    const double M = (0.05 + 2.0 * U(rng)) * src.certified_A();
    const auto est = good_set(I, src, M, p);
    const double oracle = oracle_good_measure(I, src, est.threshold, p, 4, 3);
    CAPTURE(trial);
    CHECK(est.inner.is_subset_of(est.outer));
    CHECK(est.inner.total_length() <= oracle + 1e-12);
    CHECK(oracle <= est.outer.total_length() + 1e-12);
    if (oracle > 0.0 && oracle < I.length()) ++nontrivial;
  }
  CHECK(nontrivial >= 5);
}

TEST_CASE("good set validates its parameters") {
  const DyadicInterval I(0.0, 1.0);
  GoodSetParams p;
  p.y_floor_rel = 1.0;
  CHECK_THROWS_WITH_AS(good_set(I, HarmonicSource::zero(), 1.0, p), doctest::Contains("DegenerateRange"), Error);
  p = {};
  p.x_cells = 100;
  CHECK_THROWS_AS(good_set(I, HarmonicSource::zero(), 1.0, p), Error);
}

TEST_CASE("classification") {
  const DyadicInterval base(-0.5, 1.0);
  CHECK(classify(base, HarmonicSource::zero(), 1.0).verdict == Verdict::Good);

  // Every vertical line crosses squares where u has climbed to 5 > 1 + sqrt2.
  MartingaleModel m(base, 0.0, 1.0, full_ramp(5));
  const auto src = HarmonicSource::martingale(m);
  const auto c = classify(base, src, 1.0);
  CHECK(c.verdict == Verdict::Bad);
  CHECK_FALSE(c.indeterminate);
  CHECK(c.estimate.outer.empty());
  GoodSetParams p;
  p.x_cells = 64;
  CHECK(oracle_good_measure(base, src, 1.0 + kSqrt2, p, 4, 2) == 0.0);

  // The cut is inclusive.
  CHECK(classify_measures(0.01, 0.01, 1.0).verdict == Verdict::Good);
  const auto straddle = classify_measures(0.0099, 0.02, 1.0);
  CHECK(straddle.verdict == Verdict::Bad);
  CHECK(straddle.indeterminate);
  CHECK_FALSE(classify_measures(0.0, 0.005, 1.0).indeterminate);
}

TEST_CASE("maximal families") {
  const DyadicInterval base(-0.5, 1.0);
  SUBCASE("zero source gives an empty family") {
    const auto fam = maximal_family(base, HarmonicSource::zero(), 1.0, 1, 8);
    CHECK(fam.members.empty());
    CHECK(fam.truncated);
    CHECK(fam.incomplete);
  }
  SUBCASE("maximality: a qualifying child hides its qualifying children") {
    ExplicitIncrements inc{{{1, 0, 1.0}, {2, 0, 1.0}, {2, 1, 1.0}}};
    MartingaleModel m(base, 0.0, 1.0, inc);
    const auto fam = maximal_family(base, HarmonicSource::martingale(m), 1.0, 1);
    REQUIRE(fam.members.size() == 1);
    CHECK(fam.members[0].interval == base.child(0));
    CHECK(fam.members[0].deviation == 1.0);
    CHECK_FALSE(fam.truncated);
    CHECK(maximal_family(base, HarmonicSource::martingale(m), 1.0, -1).members.empty());
  }
  SUBCASE("cascade families have the engineered mass") {
    MartingaleModel m(base, 0.0, 1.0, CascadeGenerator{3});
    const auto src = HarmonicSource::martingale(m);
    const double M = m.cascade_threshold();
    const auto plus = maximal_family(base, src, M, 1);
    const auto minus = maximal_family(base, src, M, -1);
    CHECK(plus.total_length() == 0.25);
    CHECK(minus.total_length() == 0.75);
    CHECK_FALSE(plus.truncated);
    for (const auto* fam : {&plus, &minus})
      for (const auto& mem : fam->members) {
        CHECK(mem.within_upper);
        CHECK(mem.length_bound);
        CHECK(std::abs(mem.deviation) >= M);
      }
    // The next level oscillates the other way.
    const DyadicInterval next = plus.members.front().interval;
    CHECK(maximal_family(next, src, M, -1).total_length() == next.length() / 4);
    CHECK(maximal_family(next, src, M, 1).total_length() == 3 * next.length() / 4);
    // Three levels leave 1/64 of the lines inside the threshold: good.
    CHECK(classify(base, src, M).verdict == Verdict::Good);
    // Six levels seen down to depth 16 leave less than 1/100.
    MartingaleModel deep(base, 0.0, 1.0, CascadeGenerator{6});
    GoodSetParams p;
    p.y_floor_rel = 0x1p-16;
    const auto c = classify(base, HarmonicSource::martingale(deep), M, p);
    CHECK(c.verdict == Verdict::Bad);
    CHECK(c.estimate.inner.is_subset_of(c.estimate.outer));
    p.y_floor_rel = 0x1p-6;  // too shallow to see the second level
    CHECK(classify(base, HarmonicSource::martingale(deep), M, p).verdict == Verdict::Good);
  }
  SUBCASE("conformal families satisfy the deviation and length bounds") {
    for (auto spec : {ConformalMapSpec::mobius_to_disk(), ConformalMapSpec::power_sector(2.0),
                      ConformalMapSpec::slit_halfplane()}) {
      const auto src = HarmonicSource::conformal(spec);
      const DyadicInterval I(-1.0, 2.0, 1, 0);
      const double M = 2.0 * src.certified_A();
      for (int sign : {1, -1}) {
        const auto fam = maximal_family(I, src, M, sign, 12);
        for (std::size_t k = 0; k < fam.members.size(); ++k) {
          const auto& mem = fam.members[k];
          CHECK(mem.within_upper);
          CHECK(mem.length_bound);
          CHECK(sign * mem.deviation >= M);
          if (k > 0) CHECK(fam.members[k - 1].interval.right() <= mem.interval.left());
          // No ancestor strictly below I crosses the threshold.
          for (DyadicInterval a = mem.interval.parent(); a.depth() > I.depth(); a = a.parent())
            CHECK(std::abs(src.u(a.anchor()) - src.u(I.anchor())) < M);
        }
      }
    }
  }
}

namespace {

// Closed form of int log|x + i y| dx.
double log_abs_primitive(double x, double y) {
  return 0.5 * x * std::log(x * x + y * y) - x + y * std::atan(x / y);
}

double simpson(auto f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("Green residual") {
  const DyadicInterval I(-0.5, 1.0);
  const double yf = 0x1p-20;
  SUBCASE("constant u") {
    const auto fam = std::vector<DyadicInterval>{I.child(0).child(1), I.child(1).child(1).child(0)};
    CHECK(green_residual(I, fam, HarmonicSource::zero(), yf).delta == 0.0);
    const auto aff = HarmonicSource::conformal(ConformalMapSpec::affine(2.0, 1.0));
    CHECK(std::abs(green_residual(I, fam, aff, yf).delta) < 1e-14);
  }
  SUBCASE("mobius, empty family") {
    const auto src = HarmonicSource::conformal(ConformalMapSpec::mobius_to_disk());
    const auto r = green_residual(I, {}, src, yf);
    const double oracle =
        src.u(I.anchor()) - simpson([&](double x) { return src.u({x, yf}); }, -0.5, 0.5, 200000);
    CHECK(r.delta == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(std::abs(r.delta) <= 20.0 * src.certified_A());
    CHECK(r.quadrature_error < 1e-9);
  }
  SUBCASE("power sector a = 2, random depth-3 family") {
    const auto src = HarmonicSource::conformal(ConformalMapSpec::power_sector(2.0));
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<DyadicInterval> fam;
      for (std::uint64_t k = 0; k < 8; ++k)
        if (rng() % 2) fam.push_back(DyadicInterval(-0.5, 1.0, 3, k));
      const auto r = green_residual(I, fam, src, yf);
      // u = log 2 + log|z|.
      double oracle = src.u(I.anchor());
      for (const auto& J : fam) oracle -= src.u(J.anchor()) * J.length();
      double cursor = -0.5;
      auto gap = [&](double a, double b) {
        oracle -= std::log(2.0) * (b - a) + log_abs_primitive(b, yf) - log_abs_primitive(a, yf);
      };
      for (const auto& J : fam) {
        if (J.left() > cursor) gap(cursor, J.left());
        cursor = J.right();
      }
      if (cursor < 0.5) gap(cursor, 0.5);
      CHECK(r.delta == doctest::Approx(oracle).epsilon(1e-9));
      CHECK(std::abs(r.delta) <= 20.0 * src.certified_A());
    }
  }
  SUBCASE("martingale sources are rejected") {
    MartingaleModel m(I, 0.0, 1.0, ExplicitIncrements{});
    CHECK_THROWS_WITH_AS(green_residual(I, {}, HarmonicSource::martingale(m), yf),
                         doctest::Contains("UnsupportedSource"), Error);
  }
}
