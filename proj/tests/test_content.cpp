#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "doctest.h"
#include "jb/content.hpp"
#include "jb/error.hpp"

using namespace jb;

namespace {

// Exhaustive oracle: minimum over all set partitions of the components of
// the sum of group-hull costs, groups summed by leftmost component.
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
    // Restricted growth strings enumerate each partition once, with groups
    // numbered by their leftmost component.
    for (int g = 0; g <= groups; ++g) {
      label[k] = g;
      rec(k + 1, std::max(groups, g + 1));
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("content_1d examples") {
  CHECK(content_1d(IntervalUnion({{0.0, 0.25}}), 0.5).value == 0.5);
  const auto pts = content_1d(IntervalUnion({{0.1, 0.1}, {0.4, 0.4}, {0.9, 0.9}}), 0.3);
  CHECK(pts.value == 0.0);
  CHECK(pts.exact);
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const auto sol = content_1d(IntervalUnion({{0.0, eps}, {1.0 + eps, 1.0 + 2 * eps}}), 0.5);
    CHECK(sol.value == doctest::Approx(2.0 * std::sqrt(eps)));
    CHECK(sol.intervals.size() == 2);
    CHECK(std::sqrt(1.0 + 2 * eps) > sol.value);
  }
  const auto wide = content_1d(IntervalUnion({{0.0, 0.4}, {0.45, 1.0}}), 0.5);
  REQUIRE(wide.intervals.size() == 1);
  CHECK(wide.value == 1.0);
  CHECK_THROWS_AS(content_1d(IntervalUnion(), 0.5), Error);
}

TEST_CASE("content_1d equals exhaustive partition enumeration") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 4);
    std::vector<Segment> segs;
    double x = U(rng) * 0.1;
    for (int i = 0; i < k; ++i) {
      const double len = U(rng) < 0.2 ? 0.0 : 0.2 * U(rng) * U(rng);
      segs.push_back({x, x + len});
      x += len + 0.3 * U(rng) * U(rng) + 1e-3;
    }
    const IntervalUnion set(segs);
    const double alpha = 0.05 + 0.9 * U(rng);
    CAPTURE(trial);
    CHECK(content_1d(set, alpha).value == partition_oracle(set, alpha));
  }
}

TEST_CASE("content_1d monotonicity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Segment> segs;
    for (int i = 0; i < 6; ++i) {
      const double a = U(rng);
      segs.push_back({a, std::min(1.0, a + 0.05 * U(rng))});
    }
    const IntervalUnion big(segs);
    const IntervalUnion small(std::vector<Segment>(segs.begin(), segs.begin() + 3));
    CHECK(content_1d(small, 0.5).value <= content_1d(big, 0.5).value + 1e-15);
    CHECK(content_1d(big, 0.7).value <= content_1d(big, 0.4).value + 1e-15);
  }
}

TEST_CASE("content_upper_2d") {
  CHECK(content_upper_2d({Complex(0.3, 0.2)}, 1e-3, 0.5).value <= std::pow(2e-3, 0.5) + 1e-15);
  CHECK(content_upper_2d({Complex(0.3, 0.2)}, 1e-9, 0.5).value < 1e-4);
  // Points on a segment of length L.
  const double L = 0.8;
  std::vector<Complex> seg;
  for (int k = 0; k <= 1000; ++k) seg.push_back(Complex(0.1, 0.2) + Complex(0.6, 0.8) * (L * k / 1000));
  for (double alpha : {0.3, 0.5, 0.9}) {
    const double v = content_upper_2d(seg, L / 2000, alpha, 14).value;  // neighbourhoods overlap
    const double exact = content_1d(IntervalUnion({{0.0, L}}), alpha).value;
    CHECK(v >= exact);
    CHECK(v <= 2.0 * exact);
  }
  // More levels never increase the value.
  std::vector<Complex> arc;
  for (int k = 0; k <= 2000; ++k) arc.push_back(std::polar(1.0, 0.25 * std::numbers::pi * k / 2000));
  std::vector<Complex> cantor;
  for (int k = 0; k < 256; ++k) {
    double x = 0.0, s = 1.0;
    for (int b = 0; b < 8; ++b) {
      s /= 3.0;
      if ((k >> b) & 1) x += 2.0 * s;
    }
    cantor.push_back(std::polar(1.0, x));
  }
  for (const auto* pts : {&arc, &cantor}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int levels = 0; levels <= 14; levels += 2) {
      const auto sol = content_upper_2d(*pts, 1e-5, 0.5, levels);
      CHECK(sol.value <= prev);
      CHECK_FALSE(sol.exact);
      prev = sol.value;
    }
  }
}

TEST_CASE("push-forward lower estimate") {
  const DyadicInterval base(-0.5, 1.0);
  const FrostmanMeasure lebesgue(base, 0, {{{-0.5, 0.5}, 1.0}});
  const FrostmanMeasure split(base, 1, {{{-0.5, -0.25}, 2.0}, {{0.25, 0.5}, 2.0}});
  for (const auto* mu : {&lebesgue, &split})
    for (double alpha : {0.3, 0.5, 0.8}) {
      const auto id = pushforward_lower_2d(*mu, ConformalMapSpec::power_sector(1.0), alpha);
      const auto aff = pushforward_lower_2d(*mu, ConformalMapSpec::affine(2.0, 1.0), alpha);
      CHECK(aff.value / id.value == doctest::Approx(std::pow(2.0, alpha)).epsilon(1e-9));
      CHECK_FALSE(aff.certified);
    }
  // Mobius image of [-1/2, 1/2] is an arc; compare with the cover bound.
  const auto mob = ConformalMapSpec::mobius_to_disk();
  const auto pts = boundary_image(IntervalUnion({{-0.5, 0.5}}), mob, 10000);
  for (double alpha : {0.3, 0.5, 0.8}) {
    const double lower = pushforward_lower_2d(lebesgue, mob, alpha, 10000).value;
    const double upper = content_upper_2d(pts, 1e-4, alpha, 14).value;
    CHECK(lower >= upper / 3.0);
    CHECK(lower <= 3.0 * upper);
  }
  // A (nearly) point mass has (nearly) no content.
  const FrostmanMeasure atom(base, 0, {{{0.1, 0.1 + 1e-200}, 1e200}});
  CHECK(pushforward_lower_2d(atom, mob, 0.5).value < 1e-50);
  CHECK_THROWS_WITH_AS(
      pushforward_lower_2d(FrostmanMeasure(base, 0, {{{0.5, 1.5}, 1.0}}), ConformalMapSpec::slit_halfplane(), 0.5),
      doctest::Contains("SingularPoint"), Error);
}
