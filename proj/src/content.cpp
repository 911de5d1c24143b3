#include "jb/content.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jb/error.hpp"
#include "jb/parallel.hpp"

namespace jb {

CoverSolution content_1d(const IntervalUnion& set, double alpha) {
  if (set.empty()) throw Error(ErrorCode::EmptyCoreSet, "content of an empty set");
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  const auto comps = set.components();
  const std::size_t n = comps.size();
  std::vector<double> dp(n + 1, 0.0);
  std::vector<std::size_t> from(n + 1, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = j; i >= 1; --i) {
      const double piece = std::pow(comps[j - 1].right - comps[i - 1].left, alpha);
      if (piece >= best) break;  // the hull only grows as i decreases
      const double c = dp[i - 1] + piece;
      if (c < best) {
        best = c;
        from[j] = i;
      }
    }
    dp[j] = best;
  }
  CoverSolution sol;
  sol.alpha = alpha;
  sol.value = dp[n];
  sol.exact = true;
  for (std::size_t j = n; j >= 1; j = from[j] - 1)
    sol.intervals.push_back({comps[from[j] - 1].left, comps[j - 1].right});
  std::reverse(sol.intervals.begin(), sol.intervals.end());
  return sol;
}

namespace {

struct Quad {
  double cost = 0.0;
  std::vector<CoverBox> boxes;
};

Quad quad_cover(const std::vector<Complex>& pts, std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi,
                double cx, double cy, double half, int depth, double r, double alpha) {
  CoverBox box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t k = lo; k < hi; ++k) {
    const Complex p = pts[idx[k]];
    box.x0 = std::min(box.x0, p.real());
    box.y0 = std::min(box.y0, p.imag());
    box.x1 = std::max(box.x1, p.real());
    box.y1 = std::max(box.y1, p.imag());
  }
  Quad direct;
  direct.cost = std::pow(std::hypot(box.x1 - box.x0, box.y1 - box.y0) + 2.0 * r, alpha);
  direct.boxes.push_back(box);
  if (depth == 0 || hi - lo <= 1) return direct;

  // Split by quadrant: x then y.
  auto left_of = [&](std::size_t k) { return pts[k].real() < cx; };
  auto below = [&](std::size_t k) { return pts[k].imag() < cy; };
  const auto b = idx.begin();
  const std::size_t mx = std::partition(b + lo, b + hi, left_of) - b;
  const std::size_t m0 = std::partition(b + lo, b + mx, below) - b;
  const std::size_t m1 = std::partition(b + mx, b + hi, below) - b;
  const double q = 0.5 * half;
  const std::size_t cuts[5] = {lo, m0, mx, m1, hi};
  const double ox[4] = {cx - q, cx - q, cx + q, cx + q};
  const double oy[4] = {cy - q, cy + q, cy - q, cy + q};
  Quad split;
  for (int c = 0; c < 4; ++c) {
    if (cuts[c] == cuts[c + 1]) continue;
    Quad sub = quad_cover(pts, idx, cuts[c], cuts[c + 1], ox[c], oy[c], q, depth - 1, r, alpha);
    split.cost += sub.cost;
    if (split.cost >= direct.cost) return direct;
    split.boxes.insert(split.boxes.end(), sub.boxes.begin(), sub.boxes.end());
  }
  return split.cost < direct.cost ? split : direct;
}

}  // namespace

CoverSolution content_upper_2d(const std::vector<Complex>& points, double r, double alpha, int levels) {
  if (points.empty()) throw Error(ErrorCode::EmptyCoreSet, "content of an empty point set");
  if (!(alpha > 0.0) || r < 0.0 || levels < 0) throw Error(ErrorCode::InvalidArgument, "bad content parameters");
  double x0 = points[0].real(), x1 = x0, y0 = points[0].imag(), y1 = y0;
  for (const Complex& p : points) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  const double half = 0.5 * std::max({x1 - x0, y1 - y0, std::numeric_limits<double>::min()});
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  Quad q = quad_cover(points, idx, 0, idx.size(), 0.5 * (x0 + x1), 0.5 * (y0 + y1), half, levels, r, alpha);
  CoverSolution sol;
  sol.alpha = alpha;
  sol.value = q.cost;
  sol.exact = false;
  sol.boxes = std::move(q.boxes);
  return sol;
}

std::vector<Complex> boundary_image(const IntervalUnion& set, const ConformalMapSpec& map, int samples) {
  std::vector<Complex> out;
  const double total = set.total_length();
  for (const auto& s : set.components()) {
    out.push_back(eval_map(map, MapPart::BoundaryTrace, s.left));
    const int n = total > 0.0 ? static_cast<int>(std::ceil(samples * s.length() / total)) : 0;
    for (int k = 1; k < n; ++k) out.push_back(eval_map(map, MapPart::BoundaryTrace, s.left + s.length() * k / n));
    if (s.right > s.left) out.push_back(eval_map(map, MapPart::BoundaryTrace, s.right));
  }
  return out;
}

PushforwardEstimate pushforward_lower_2d(const FrostmanMeasure& mu, const ConformalMapSpec& map, double alpha,
                                         int ball_samples, int radii) {
  PushforwardEstimate est;
  const double total = mu.total_mass();
  if (!(total > 0.0) || ball_samples < 1 || radii < 1) return est;
  for (double x : singular_boundary_points(map))
    for (const auto& p : mu.pieces())
      if (p.density > 0.0 && p.segment.left <= x && x <= p.segment.right)
        throw Error(ErrorCode::SingularPoint, "measure support contains a branch point of the map");
  std::vector<Complex> atom;
  std::vector<double> mass;
  double spacing = 0.0;
  for (const auto& p : mu.pieces()) {
    const double m = p.density * p.segment.length();
    if (!(m > 0.0)) continue;
    const int n = std::max(1, static_cast<int>(std::lround(ball_samples * m / total)));
    const double h = p.segment.length() / n;
    Complex prev = eval_map(map, MapPart::BoundaryTrace, p.segment.left);
    for (int k = 0; k < n; ++k) {
      const Complex w = eval_map(map, MapPart::BoundaryTrace, p.segment.left + (k + 0.5) * h);
      spacing = std::max(spacing, 2.0 * std::abs(w - prev));
      prev = w;
      atom.push_back(w);
      mass.push_back(m / n);
    }
    spacing = std::max(spacing, 2.0 * std::abs(eval_map(map, MapPart::BoundaryTrace, p.segment.right) - prev));
  }
  est.atoms = atom.size();
  est.total_mass = total;
  if (atom.empty()) return est;

  // Exact diameter of the atoms: the whole image is one admissible set.
  std::vector<double> far(atom.size(), 0.0);
  parallel_for(atom.size(), [&](std::size_t i) {
    for (std::size_t k = i + 1; k < atom.size(); ++k) far[i] = std::max(far[i], std::abs(atom[k] - atom[i]));
  });
  const double diam = *std::max_element(far.begin(), far.end());
  if (!(diam > 0.0)) return est;
  double sup = total / std::pow(diam, alpha);
  const double rmin = std::min(spacing, 0.5 * diam);
  est.min_radius = rmin;
  std::vector<double> rad(static_cast<std::size_t>(radii));
  for (int k = 0; k < radii; ++k)
    rad[k] = radii == 1 ? 0.5 * diam : rmin * std::pow(0.5 * diam / rmin, static_cast<double>(k) / (radii - 1));

  // Per centre, atoms are binned by the first radius that reaches them.
  const double log_step = radii > 1 ? std::log(rad[radii - 1] / rad[0]) / (radii - 1) : 1.0;
  const std::size_t stride = std::max<std::size_t>(1, atom.size() / 1024);
  std::vector<std::size_t> centers;
  for (std::size_t k = 0; k < atom.size(); k += stride) centers.push_back(k);
  std::vector<double> best(centers.size(), 0.0);
  parallel_for(centers.size(), [&](std::size_t c) {
    const Complex z = atom[centers[c]];
    std::vector<double> bin(rad.size(), 0.0);
    for (std::size_t k = 0; k < atom.size(); ++k) {
      const double d = std::abs(atom[k] - z);
      if (d <= rad[0]) {
        bin[0] += mass[k];
        continue;
      }
      std::size_t b = static_cast<std::size_t>(std::max(1.0, std::ceil(std::log(d / rad[0]) / log_step)));
      if (b < rad.size() && d > rad[b]) ++b;
      if (b > 1 && d <= rad[b - 1]) --b;
      if (b < rad.size()) bin[b] += mass[k];
    }
    double acc = 0.0;
    for (std::size_t b = 0; b < rad.size(); ++b) {
      acc += bin[b];
      best[c] = std::max(best[c], acc / std::pow(2.0 * rad[b], alpha));
    }
  });
  for (double b : best) sup = std::max(sup, b);
  est.sup_ratio = sup;
  est.value = total / sup;
  return est;
}

}  // namespace jb
