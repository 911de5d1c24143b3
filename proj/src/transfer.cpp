#include "jb/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jb/error.hpp"
#include "jb/parallel.hpp"

namespace jb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double segment_distance(Complex w, Complex a, Complex b) {
  const Complex d = b - a;
  const double n = std::norm(d);
  const double t = n > 0.0 ? std::clamp(((w - a) * std::conj(d)).real() / n, 0.0, 1.0) : 0.0;
  return std::abs(w - (a + t * d));
}

Complex map_point(const ConformalMapSpec& map, Point p) {
  return p.y == 0.0 ? eval_map(map, MapPart::BoundaryTrace, Complex(p.x, 0.0))
                    : eval_map(map, MapPart::F, Complex(p.x, p.y));
}

}  // namespace

DomainApprox::DomainApprox(std::vector<Complex> loop) : loop_(std::move(loop)) {
  if (loop_.size() < 3) throw Error(ErrorCode::InvalidArgument, "a domain polygon needs three vertices");
  index();
}

DomainApprox DomainApprox::disk(Complex center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "disk radius must be positive");
  DomainApprox d;
  d.disk_ = true;
  d.center_ = center;
  d.radius_ = radius;
  d.lo_ = center - Complex(radius, radius);
  d.hi_ = center + Complex(radius, radius);
  return d;
}

void DomainApprox::index() {
  const std::size_t n = loop_.size();
  lo_ = hi_ = loop_[0];
  for (const Complex& w : loop_) {
    lo_ = {std::min(lo_.real(), w.real()), std::min(lo_.imag(), w.imag())};
    hi_ = {std::max(hi_.real(), w.real()), std::max(hi_.imag(), w.imag())};
  }
  for (std::size_t k = 0; k < n; ++k) pitch_ = std::max(pitch_, std::abs(loop_[(k + 1) % n] - loop_[k]));
  const double ext = std::max({hi_.real() - lo_.real(), hi_.imag() - lo_.imag(), std::numeric_limits<double>::min()});
  const int side = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(n))), 1, 1024);
  cell_ = ext / side;
  nx_ = std::max(1, static_cast<int>(std::ceil((hi_.real() - lo_.real()) / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil((hi_.imag() - lo_.imag()) / cell_)));
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  auto cx = [&](double x) { return std::clamp(static_cast<int>((x - lo_.real()) / cell_), 0, nx_ - 1); };
  auto cy = [&](double y) { return std::clamp(static_cast<int>((y - lo_.imag()) / cell_), 0, ny_ - 1); };
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a = loop_[k], b = loop_[(k + 1) % n];
    for (int i = cx(std::min(a.real(), b.real())); i <= cx(std::max(a.real(), b.real())); ++i)
      for (int j = cy(std::min(a.imag(), b.imag())); j <= cy(std::max(a.imag(), b.imag())); ++j)
        buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(k);
  }
}

bool DomainApprox::contains(Complex w) const {
  if (disk_) return std::abs(w - center_) < radius_;
  if (w.real() < lo_.real() || w.real() > hi_.real() || w.imag() < lo_.imag() || w.imag() > hi_.imag()) return false;
  // Crossing number of a ray to the right; every segment crossing the ray
  // lies in a cell of w's row at or right of w.
  const int j = std::clamp(static_cast<int>((w.imag() - lo_.imag()) / cell_), 0, ny_ - 1);
  const int i0 = std::clamp(static_cast<int>((w.real() - lo_.real()) / cell_), 0, nx_ - 1);
  std::vector<std::size_t> seen;
  bool inside = false;
  const std::size_t n = loop_.size();
  for (int i = i0; i < nx_; ++i)
    for (std::size_t k : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
      if (std::find(seen.begin(), seen.end(), k) != seen.end()) continue;
      seen.push_back(k);
      const Complex a = loop_[k], b = loop_[(k + 1) % n];
      if ((a.imag() > w.imag()) == (b.imag() > w.imag())) continue;
      const double x = a.real() + (w.imag() - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real());
      if (x > w.real()) inside = !inside;
    }
  return inside;
}

double DomainApprox::boundary_distance(Complex w) const {
  if (disk_) return std::abs(radius_ - std::abs(w - center_));
  const std::size_t n = loop_.size();
  const bool outside_box =
      w.real() < lo_.real() || w.real() > hi_.real() || w.imag() < lo_.imag() || w.imag() > hi_.imag();
  double best = kInf;
  if (outside_box) {
    for (std::size_t k = 0; k < n; ++k) best = std::min(best, segment_distance(w, loop_[k], loop_[(k + 1) % n]));
    return best;
  }
  const int i0 = std::clamp(static_cast<int>((w.real() - lo_.real()) / cell_), 0, nx_ - 1);
  const int j0 = std::clamp(static_cast<int>((w.imag() - lo_.imag()) / cell_), 0, ny_ - 1);
  const int rings = std::max(nx_, ny_);
  for (int r = 0; r <= rings; ++r) {
    // Cells outside ring r-1 are at least (r - 1) cells away.
    if (best <= (r - 1) * cell_) break;
    for (int j = j0 - r; j <= j0 + r; ++j) {
      if (j < 0 || j >= ny_) continue;
      const bool edge_row = j == j0 - r || j == j0 + r;
      for (int i = i0 - r; i <= i0 + r; i += edge_row ? 1 : 2 * r) {
        if (i >= 0 && i < nx_)
          for (std::size_t k : buckets_[static_cast<std::size_t>(j) * nx_ + i])
            best = std::min(best, segment_distance(w, loop_[k], loop_[(k + 1) % n]));
        if (r == 0) break;
      }
    }
  }
  return best;
}

DomainApprox DomainApprox::image_of(const SawtoothRegion& region, const ConformalMapSpec& map, double pitch) {
  if (!(pitch > 0.0)) throw Error(ErrorCode::InvalidArgument, "pitch must be positive");
  const double a = region.base().left(), b = region.base().right(), y0 = region.y0();
  const double h = pitch * y0;
  std::vector<Point> ring;
  auto add = [&](Point p, Point q) {
    const int m = std::max(1, static_cast<int>(std::ceil(std::hypot(q.x - p.x, q.y - p.y) / h)));
    for (int k = 0; k < m; ++k) ring.push_back({p.x + (q.x - p.x) * k / m, p.y + (q.y - p.y) * k / m});
  };
  const auto& fl = region.floor_polyline();
  for (std::size_t k = 0; k + 1 < fl.size(); ++k) add(fl[k], fl[k + 1]);
  const Point bottom_right = fl.empty() ? Point{b, 0.0} : fl.back();
  const Point bottom_left = fl.empty() ? Point{a, 0.0} : fl.front();
  add(bottom_right, {b, y0});
  add({b, y0}, {a, y0});
  add({a, y0}, bottom_left);
  std::vector<Complex> loop;
  loop.reserve(ring.size());
  for (const Point& p : ring) {
    const Complex w = map_point(map, p);
    if (loop.empty() || w != loop.back()) loop.push_back(w);
  }
  DomainApprox d(std::move(loop));
  return d;
}

Point john_center(const SawtoothRegion& region) {
  return {region.base().center(), 0.5 * region.y0()};
}

std::vector<Point> john_curve(const SawtoothRegion& region, Point z, Point center) {
  if (!region.contains(z)) throw Error(ErrorCode::OutOfDomain, "curve start outside the region");
  const DyadicInterval& base = region.base();
  const IntervalUnion& E = region.core();
  auto meets = [&](const DyadicInterval& I) { return !E.empty() && E.distance(I.center()) <= 0.5 * I.length(); };
  std::vector<Point> pts{z};
  const int top = base.depth() + 1;
  const DyadicInterval half = base.descendant_containing(z.x, top);
  if (z.y <= half.length() && meets(half)) {
    int d = top;
    while (d < kMaxDyadicDepth && base.length() * std::ldexp(1.0, -(d + 1 - base.depth())) >= z.y) ++d;
    DyadicInterval I = base.descendant_containing(z.x, d);
    while (!meets(I)) I = I.parent();
    Point p = z;
    for (;;) {
      // Up at 45 degrees towards z_I, then straight on: d(., E) is
      // 1-Lipschitz, so the diagonal never drops below the floor.
      const double h = I.length(), c = I.center();
      const double t = std::min(std::abs(c - p.x), h - p.y);
      if (t > 0.0) pts.push_back(p = {p.x + std::copysign(t, c - p.x), p.y + t});
      if (p.x != c || p.y != h) pts.push_back(p = {c, h});
      if (I.depth() <= top) break;
      I = I.parent();
    }
  }
  if (pts.back().x != center.x || pts.back().y != center.y) pts.push_back(center);
  return pts;
}

JohnCurveSample map_curve(const std::vector<Point>& polyline, const ConformalMapSpec& map, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  JohnCurveSample s;
  if (polyline.empty()) return s;
  s.start = polyline.front();
  s.polyline = polyline;
  s.image.push_back(map_point(map, polyline.front()));
  for (std::size_t k = 0; k + 1 < polyline.size(); ++k) {
    const Point p = polyline[k], q = polyline[k + 1];
    const double len = std::hypot(q.x - p.x, q.y - p.y);
    s.length += len;
    const int m = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int i = 1; i <= m; ++i) {
      const Complex w = map_point(map, {p.x + (q.x - p.x) * i / m, p.y + (q.y - p.y) * i / m});
      s.image_length += std::abs(w - s.image.back());
      s.image.push_back(w);
    }
  }
  return s;
}

namespace {

std::vector<Point> grid_starts(const SawtoothRegion& region, int sample_count, double y_floor, double& pitch) {
  const int n = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(std::max(1, sample_count))))));
  const double a = region.base().left(), w = region.base().length(), y0 = region.y0();
  pitch = w / n;
  std::vector<Point> out;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Point z{a + (i + 0.5) * w / n, (j + 0.5) * y0 / n};
      if (z.y >= y_floor && region.contains(z)) out.push_back(z);
    }
  return out;
}

struct Walked {
  Point p;
  double length;  // from the start
  double d;       // boundary distance in S
};

// Points along the curve, spaced by max(pitch/8, d/4) so the ratio is
// resolved near the boundary and coarse far from it.
std::vector<Walked> walk(const SawtoothRegion& region, const std::vector<Point>& curve, double pitch) {
  std::vector<Walked> out;
  double acc = 0.0;
  auto visit = [&](Point p, double l) {
    if (!region.contains(p)) {
      const double tol = 1e-12 * region.y0();
      const bool on_edge = region.base().left() - tol <= p.x && p.x <= region.base().right() + tol &&
                           region.core_distance(p.x) <= p.y + tol && p.y < region.y0();
      if (!on_edge)
        throw Error(ErrorCode::CurveEscape, "John curve leaves the region at (" + std::to_string(p.x) + ", " +
                                                std::to_string(p.y) + ")");
    }
    const double d = region.boundary_distance(p);
    out.push_back({p, l, d});
    return d;
  };
  double d = visit(curve.front(), 0.0);
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const Point p = curve[k], q = curve[k + 1];
    const double len = std::hypot(q.x - p.x, q.y - p.y);
    double t = 0.0;
    while (t < len) {
      t = std::min(len, t + std::max(pitch / 8.0, 0.25 * d));
      const double s = t / len;
      d = visit({p.x + (q.x - p.x) * s, p.y + (q.y - p.y) * s}, acc + t);
    }
    acc += len;
  }
  return out;
}

void take_max(JohnConstant& jc, double ratio, Point start, Point at) {
  if (ratio > jc.C) {
    jc.C = ratio;
    jc.worst_start = start;
    jc.worst_point = at;
  }
}

}  // namespace

JohnConstant john_constant(const SawtoothRegion& region, Point center, int sample_count, double y_floor) {
  if (!region.contains(center)) throw Error(ErrorCode::OutOfDomain, "John centre outside the region");
  double pitch = 0.0;
  const auto starts = grid_starts(region, sample_count, y_floor, pitch);
  std::vector<JohnConstant> part(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) {
    const auto pts = walk(region, john_curve(region, starts[k], center), pitch);
    part[k].points = pts.size();
    for (std::size_t i = 1; i < pts.size(); ++i)
      take_max(part[k], pts[i].d > 0.0 ? pts[i].length / pts[i].d : kInf, starts[k], pts[i].p);
  });
  JohnConstant jc;
  jc.resolution = pitch / region.base().length();
  jc.curves = starts.size();
  for (const auto& p : part) {
    take_max(jc, p.C, p.worst_start, p.worst_point);
    jc.points += p.points;
  }
  return jc;
}

JohnConstant image_john_constant(const SawtoothRegion& region, Point center, const ConformalMapSpec& map,
                                 const DomainApprox& image, int sample_count, double y_floor) {
  if (!region.contains(center)) throw Error(ErrorCode::OutOfDomain, "John centre outside the region");
  double pitch = 0.0;
  const auto starts = grid_starts(region, sample_count, y_floor, pitch);
  std::vector<JohnConstant> part(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) {
    const auto pts = walk(region, john_curve(region, starts[k], center), pitch);
    part[k].points = pts.size();
    Complex prev = map_point(map, pts[0].p);
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const Complex w = map_point(map, pts[i].p);
      len += std::abs(w - prev);
      prev = w;
      const double d = image.boundary_distance(w);
      if (!image.contains(w) && d > image.pitch())
        throw Error(ErrorCode::CurveEscape, "image curve leaves the image domain");
      take_max(part[k], d > 0.0 ? len / d : kInf, starts[k], pts[i].p);
    }
  });
  JohnConstant jc;
  jc.resolution = pitch / region.base().length();
  jc.curves = starts.size();
  for (const auto& p : part) {
    take_max(jc, p.C, p.worst_start, p.worst_point);
    jc.points += p.points;
  }
  return jc;
}

Lemma33Report verify_lemma33(const HarmonicSource& src, const GenerationTree& tree, double alpha,
                             const Lemma33Params& params) {
  const ConformalMapSpec* map = src.map_spec();
  if (!map) throw Error(ErrorCode::UnsupportedSource, "content transfer needs a conformal catalog source");
  Lemma33Report rep;
  rep.level = static_cast<int>(tree.levels.size()) - 1;
  rep.alpha = alpha;
  rep.M = tree.M;
  rep.ratio_floor = params.ratio_floor;
  const IntervalUnion E = extract_E(tree, rep.level);
  const FrostmanMeasure mu = build_measure(tree, rep.level);

  rep.lower = pushforward_lower_2d(mu, *map, alpha).value;
  // Upper bound: cover the half-gap neighbourhood of sampled points of f(E_n).
  std::vector<Complex> pts;
  double gap = 0.0;
  const double total = E.total_length();
  for (const auto& s : E.components()) {
    const int m = total > 0.0 ? std::max(1, static_cast<int>(std::ceil(params.image_samples * s.length() / total))) : 1;
    const auto piece = boundary_image(IntervalUnion({s}), *map, m);
    for (std::size_t k = 1; k < piece.size(); ++k) gap = std::max(gap, std::abs(piece[k] - piece[k - 1]));
    pts.insert(pts.end(), piece.begin(), piece.end());
  }
  rep.upper = content_upper_2d(pts, 0.5 * gap, alpha, 14).value;
  rep.sandwich_pass = rep.lower <= rep.upper;

  const Point z0 = tree.base.anchor();
  rep.fprime_z0 = std::abs(eval_map(*map, MapPart::FPrime, Complex(z0.x, z0.y)));
  rep.content_E = content_1d(E, alpha).value;
  rep.ratio = rep.lower / (std::pow(rep.fprime_z0, alpha) * rep.content_E);
  rep.ratio_pass = rep.ratio >= params.ratio_floor;

  const SawtoothRegion region(tree.base, E, tree.base.length());
  const Point center = john_center(region);
  const double floor = global_floor(tree, rep.level);
  rep.john_preimage = john_constant(region, center, params.john_samples, floor).C;
  const DomainApprox image = DomainApprox::image_of(region, *map, params.pitch);
  rep.john_image = image_john_constant(region, center, *map, image, params.john_samples, floor).C;

  // Distortion and length bridge along the curves.
  rep.distortion_bound = 2.0 * tree.M + 30.0;
  rep.length_bound = std::exp(rep.distortion_bound);
  double pitch = 0.0;
  const auto starts = grid_starts(region, params.john_samples, floor, pitch);
  const double log0 = std::log(rep.fprime_z0);
  std::vector<double> dist(starts.size(), 0.0), lens(starts.size(), 0.0);
  parallel_for(starts.size(), [&](std::size_t k) {
    const auto curve = john_curve(region, starts[k], center);
    const auto s = map_curve(curve, *map, pitch / 8.0);
    lens[k] = s.length > 0.0 ? s.image_length / (rep.fprime_z0 * s.length) : 0.0;
    for (const auto& pt : walk(region, curve, pitch))
      if (pt.p.y > 0.0) {
        const double lf = std::log(std::abs(eval_map(*map, MapPart::FPrime, Complex(pt.p.x, pt.p.y))));
        dist[k] = std::max(dist[k], std::abs(lf - log0));
      }
  });
  for (std::size_t k = 0; k < starts.size(); ++k) {
    rep.max_log_distortion = std::max(rep.max_log_distortion, dist[k]);
    rep.max_length_ratio = std::max(rep.max_length_ratio, lens[k]);
  }
  rep.distortion_pass = rep.max_log_distortion <= rep.distortion_bound && rep.max_length_ratio <= rep.length_bound;
  rep.pass = rep.sandwich_pass && rep.ratio_pass && rep.distortion_pass && std::isfinite(rep.john_image);
  return rep;
}

EndToEndReport theorem11_endtoend(const HarmonicSource& src, Complex z, double alpha, const EndToEndParams& params) {
  const ConformalMapSpec* map = src.map_spec();
  if (!map) throw Error(ErrorCode::UnsupportedSource, "the end-to-end run needs a conformal catalog source");
  EndToEndReport rep;
  rep.z = z;
  rep.z0 = inverse_map(*map, z);
  const double y0 = rep.z0.imag();
  if (!(y0 > 0.0)) throw Error(ErrorCode::OutOfDomain, "z has no preimage in the upper half-plane");
  const DyadicInterval base(rep.z0.real() - 0.5 * y0, y0);
  const double M = params.M > 0.0 ? params.M : M_min(alpha);
  rep.tree = build(src, base, alpha, M, params.n_max, params.build);
  rep.lemma = verify_lemma33(src, rep.tree, alpha, params.transfer);
  rep.d_omega = image_boundary_distance(*map, z);
  rep.lower = rep.lemma.lower;
  rep.c = rep.lower / std::pow(rep.d_omega, alpha);

  // Straight segment from z0 down to the nearest point of E_n: it stays in
  // the cone over that point, so inside S(E_n).
  const IntervalUnion E = extract_E(rep.tree, rep.lemma.level);
  const double x0 = rep.z0.real();
  double e = E.hull_left();
  for (const auto& s : E.components()) {
    const double c = std::clamp(x0, s.left, s.right);
    if (std::abs(c - x0) < std::abs(e - x0)) e = c;
  }
  const auto curve = map_curve({{x0, y0}, {e, 0.0}}, *map, y0 / 4096.0);
  rep.curve_length = curve.image_length;
  rep.curve_length_bound = std::exp(2.0 * M + 30.0) * rep.lemma.fprime_z0 * curve.length;
  rep.pass = rep.lemma.pass && rep.lower > 0.0 && rep.curve_length <= rep.curve_length_bound;
  return rep;
}

}  // namespace jb
