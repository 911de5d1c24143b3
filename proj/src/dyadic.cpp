#include "jb/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "jb/error.hpp"

namespace jb {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// ---------------------------------------------------------------------------
// DyadicInterval

DyadicInterval::DyadicInterval(double base_left, double base_length, int depth, std::uint64_t index)
    : base_left_(base_left), base_length_(base_length), depth_(depth), index_(index) {
  if (!(base_length > 0.0)) throw Error(ErrorCode::InvalidArgument, "base length must be positive");
  if (depth < 0 || depth > 63) throw Error(ErrorCode::DepthExceeded, "depth " + std::to_string(depth));
  if (depth < 64 && index >= (std::uint64_t{1} << depth))
    throw Error(ErrorCode::InvalidArgument, "index out of range for depth");
}

double DyadicInterval::length() const { return std::ldexp(base_length_, -depth_); }

double DyadicInterval::left() const {
  return base_left_ + static_cast<double>(index_) * length();
}

double DyadicInterval::right() const {
  return base_left_ + static_cast<double>(index_ + 1) * length();
}

double DyadicInterval::center() const {
  return base_left_ + (static_cast<double>(index_) + 0.5) * length();
}

Point DyadicInterval::anchor() const { return {center(), length()}; }

std::pair<DyadicInterval, DyadicInterval> DyadicInterval::children(int max_depth) const {
  if (depth_ + 1 > max_depth)
    throw Error(ErrorCode::DepthExceeded, "cannot subdivide beyond depth " + std::to_string(max_depth));
  return {child(0), child(1)};
}

DyadicInterval DyadicInterval::child(int bit) const {
  if (depth_ + 1 > kMaxDyadicDepth)
    throw Error(ErrorCode::DepthExceeded, "cannot subdivide beyond depth " + std::to_string(kMaxDyadicDepth));
  return {base_left_, base_length_, depth_ + 1, 2 * index_ + static_cast<std::uint64_t>(bit & 1)};
}

DyadicInterval DyadicInterval::parent() const {
  if (depth_ == 0) return *this;
  return {base_left_, base_length_, depth_ - 1, index_ >> 1};
}

bool DyadicInterval::is_ancestor_of(const DyadicInterval& other) const {
  if (base_left_ != other.base_left_ || base_length_ != other.base_length_) return false;
  if (other.depth_ <= depth_) return false;
  return (other.index_ >> (other.depth_ - depth_)) == index_;
}

DyadicInterval DyadicInterval::descendant_containing(double x, int d) const {
  if (d < depth_) throw Error(ErrorCode::InvalidArgument, "descendant depth above interval depth");
  if (d > kMaxDyadicDepth) throw Error(ErrorCode::DepthExceeded, "descendant depth " + std::to_string(d));
  const int rel = d - depth_;
  const double t = (x - left()) / length();
  const double cells = std::ldexp(1.0, rel);
  double k = std::floor(t * cells);
  k = std::clamp(k, 0.0, cells - 1.0);
  return {base_left_, base_length_, d, (index_ << rel) + static_cast<std::uint64_t>(k)};
}

bool operator<(const DyadicInterval& a, const DyadicInterval& b) {
  const double la = a.left();
  const double lb = b.left();
  if (la != lb) return la < lb;
  return a.depth_ < b.depth_;
}

// ---------------------------------------------------------------------------
// IntervalUnion

IntervalUnion::IntervalUnion(std::vector<Segment> pieces) {
  std::erase_if(pieces, [](const Segment& s) { return !(s.right >= s.left); });
  std::sort(pieces.begin(), pieces.end(),
            [](const Segment& a, const Segment& b) { return a.left < b.left; });
  for (const Segment& s : pieces) {
    if (!components_.empty() && s.left <= components_.back().right) {
      components_.back().right = std::max(components_.back().right, s.right);
    } else {
      components_.push_back(s);
    }
  }
}

double IntervalUnion::total_length() const {
  double sum = 0.0;
  for (const Segment& s : components_) sum += s.length();
  return sum;
}

bool IntervalUnion::contains(double x) const {
  auto it = std::upper_bound(components_.begin(), components_.end(), x,
                             [](double v, const Segment& s) { return v < s.left; });
  if (it == components_.begin()) return false;
  return x <= std::prev(it)->right;
}

double IntervalUnion::distance(double x) const {
  if (components_.empty()) throw Error(ErrorCode::EmptyCoreSet, "distance to an empty set");
  auto it = std::upper_bound(components_.begin(), components_.end(), x,
                             [](double v, const Segment& s) { return v < s.left; });
  double best = std::numeric_limits<double>::infinity();
  if (it != components_.end()) best = it->left - x;
  if (it != components_.begin()) {
    const Segment& s = *std::prev(it);
    best = std::min(best, x <= s.right ? 0.0 : x - s.right);
  }
  return best;
}

double IntervalUnion::overlap(double a, double b) const {
  double sum = 0.0;
  for (const Segment& s : components_) {
    if (s.left >= b) break;
    const double lo = std::max(a, s.left);
    const double hi = std::min(b, s.right);
    if (hi > lo) sum += hi - lo;
  }
  return sum;
}

bool IntervalUnion::is_subset_of(const IntervalUnion& other, double tol) const {
  for (const Segment& s : components_) {
    bool covered = false;
    for (const Segment& o : other.components_) {
      if (s.left >= o.left - tol && s.right <= o.right + tol) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& other) const {
  std::vector<Segment> all(components_.begin(), components_.end());
  all.insert(all.end(), other.components_.begin(), other.components_.end());
  return IntervalUnion(std::move(all));
}

IntervalUnion IntervalUnion::scaled(double lambda, double shift) const {
  std::vector<Segment> out;
  out.reserve(components_.size());
  for (const Segment& s : components_) out.push_back({lambda * s.left + shift, lambda * s.right + shift});
  return IntervalUnion(std::move(out));
}

std::string IntervalUnion::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  for (const Segment& s : components_) os << s.left << ',' << s.right << '\n';
  return os.str();
}

IntervalUnion IntervalUnion::from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<Segment> pieces;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::InvalidArgument, "bad interval row: " + line);
    pieces.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return IntervalUnion(std::move(pieces));
}

// ---------------------------------------------------------------------------
// SawtoothRegion

namespace {

double point_segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

}  // namespace

SawtoothRegion::SawtoothRegion(DyadicInterval base, IntervalUnion core, double y0)
    : base_(base), core_(std::move(core)), y0_(y0) {
  if (core_.empty()) throw Error(ErrorCode::EmptyCoreSet, "sawtooth core set is empty");
  const double a = base_.left();
  const double b = base_.right();
  // Clip the core to the base; the floor graph only lives over the base.
  std::vector<Segment> clipped;
  for (const Segment& s : core_.components()) {
    const double lo = std::max(s.left, a);
    const double hi = std::min(s.right, b);
    if (hi >= lo) clipped.push_back({lo, hi});
  }
  if (clipped.empty()) throw Error(ErrorCode::EmptyCoreSet, "core set misses the base interval");
  floor_.push_back({a, clipped.front().left - a});
  for (std::size_t i = 0; i < clipped.size(); ++i) {
    if (i > 0) {
      const double m = 0.5 * (clipped[i - 1].right + clipped[i].left);
      floor_.push_back({m, m - clipped[i - 1].right});
    }
    floor_.push_back({clipped[i].left, 0.0});
    floor_.push_back({clipped[i].right, 0.0});
  }
  floor_.push_back({b, b - clipped.back().right});
}

bool SawtoothRegion::contains(Point p) const {
  if (!base_.contains(p.x)) return false;
  return core_.distance(p.x) <= p.y && p.y < y0_;
}

double SawtoothRegion::boundary_distance(Point p) const {
  const double a = base_.left();
  const double b = base_.right();
  double best = std::min({y0_ - p.y, p.x - a, b - p.x});
  // Floor polyline: vertices sorted by x, and any segment is at least |dx| away.
  const auto& v = floor_;
  auto it = std::lower_bound(v.begin(), v.end(), p.x, [](const Point& q, double x) { return q.x < x; });
  const std::size_t hi = static_cast<std::size_t>(it - v.begin());
  for (std::size_t i = hi; i + 1 < v.size(); ++i) {
    if (v[i].x - p.x > best) break;
    best = std::min(best, point_segment_distance(p, v[i], v[i + 1]));
  }
  for (std::size_t i = std::min(hi, v.size() - 1); i-- > 0;) {
    if (p.x - v[i + 1].x > best) break;
    best = std::min(best, point_segment_distance(p, v[i], v[i + 1]));
  }
  return std::max(best, 0.0);
}

SawtoothDistance sawtooth_distance(const SawtoothRegion& region, Point p) {
  const double d = region.core_distance(p.x);
  const bool member = region.base().contains(p.x) && d <= p.y && p.y < region.y0();
  return {d, member};
}

// ---------------------------------------------------------------------------
// Intrinsic distance on a grid graph

double intrinsic_distance(const SawtoothRegion& region, Point p, Point q, double resolution) {
  if (!region.contains(p) || !region.contains(q))
    throw Error(ErrorCode::OutOfDomain, "intrinsic distance endpoints must lie in the region");
  if (p.x == q.x && p.y == q.y) return 0.0;
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");

  const double x0 = region.base().left();
  const double width = region.base().length();
  const int nx = static_cast<int>(std::ceil(width / resolution)) + 1;
  const int ny = static_cast<int>(std::ceil(region.y0() / resolution)) + 1;
  const double hx = width / (nx - 1);
  const double hy = region.y0() / (ny - 1);
  auto node_point = [&](int i, int j) { return Point{x0 + i * hx, j * hy}; };
  auto inside = [&](Point s) { return region.contains(s); };

  std::vector<char> alive(static_cast<std::size_t>(nx) * ny, 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) alive[static_cast<std::size_t>(j) * nx + i] = inside(node_point(i, j));

  auto snap = [&](Point s) -> std::size_t {
    const int ci = static_cast<int>(std::lround((s.x - x0) / hx));
    const int cj = static_cast<int>(std::lround(s.y / hy));
    std::size_t best = alive.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (int dj = -2; dj <= 2; ++dj)
      for (int di = -2; di <= 2; ++di) {
        const int i = ci + di;
        const int j = cj + dj;
        if (i < 0 || j < 0 || i >= nx || j >= ny) continue;
        const std::size_t k = static_cast<std::size_t>(j) * nx + i;
        if (!alive[k]) continue;
        const double d = distance(s, node_point(i, j));
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
    return best;
  };
  const std::size_t src = snap(p);
  const std::size_t dst = snap(q);
  if (src == alive.size() || dst == alive.size())
    throw Error(ErrorCode::ResolutionTooCoarse, "endpoint has no grid node nearby");

  std::vector<std::pair<int, int>> stencil;
  for (int dj = -3; dj <= 3; ++dj)
    for (int di = -3; di <= 3; ++di)
      if ((di != 0 || dj != 0) && std::gcd(std::abs(di), std::abs(dj)) == 1) stencil.emplace_back(di, dj);

  std::vector<double> dist(alive.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[src] = 0.0;
  heap.emplace(0.0, src);
  while (!heap.empty()) {
    auto [d, k] = heap.top();
    heap.pop();
    if (d > dist[k]) continue;
    if (k == dst) break;
    const int i = static_cast<int>(k % nx);
    const int j = static_cast<int>(k / nx);
    const Point a = node_point(i, j);
    for (auto [di, dj] : stencil) {
      const int ii = i + di;
      const int jj = j + dj;
      if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
      const std::size_t kk = static_cast<std::size_t>(jj) * nx + ii;
      if (!alive[kk]) continue;
      const Point b = node_point(ii, jj);
      // Long edges must not jump across a tooth.
      bool ok = true;
      for (int s = 1; s < 4 && ok; ++s) {
        const double t = s / 4.0;
        ok = inside({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
      }
      if (!ok) continue;
      const double nd = d + distance(a, b);
      if (nd < dist[kk]) {
        dist[kk] = nd;
        heap.emplace(nd, kk);
      }
    }
  }
  if (!std::isfinite(dist[dst]))
    throw Error(ErrorCode::ResolutionTooCoarse, "endpoints are disconnected at this resolution");
  const Point ps = node_point(static_cast<int>(src % nx), static_cast<int>(src / nx));
  const Point qs = node_point(static_cast<int>(dst % nx), static_cast<int>(dst / nx));
  return distance(p, ps) + dist[dst] + distance(qs, q);
}

}  // namespace jb
