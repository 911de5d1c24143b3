#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace jb {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

/// Deepest subdivision level accepted by DyadicInterval::children(). Indices
/// are 64-bit, and 2^-60 of a unit base is still a normal double.
inline constexpr int kMaxDyadicDepth = 60;

/// An interval of the binary subdivision tree of a base interval.
///
/// Stored as (depth, index) over the base so that repeated bisection never
/// accumulates endpoint error: left() is recomputed from the base every time.
class DyadicInterval {
 public:
  DyadicInterval() = default;
  DyadicInterval(double base_left, double base_length, int depth = 0, std::uint64_t index = 0);

  double base_left() const { return base_left_; }
  double base_length() const { return base_length_; }
  int depth() const { return depth_; }
  std::uint64_t index() const { return index_; }

  double length() const;
  double left() const;
  double right() const;
  double center() const;
  /// z_I: the point above the center at height |I|.
  Point anchor() const;

  /// Throws DepthExceeded past max_depth.
  std::pair<DyadicInterval, DyadicInterval> children(int max_depth = kMaxDyadicDepth) const;
  DyadicInterval child(int bit) const;
  DyadicInterval parent() const;
  /// The base interval itself (depth 0).
  DyadicInterval root() const { return {base_left_, base_length_}; }

  bool contains(double x) const { return x >= left() && x <= right(); }
  /// Strict ancestry within the same base.
  bool is_ancestor_of(const DyadicInterval& other) const;
  /// The depth-`d` descendant (d >= depth) that contains x; half-open cells.
  DyadicInterval descendant_containing(double x, int d) const;

  friend bool operator==(const DyadicInterval& a, const DyadicInterval& b) {
    return a.base_left_ == b.base_left_ && a.base_length_ == b.base_length_ && a.depth_ == b.depth_ &&
           a.index_ == b.index_;
  }
  /// Left-to-right, then shallower first.
  friend bool operator<(const DyadicInterval& a, const DyadicInterval& b);

 private:
  double base_left_ = 0.0;
  double base_length_ = 1.0;
  int depth_ = 0;
  std::uint64_t index_ = 0;
};

/// Q(I): the open square above I with side |I|.
struct CarlesonSquare {
  DyadicInterval interval;

  bool contains(Point p) const {
    return interval.contains(p.x) && p.y > 0.0 && p.y < interval.length();
  }
  double side() const { return interval.length(); }
};

struct Segment {
  double left = 0.0;
  double right = 0.0;
  double length() const { return right - left; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Sorted union of pairwise disjoint closed intervals.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  /// Sorts and merges overlapping or touching pieces.
  explicit IntervalUnion(std::vector<Segment> pieces);

  std::span<const Segment> components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  bool empty() const { return components_.empty(); }
  double total_length() const;
  double hull_left() const { return components_.front().left; }
  double hull_right() const { return components_.back().right; }

  bool contains(double x) const;
  /// Exact Euclidean distance from x to the union. Empty unions throw EmptyCoreSet.
  double distance(double x) const;
  /// Lebesgue measure of the union intersected with [a, b].
  double overlap(double a, double b) const;
  bool is_subset_of(const IntervalUnion& other, double tol = 0.0) const;

  IntervalUnion unite(const IntervalUnion& other) const;
  IntervalUnion scaled(double lambda, double shift) const;

  /// "left,right" rows.
  std::string to_csv() const;
  static IntervalUnion from_csv(const std::string& text);

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  std::vector<Segment> components_;
};

/// S(E) = {(x, y) : x in base, d(x, E) <= y < y0}.
class SawtoothRegion {
 public:
  SawtoothRegion(DyadicInterval base, IntervalUnion core, double y0);

  const DyadicInterval& base() const { return base_; }
  const IntervalUnion& core() const { return core_; }
  double y0() const { return y0_; }

  /// d(x, E); depends only on x.
  double core_distance(double x) const { return core_.distance(x); }
  bool contains(Point p) const;
  /// Euclidean distance from an interior point to the boundary of S(E).
  double boundary_distance(Point p) const;
  /// Vertices of the lower boundary graph x -> d(x, E) over the base.
  const std::vector<Point>& floor_polyline() const { return floor_; }

 private:
  DyadicInterval base_;
  IntervalUnion core_;
  double y0_;
  std::vector<Point> floor_;
};

struct SawtoothDistance {
  double distance;
  bool member;
};

SawtoothDistance sawtooth_distance(const SawtoothRegion& region, Point p);

/// Shortest-path length between p and q inside the region, on a grid graph
/// with spacing `resolution`. The stencil joins each node to every node at
/// offset (dx, dy) with max(|dx|, |dy|) <= 3 and gcd(dx, dy) = 1, so the grid
/// metric overestimates straight segments by at most 0.7%; snapping p and q to
/// grid nodes adds at most resolution*sqrt(2). Overall the value lies within a
/// factor (1 + 2*resolution / min(d(p), d(q))) of the intrinsic distance once
/// the region is resolved (c = 2).
double intrinsic_distance(const SawtoothRegion& region, Point p, Point q, double resolution);

}  // namespace jb
