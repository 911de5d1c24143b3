#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "jb/dyadic.hpp"

namespace jb {

/// Node value and generator state while walking down the dyadic tree.
struct MartingaleCursor {
  DyadicInterval node;
  double value = 0.0;
  std::uint32_t state = 0;
  std::uint32_t aux = 0;
  int level = 0;
  int sign = 1;
  bool quiet = false;  // no nonzero increment anywhere below this node
};

/// Increments listed node by node. Unlisted nodes have increment 0.
struct ExplicitIncrements {
  struct Entry {
    int depth = 0;
    std::uint64_t index = 0;
    double value = 0.0;
  };
  std::vector<Entry> entries;
};

/// Children of every node above `depth` receive +s*B and -s*B, with the sign
/// s drawn from a hash of (seed, parent). Node value is the children's mean.
struct BalancedGenerator {
  std::uint64_t seed = 0;
  int depth = 8;
};

/// Engineered bad intervals with exactly controlled families.
///
/// Each construction level with sign s (alternating +, -, +, ...) spans three
/// dyadic steps of size B relative to the level node I, with M = 3B:
///   - the left grandchild's two children reach u(z_I) + 3sB: they are the
///     whole of F^s(I), total length |I|/4, and start the next level;
///   - every other vertical line drifts to u(z_I) - 5sB and then freezes, so
///     F^{-s}(I) has total length 3|I|/4 and those lines leave G(I).
/// After `levels` levels the tree goes quiet.
struct CascadeGenerator {
  int levels = 6;
};

class MartingaleModel {
 public:
  using Generator = std::variant<ExplicitIncrements, BalancedGenerator, CascadeGenerator>;

  MartingaleModel(DyadicInterval base, double root_value, double step_bound, Generator generator);

  const DyadicInterval& base() const { return base_; }
  double root_value() const { return root_value_; }
  double step_bound() const { return step_bound_; }
  const Generator& generator() const { return generator_; }
  /// Depth below which every increment is zero.
  int data_depth() const { return data_depth_; }
  /// Threshold M that the cascade generator is engineered for (3B).
  double cascade_threshold() const { return 3.0 * step_bound_; }

  MartingaleCursor root_cursor() const;
  MartingaleCursor child(const MartingaleCursor& c, int bit) const;
  /// Value at the anchor of a node of the base tree.
  double node_value(const DyadicInterval& node) const;
  /// Cursor for the depth-`depth` node containing x.
  MartingaleCursor cursor_at(double x, int depth) const;

  /// u(z) for z in Q(base) (anchor height |base| included): blends the
  /// values of the nodes containing x at consecutive depths linearly in
  /// log2(|base|/y), so u(z_I) is exactly the node value of I.
  double extend(Point z) const;
  /// d/dy of extend() along the vertical line through z (piecewise constant).
  double vertical_slope(Point z) const;

 private:
  DyadicInterval base_;
  double root_value_;
  double step_bound_;
  Generator generator_;
  int data_depth_ = 0;
  std::map<std::pair<int, std::uint64_t>, double> explicit_;
  std::set<std::pair<int, std::uint64_t>> active_;  // nodes with a nonzero increment strictly below
};

}  // namespace jb
