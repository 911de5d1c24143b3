#pragma once

#include <vector>

#include "jb/dyadic.hpp"
#include "jb/frostman.hpp"
#include "jb/harmonic.hpp"

namespace jb {

/// Axis-parallel box used as a planar cover element; its cost is
/// (diagonal + 2r)^alpha, the diameter of its r-neighbourhood.
struct CoverBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
};

struct CoverSolution {
  double alpha = 0.0;
  double value = 0.0;
  bool exact = false;
  std::vector<Segment> intervals;  // 1-D cover
  std::vector<CoverBox> boxes;     // 2-D cover
};

/// Exact alpha-content of a finite union of closed intervals.
///
/// Any cover can be replaced by intervals, and an interval of a cover may be
/// shrunk to the hull of the components it meets; components only partly met
/// are met by neighbouring cover elements whose hulls then overlap, and
/// merging two overlapping hulls never costs more than their sum because
/// t -> t^alpha is subadditive. So an optimal cover groups consecutive
/// components, and dp[j] = min_i dp[i-1] + (right_j - left_i)^alpha.
CoverSolution content_1d(const IntervalUnion& set, double alpha);

/// Upper bound for the alpha-content of the r-neighbourhood of a planar point
/// set: quadtree over the bounding square, each node covered either by the
/// bounding box of its points or by its children's covers, down to `levels`.
CoverSolution content_upper_2d(const std::vector<Complex>& points, double r, double alpha, int levels = 12);

struct PushforwardEstimate {
  double value = 0.0;     // nu(total) / sup nu(B)/diam(B)^alpha
  double sup_ratio = 0.0;
  double total_mass = 0.0;
  double min_radius = 0.0;
  std::size_t atoms = 0;
  bool certified = false;  // always false: disks are sampled
};

/// Pushes mu through the boundary trace of the map (atoms at midpoints of
/// equal sub-cells) and samples disks centred at atoms with log-spaced radii
/// from twice the largest image spacing up to the image diameter.
PushforwardEstimate pushforward_lower_2d(const FrostmanMeasure& mu, const ConformalMapSpec& map, double alpha,
                                         int ball_samples = 4096, int radii = 32);

/// Images under the boundary trace of the component endpoints and of
/// `samples` points spread over the union by length.
std::vector<Complex> boundary_image(const IntervalUnion& set, const ConformalMapSpec& map, int samples);

}  // namespace jb
