#pragma once

#include <vector>

#include "jb/builder.hpp"
#include "jb/content.hpp"
#include "jb/dyadic.hpp"
#include "jb/frostman.hpp"
#include "jb/harmonic.hpp"

namespace jb {

/// Closed polygonal approximation of a planar domain, or an exact disk.
/// Distances to the boundary are exact for the polygon, so for a sampled
/// curve the error is at most the sampling pitch.
class DomainApprox {
 public:
  explicit DomainApprox(std::vector<Complex> loop);
  static DomainApprox disk(Complex center, double radius);
  /// Boundary of f(S) traced at `pitch` (relative to the height of S).
  static DomainApprox image_of(const SawtoothRegion& region, const ConformalMapSpec& map, double pitch = 0x1p-11);

  bool contains(Complex w) const;
  double boundary_distance(Complex w) const;
  double pitch() const { return pitch_; }
  bool is_disk() const { return disk_; }
  const std::vector<Complex>& loop() const { return loop_; }
  /// Bounding box corners.
  Complex lower_left() const { return lo_; }
  Complex upper_right() const { return hi_; }

 private:
  DomainApprox() = default;
  void index();

  bool disk_ = false;
  Complex center_{};
  double radius_ = 0.0;
  std::vector<Complex> loop_;
  double pitch_ = 0.0;
  Complex lo_{}, hi_{};
  double cell_ = 0.0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<std::size_t>> buckets_;  // segment ids per grid cell
};

/// (x0, y0/2): the anchor z_{I0} lies on the top edge of S(E), so the centre
/// is moved half a box down.
Point john_center(const SawtoothRegion& region);

/// Canonical curve from z to the centre: for the dyadic I of z's column that
/// meet E, climb at 45 degrees towards z_I and finish with a vertical or
/// horizontal piece at z_I, until the level-1 anchor; then straight to the
/// centre. Goes straight to the centre when z lies above half height or its
/// half of the base misses E.
std::vector<Point> john_curve(const SawtoothRegion& region, Point z, Point center);

struct JohnCurveSample {
  Point start;
  std::vector<Point> polyline;
  std::vector<Complex> image;  // f at the subdivided polyline
  double length = 0.0;
  double image_length = 0.0;
};

JohnCurveSample map_curve(const std::vector<Point>& polyline, const ConformalMapSpec& map, double step);

struct JohnConstant {
  double C = 0.0;
  Point worst_start;
  Point worst_point;
  double resolution = 0.0;  // grid pitch / |I0|
  std::size_t curves = 0;
  std::size_t points = 0;
};

/// max l(gamma(z, z'))/d(z') over canonical curves from grid points z of S
/// (about sample_count of them, y >= y_floor) and points z' along each curve.
/// Throws CurveEscape if a curve leaves the region.
JohnConstant john_constant(const SawtoothRegion& region, Point center, int sample_count, double y_floor = 0.0);

/// The same with the mapped curves and d measured in the image domain.
JohnConstant image_john_constant(const SawtoothRegion& region, Point center, const ConformalMapSpec& map,
                                 const DomainApprox& image, int sample_count, double y_floor);

struct Lemma33Params {
  int image_samples = 4096;   // points of f(E_n) for the upper bound
  int john_samples = 1024;    // curves for the John constants
  double ratio_floor = 0.01;  // configured c(alpha)
  double pitch = 0x1p-11;
};

struct Lemma33Report {
  int level = 0;
  double alpha = 0.0;
  double M = 0.0;
  double lower = 0.0;  // L
  double upper = 0.0;  // U
  double content_E = 0.0;
  double fprime_z0 = 0.0;
  double ratio = 0.0;
  double ratio_floor = 0.0;
  double john_preimage = 0.0;
  double john_image = 0.0;
  double max_log_distortion = 0.0;  // max |log|f'(w)| - log|f'(z0)|| on curves
  double distortion_bound = 0.0;    // 2M + 30
  double max_length_ratio = 0.0;    // l(f(gamma)) / (|f'(z0)| l(gamma))
  double length_bound = 0.0;        // e^{2M+30}
  bool sandwich_pass = false;
  bool ratio_pass = false;
  bool distortion_pass = false;
  bool pass = false;
};

Lemma33Report verify_lemma33(const HarmonicSource& src, const GenerationTree& tree, double alpha,
                             const Lemma33Params& params = {});

struct EndToEndParams {
  double M = 0.0;  // 0: M_min(alpha)
  int n_max = 4;
  BuildParams build;
  Lemma33Params transfer;
};

struct EndToEndReport {
  Complex z;
  Complex z0;  // preimage; the base is centred below it with |I0| = Im z0
  double d_omega = 0.0;
  double lower = 0.0;  // content lower estimate of f(E_n)
  double c = 0.0;      // lower / d_omega^alpha
  double curve_length = 0.0;       // image of the segment from z0 down to E_n
  double curve_length_bound = 0.0;  // e^{2M+30} |f'(z0)| l(preimage)
  GenerationTree tree;
  Lemma33Report lemma;
  bool pass = false;
};

EndToEndReport theorem11_endtoend(const HarmonicSource& src, Complex z, double alpha, const EndToEndParams& params = {});

}  // namespace jb
