#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jb/dyadic.hpp"
#include "jb/martingale.hpp"

namespace jb {

using Complex = std::complex<double>;

/// Smallest certified constant handed out, used for sources with u constant.
inline constexpr double kMinCertifiedA = 1e-6;

enum class SourceKind { ConformalCatalog, SyntheticSeries, MartingaleModel };

enum class CatalogId {
  MobiusToDisk,            // f(z) = (z - i)/(z + i), H onto the unit disk
  PowerSector,             // f(z) = z^a, 0 < a <= 2, H onto the sector 0 < arg w < a*pi
  PolynomialPerturbation,  // f(z) = z + c/(z + i), |c| <= 1/2
  SlitHalfplane,           // f(z) = sqrt(z - 1) sqrt(z + 1), H onto H minus the segment [0, i]
  Affine,                  // f(z) = lambda z + b, lambda > 0, b real
};

struct ConformalMapSpec {
  CatalogId id = CatalogId::MobiusToDisk;
  double a = 1.0;       // power_sector exponent
  double c = 0.0;       // polynomial_perturbation coefficient
  double lambda = 1.0;  // affine scale
  double shift = 0.0;   // affine shift

  static ConformalMapSpec mobius_to_disk() { return {}; }
  static ConformalMapSpec power_sector(double a);
  static ConformalMapSpec polynomial_perturbation(double c);
  static ConformalMapSpec slit_halfplane();
  static ConformalMapSpec affine(double lambda, double shift);
};

std::string to_string(CatalogId id);
CatalogId catalog_id_from_string(const std::string& name);

/// One term a e^{-w y} cos(w x + phi) = Re(a e^{i(w z + phi)}).
struct SeriesTerm {
  double amplitude = 0.0;
  double frequency = 1.0;
  double phase = 0.0;
};

enum class MapPart { F, FPrime, BoundaryTrace };

/// Harmonic function u on the upper half-plane with a certified constant
/// A >= sup Im(z)|grad u(z)|.
///
/// Catalog entries carry u = log|f'| together with f itself; the constants
/// are derived by hand for each entry:
///   mobius_to_disk          grad u = -2 (x, y+1)/|z+i|^2, y*2/|z+i| < 2      A = 2
///   power_sector(a)         |grad u| = |a-1|/|z| <= |a-1|/y                  A = |a-1|
///   polynomial_perturbation g' = 2c/((z+i)^3 - c(z+i)), |z+i| >= 1 + y       A = 2|c|/(1-|c|)
///   slit_halfplane          |g'| = 1/|z||z-1||z+1|; of the three distances
///                           at most one is below 1/2 and each is >= y        A = 4
///   affine                  u constant                                      A = 1e-6
/// Series: y w e^{-w y} <= 1/e, so A = sum |a|/e. Martingale models use the
/// discrete analogue A = B, the step bound.
class HarmonicSource {
 public:
  static HarmonicSource conformal(const ConformalMapSpec& spec);
  static HarmonicSource series(std::vector<SeriesTerm> terms);
  static HarmonicSource martingale(MartingaleModel model);
  /// u = 0, realized as power_sector(1), the identity map.
  static HarmonicSource zero() { return conformal(ConformalMapSpec::power_sector(1.0)); }

  SourceKind kind() const;
  bool is_analytic() const { return kind() != SourceKind::MartingaleModel; }
  double certified_A() const { return certified_A_; }

  const ConformalMapSpec* map_spec() const { return std::get_if<ConformalMapSpec>(&impl_); }
  const std::vector<SeriesTerm>* series_terms() const { return std::get_if<std::vector<SeriesTerm>>(&impl_); }
  const MartingaleModel* martingale_model() const;

  double u(Point z) const;
  Point grad_u(Point z) const;

 private:
  using Impl = std::variant<ConformalMapSpec, std::vector<SeriesTerm>, std::shared_ptr<const MartingaleModel>>;
  explicit HarmonicSource(Impl impl, double a) : impl_(std::move(impl)), certified_A_(a) {}

  Impl impl_;
  double certified_A_;
};

double eval_u(const HarmonicSource& src, Point z);
Point eval_grad_u(const HarmonicSource& src, Point z);

/// Closed-form evaluation of f, f' (at z in the upper half-plane) or of the
/// boundary trace (at a real argument).
Complex eval_map(const ConformalMapSpec& spec, MapPart part, Complex z_or_x);
Complex eval_map(const HarmonicSource& src, MapPart part, Complex z_or_x);
/// f^{-1}(w) for w in the image domain.
Complex inverse_map(const ConformalMapSpec& spec, Complex w);
/// Distance from w to the boundary of f(H).
double image_boundary_distance(const ConformalMapSpec& spec, Complex w);
/// Real points where the boundary trace is not defined (branch points).
std::vector<double> singular_boundary_points(const ConformalMapSpec& spec);
/// True when f(H) is bounded.
bool has_bounded_image(const ConformalMapSpec& spec);

/// Audited certificate for the Bloch-type constant. Checks the closed-form
/// constant on `audit_samples` quasi-random points (Halton in x, log-uniform
/// in y) and throws CertificateViolation if Im(z)|grad u| > A(1 + 1e-9)
/// anywhere. Martingale models are audited on node increments instead.
double certify_bloch_bound(const HarmonicSource& src, int audit_samples = 10000);

double martingale_extend(const MartingaleModel& model, Point z);

}  // namespace jb
