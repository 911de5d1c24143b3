#include "jb/harmonic.hpp"

#include <cmath>
#include <numbers>

#include "jb/error.hpp"

namespace jb {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_upper(Point z) {
  if (!(z.y > 0.0)) throw Error(ErrorCode::OutOfDomain, "point must lie in the open upper half-plane");
}

double halton(std::uint64_t i, std::uint64_t base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// g' = (log f')' for the catalog entries.
Complex log_derivative_prime(const ConformalMapSpec& s, Complex z) {
  switch (s.id) {
    case CatalogId::MobiusToDisk: return -2.0 / (z + kI);
    case CatalogId::PowerSector: return (s.a - 1.0) / z;
    case CatalogId::PolynomialPerturbation: {
      const Complex w = z + kI;
      return 2.0 * s.c / (w * w * w - s.c * w);
    }
    case CatalogId::SlitHalfplane: return -1.0 / (z * (z * z - 1.0));
    case CatalogId::Affine: return 0.0;
  }
  return 0.0;
}

double catalog_u(const ConformalMapSpec& s, Complex z) {
  switch (s.id) {
    case CatalogId::MobiusToDisk: return std::log(2.0) - 2.0 * std::log(std::abs(z + kI));
    case CatalogId::PowerSector:
      if (s.a == 1.0) return 0.0;
      return std::log(s.a) + (s.a - 1.0) * std::log(std::abs(z));
    case CatalogId::PolynomialPerturbation: {
      const Complex w = z + kI;
      return std::log(std::abs(1.0 - s.c / (w * w)));
    }
    case CatalogId::SlitHalfplane:
      return std::log(std::abs(z)) - 0.5 * std::log(std::abs(z - 1.0)) - 0.5 * std::log(std::abs(z + 1.0));
    case CatalogId::Affine: return std::log(s.lambda);
  }
  return 0.0;
}

double catalog_A(const ConformalMapSpec& s) {
  double a = kMinCertifiedA;
  switch (s.id) {
    case CatalogId::MobiusToDisk: a = 2.0; break;
    case CatalogId::PowerSector: a = std::abs(s.a - 1.0); break;
    case CatalogId::PolynomialPerturbation: a = 2.0 * std::abs(s.c) / (1.0 - std::abs(s.c)); break;
    case CatalogId::SlitHalfplane: a = 4.0; break;
    case CatalogId::Affine: break;
  }
  return std::max(a, kMinCertifiedA);
}

void validate(const ConformalMapSpec& s) {
  switch (s.id) {
    case CatalogId::PowerSector:
      if (!(s.a > 0.0 && s.a <= 2.0))
        throw Error(ErrorCode::InvalidArgument, "power_sector is univalent only for 0 < a <= 2");
      break;
    case CatalogId::PolynomialPerturbation:
      if (!(std::abs(s.c) <= 0.5))
        throw Error(ErrorCode::InvalidArgument, "polynomial_perturbation requires |c| <= 1/2");
      break;
    case CatalogId::Affine:
      if (!(s.lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "affine scale must be positive");
      break;
    default: break;
  }
}

}  // namespace

ConformalMapSpec ConformalMapSpec::power_sector(double a) {
  ConformalMapSpec s;
  s.id = CatalogId::PowerSector;
  s.a = a;
  return s;
}

ConformalMapSpec ConformalMapSpec::polynomial_perturbation(double c) {
  ConformalMapSpec s;
  s.id = CatalogId::PolynomialPerturbation;
  s.c = c;
  return s;
}

ConformalMapSpec ConformalMapSpec::slit_halfplane() {
  ConformalMapSpec s;
  s.id = CatalogId::SlitHalfplane;
  return s;
}

ConformalMapSpec ConformalMapSpec::affine(double lambda, double shift) {
  ConformalMapSpec s;
  s.id = CatalogId::Affine;
  s.lambda = lambda;
  s.shift = shift;
  return s;
}

std::string to_string(CatalogId id) {
  switch (id) {
    case CatalogId::MobiusToDisk: return "mobius_to_disk";
    case CatalogId::PowerSector: return "power_sector";
    case CatalogId::PolynomialPerturbation: return "polynomial_perturbation";
    case CatalogId::SlitHalfplane: return "slit_halfplane";
    case CatalogId::Affine: return "affine";
  }
  return "unknown";
}

CatalogId catalog_id_from_string(const std::string& name) {
  for (CatalogId id : {CatalogId::MobiusToDisk, CatalogId::PowerSector, CatalogId::PolynomialPerturbation,
                       CatalogId::SlitHalfplane, CatalogId::Affine})
    if (to_string(id) == name) return id;
  throw Error(ErrorCode::InvalidConfig, "unknown catalog id '" + name + "'");
}

// ---------------------------------------------------------------------------

HarmonicSource HarmonicSource::conformal(const ConformalMapSpec& spec) {
  validate(spec);
  return HarmonicSource(spec, catalog_A(spec));
}

HarmonicSource HarmonicSource::series(std::vector<SeriesTerm> terms) {
  double a = 0.0;
  for (const auto& t : terms) {
    if (!(t.frequency > 0.0)) throw Error(ErrorCode::InvalidArgument, "series frequencies must be positive");
    a += std::abs(t.amplitude);
  }
  return HarmonicSource(std::move(terms), std::max(a / std::numbers::e, kMinCertifiedA));
}

HarmonicSource HarmonicSource::martingale(MartingaleModel model) {
  const double b = model.step_bound();
  return HarmonicSource(std::make_shared<const MartingaleModel>(std::move(model)), b);
}

SourceKind HarmonicSource::kind() const {
  switch (impl_.index()) {
    case 0: return SourceKind::ConformalCatalog;
    case 1: return SourceKind::SyntheticSeries;
    default: return SourceKind::MartingaleModel;
  }
}

const MartingaleModel* HarmonicSource::martingale_model() const {
  const auto* p = std::get_if<std::shared_ptr<const MartingaleModel>>(&impl_);
  return p ? p->get() : nullptr;
}

double HarmonicSource::u(Point z) const {
  if (const auto* spec = map_spec()) {
    require_upper(z);
    return catalog_u(*spec, {z.x, z.y});
  }
  if (const auto* terms = series_terms()) {
    require_upper(z);
    double sum = 0.0;
    for (const auto& t : *terms) sum += t.amplitude * std::exp(-t.frequency * z.y) * std::cos(t.frequency * z.x + t.phase);
    return sum;
  }
  return martingale_model()->extend(z);
}

Point HarmonicSource::grad_u(Point z) const {
  if (const auto* spec = map_spec()) {
    require_upper(z);
    const Complex gp = log_derivative_prime(*spec, {z.x, z.y});
    // u = Re g, so grad u = (Re g', -Im g').
    return {gp.real(), -gp.imag()};
  }
  if (const auto* terms = series_terms()) {
    require_upper(z);
    Point g;
    for (const auto& t : *terms) {
      const double e = t.amplitude * t.frequency * std::exp(-t.frequency * z.y);
      g.x -= e * std::sin(t.frequency * z.x + t.phase);
      g.y -= e * std::cos(t.frequency * z.x + t.phase);
    }
    return g;
  }
  return {0.0, martingale_model()->vertical_slope(z)};
}

double eval_u(const HarmonicSource& src, Point z) { return src.u(z); }
Point eval_grad_u(const HarmonicSource& src, Point z) { return src.grad_u(z); }

double martingale_extend(const MartingaleModel& model, Point z) { return model.extend(z); }

// ---------------------------------------------------------------------------

std::vector<double> singular_boundary_points(const ConformalMapSpec& spec) {
  if (spec.id == CatalogId::SlitHalfplane) return {-1.0, 1.0};
  return {};
}

Complex eval_map(const ConformalMapSpec& s, MapPart part, Complex z) {
  if (part == MapPart::BoundaryTrace) {
    if (z.imag() != 0.0) throw Error(ErrorCode::InvalidArgument, "boundary trace takes a real argument");
    // +0 imaginary part selects the limit from the upper half-plane.
    z = Complex(z.real(), +0.0);
    if (s.id == CatalogId::SlitHalfplane && std::abs(std::abs(z.real()) - 1.0) == 0.0)
      throw Error(ErrorCode::SingularPoint, "slit_halfplane branch point");
  } else if (!(z.imag() > 0.0)) {
    throw Error(ErrorCode::OutOfDomain, "map evaluated outside the open upper half-plane");
  }
  const bool derivative = part == MapPart::FPrime;
  switch (s.id) {
    case CatalogId::MobiusToDisk: {
      const Complex w = z + kI;
      return derivative ? 2.0 * kI / (w * w) : (z - kI) / w;
    }
    case CatalogId::PowerSector:
      if (z == Complex(0.0, 0.0)) {
        if (derivative && s.a != 1.0) throw Error(ErrorCode::SingularPoint, "power_sector vertex");
        return derivative ? Complex(1.0) : Complex(0.0);
      }
      return derivative ? s.a * std::exp((s.a - 1.0) * std::log(z)) : std::exp(s.a * std::log(z));
    case CatalogId::PolynomialPerturbation: {
      const Complex w = z + kI;
      return derivative ? 1.0 - s.c / (w * w) : z + s.c / w;
    }
    case CatalogId::SlitHalfplane: {
      const Complex f = std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
      if (!derivative) return f;
      if (f == Complex(0.0, 0.0)) throw Error(ErrorCode::SingularPoint, "slit_halfplane branch point");
      return z / f;
    }
    case CatalogId::Affine: return derivative ? Complex(s.lambda) : s.lambda * z + s.shift;
  }
  return {};
}

Complex eval_map(const HarmonicSource& src, MapPart part, Complex z) {
  const auto* spec = src.map_spec();
  if (!spec) throw Error(ErrorCode::UnsupportedSource, "map evaluation needs a conformal catalog source");
  return eval_map(*spec, part, z);
}

Complex inverse_map(const ConformalMapSpec& s, Complex w) {
  switch (s.id) {
    case CatalogId::MobiusToDisk: return kI * (1.0 + w) / (1.0 - w);
    case CatalogId::PowerSector: {
      double theta = std::atan2(w.imag(), w.real());
      if (theta < 0.0) theta += 2.0 * std::numbers::pi;
      return std::polar(std::pow(std::abs(w), 1.0 / s.a), theta / s.a);
    }
    case CatalogId::PolynomialPerturbation: {
      // z^2 + (i - w) z + (c - i w) = 0; keep the root in H.
      const Complex b = kI - w;
      const Complex disc = std::sqrt(b * b - 4.0 * (s.c - kI * w));
      const Complex r1 = 0.5 * (-b + disc);
      const Complex r2 = 0.5 * (-b - disc);
      return r1.imag() > r2.imag() ? r1 : r2;
    }
    case CatalogId::SlitHalfplane: {
      Complex z = std::sqrt(w * w + 1.0);
      if (z.imag() < 0.0) z = -z;
      return z;
    }
    case CatalogId::Affine: return (w - s.shift) / s.lambda;
  }
  return {};
}

namespace {

double ray_distance(Complex w, Complex dir) {
  const Complex r = w * std::conj(dir);
  return r.real() > 0.0 ? std::abs(r.imag()) : std::abs(w);
}

}  // namespace

double image_boundary_distance(const ConformalMapSpec& s, Complex w) {
  switch (s.id) {
    case CatalogId::MobiusToDisk: return 1.0 - std::abs(w);
    case CatalogId::PowerSector:
      return std::min(ray_distance(w, 1.0), ray_distance(w, std::polar(1.0, s.a * std::numbers::pi)));
    case CatalogId::SlitHalfplane: {
      const double t = std::clamp(w.imag(), 0.0, 1.0);
      return std::min(w.imag(), std::abs(w - Complex(0.0, t)));
    }
    case CatalogId::Affine: return w.imag();
    case CatalogId::PolynomialPerturbation: {
      // The boundary curve f(x) stays within |c| of the real axis; scan it.
      double best = std::abs(w.imag()) + std::abs(s.c) + 1.0;
      const double x0 = w.real();
      for (int k = -4000; k <= 4000; ++k) {
        const double x = x0 + k * 1e-3 * (1.0 + std::abs(w));
        best = std::min(best, std::abs(w - eval_map(s, MapPart::BoundaryTrace, x)));
      }
      return best;
    }
  }
  return 0.0;
}

bool has_bounded_image(const ConformalMapSpec& s) { return s.id == CatalogId::MobiusToDisk; }

// ---------------------------------------------------------------------------

double certify_bloch_bound(const HarmonicSource& src, int audit_samples) {
  const double a = src.certified_A();
  if (const auto* model = src.martingale_model()) {
    const DyadicInterval base = model->base();
    const int depth = std::max(model->data_depth(), 1);
    for (int k = 1; k <= audit_samples; ++k) {
      const double x = base.left() + halton(k, 2) * base.length();
      const int d = 1 + static_cast<int>(halton(k, 3) * depth) % depth;
      const MartingaleCursor c = model->cursor_at(x, d - 1);
      const MartingaleCursor ch = model->child(c, static_cast<int>(base.descendant_containing(x, d).index() & 1));
      if (std::abs(ch.value - c.value) > a * (1.0 + 1e-9))
        throw Error(ErrorCode::CertificateViolation, "martingale increment exceeds the step bound");
    }
    return a;
  }
  for (int k = 1; k <= audit_samples; ++k) {
    const Point z{-4.0 + 8.0 * halton(k, 2), std::pow(10.0, -4.0 + 6.0 * halton(k, 3))};
    const Point g = src.grad_u(z);
    const double m = z.y * std::hypot(g.x, g.y);
    if (m > a * (1.0 + 1e-9))
      throw Error(ErrorCode::CertificateViolation,
                  "Im(z)|grad u| = " + std::to_string(m) + " exceeds A = " + std::to_string(a));
  }
  return a;
}

}  // namespace jb
