#pragma once

#include <string>
#include <vector>

#include "jb/transfer.hpp"

namespace jb {

struct HardyConfig {
  double p = 2.0;
  double q = 0.0;  // 0 selects (1 + p)/2
  double beta = 0.0;
  int radii = 16;  // radius grid r_k = 2 d(x) k / radii
  int cells = 32;  // quadrature cells across a radius d(x)

  double q_value() const { return q > 0.0 ? q : 0.5 * (1.0 + p); }
  /// Throws InvalidConfig unless 1 < q < p and beta < p - 1.
  void validate() const;
};

enum class TestFamily { Zero, Collar, Radial, Product };

std::string to_string(TestFamily f);

/// Lipschitz test functions with closed-form gradients:
///   Collar   min(1, d(x)/eps)
///   Radial   max(0, 1 - |x - c|/rho)
///   Product  max(0, 1 - |x1 - c1|/a) max(0, 1 - |x2 - c2|/b)
struct TestFunction {
  TestFamily family = TestFamily::Zero;
  double eps = 0.0;
  Complex center{};
  double a = 0.0;  // rho for Radial
  double b = 0.0;

  static TestFunction zero() { return {}; }
  static TestFunction collar(double eps) { return {TestFamily::Collar, eps, {}, 0.0, 0.0}; }
  static TestFunction radial(Complex c, double rho) { return {TestFamily::Radial, 0.0, c, rho, 0.0}; }
  static TestFunction product(Complex c, double a, double b) { return {TestFamily::Product, 0.0, c, a, b}; }

  /// d is d_Omega(x), used by the collar only.
  double u(Complex x, double d) const;
  double grad(Complex x, double d) const;
  /// True when the support stays inside the domain (away from the boundary).
  bool compactly_supported_in(const DomainApprox& omega) const;
};

/// d_Omega(x)^{1 - beta/p} sup_r (avg over B(x, r) of |grad u|^q d^{q beta/p})^{1/q}
/// with midpoint quadrature on a square grid of pitch d(x)/cells; radii on
/// which no cell centre falls are skipped. For polygons d(x) is inflated by
/// one boundary pitch.
double pointwise_rhs(const DomainApprox& omega, Complex x, const HardyConfig& cfg, const TestFunction& tf);

/// Cell centres of a grid over the bounding box that lie in the domain.
std::vector<Complex> interior_samples(const DomainApprox& omega, int per_side);

struct PointRecord {
  Complex x;
  std::size_t function = 0;
  double u = 0.0;
  double rhs = 0.0;
};

struct PointwiseReport {
  double C_emp = 0.0;
  std::size_t pairs = 0;
  std::size_t excluded = 0;  // u(x) = 0 and RHS = 0
  bool vacuous = false;
  Complex worst_x{};
  std::size_t worst_function = 0;
  std::vector<PointRecord> records;
  bool pass = false;
};

/// Throws InequalityViolation when some RHS vanishes while u(x) does not.
PointwiseReport verify_pointwise(const DomainApprox& omega, const HardyConfig& cfg, const std::vector<TestFunction>& suite,
                                 const std::vector<Complex>& samples);

struct IntegralReport {
  std::vector<double> ratios;  // per test function, lhs / rhs
  std::vector<double> lhs;
  std::vector<double> rhs;
  double max_ratio = 0.0;
};

/// int |u|^p d^{beta - p} against int |grad u|^p d^beta by midpoint cells of
/// the bounding box, per_side cells on the longer side.
IntegralReport verify_integral(const DomainApprox& omega, double p, double beta, const std::vector<TestFunction>& suite,
                               int per_side = 512);

}  // namespace jb
