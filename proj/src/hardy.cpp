#include "jb/hardy.hpp"

#include <algorithm>
#include <cmath>

#include "jb/error.hpp"
#include "jb/parallel.hpp"

namespace jb {

void HardyConfig::validate() const {
  const double qq = q_value();
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidConfig, "p must lie in (1, inf)");
  if (!(qq > 1.0 && qq < p)) throw Error(ErrorCode::InvalidConfig, "q must lie in (1, p)");
  if (!(beta < p - 1.0)) throw Error(ErrorCode::InvalidConfig, "beta must be below p - 1");
  if (radii < 1 || cells < 1) throw Error(ErrorCode::InvalidConfig, "radius and cell counts must be positive");
}

std::string to_string(TestFamily f) {
  switch (f) {
    case TestFamily::Zero: return "zero";
    case TestFamily::Collar: return "collar";
    case TestFamily::Radial: return "radial";
    case TestFamily::Product: return "product";
  }
  return "?";
}

double TestFunction::u(Complex x, double d) const {
  switch (family) {
    case TestFamily::Zero: return 0.0;
    case TestFamily::Collar: return std::min(1.0, d / eps);
    case TestFamily::Radial: return std::max(0.0, 1.0 - std::abs(x - center) / a);
    case TestFamily::Product:
      return std::max(0.0, 1.0 - std::abs(x.real() - center.real()) / a) *
             std::max(0.0, 1.0 - std::abs(x.imag() - center.imag()) / b);
  }
  return 0.0;
}

double TestFunction::grad(Complex x, double d) const {
  switch (family) {
    case TestFamily::Zero: return 0.0;
    case TestFamily::Collar: return d < eps ? 1.0 / eps : 0.0;  // |grad d| = 1 a.e.
    case TestFamily::Radial: return std::abs(x - center) < a ? 1.0 / a : 0.0;
    case TestFamily::Product: {
      const double sx = std::abs(x.real() - center.real()), sy = std::abs(x.imag() - center.imag());
      if (sx >= a || sy >= b) return 0.0;
      return std::hypot((1.0 - sy / b) / a, (1.0 - sx / a) / b);
    }
  }
  return 0.0;
}

bool TestFunction::compactly_supported_in(const DomainApprox& omega) const {
  switch (family) {
    case TestFamily::Zero:
    case TestFamily::Collar: return true;
    case TestFamily::Radial: return omega.contains(center) && omega.boundary_distance(center) > a;
    case TestFamily::Product: return omega.contains(center) && omega.boundary_distance(center) > std::hypot(a, b);
  }
  return false;
}

double pointwise_rhs(const DomainApprox& omega, Complex x, const HardyConfig& cfg, const TestFunction& tf) {
  cfg.validate();
  if (!omega.contains(x)) throw Error(ErrorCode::OutOfDomain, "Hardy sample outside the domain");
  if (tf.family == TestFamily::Zero) return 0.0;
  const double q = cfg.q_value();
  const double d = omega.boundary_distance(x) + (omega.is_disk() ? 0.0 : omega.pitch());
  const double R = 2.0 * d;
  const double h = d / cfg.cells;
  const int n = 2 * cfg.cells;
  const double w = q * cfg.beta / cfg.p;
  std::vector<double> sum(static_cast<std::size_t>(cfg.radii) + 1, 0.0);
  std::vector<double> count(sum.size(), 0.0);
  for (int j = -n; j < n; ++j)
    for (int i = -n; i < n; ++i) {
      const Complex off((i + 0.5) * h, (j + 0.5) * h);
      const double r = std::abs(off);
      if (r >= R) continue;
      const Complex c = x + off;
      if (!omega.contains(c)) continue;
      // Smallest grid radius r_k = R k / radii with r < r_k.
      const auto k = static_cast<std::size_t>(std::floor(r / R * cfg.radii)) + 1;
      if (k >= sum.size()) continue;
      const double dc = omega.boundary_distance(c);
      const double g = tf.grad(c, dc);
      if (g > 0.0) sum[k] += std::pow(g, q) * std::pow(dc, w);
      count[k] += 1.0;
    }
  double best = 0.0, s = 0.0, m = 0.0;
  for (std::size_t k = 1; k < sum.size(); ++k) {
    s += sum[k];
    m += count[k];
    if (m > 0.0) best = std::max(best, s / m);
  }
  return std::pow(d, 1.0 - cfg.beta / cfg.p) * std::pow(best, 1.0 / q);
}

std::vector<Complex> interior_samples(const DomainApprox& omega, int per_side) {
  const Complex lo = omega.lower_left(), hi = omega.upper_right();
  const double side = std::max(hi.real() - lo.real(), hi.imag() - lo.imag()) / std::max(1, per_side);
  const int nx = static_cast<int>(std::ceil((hi.real() - lo.real()) / side));
  const int ny = static_cast<int>(std::ceil((hi.imag() - lo.imag()) / side));
  std::vector<Complex> out;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Complex c(lo.real() + (i + 0.5) * side, lo.imag() + (j + 0.5) * side);
      if (omega.contains(c)) out.push_back(c);
    }
  return out;
}

PointwiseReport verify_pointwise(const DomainApprox& omega, const HardyConfig& cfg, const std::vector<TestFunction>& suite,
                                 const std::vector<Complex>& samples) {
  cfg.validate();
  PointwiseReport rep;
  const std::size_t m = suite.size();
  rep.records.resize(samples.size() * m);
  parallel_for(samples.size(), [&](std::size_t s) {
    const Complex x = samples[s];
    const double d = omega.boundary_distance(x);
    for (std::size_t f = 0; f < m; ++f) {
      PointRecord& r = rep.records[s * m + f];
      r.x = x;
      r.function = f;
      r.u = std::abs(suite[f].u(x, d));
      r.rhs = pointwise_rhs(omega, x, cfg, suite[f]);
    }
  });
  for (const auto& r : rep.records) {
    if (r.rhs == 0.0) {
      if (r.u != 0.0)
        throw Error(ErrorCode::InequalityViolation, "right-hand side vanishes at (" + std::to_string(r.x.real()) +
                                                        ", " + std::to_string(r.x.imag()) + ") where u != 0");
      ++rep.excluded;
      continue;
    }
    ++rep.pairs;
    const double ratio = r.u / r.rhs;
    if (ratio > rep.C_emp) {
      rep.C_emp = ratio;
      rep.worst_x = r.x;
      rep.worst_function = r.function;
    }
  }
  rep.vacuous = rep.pairs == 0;
  rep.pass = std::isfinite(rep.C_emp);
  return rep;
}

IntegralReport verify_integral(const DomainApprox& omega, double p, double beta, const std::vector<TestFunction>& suite,
                               int per_side) {
  if (!(p > 1.0) || !(beta < p - 1.0)) throw Error(ErrorCode::InvalidConfig, "need p > 1 and beta < p - 1");
  for (const auto& tf : suite) {
    if (!tf.compactly_supported_in(omega))
      throw Error(ErrorCode::NonIntegrableConfiguration, to_string(tf.family) + " test function reaches the boundary");
    if (tf.family == TestFamily::Collar && !(beta > -1.0))
      throw Error(ErrorCode::NonIntegrableConfiguration, "collar functions need beta > -1");
  }
  const auto cells = interior_samples(omega, per_side);
  std::vector<double> dist(cells.size());
  parallel_for(cells.size(), [&](std::size_t k) { dist[k] = omega.boundary_distance(cells[k]); });
  IntegralReport rep;
  for (const auto& tf : suite) {
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const double d = dist[k];
      const double u = std::abs(tf.u(cells[k], d));
      if (u > 0.0) lhs += std::pow(u, p) * std::pow(d, beta - p);
      const double g = tf.grad(cells[k], d);
      if (g > 0.0) rhs += std::pow(g, p) * std::pow(d, beta);
    }
    // Cells share one area, which cancels in the ratio.
    const Complex lo = omega.lower_left(), hi = omega.upper_right();
    const double side = std::max(hi.real() - lo.real(), hi.imag() - lo.imag()) / std::max(1, per_side);
    rep.lhs.push_back(lhs * side * side);
    rep.rhs.push_back(rhs * side * side);
    rep.ratios.push_back(rhs > 0.0 ? lhs / rhs : 0.0);
    rep.max_ratio = std::max(rep.max_ratio, rep.ratios.back());
  }
  return rep;
}

}  // namespace jb
