#include "jb/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "jb/error.hpp"
#include "jb/parallel.hpp"

namespace jb {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

struct CellVerdict {
  bool all_pass = false;
  bool any_pass = false;
};

// Walks the subtree below `c` down to `depth` (absolute) and reports whether
// every / some vertical line keeps |value - center| <= T.
CellVerdict martingale_subtree(const MartingaleModel& m, const MartingaleCursor& c, int depth, double center,
                               double T) {
  if (std::abs(c.value - center) > T) return {false, false};
  if (c.node.depth() >= depth || c.quiet) return {true, true};
  const CellVerdict a = martingale_subtree(m, m.child(c, 0), depth, center, T);
  const CellVerdict b = martingale_subtree(m, m.child(c, 1), depth, center, T);
  return {a.all_pass && b.all_pass, a.any_pass || b.any_pass};
}

const MartingaleModel& model_for(const DyadicInterval& I, const HarmonicSource& src) {
  const MartingaleModel& m = *src.martingale_model();
  if (I.base_left() != m.base().base_left() || I.base_length() != m.base().base_length() ||
      I.depth() < m.base().depth())
    throw Error(ErrorCode::InvalidArgument, "interval is not a node of the martingale tree");
  return m;
}

MartingaleCursor cursor_of(const MartingaleModel& m, const DyadicInterval& J) {
  return m.cursor_at(J.center(), J.depth());
}

double node_value(const HarmonicSource& src, const DyadicInterval& J) {
  if (const MartingaleModel* m = src.martingale_model()) return m->node_value(J);
  return src.u(J.anchor());
}

}  // namespace

GoodSetEstimate good_set(const DyadicInterval& I, const HarmonicSource& src, double M, const GoodSetParams& params) {
  if (!(M > 0.0)) throw Error(ErrorCode::InvalidArgument, "M must be positive");
  if (params.x_cells <= 0 || !std::has_single_bit(static_cast<unsigned>(params.x_cells)))
    throw Error(ErrorCode::InvalidArgument, "x_cells must be a power of two");
  if (!(params.y_ratio > 1.0)) throw Error(ErrorCode::InvalidArgument, "y_ratio must exceed 1");
  const double len = I.length();
  const double y_floor = params.y_floor_rel * len;
  if (!(y_floor > 0.0) || y_floor >= len) throw Error(ErrorCode::DegenerateRange, "y_floor must lie in (0, |I|)");

  const double A = src.certified_A();
  const double T = M + A * kSqrt2;
  const int cell_bits = std::countr_zero(static_cast<unsigned>(params.x_cells));
  const int n = params.x_cells;
  const double h = std::ldexp(len, -cell_bits);
  std::vector<CellVerdict> cells(static_cast<std::size_t>(n));

  if (src.martingale_model()) {
    const MartingaleModel& m = model_for(I, src);
    const double levels = std::log2(len / y_floor);
    const int d_in = I.depth() + static_cast<int>(std::ceil(levels - 1e-12));
    const int d_out = I.depth() + static_cast<int>(std::floor(levels + 1e-12));
    const MartingaleCursor top = cursor_of(m, I);
    const double center = top.value;
    parallel_for(cells.size(), [&](std::size_t i) {
      // Chain from I down to the cell node, then the subtree below it.
      MartingaleCursor c = top;
      bool pass_in = true;
      bool pass_out = true;
      for (int b = cell_bits - 1; b >= 0; --b) {
        if (c.quiet) break;
        const int bit = static_cast<int>((i >> b) & 1u);
        c = m.child(c, bit);
        const bool ok = std::abs(c.value - center) <= T;
        if (c.node.depth() <= d_in && !ok) pass_in = false;
        if (c.node.depth() <= d_out && !ok) pass_out = false;
      }
      CellVerdict in{pass_in, pass_in};
      CellVerdict out{pass_out, pass_out};
      if (pass_in && !c.quiet && c.node.depth() < d_in) in = martingale_subtree(m, c, d_in, center, T);
      if (pass_out && !c.quiet && c.node.depth() < d_out) out = martingale_subtree(m, c, d_out, center, T);
      cells[i] = {in.all_pass, out.any_pass};
    });
  } else {
    const double span = std::log(len / y_floor);
    const int K = std::max(1, static_cast<int>(std::ceil(span / std::log(params.y_ratio))));
    const double log_r = span / K;
    const double center = src.u(I.anchor());
    parallel_for(cells.size(), [&](std::size_t i) {
      const double x = I.left() + (static_cast<double>(i) + 0.5) * h;
      double upper = 0.0;
      double lower = 0.0;
      for (int k = 0; k <= K; ++k) {
        const double y = k == K ? y_floor : len * std::exp(-k * log_r);
        const double dev = std::abs(src.u({x, y}) - center);
        const double horiz = A * 0.5 * h / y;
        upper = std::max(upper, dev + horiz + A * log_r);
        lower = std::max(lower, dev - horiz);
      }
      cells[i] = {upper <= T, lower <= T};
    });
  }

  std::vector<Segment> inner;
  std::vector<Segment> outer;
  for (int i = 0; i < n; ++i) {
    const Segment s{I.left() + i * h, I.left() + (i + 1) * h};
    if (cells[static_cast<std::size_t>(i)].all_pass) inner.push_back(s);
    if (cells[static_cast<std::size_t>(i)].any_pass) outer.push_back(s);
  }
  return {I, IntervalUnion(std::move(inner)), IntervalUnion(std::move(outer)), y_floor, T};
}

Classification classify_measures(double inner_length, double outer_length, double interval_length) {
  Classification c;
  const double cut = interval_length / 100.0;
  if (inner_length >= cut) {
    c.verdict = Verdict::Good;
  } else {
    c.verdict = Verdict::Bad;
    c.indeterminate = outer_length >= cut;
  }
  return c;
}

Classification classify(const DyadicInterval& I, const HarmonicSource& src, double M, const GoodSetParams& params) {
  GoodSetEstimate est = good_set(I, src, M, params);
  Classification c = classify_measures(est.inner.total_length(), est.outer.total_length(), I.length());
  c.estimate = std::move(est);
  return c;
}

double MaximalFamily::total_length() const {
  double s = 0.0;
  for (const auto& m : members) s += m.interval.length();
  return s;
}

MaximalFamily maximal_family(const DyadicInterval& I, const HarmonicSource& src, double M, int sign,
                             int max_rel_depth) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "sign must be +1 or -1");
  if (!(M > 0.0)) throw Error(ErrorCode::InvalidArgument, "M must be positive");
  const MartingaleModel* mart = src.martingale_model();
  if (mart) model_for(I, src);
  const double A = src.certified_A();
  const double upper = M + A * kSqrt2;
  const double length_cap = std::exp2(-M / (A * kSqrt2)) * I.length();
  const double center = node_value(src, I);

  MaximalFamily fam;
  fam.parent = I;
  fam.sign = sign;
  fam.M = M;

  auto [l, r] = I.children();
  std::vector<DyadicInterval> frontier{l, r};
  for (int rel = 1; !frontier.empty(); ++rel) {
    std::vector<double> dev(frontier.size());
    std::vector<char> quiet(frontier.size(), 0);
    parallel_for(frontier.size(), [&](std::size_t k) {
      if (mart) {
        const MartingaleCursor c = cursor_of(*mart, frontier[k]);
        dev[k] = c.value - center;
        quiet[k] = c.quiet;
      } else {
        dev[k] = src.u(frontier[k].anchor()) - center;
      }
    });
    std::vector<DyadicInterval> next;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      const DyadicInterval& J = frontier[k];
      if (sign * dev[k] >= M) {
        fam.members.push_back({J, dev[k], std::abs(dev[k]) <= upper, J.length() <= length_cap});
        continue;
      }
      if (std::abs(dev[k]) >= M || quiet[k]) continue;
      if (rel >= max_rel_depth) {
        fam.truncated = true;
        continue;
      }
      auto [a, b] = J.children();
      next.push_back(a);
      next.push_back(b);
    }
    frontier = std::move(next);
  }
  std::sort(fam.members.begin(), fam.members.end(),
            [](const FamilyMember& a, const FamilyMember& b) { return a.interval < b.interval; });
  fam.incomplete = fam.truncated && fam.total_length() < I.length() / 4.0;
  return fam;
}

GreenResidual green_residual(const DyadicInterval& I, const std::vector<DyadicInterval>& family,
                             const HarmonicSource& src, double y_floor, int quadrature_cells) {
  if (!src.is_analytic()) throw Error(ErrorCode::UnsupportedSource, "Green residual needs an analytic source");
  if (!(y_floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "y_floor must be positive");
  if (quadrature_cells < 1) throw Error(ErrorCode::InvalidArgument, "quadrature_cells must be positive");
  std::vector<DyadicInterval> fam = family;
  std::sort(fam.begin(), fam.end());
  for (std::size_t k = 0; k < fam.size(); ++k) {
    if (!I.is_ancestor_of(fam[k])) throw Error(ErrorCode::InvalidArgument, "family member not inside I");
    if (k > 0 && fam[k].left() < fam[k - 1].right())
      throw Error(ErrorCode::InvalidArgument, "family members overlap");
  }

  const double len = I.length();
  double delta = src.u(I.anchor());
  for (const auto& J : fam) delta -= src.u(J.anchor()) * (J.length() / len);

  // Gaps of I not covered by the family, cut further at the quadrature grid.
  std::vector<Segment> gaps;
  double cursor = I.left();
  for (const auto& J : fam) {
    if (J.left() > cursor) gaps.push_back({cursor, J.left()});
    cursor = J.right();
  }
  if (cursor < I.right()) gaps.push_back({cursor, I.right()});
  const double step = len / quadrature_cells;
  std::vector<Segment> pieces;
  for (const auto& g : gaps) {
    double a = g.left;
    while (a < g.right) {
      const double grid = I.left() + (std::floor((a - I.left()) / step) + 1.0) * step;
      const double b = std::min(g.right, grid > a ? grid : a + step);
      pieces.push_back({a, b});
      a = b;
    }
  }

  std::vector<double> value(pieces.size());
  std::vector<double> err(pieces.size());
  parallel_for(pieces.size(), [&](std::size_t k) {
    auto f = [&](double x) { return src.u({x, y_floor}); };
    double e = 0.0;
    value[k] = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, pieces[k].left, pieces[k].right, 30,
                                                                              1e-9, &e);
    err[k] = e;
  });
  double integral = 0.0;
  double error = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    integral += value[k];
    error += err[k];
  }
  return {delta - integral / len, error / len, y_floor};
}

}  // namespace jb
