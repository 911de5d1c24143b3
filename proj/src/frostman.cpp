#include "jb/frostman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "jb/error.hpp"

namespace jb {

FrostmanMeasure::FrostmanMeasure(DyadicInterval base, int level, std::vector<DensityPiece> pieces)
    : base_(base), level_(level), pieces_(std::move(pieces)) {
  std::sort(pieces_.begin(), pieces_.end(),
            [](const DensityPiece& a, const DensityPiece& b) { return a.segment.left < b.segment.left; });
  double acc = 0.0;
  for (const auto& p : pieces_) {
    acc += p.density * p.segment.length();
    cumulative_.push_back(acc);
  }
}

double FrostmanMeasure::cdf(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const DensityPiece& p) { return v < p.segment.left; });
  if (it == pieces_.begin()) return 0.0;
  const std::size_t k = static_cast<std::size_t>(it - pieces_.begin()) - 1;
  const DensityPiece& p = pieces_[k];
  const double before = k == 0 ? 0.0 : cumulative_[k - 1];
  if (x >= p.segment.right) return cumulative_[k];
  return before + p.density * (x - p.segment.left);
}

double FrostmanMeasure::mass_of(double a, double b) const {
  if (!(b > a)) return 0.0;
  return std::max(0.0, cdf(b) - cdf(a));
}

IntervalUnion FrostmanMeasure::support() const {
  std::vector<Segment> segs;
  for (const auto& p : pieces_)
    if (p.density > 0.0) segs.push_back(p.segment);
  return IntervalUnion(std::move(segs));
}

FrostmanMeasure build_measure(const GenerationTree& tree, int n) {
  if (n < 0 || n >= static_cast<int>(tree.levels.size()))
    throw Error(ErrorCode::InvalidArgument, "measure level outside the tree");
  std::vector<double> mass(tree.nodes.size(), 0.0);
  std::vector<double> a(tree.nodes.size(), 0.0);
  std::vector<DensityPiece> pieces;
  std::vector<std::string> warnings;
  double dropped = 0.0;
  mass[0] = 1.0;
  for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
    const GenerationNode& node = tree.nodes[k];
    if (node.level > n) break;
    const double m = mass[k];
    if (node.kind == NodeKind::GoodTerminal) {
      const double len = node.good_set.total_length();
      if (!(len > 0.0)) throw Error(ErrorCode::DegenerateCarrier, "good set of zero length");
      for (const auto& s : node.good_set.components()) pieces.push_back({s, m / len});
      continue;
    }
    if (node.level == n && node.stop != StopReason::EmptyFamily) {
      const double len = node.interval.length();
      if (!(len > 0.0)) throw Error(ErrorCode::DegenerateCarrier, "bad interval of zero length");
      pieces.push_back({{node.interval.left(), node.interval.right()}, m / len});
      continue;
    }
    if (node.children.empty()) {
      dropped += m;
      warnings.push_back("mass " + std::to_string(m) + " stranded on a bad node without family at level " +
                         std::to_string(node.level));
      continue;
    }
    if (node.family_incomplete)
      warnings.push_back("family search truncated below |I|/4 at level " + std::to_string(node.level));
    double carrier = 0.0;
    for (std::size_t c : node.children) carrier += tree.nodes[c].interval.length();
    if (!(carrier > 0.0)) throw Error(ErrorCode::DegenerateCarrier, "family of zero length");
    a[k] = m / carrier;
    for (std::size_t c : node.children) mass[c] = a[k] * tree.nodes[c].interval.length();
  }
  if (dropped > 0.0) {
    if (!(dropped < 1.0)) throw Error(ErrorCode::DegenerateCarrier, "no mass survives to the requested level");
    const double scale = 1.0 / (1.0 - dropped);
    for (auto& p : pieces) p.density *= scale;
    for (auto& v : mass) v *= scale;
    for (auto& v : a) v *= scale;
  }
  FrostmanMeasure mu(tree.base, n, std::move(pieces));
  mu.node_mass = std::move(mass);
  mu.node_a = std::move(a);
  mu.warnings = std::move(warnings);
  return mu;
}

namespace {

struct GrowthAccumulator {
  double alpha;
  double M;
  double exponent;
  double base_len;
  GrowthReport* rep;

  void check(double l, double r, double mass) {
    const double t = (r - l) / base_len;
    if (!(t > 0.0) || !(mass > 0.0)) return;
    const double step = M / (6.0 * std::numbers::sqrt2);
    const int j = std::max(0, static_cast<int>(std::floor(-std::log2(t) / step)));
    const double lin = mass / (std::pow(400.0, j) * t);
    const double alp = mass / std::pow(t, exponent);
    if (lin > rep->max_ratio_linear) {
      rep->max_ratio_linear = lin;
      rep->worst_linear = {l, r, mass, j};
    }
    if (alp > rep->max_ratio_alpha) {
      rep->max_ratio_alpha = alp;
      rep->worst_alpha = {l, r, mass, j};
    }
  }
};

bool inside_one_piece(const FrostmanMeasure& mu, double l, double r) {
  const auto& ps = mu.pieces();
  auto it = std::upper_bound(ps.begin(), ps.end(), l,
                             [](double v, const DensityPiece& p) { return v < p.segment.left; });
  if (it == ps.begin()) return false;
  --it;
  return it->segment.left <= l && r <= it->segment.right;
}

// Visits dyadic J with positive mass; subtrees inside one density piece are
// pruned (their ratios are dominated by J's). Calls visit(J, mass).
template <class Visit>
std::size_t walk_dyadic(const FrostmanMeasure& mu, Visit&& visit) {
  std::size_t count = 0;
  std::vector<DyadicInterval> stack{mu.base()};
  while (!stack.empty()) {
    const DyadicInterval J = stack.back();
    stack.pop_back();
    const double m = mu.mass_of(J);
    if (!(m > 0.0)) continue;
    ++count;
    visit(J, m);
    if (J.depth() >= kMaxDyadicDepth || inside_one_piece(mu, J.left(), J.right())) continue;
    stack.push_back(J.child(1));
    stack.push_back(J.child(0));
  }
  return count;
}

}  // namespace

GrowthReport measure_growth(const FrostmanMeasure& mu, const GenerationTree& tree, double alpha, double M,
                            int sample_count, std::uint64_t seed) {
  GrowthReport rep;
  rep.alpha = alpha;
  rep.M = M;
  rep.exponent = 1.0 - 6.0 * std::numbers::sqrt2 * std::log2(400.0) / M;
  const double base_len = mu.base().length();
  GrowthAccumulator acc{alpha, M, rep.exponent, base_len, &rep};

  rep.dyadic_checked = walk_dyadic(mu, [&](const DyadicInterval& J, double m) { acc.check(J.left(), J.right(), m); });

  double shortest = base_len;
  for (const auto& p : mu.pieces()) shortest = std::min(shortest, p.segment.length());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double lmin = std::log(std::max(shortest / 4.0, base_len * 1e-15));
  const double lmax = std::log(base_len);
  for (int k = 0; k < sample_count; ++k) {
    const double len = std::exp(lmin + (lmax - lmin) * U(rng));
    const double l = mu.base().left() + (base_len - len) * U(rng);
    acc.check(l, l + len, mu.mass_of(l, l + len));
  }
  rep.random_checked = static_cast<std::size_t>(std::max(0, sample_count));

  for (std::size_t k = 0; k < mu.node_mass.size() && k < tree.nodes.size(); ++k) {
    const auto& node = tree.nodes[k];
    if (node.level > mu.level() || !(mu.node_mass[k] > 0.0)) continue;
    const double ratio = mu.node_mass[k] / (node.interval.length() / base_len) / std::pow(400.0, node.level);
    rep.max_density_ratio = std::max(rep.max_density_ratio, ratio);
  }
  rep.pass = rep.max_ratio_linear <= 5.0 * (1.0 + 1e-12) && rep.max_ratio_alpha <= 5.0 * (1.0 + 1e-12) &&
             rep.max_density_ratio <= 1.0 + 1e-12;
  return rep;
}

GrowthReport verify_growth(const FrostmanMeasure& mu, const GenerationTree& tree, double alpha, double M,
                           int sample_count, std::uint64_t seed) {
  GrowthReport rep = measure_growth(mu, tree, alpha, M, sample_count, seed);
  if (!rep.pass) {
    const GrowthWitness& w = rep.max_ratio_linear > 5.0 ? rep.worst_linear : rep.worst_alpha;
    throw Error(ErrorCode::GrowthViolation, "mu([" + std::to_string(w.left) + ", " + std::to_string(w.right) +
                                                "]) = " + std::to_string(w.mass) + " breaks the growth bound (j = " +
                                                std::to_string(w.j) + ")");
  }
  return rep;
}

ContentLowerBound content_lower_bound(const FrostmanMeasure& mu, double alpha, const std::vector<Segment>& extra,
                                      int random_samples, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  ContentLowerBound out;
  out.alpha = alpha;
  const double total = mu.total_mass();
  auto ratio = [&](double l, double r, double m) { return r > l ? m / std::pow(r - l, alpha) : 0.0; };

  walk_dyadic(mu, [&](const DyadicInterval& J, double m) { out.c_dyadic = std::max(out.c_dyadic, ratio(J.left(), J.right(), m)); });
  // Within one density piece the ratio d |J|^{1-alpha} grows with |J|, so
  // pieces and the extra intervals cover the off-grid maxima that matter.
  out.c_star = out.c_dyadic;
  for (const auto& p : mu.pieces())
    out.c_star = std::max(out.c_star, ratio(p.segment.left, p.segment.right, mu.mass_of(p.segment.left, p.segment.right)));
  for (const auto& s : extra) out.c_star = std::max(out.c_star, ratio(s.left, s.right, mu.mass_of(s.left, s.right)));
  const double base_len = mu.base().length();
  double shortest = base_len;
  for (const auto& p : mu.pieces()) shortest = std::min(shortest, p.segment.length());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double lmin = std::log(std::max(shortest / 4.0, base_len * 1e-15));
  const double lmax = std::log(base_len);
  for (int k = 0; k < random_samples; ++k) {
    const double len = std::exp(lmin + (lmax - lmin) * U(rng));
    const double l = mu.base().left() + (base_len - len) * U(rng);
    out.c_star = std::max(out.c_star, ratio(l, l + len, mu.mass_of(l, l + len)));
  }
  if (out.c_star > 0.0) out.estimate = total / out.c_star;
  if (out.c_dyadic > 0.0) out.certified = total / (std::pow(2.0, 1.0 + alpha) * out.c_dyadic);
  out.reference_bound = std::pow(base_len, alpha) / out.reference_constant;
  return out;
}

}  // namespace jb
