#include "jb/builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "jb/error.hpp"
#include "jb/parallel.hpp"

namespace jb {

namespace {

double anchor_value(const HarmonicSource& src, const DyadicInterval& J) {
  if (const MartingaleModel* m = src.martingale_model()) return m->node_value(J);
  return src.u(J.anchor());
}

// Martingale sources are resolved exactly: the floor reaches the data depth
// (u is constant below it) and cells are single nodes where affordable.
GoodSetParams params_for(const DyadicInterval& I, const HarmonicSource& src, const GoodSetParams& base) {
  GoodSetParams p = base;
  if (const MartingaleModel* m = src.martingale_model()) {
    const int rel = std::max(1, m->data_depth() - I.depth());
    p.y_floor_rel = std::ldexp(1.0, -rel);
    p.x_cells = 1 << std::min(rel, 16);
  }
  return p;
}

void check_scale(const DyadicInterval& J, int level) {
  const double scale = std::max(1.0, std::abs(J.center()));
  if (J.length() < 64.0 * std::numeric_limits<double>::epsilon() * scale)
    throw Error(ErrorCode::ScaleUnderflow, "interval lengths underflow at level " + std::to_string(level));
}

}  // namespace

double M_min(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  return 6.0 * std::numbers::sqrt2 * std::log2(400.0) / (1.0 - alpha);
}

double recalibrate_M(double u_root, double u_node, double M, int sign) {
  const double drift = sign * (u_node - u_root);
  if (std::abs(drift) > kCalibrationWindow)
    throw Error(ErrorCode::CalibrationOutOfRange,
                "recalibrated threshold outside [M - 6 sqrt2, M + 6 sqrt2] (drift " + std::to_string(drift) + ")");
  return M - drift;
}

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::GoodTerminal: return "good_terminal";
    case NodeKind::BadInternal: return "bad_internal";
    case NodeKind::BadFrontier: return "bad_frontier";
  }
  return "unknown";
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::None: return "none";
    case StopReason::Good: return "good";
    case StopReason::MaxLevel: return "max_level";
    case StopReason::EmptyFamily: return "empty_family";
  }
  return "unknown";
}

GenerationTree build(const HarmonicSource& src, const DyadicInterval& base, double alpha, double M, int n_max,
                     const BuildParams& params) {
  if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "n_max must be nonnegative");
  const double m_min = M_min(alpha);
  if (!params.test_mode && M < m_min)
    throw Error(ErrorCode::InvalidConfig,
                "M = " + std::to_string(M) + " is below M_min(alpha) = " + std::to_string(m_min) + "; use test mode");
  if (!(M > 0.0)) throw Error(ErrorCode::InvalidArgument, "M must be positive");

  GenerationTree tree;
  tree.base = base;
  tree.alpha = alpha;
  tree.M = M;
  tree.A = src.certified_A();
  tree.n_max = n_max;
  tree.test_mode = params.test_mode;
  tree.u_root = anchor_value(src, base);
  if (M < m_min) tree.notes.push_back("M below M_min(alpha): lemma preconditions are reported only");

  const double A = tree.A;
  const double sqrt2 = std::numbers::sqrt2;
  auto violation = [&](std::string what) {
    if (params.test_mode) tree.notes.push_back(std::move(what));
    else tree.violations.push_back(std::move(what));
  };

  tree.nodes.push_back({});
  tree.nodes[0].interval = base;
  std::vector<std::size_t> current{0};
  for (int level = 0; !current.empty(); ++level) {
    LevelSummary summary;
    summary.level = level;
    const std::size_t level_end = tree.nodes.size();
    for (std::size_t idx : current) {
      GenerationNode node = tree.nodes[idx];
      node.level = level;
      check_scale(node.interval, level);
      node.deviation = anchor_value(src, node.interval) - tree.u_root;
      const Classification c = classify(node.interval, src, M, params_for(node.interval, src, params.good));
      node.y_floor = c.estimate.y_floor;
      node.indeterminate = c.indeterminate;
      if (c.verdict == Verdict::Good) {
        node.kind = NodeKind::GoodTerminal;
        node.stop = StopReason::Good;
        node.good_set = c.estimate.inner;
        ++summary.good_nodes;
        summary.good_length += node.good_set.total_length();
        tree.nodes[idx] = std::move(node);
        continue;
      }
      ++summary.bad_nodes;
      summary.bad_length += node.interval.length();
      if (level > 0 && level % 2 == 0 && std::abs(node.deviation) > 12.0 * sqrt2)
        violation("level " + std::to_string(level) + " node drifted more than 12 sqrt2 from the root");
      if (level >= n_max) {
        node.kind = NodeKind::BadFrontier;
        node.stop = StopReason::MaxLevel;
        tree.nodes[idx] = std::move(node);
        continue;
      }
      node.sign = level % 2 == 0 ? 1 : -1;
      node.M_local = (level == 0 || level % 2 == 1) ? M : recalibrate_M(tree.u_root, anchor_value(src, node.interval), M);
      MaximalFamily fam;
      try {
        fam = maximal_family(node.interval, src, node.M_local, node.sign, params.max_rel_depth);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DepthExceeded) throw;
        throw Error(ErrorCode::ScaleUnderflow, "dyadic depth exhausted at level " + std::to_string(level));
      }
      node.family_truncated = fam.truncated;
      node.family_incomplete = fam.incomplete;
      const double decay = std::exp2(-(M - kCalibrationWindow) / (A * sqrt2)) * node.interval.length();
      for (const auto& mem : fam.members) {
        if (!mem.within_upper) violation("family member deviation exceeds M + A sqrt2");
        if (!mem.length_bound || mem.interval.length() > decay) violation("family member violates the length decay");
      }
      const double mass = fam.total_length();
      if (!fam.truncated && mass < node.interval.length() / 400.0)
        violation("family mass below |I|/400 at level " + std::to_string(level));
      if (mass < node.interval.length() / 4.0)
        tree.notes.push_back("family mass below |I|/4 at level " + std::to_string(level) +
                             (fam.truncated ? " (truncated search)" : ""));
      if (fam.members.empty()) {
        node.kind = NodeKind::BadFrontier;
        node.stop = StopReason::EmptyFamily;
        tree.nodes[idx] = std::move(node);
        continue;
      }
      node.kind = NodeKind::BadInternal;
      for (std::size_t k = 0; k < fam.members.size(); ++k) node.children.push_back(tree.nodes.size() + k);
      tree.nodes[idx] = std::move(node);
      for (const auto& mem : fam.members) {
        GenerationNode child;
        child.interval = mem.interval;
        child.level = level + 1;
        tree.nodes.push_back(std::move(child));
      }
    }
    tree.levels.push_back(summary);
    // The children appended during this level form the next level.
    current.clear();
    for (std::size_t k = level_end; k < tree.nodes.size(); ++k) current.push_back(k);
  }

  // Monotone outer approximation E_{n+1} inside E_n.
  for (int n = 0; n + 1 < static_cast<int>(tree.levels.size()); ++n)
    if (!extract_E(tree, n + 1).is_subset_of(extract_E(tree, n), 1e-15))
      tree.violations.push_back("E_" + std::to_string(n + 1) + " is not contained in E_" + std::to_string(n));
  return tree;
}

IntervalUnion extract_E(const GenerationTree& tree, int n) {
  std::vector<Segment> pieces;
  for (const auto& node : tree.nodes) {
    if (node.level > n) continue;
    if (node.kind == NodeKind::GoodTerminal) {
      for (const auto& s : node.good_set.components()) pieces.push_back(s);
    } else if (node.level == n && node.stop != StopReason::EmptyFamily) {
      pieces.push_back({node.interval.left(), node.interval.right()});
    }
  }
  return IntervalUnion(std::move(pieces));
}

double global_floor(const GenerationTree& tree, int n) {
  double y = tree.base.length();
  for (const auto& node : tree.nodes) {
    if (node.level > n) continue;
    if (node.kind == NodeKind::GoodTerminal) y = std::min(y, node.y_floor);
    else if (node.level == n && node.stop != StopReason::EmptyFamily) y = std::min(y, node.interval.length());
  }
  return y;
}

DistortionReport verify_distortion(const GenerationTree& tree, const HarmonicSource& src, int n, double y_floor,
                                   int x_samples, int y_samples) {
  DistortionReport rep;
  rep.level = n;
  rep.y_floor = y_floor;
  rep.bound = 2.0 * tree.M + 30.0;
  rep.bound_on_E = 2.0 * tree.M + 24.0;
  rep.slack = tree.A;
  const IntervalUnion E = extract_E(tree, n);
  const double y0 = tree.base.length();
  if (E.empty() || !(y_floor > 0.0) || y_floor >= y0) {
    rep.pass = E.empty();
    return rep;
  }
  const double u0 = src.u(tree.base.anchor());
  const double lo = tree.base.left();
  const double hi = tree.base.right();

  // Points of a union: endpoints of each component plus x_samples spread by length.
  auto sample_union = [&](const IntervalUnion& U) {
    std::vector<double> xs;
    for (const auto& s : U.components()) {
      xs.push_back(s.left);
      xs.push_back(s.right);
    }
    const double total = U.total_length();
    if (total > 0.0) {
      double acc = 0.0;
      std::size_t k = 0;
      for (const auto& s : U.components()) {
        const double end = acc + s.length();
        for (; k < static_cast<std::size_t>(x_samples); ++k) {
          const double t = (k + 0.5) * total / x_samples;
          if (t > end) break;
          xs.push_back(s.left + (t - acc));
        }
        acc = end;
      }
    }
    return xs;
  };

  std::vector<double> heights(static_cast<std::size_t>(y_samples));
  for (int k = 0; k < y_samples; ++k) heights[k] = y_floor * std::pow(y0 / y_floor, static_cast<double>(k) / y_samples);

  std::vector<double> dev_s(heights.size(), 0.0);
  std::vector<double> dev_e(heights.size(), 0.0);
  std::vector<std::size_t> count(heights.size(), 0);
  const std::vector<double> on_E = sample_union(E);
  parallel_for(heights.size(), [&](std::size_t k) {
    const double y = heights[k];
    std::vector<Segment> grown;
    for (const auto& s : E.components()) grown.push_back({std::max(lo, s.left - y), std::min(hi, s.right + y)});
    for (double x : sample_union(IntervalUnion(std::move(grown)))) {
      dev_s[k] = std::max(dev_s[k], std::abs(src.u({x, y}) - u0));
      ++count[k];
    }
    for (double x : on_E) {
      dev_e[k] = std::max(dev_e[k], std::abs(src.u({x, y}) - u0));
      ++count[k];
    }
  });
  for (std::size_t k = 0; k < heights.size(); ++k) {
    rep.max_deviation = std::max(rep.max_deviation, dev_s[k]);
    rep.max_deviation_on_E = std::max(rep.max_deviation_on_E, dev_e[k]);
    rep.samples += count[k];
  }
  rep.pass = rep.max_deviation <= rep.bound + rep.slack && rep.max_deviation_on_E <= rep.bound_on_E + rep.slack;
  return rep;
}

}  // namespace jb
