#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "jb/classifier.hpp"

namespace jb {

/// 6 sqrt2 log2(400) / (1 - alpha): the smallest M for which the final
/// dimension estimate 1 - 6 sqrt2 log2(400)/M exceeds alpha.
double M_min(double alpha);

/// Window half-width for the recalibrated threshold.
inline constexpr double kCalibrationWindow = 6.0 * 1.4142135623730951;

/// M' with u_node + sign*M' = u_root + sign*M. Throws CalibrationOutOfRange
/// when M' leaves [M - 6 sqrt2, M + 6 sqrt2].
double recalibrate_M(double u_root, double u_node, double M, int sign = 1);

enum class NodeKind { GoodTerminal, BadInternal, BadFrontier };
enum class StopReason { None, Good, MaxLevel, EmptyFamily };

std::string to_string(NodeKind k);
std::string to_string(StopReason r);

struct GenerationNode {
  DyadicInterval interval;
  int level = 0;
  NodeKind kind = NodeKind::BadFrontier;
  StopReason stop = StopReason::None;
  IntervalUnion good_set;          // GoodTerminal only (certified inner set)
  double y_floor = 0.0;            // floor used by the good-set estimate
  double deviation = 0.0;          // u(z_I) - u(z_{I0})
  bool indeterminate = false;
  int sign = 0;                    // family sign used for the children
  double M_local = 0.0;            // threshold used for the children
  bool family_truncated = false;
  bool family_incomplete = false;
  std::vector<std::size_t> children;  // indices into GenerationTree::nodes
};

struct LevelSummary {
  int level = 0;
  std::size_t good_nodes = 0;
  std::size_t bad_nodes = 0;
  double good_length = 0.0;  // sum of certified good-set lengths
  double bad_length = 0.0;   // sum of bad interval lengths
};

struct BuildParams {
  GoodSetParams good;
  int max_rel_depth = 16;  // maximal-family search depth
  bool test_mode = false;  // admit M < M_min(alpha)
};

struct GenerationTree {
  DyadicInterval base;
  double alpha = 0.5;
  double M = 0.0;
  double A = 0.0;
  double u_root = 0.0;
  int n_max = 0;
  bool test_mode = false;
  std::vector<GenerationNode> nodes;  // level by level, left to right; nodes[0] is the root
  std::vector<LevelSummary> levels;
  std::vector<std::string> violations;  // failed invariants (empty on a clean build)
  std::vector<std::string> notes;       // recorded, not asserted
};

/// Runs the alternating construction: F+ at even levels, F- at odd levels,
/// thresholds M at levels 0 and odd levels, recalibrated M' at even levels
/// >= 2. Bad nodes at level n_max are left as frontier.
GenerationTree build(const HarmonicSource& src, const DyadicInterval& base, double alpha, double M, int n_max,
                     const BuildParams& params = {});

/// Good sets of terminal nodes at levels <= n together with the bad
/// intervals at level n.
IntervalUnion extract_E(const GenerationTree& tree, int n);

/// Lowest height down to which the distortion guarantee is certified for E_n.
double global_floor(const GenerationTree& tree, int n);

struct DistortionReport {
  int level = 0;
  double y_floor = 0.0;
  double max_deviation = 0.0;       // over sampled S(E_n)
  double max_deviation_on_E = 0.0;  // over sampled verticals above E_n
  double bound = 0.0;               // 2M + 30
  double bound_on_E = 0.0;          // 2M + 24
  double slack = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

/// Samples S(E_n) (heights log-spaced from y_floor to |I0|) and reports
/// max |u(w) - u(z_{I0})|.
DistortionReport verify_distortion(const GenerationTree& tree, const HarmonicSource& src, int n, double y_floor,
                                   int x_samples = 512, int y_samples = 64);

}  // namespace jb
