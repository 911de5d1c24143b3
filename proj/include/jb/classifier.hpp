#pragma once

#include <vector>

#include "jb/dyadic.hpp"
#include "jb/harmonic.hpp"

namespace jb {

struct GoodSetParams {
  int x_cells = 1024;      // power of two
  double y_ratio = 1.05;   // ratio between consecutive sample heights
  double y_floor_rel = 0x1p-10;  // y_floor = y_floor_rel * |I|
};

/// Brackets G(I) = {x in I : sup |u(x+iy) - u(z_I)| <= M + A sqrt2}, the sup
/// taken over y in [y_floor, |I|].
struct GoodSetEstimate {
  DyadicInterval interval;
  IntervalUnion inner;  // every x here is in G(I)
  IntervalUnion outer;  // G(I) is contained here
  double y_floor = 0.0;
  double threshold = 0.0;
};

/// Analytic sources: for each x cell with center c and half-width h/2, the
/// heights y_k = |I| r^-k (r <= y_ratio, y_K = y_floor) are sampled and
///   upper = max_k |u(c, y_k) - u(z_I)| + A (h / (2 y_k) + log r)
///   lower = max_k |u(c, y_k) - u(z_I)| - A h / (2 y_k).
/// Martingale sources are evaluated exactly on the node tree (the vertical
/// sup is attained at node anchors), so inner and outer differ only on cells
/// split by deeper nodes.
GoodSetEstimate good_set(const DyadicInterval& I, const HarmonicSource& src, double M, const GoodSetParams& params = {});

enum class Verdict { Good, Bad };

struct Classification {
  Verdict verdict = Verdict::Bad;
  bool indeterminate = false;  // brackets straddle |I|/100
  GoodSetEstimate estimate;
};

/// Good iff |inner| >= |I|/100; straddling brackets give Bad + indeterminate.
Classification classify_measures(double inner_length, double outer_length, double interval_length);
Classification classify(const DyadicInterval& I, const HarmonicSource& src, double M, const GoodSetParams& params = {});

struct FamilyMember {
  DyadicInterval interval;
  double deviation = 0.0;  // u(z_{I_j}) - u(z_I)
  bool within_upper = true;   // |deviation| <= M + A sqrt2
  bool length_bound = true;   // |I_j| <= 2^{-M/(A sqrt2)} |I|
};

struct MaximalFamily {
  DyadicInterval parent;
  int sign = 1;
  double M = 0.0;
  std::vector<FamilyMember> members;  // left to right
  bool truncated = false;   // search hit max_rel_depth with undecided nodes
  bool incomplete = false;  // truncated and total length < |I|/4
  double total_length() const;
};

/// Maximal dyadic J strictly inside I with sign*(u(z_J) - u(z_I)) >= M and
/// no ancestor below I with |u(z_.) - u(z_I)| >= M. Breadth-first.
MaximalFamily maximal_family(const DyadicInterval& I, const HarmonicSource& src, double M, int sign,
                             int max_rel_depth = 16);

struct GreenResidual {
  double delta = 0.0;
  double quadrature_error = 0.0;
  double y_floor = 0.0;
};

/// delta = u(z_I) - sum_j u(z_{I_j}) |I_j|/|I| - (1/|I|) int_{I minus the I_j} u(x + i y_floor) dx.
/// Analytic sources only (UnsupportedSource otherwise).
GreenResidual green_residual(const DyadicInterval& I, const std::vector<DyadicInterval>& family,
                             const HarmonicSource& src, double y_floor, int quadrature_cells = 64);

struct ClassifierConfig {
  double M0_factor = 100.0;      // M0 = M0_factor * A
  double delta_factor = 20.0;    // delta_A = delta_factor * A
};

}  // namespace jb
