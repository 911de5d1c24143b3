#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jb/builder.hpp"

namespace jb {

/// Piecewise-constant density on disjoint segments.
struct DensityPiece {
  Segment segment;
  double density = 0.0;
};

/// mu_n on the generation tree: unit mass on the root, redistributed at each
/// bad node I as a(I) dx on its children (a(I) = mass / sum of child lengths),
/// and spread uniformly over the certified good set at good terminals.
class FrostmanMeasure {
 public:
  FrostmanMeasure() = default;
  FrostmanMeasure(DyadicInterval base, int level, std::vector<DensityPiece> pieces);

  const DyadicInterval& base() const { return base_; }
  int level() const { return level_; }
  const std::vector<DensityPiece>& pieces() const { return pieces_; }
  double total_mass() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  /// Exact integral of the density over [a, b].
  double mass_of(double a, double b) const;
  double mass_of(const DyadicInterval& J) const { return mass_of(J.left(), J.right()); }
  IntervalUnion support() const;

  // Per tree node (indexed like GenerationTree::nodes; zero past level n).
  std::vector<double> node_mass;
  std::vector<double> node_a;  // a(I) for bad nodes that redistributed
  std::vector<std::string> warnings;

 private:
  double cdf(double x) const;

  DyadicInterval base_;
  int level_ = 0;
  std::vector<DensityPiece> pieces_;
  std::vector<double> cumulative_;  // mass up to the end of each piece
};

/// Throws DegenerateCarrier on zero-length carriers. Mass stranded on bad
/// nodes with empty families is dropped and the rest renormalized (warning).
FrostmanMeasure build_measure(const GenerationTree& tree, int n);

struct GrowthWitness {
  double left = 0.0;
  double right = 0.0;
  double mass = 0.0;
  int j = 0;
};

struct GrowthReport {
  double alpha = 0.0;
  double M = 0.0;
  double exponent = 0.0;          // 1 - 6 sqrt2 log2(400)/M
  double max_ratio_linear = 0.0;  // sup mu(J) / (400^j |J|)
  double max_ratio_alpha = 0.0;   // sup mu(J) / |J|^exponent
  GrowthWitness worst_linear;
  GrowthWitness worst_alpha;
  std::size_t dyadic_checked = 0;
  std::size_t random_checked = 0;
  double max_density_ratio = 0.0;  // max over nodes of (mu(I)/|I|) / 400^level
  bool pass = false;
};

/// Lengths are measured relative to |base|. j is the integer with
/// 2^{-M(j+1)/(6 sqrt2)} <= |J| <= 2^{-M j/(6 sqrt2)}. Dyadic J are enumerated
/// exhaustively (subtrees with zero mass or inside one density piece are
/// pruned, their ratios being dominated by the parent); the random J have
/// log-uniform lengths.
GrowthReport measure_growth(const FrostmanMeasure& mu, const GenerationTree& tree, double alpha, double M,
                            int sample_count, std::uint64_t seed = 1);
/// As measure_growth, throwing GrowthViolation with the witness on failure.
GrowthReport verify_growth(const FrostmanMeasure& mu, const GenerationTree& tree, double alpha, double M,
                           int sample_count, std::uint64_t seed = 1);

struct ContentLowerBound {
  double alpha = 0.0;
  double c_star = 0.0;       // sup over examined J of mu(J)/|J|^alpha
  double estimate = 0.0;     // mu(E)/c_star
  double c_dyadic = 0.0;     // exact sup over dyadic J
  double certified = 0.0;    // mu(E) / (2^{1+alpha} c_dyadic)
  double reference_constant = 5.0;
  double reference_bound = 0.0;  // |base|^alpha / 5
};

/// `extra` lists further intervals to include in c_star (typically the
/// optimal cover of E_n, which makes estimate <= content of E_n).
ContentLowerBound content_lower_bound(const FrostmanMeasure& mu, double alpha, const std::vector<Segment>& extra = {},
                                      int random_samples = 4096, std::uint64_t seed = 1);

}  // namespace jb
