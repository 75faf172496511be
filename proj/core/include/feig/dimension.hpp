#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "feig/curve.hpp"
#include "feig/ifs.hpp"

namespace feig {

/// log |phi_w'(z)| for every word w of length <= depth over {1,2,3}, and the
/// points phi_w(z) for short words. A word w_1...w_k (w_1 applied last) sits
/// at index sum (w_t - 1) 3^(t-1) of its level, so the children of node i are
/// 3i, 3i+1, 3i+2 (the new outermost symbol being the low digit) and the
/// descendants at m levels down form the block [i 3^m, (i+1) 3^m).
class WordTree {
 public:
  WordTree(const Ifs& ifs, cplx z, int depth, int point_depth = 4);

  int depth() const noexcept { return static_cast<int>(log_deriv_.size()) - 1; }
  int point_depth() const noexcept { return static_cast<int>(points_.size()) - 1; }
  cplx basepoint() const noexcept { return points_[0][0]; }

  std::span<const double> log_deriv(int level) const;
  std::span<const cplx> points(int level) const;

  static std::size_t index(const SymbolWord& w);
  static SymbolWord word(int level, std::size_t index);

  /// sum over the descendants v of node (level, node) at m levels below of
  /// |phi_v'|^s / |phi_node'|^s, i.e. the length-m sum at phi_node(z).
  double sum(int level, std::size_t node, int m, double s) const;

 private:
  std::vector<std::vector<double>> log_deriv_;
  std::vector<std::vector<cplx>> points_;
};

/// Basepoint for the partition sums: the sampled point of X outside every
/// depth-2 image phi_w(X) farthest from their boundaries and from that of X.
cplx dimension_basepoint(const Ifs& ifs, const CompactX& x, std::size_t samples = 4000, std::uint64_t seed = 7);

struct PartitionSums {
  double value = 0.0;  // at the basepoint
  double sup = 0.0;    // per-word sup over the samples
  double inf = 0.0;
};

/// sum over the 3^m words of |phi_w'(z)|^s, and the variants taking each
/// word's sup and inf of |phi_w'| over the sample points.
PartitionSums partition_sum(const Ifs& ifs, double s, int m, cplx z, std::span<const cplx> samples);

struct PressureRow {
  int m = 0;
  double s = 0.0;
  PartitionSums sums;
};

struct PressureTable {
  int depth = 0;
  std::vector<PressureRow> rows;  // by m, then by probe
};

PressureTable pressure_table(const Ifs& ifs, cplx z, std::span<const cplx> samples, int depth,
                             std::span<const double> probes);

/// Root in s of the length-m sum at the tree's basepoint equal to 1. Throws
/// NoBracket unless the sum straddles 1 between s = 0 and s = 2.
double bowen_root(const WordTree& tree, int m);
double bowen_root(const Ifs& ifs, int m, cplx z);

/// Root of Z_m(s) = Z_{m-1}(s) for the sums at node (level, node), i.e. of the
/// length-m sum normalized by the length-(m-1) one.
double normalized_root(const WordTree& tree, int m, int level = 0, std::size_t node = 0);

struct DimensionEstimate {
  std::vector<double> bowen_roots;  // normalized roots at the basepoint, m = 1..depth
  double h = 0.0;
  /// Extremes of the normalized roots at the points phi_w(z), |w| = sample
  /// level, with m = depth - sample level. The basepoint's ratio is a
  /// weighted mean of theirs, so lo <= h <= hi.
  double lo = 0.0, hi = 0.0;
  double error = 0.0;  // (hi - lo)/2
  double box_dim = 0.0;
  int depth = 0;
};

DimensionEstimate estimate_dimension(const WordTree& tree, int sample_level = 3);

/// Slope of log N(delta) against log(1/delta), N counting the grid squares
/// of side delta the polyline meets, averaged over 4 x 4 grid shifts, less
/// one for the end box of an open arc. Throws InsufficientResolution for
/// curves with fewer than 3^8 points or scales below the curve's mesh.
double box_counting_oracle(const CurveApprox& curve, std::span<const double> scales);
/// delta = diam 2^-k for k in [k_min, k_max].
std::vector<double> dyadic_scales(const CurveApprox& curve, int k_min, int k_max);

struct ConformalMeasure {
  double s = 0.0;
  int n = 0;
  cplx basepoint;
  std::vector<double> weights;  // indexed as WordTree level n
  double total_mass() const;
  double max_weight() const;
};

/// w_v = |phi_v'(z)|^s / sum, |v| = n. Throws InsufficientDepth when the
/// tree is shallower than n.
ConformalMeasure conformal_measure(const WordTree& tree, double s, int n);

struct ConformalityCheck {
  /// For each map i: mu(phi_i X), its image integral sum_v w_v |phi_i'(phi_v z)|^s,
  /// and the bound mu(phi_i X) max |r - 1| with r the range of normalized
  /// ratios over the cylinder samples.
  std::array<double, 3> mass{}, integral{}, residual{}, bound{};
};

/// Needs the tree one level below the measure.
ConformalityCheck conformality_check(const WordTree& tree, const ConformalMeasure& mu, int sample_level = 3);

struct FrostmanRatios {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t balls = 0;
};

/// Extremes of mu(B(x, r))/r^h over centers and radii. Each level-n cylinder
/// contributes its weight times the fraction of its three sub-cylinder points
/// (tree level n + 1) inside the ball. Throws InsufficientDepth below n = 8
/// or when the tree keeps no points at level n + 1.
FrostmanRatios frostman_ratios(const WordTree& tree, const ConformalMeasure& mu, double h,
                               std::span<const cplx> centers, std::span<const double> radii);

struct QuasicircleReport {
  double M_estimate = 0.0;
  int depth = 0;
};

/// max |xi3 - xi1| / |xi2 - xi1| over triples in arc order xi1 < xi3 < xi2,
/// with xi1, xi2 on a grid of at most 3^grid_depth + 1 vertices and xi3 over
/// every vertex between them.
QuasicircleReport m_condition_estimate(const CurveApprox& curve, int grid_depth = 6);

}  // namespace feig
