#include "feig/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "feig/errors.hpp"

namespace feig {
namespace {

constexpr int kMaxTreeDepth = 15;

std::size_t pow3(int k) {
  std::size_t p = 1;
  for (int i = 0; i < k; ++i) p *= 3;
  return p;
}

struct Walker {
  const Ifs& ifs;
  std::vector<std::vector<double>>& ld;
  std::vector<std::vector<cplx>>& pts;
  int depth;

  void visit(int level, std::size_t node, cplx z, double log_d) {
    if (level == depth) return;
    for (int i = 1; i <= 3; ++i) {
      const MapPoint q = ifs.phi_jet(i, z);
      const std::size_t child = 3 * node + static_cast<std::size_t>(i - 1);
      const double lc = log_d + std::log(q.deriv_mag);
      ld[static_cast<std::size_t>(level + 1)][child] = lc;
      if (level + 1 < static_cast<int>(pts.size())) pts[static_cast<std::size_t>(level + 1)][child] = q.value;
      visit(level + 1, child, q.value, lc);
    }
  }
};

// Value and derivative of log sum exp(s x_k) - shift.
struct LogSum {
  double value;
  double slope;
};

LogSum log_sum(std::span<const double> xs, double shift, double s) {
  // Largest exponent first keeps the terms in range for any s.
  double top = -std::numeric_limits<double>::infinity();
  for (const double x : xs) top = std::max(top, s * (x - shift));
  double sum = 0.0, first = 0.0;
  for (const double x : xs) {
    const double e = std::exp(s * (x - shift) - top);
    sum += e;
    first += e * (x - shift);
  }
  return {top + std::log(sum), first / sum};
}

// Root of a decreasing function f on [lo, hi] with f(lo) > 0 > f(hi):
// Newton steps kept inside a shrinking bracket.
template <class Fn>
double decreasing_root(Fn&& f, double lo, double hi) {
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const LogSum v = f(s);
    if (v.value > 0.0) {
      lo = s;
    } else {
      hi = s;
    }
    if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
    double next = v.slope < 0.0 ? s - v.value / v.slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-15 * std::max(1.0, s)) {
      s = next;
      break;
    }
    s = next;
  }
  return s;
}

double slope_fit(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double den = sxx - sx * sx / n;
  if (!(den > 0.0)) throw InsufficientData("need at least two distinct scales");
  return (sxy - sx * sy / n) / den;
}

double neumaier_sum(std::span<const double> xs) {
  double sum = 0.0, comp = 0.0;
  for (const double x : xs) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

// ------------------------------------------------------------------ WordTree

WordTree::WordTree(const Ifs& ifs, cplx z, int depth, int point_depth) {
  if (depth < 0 || depth > kMaxTreeDepth) throw InvalidArgument("word tree depth must be in 0..15");
  point_depth = std::clamp(point_depth, 0, depth);
  log_deriv_.resize(static_cast<std::size_t>(depth) + 1);
  points_.resize(static_cast<std::size_t>(point_depth) + 1);
  for (int k = 0; k <= depth; ++k) log_deriv_[static_cast<std::size_t>(k)].assign(pow3(k), 0.0);
  for (int k = 0; k <= point_depth; ++k) points_[static_cast<std::size_t>(k)].assign(pow3(k), cplx{});
  points_[0][0] = z;
  Walker w{ifs, log_deriv_, points_, depth};
  w.visit(0, 0, z, 0.0);
}

std::span<const double> WordTree::log_deriv(int level) const {
  if (level < 0 || level > depth()) throw InvalidArgument("level outside the tree");
  return log_deriv_[static_cast<std::size_t>(level)];
}

std::span<const cplx> WordTree::points(int level) const {
  if (level < 0 || level > point_depth()) throw InsufficientDepth("tree keeps no points at that level");
  return points_[static_cast<std::size_t>(level)];
}

std::size_t WordTree::index(const SymbolWord& w) {
  std::size_t idx = 0, p = 1;
  for (const auto s : w.symbols) {
    if (s < 1 || s > 3) throw InvalidArgument("symbols must be 1, 2 or 3");
    idx += static_cast<std::size_t>(s - 1) * p;
    p *= 3;
  }
  return idx;
}

SymbolWord WordTree::word(int level, std::size_t index) {
  SymbolWord w;
  for (int t = 0; t < level; ++t) {
    w.symbols.push_back(static_cast<std::uint16_t>(index % 3 + 1));
    index /= 3;
  }
  return w;
}

double WordTree::sum(int level, std::size_t node, int m, double s) const {
  if (m < 0 || level + m > depth()) throw InsufficientDepth("sum reaches below the tree");
  const auto below = log_deriv(level + m);
  const std::size_t width = pow3(m);
  const double base = log_deriv(level)[node];
  double acc = 0.0;
  for (std::size_t v = node * width; v < (node + 1) * width; ++v) acc += std::exp(s * (below[v] - base));
  return acc;
}

// ------------------------------------------------------------- basepoint

cplx dimension_basepoint(const Ifs& ifs, const CompactX& x, std::size_t samples, std::uint64_t seed) {
  std::vector<std::vector<cplx>> images;
  for (int i = 1; i <= 3; ++i) {
    const auto first = map_polygon(ifs, i, x.boundary);
    for (int j = 1; j <= 3; ++j) images.push_back(map_polygon(ifs, j, first));
  }
  std::vector<PolygonIndex> inside;
  std::vector<SegmentIndex> edges;
  for (const auto& poly : images) {
    inside.emplace_back(poly);
    edges.emplace_back(poly, true);
  }
  const SegmentIndex outer(x.boundary, true);
  cplx best = 0.0;
  double best_gap = -1.0;
  for (const cplx z : sample_interior(x.boundary, samples, seed)) {
    bool covered = false;
    for (const auto& p : inside) covered = covered || p.contains(z);
    if (covered) continue;
    double gap = outer.distance(z);
    for (const auto& e : edges) gap = std::min(gap, e.distance(z));
    if (gap > best_gap) {
      best_gap = gap;
      best = z;
    }
  }
  if (best_gap <= 0.0) throw InsufficientData("no sample fell in the gap of the depth-2 images");
  return best;
}

// ------------------------------------------------------- partition sums

namespace {

PartitionSums sums_from(const std::vector<WordTree>& trees, int m, double s) {
  PartitionSums out;
  const auto base = trees[0].log_deriv(m);
  for (std::size_t w = 0; w < base.size(); ++w) {
    double hi = base[w], lo = base[w];
    for (std::size_t t = 1; t < trees.size(); ++t) {
      const double v = trees[t].log_deriv(m)[w];
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    out.value += std::exp(s * base[w]);
    // |phi'|^s is increasing in |phi'| for s >= 0.
    out.sup += std::exp(s * (s >= 0.0 ? hi : lo));
    out.inf += std::exp(s * (s >= 0.0 ? lo : hi));
  }
  return out;
}

std::vector<WordTree> sample_trees(const Ifs& ifs, cplx z, std::span<const cplx> samples, int depth) {
  std::vector<WordTree> trees;
  trees.emplace_back(ifs, z, depth, 0);
  for (const cplx x : samples) trees.emplace_back(ifs, x, depth, 0);
  return trees;
}

}  // namespace

PartitionSums partition_sum(const Ifs& ifs, double s, int m, cplx z, std::span<const cplx> samples) {
  if (m < 1) throw InvalidArgument("word length must be >= 1");
  if (!(s >= 0.0)) throw InvalidArgument("exponent must be nonnegative");
  return sums_from(sample_trees(ifs, z, samples, m), m, s);
}

PressureTable pressure_table(const Ifs& ifs, cplx z, std::span<const cplx> samples, int depth,
                             std::span<const double> probes) {
  if (depth < 1) throw InvalidArgument("table depth must be >= 1");
  const auto trees = sample_trees(ifs, z, samples, depth);
  PressureTable t;
  t.depth = depth;
  for (int m = 1; m <= depth; ++m) {
    for (const double s : probes) t.rows.push_back({m, s, sums_from(trees, m, s)});
  }
  return t;
}

// ----------------------------------------------------------- Bowen roots

double bowen_root(const WordTree& tree, int m) {
  if (m < 2) throw InvalidArgument("Bowen root needs m >= 2");
  const auto ld = tree.log_deriv(m);
  auto f = [&](double s) { return log_sum(ld, 0.0, s); };
  if (!(f(0.0).value > 0.0 && f(2.0).value < 0.0)) throw NoBracket("partition sum does not cross 1 on [0, 2]");
  return decreasing_root(f, 0.0, 2.0);
}

double bowen_root(const Ifs& ifs, int m, cplx z) { return bowen_root(WordTree(ifs, z, m, 0), m); }

double normalized_root(const WordTree& tree, int m, int level, std::size_t node) {
  if (m < 1) throw InvalidArgument("normalized root needs m >= 1");
  if (level + m > tree.depth()) throw InsufficientDepth("normalized root reaches below the tree");
  const double base = tree.log_deriv(level)[node];
  const auto top = tree.log_deriv(level + m).subspan(node * pow3(m), pow3(m));
  const auto bottom = tree.log_deriv(level + m - 1).subspan(node * pow3(m - 1), pow3(m - 1));
  auto f = [&](double s) {
    const LogSum a = log_sum(top, base, s);
    const LogSum b = log_sum(bottom, base, s);
    return LogSum{a.value - b.value, a.slope - b.slope};
  };
  double hi = 2.0;
  while (f(hi).value >= 0.0) {
    hi *= 2.0;
    if (hi > 64.0) throw NoBracket("normalized partition sum stays above 1");
  }
  if (!(f(0.0).value > 0.0)) throw NoBracket("normalized partition sum is below 1 at s = 0");
  return decreasing_root(f, 0.0, hi);
}

DimensionEstimate estimate_dimension(const WordTree& tree, int sample_level) {
  const int depth = tree.depth();
  if (sample_level < 0 || depth - sample_level < 2) throw InsufficientDepth("tree too shallow for the sample level");
  DimensionEstimate est;
  est.depth = depth;
  for (int m = 1; m <= depth; ++m) est.bowen_roots.push_back(normalized_root(tree, m));
  est.h = est.bowen_roots.back();
  est.lo = std::numeric_limits<double>::infinity();
  est.hi = -std::numeric_limits<double>::infinity();
  const std::size_t n = pow3(sample_level);
  for (std::size_t node = 0; node < n; ++node) {
    const double r = normalized_root(tree, depth - sample_level, sample_level, node);
    est.lo = std::min(est.lo, r);
    est.hi = std::max(est.hi, r);
  }
  est.error = 0.5 * (est.hi - est.lo);
  est.box_dim = std::numeric_limits<double>::quiet_NaN();
  return est;
}

// ---------------------------------------------------------- box counting

std::vector<double> dyadic_scales(const CurveApprox& curve, int k_min, int k_max) {
  if (k_min > k_max) throw InvalidArgument("empty scale range");
  const double d = diameter(curve.points);
  std::vector<double> out;
  for (int k = k_min; k <= k_max; ++k) out.push_back(d * std::ldexp(1.0, -k));
  return out;
}

double box_counting_oracle(const CurveApprox& curve, std::span<const double> scales) {
  if (curve.size() < pow3(8)) throw InsufficientResolution("box counting needs at least 3^8 curve points");
  if (scales.size() < 2) throw InvalidArgument("box counting needs at least two scales");
  const double mesh = mesh_size(curve.points, curve.closed);
  const auto& pts = curve.points;
  const std::size_t nseg = curve.closed ? pts.size() : pts.size() - 1;
  constexpr int kShifts = 4;
  std::vector<double> x, y;
  std::vector<cplx> samples;
  std::vector<std::int64_t> cells;
  for (const double delta : scales) {
    if (!(delta >= mesh)) throw InsufficientResolution("scale below the polyline mesh");
    samples.clear();
    for (std::size_t k = 0; k < nseg; ++k) {
      const cplx a = pts[k], b = pts[(k + 1) % pts.size()];
      // Steps of an eighth of a box never jump over a square the segment
      // crosses by more than a corner.
      const auto steps = static_cast<int>(std::ceil(8.0 * std::abs(b - a) / delta));
      for (int t = 0; t < steps; ++t) samples.push_back(a + (b - a) * (static_cast<double>(t) / steps));
    }
    samples.push_back(pts.back());
    // Averaging over grid shifts removes the dependence on where the grid
    // happens to cut the curve.
    double mean = 0.0;
    for (int sx = 0; sx < kShifts; ++sx) {
      for (int sy = 0; sy < kShifts; ++sy) {
        const double ox = delta * (sx + 0.5) / kShifts, oy = delta * (sy + 0.5) / kShifts;
        cells.clear();
        for (const cplx z : samples) {
          const auto ix = static_cast<std::int64_t>(std::floor((z.real() - ox) / delta));
          const auto iy = static_cast<std::int64_t>(std::floor((z.imag() - oy) / delta));
          cells.push_back(ix * 4000037LL + iy);
        }
        std::sort(cells.begin(), cells.end());
        mean += static_cast<double>(std::unique(cells.begin(), cells.end()) - cells.begin());
      }
    }
    mean /= kShifts * kShifts;
    // An open arc meets about length/delta + 1 boxes; the extra end box
    // would bend the log-log line below slope 1 at coarse scales.
    const double count = curve.closed ? mean : mean - 1.0;
    if (!(count > 0.0)) throw InsufficientResolution("scale larger than the curve");
    x.push_back(std::log(1.0 / delta));
    y.push_back(std::log(count));
  }
  return slope_fit(x, y);
}

// ------------------------------------------------------ conformal measure

double ConformalMeasure::total_mass() const { return neumaier_sum(weights); }

double ConformalMeasure::max_weight() const {
  return weights.empty() ? 0.0 : *std::max_element(weights.begin(), weights.end());
}

ConformalMeasure conformal_measure(const WordTree& tree, double s, int n) {
  if (n < 1) throw InvalidArgument("measure depth must be >= 1");
  if (n > tree.depth()) throw InsufficientDepth("tree shallower than the measure depth");
  ConformalMeasure mu;
  mu.s = s;
  mu.n = n;
  mu.basepoint = tree.basepoint();
  const auto ld = tree.log_deriv(n);
  const double top = *std::max_element(ld.begin(), ld.end());
  mu.weights.resize(ld.size());
  for (std::size_t v = 0; v < ld.size(); ++v) mu.weights[v] = std::exp(s * (ld[v] - top));
  const double total = neumaier_sum(mu.weights);
  for (double& w : mu.weights) w /= total;
  return mu;
}

ConformalityCheck conformality_check(const WordTree& tree, const ConformalMeasure& mu, int sample_level) {
  const int n = mu.n;
  if (n + 1 > tree.depth()) throw InsufficientDepth("conformality needs the tree one level below the measure");
  if (sample_level < 0 || sample_level > n - 1) throw InvalidArgument("sample level must be below the measure depth");
  const double s = mu.s;
  const auto ln = tree.log_deriv(n);
  const auto ln1 = tree.log_deriv(n + 1);
  const auto lj = tree.log_deriv(sample_level);
  const double top = *std::max_element(ln.begin(), ln.end());
  double z_n = 0.0;
  for (const double v : ln) z_n += std::exp(s * (v - top));
  ConformalityCheck out;
  for (int i = 0; i < 3; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    double mass = 0.0, integral = 0.0;
    for (std::size_t v = ui; v < ln.size(); v += 3) mass += mu.weights[v];
    for (std::size_t v = 0; v < ln.size(); ++v) integral += std::exp(s * (ln1[3 * v + ui] - top));
    integral /= z_n;
    // The ratio integral/mass at the basepoint is a weighted mean of the
    // same ratio at the sample points phi_w(z), |w| = sample level.
    const std::size_t width_n = pow3(n - sample_level), width_n1 = 3 * width_n;
    double worst = 0.0;
    for (std::size_t node = 0; node < lj.size(); ++node) {
      double a = 0.0, b = 0.0;
      for (std::size_t v = node * width_n + ui; v < (node + 1) * width_n; v += 3) a += std::exp(s * (ln[v] - lj[node]));
      for (std::size_t v = node * width_n1 + ui; v < (node + 1) * width_n1; v += 3) {
        b += std::exp(s * (ln1[v] - lj[node]));
      }
      worst = std::max(worst, std::abs(b / a - 1.0));
    }
    out.mass[ui] = mass;
    out.integral[ui] = integral;
    out.residual[ui] = std::abs(mass - integral);
    out.bound[ui] = mass * worst;
  }
  return out;
}

FrostmanRatios frostman_ratios(const WordTree& tree, const ConformalMeasure& mu, double h,
                               std::span<const cplx> centers, std::span<const double> radii) {
  const int n = mu.n;
  if (n < 8) throw InsufficientDepth("Frostman ratios need a measure of depth >= 8");
  if (tree.point_depth() < n + 1) throw InsufficientDepth("tree keeps no sub-cylinder points");
  if (centers.empty() || radii.empty()) throw InvalidArgument("need centers and radii");
  const auto sub = tree.points(n + 1);
  const std::size_t width = pow3(n);
  FrostmanRatios out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = 0.0;
  for (const cplx x : centers) {
    for (const double r : radii) {
      if (!(r > 0.0)) throw InvalidArgument("radii must be positive");
      const double r2 = r * r;
      double mass = 0.0;
      // Sub-cylinder v k (k applied first) sits at v + (k - 1) 3^n.
      for (std::size_t v = 0; v < width; ++v) {
        int in = 0;
        for (std::size_t k = 0; k < 3; ++k) in += std::norm(sub[v + k * width] - x) <= r2 ? 1 : 0;
        if (in > 0) mass += mu.weights[v] * in / 3.0;
      }
      const double ratio = mass / std::pow(r, h);
      out.min_ratio = std::min(out.min_ratio, ratio);
      out.max_ratio = std::max(out.max_ratio, ratio);
      ++out.balls;
    }
  }
  return out;
}

// ----------------------------------------------------------- M-condition

QuasicircleReport m_condition_estimate(const CurveApprox& curve, int grid_depth) {
  QuasicircleReport rep;
  rep.depth = curve.has_addresses() ? static_cast<int>(curve.addresses.front().size()) : 0;
  const auto& p = curve.points;
  const std::size_t n = p.size();
  if (n < 3) return rep;
  const std::size_t cells = std::min(n - 1, pow3(std::max(grid_depth, 1)));
  const std::size_t stride = std::max<std::size_t>(1, (n - 1) / cells);
  double worst = 0.0;
  for (int dir = 0; dir < 2; ++dir) {
    auto at = [&](std::size_t k) { return dir == 0 ? p[k] : p[n - 1 - k]; };
    for (std::size_t i = 0; i < n; i += stride) {
      double reach = 0.0;
      const cplx a = at(i);
      for (std::size_t k = i + 1; k < n; ++k) {
        const double d = std::abs(at(k) - a);
        if ((k - i) % stride == 0 && d > 0.0 && k - i > 1) worst = std::max(worst, reach / d);
        reach = std::max(reach, d);
      }
    }
  }
  rep.M_estimate = std::max(worst, 1.0);
  return rep;
}

}  // namespace feig
