#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace feig {

using cplx = std::complex<double>;

/// A finite composition word. Symbols are 1-based map indices: {1,2,3} for the
/// finite system, any positive integer for the induced infinite one.
struct SymbolWord {
  std::vector<std::uint16_t> symbols;

  std::size_t size() const noexcept { return symbols.size(); }
  bool empty() const noexcept { return symbols.empty(); }

  /// (-1)^(number of antiholomorphic factors); in the finite system symbols 1
  /// and 2 are antiholomorphic and 3 is holomorphic.
  int orientation() const noexcept;

  /// Ternary-style rendering, e.g. "1231"; empty word renders as "".
  std::string str() const;

  friend auto operator<=>(const SymbolWord&, const SymbolWord&) = default;
};

/// Ordered polyline. `addresses`, when non-empty, has one word per vertex.
struct CurveApprox {
  std::vector<cplx> points;
  std::vector<SymbolWord> addresses;
  bool closed = false;

  std::size_t size() const noexcept { return points.size(); }
  bool has_addresses() const noexcept { return !addresses.empty(); }
};

/// Axis-aligned bounding box.
struct Box {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

  bool contains(cplx z, double pad = 0.0) const noexcept {
    return z.real() >= xmin - pad && z.real() <= xmax + pad && z.imag() >= ymin - pad &&
           z.imag() <= ymax + pad;
  }
  bool intersects(const Box& o, double pad = 0.0) const noexcept {
    return !(o.xmin > xmax + pad || o.xmax < xmin - pad || o.ymin > ymax + pad || o.ymax < ymin - pad);
  }
  double diagonal() const noexcept { return std::hypot(xmax - xmin, ymax - ymin); }
};

Box bounding_box(std::span<const cplx> pts);

double polyline_length(std::span<const cplx> pts, bool closed = false);
/// Largest segment length.
double mesh_size(std::span<const cplx> pts, bool closed = false);
/// Exact diameter of the vertex set (convex hull + pairwise on hull).
double diameter(std::span<const cplx> pts);
/// Signed shoelace area of the closed polygon (counterclockwise positive).
double signed_area(std::span<const cplx> pts);
cplx centroid(std::span<const cplx> polygon);

double point_segment_distance(cplx p, cplx a, cplx b);

/// Winding number of the closed polygon around z (0 outside).
int winding_number(std::span<const cplx> polygon, cplx z);
bool polygon_contains(std::span<const cplx> polygon, cplx z);

/// Proper or touching intersection of closed segments [a,b] and [c,d].
bool segments_intersect(cplx a, cplx b, cplx c, cplx d);

/// Number of intersecting pairs of non-adjacent segments of an open polyline,
/// by exhaustive pairwise testing.
std::size_t count_self_intersections(std::span<const cplx> pts);

/// Removes consecutive duplicates (distance <= eps).
std::vector<cplx> dedupe_consecutive(std::span<const cplx> pts, double eps = 0.0);

/// Uniform-grid index over the segments of a polyline for distance queries.
class SegmentIndex {
 public:
  SegmentIndex(std::span<const cplx> pts, bool closed, double cell = 0.0);

  /// Euclidean distance from z to the polyline.
  double distance(cplx z) const;
  std::size_t segment_count() const noexcept { return segs_.size(); }

 private:
  struct Seg {
    cplx a, b;
  };
  long long key(long long ix, long long iy) const noexcept { return ix * 1000003LL + iy; }
  std::vector<Seg> segs_;
  Box box_;
  double cell_;
  long long nx_, ny_;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

/// Horizontal-band index over the edges of a closed polygon for fast
/// winding-number queries.
class PolygonIndex {
 public:
  explicit PolygonIndex(std::span<const cplx> polygon, std::size_t bands = 0);

  int winding(cplx z) const;
  bool contains(cplx z) const { return winding(z) != 0; }
  const Box& box() const noexcept { return box_; }

 private:
  std::vector<cplx> pts_;
  Box box_;
  double h_ = 1.0;
  std::vector<std::vector<std::uint32_t>> bands_;
};

/// Symmetric Hausdorff distance between two polylines (vertices of each
/// against segments of the other).
double hausdorff_distance(const CurveApprox& a, const CurveApprox& b);
/// One-sided: max over vertices of `from` of the distance to polyline `to`.
double directed_hausdorff(std::span<const cplx> from, std::span<const cplx> to, bool to_closed = false);

/// Refines a parametrized curve t -> f(t), t in [t0,t1], until each chord's
/// midpoint deviation from the curve is below `rel_tol` times the curve
/// diameter (or `abs_tol` when that is positive and smaller). Starts from
/// `initial` uniform samples in t.
template <class Fn>
std::vector<cplx> adaptive_sample(Fn&& f, double t0, double t1, int initial, double rel_tol,
                                  double abs_tol = 0.0, int max_points = 400000);

}  // namespace feig

#include "feig/detail/adaptive_sample.ipp"
