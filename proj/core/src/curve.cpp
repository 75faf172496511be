#include "feig/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace feig {

int SymbolWord::orientation() const noexcept {
  int sign = 1;
  for (auto s : symbols)
    if (s == 1 || s == 2) sign = -sign;
  return sign;
}

std::string SymbolWord::str() const {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i] < 10) {
      out.push_back(static_cast<char>('0' + symbols[i]));
    } else {
      // Multi-digit symbols only arise in the induced system; bracket them.
      out += "(" + std::to_string(symbols[i]) + ")";
    }
  }
  return out;
}

Box bounding_box(std::span<const cplx> pts) {
  Box b{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (const cplx& z : pts) {
    b.xmin = std::min(b.xmin, z.real());
    b.xmax = std::max(b.xmax, z.real());
    b.ymin = std::min(b.ymin, z.imag());
    b.ymax = std::max(b.ymax, z.imag());
  }
  return b;
}

double polyline_length(std::span<const cplx> pts, bool closed) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += std::abs(pts[i] - pts[i - 1]);
  if (closed && pts.size() > 2) len += std::abs(pts.front() - pts.back());
  return len;
}

double mesh_size(std::span<const cplx> pts, bool closed) {
  double m = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) m = std::max(m, std::abs(pts[i] - pts[i - 1]));
  if (closed && pts.size() > 2) m = std::max(m, std::abs(pts.front() - pts.back()));
  return m;
}

namespace {

double cross(cplx o, cplx a, cplx b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

std::vector<cplx> convex_hull(std::span<const cplx> pts) {
  std::vector<cplx> p(pts.begin(), pts.end());
  std::sort(p.begin(), p.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<cplx> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

int orient(cplx a, cplx b, cplx c) {
  const double v = cross(a, b, c);
  const double scale = std::max({std::abs(b - a), std::abs(c - a), 1e-300});
  if (std::abs(v) <= 1e-15 * scale * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(cplx a, cplx b, cplx p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

}  // namespace

double diameter(std::span<const cplx> pts) {
  const auto hull = convex_hull(pts);
  double d = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j) d = std::max(d, std::abs(hull[i] - hull[j]));
  return d;
}

double signed_area(std::span<const cplx> pts) {
  double a = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx p = pts[i];
    const cplx q = pts[(i + 1) % n];
    a += p.real() * q.imag() - q.real() * p.imag();
  }
  return 0.5 * a;
}

cplx centroid(std::span<const cplx> polygon) {
  const double a = signed_area(polygon);
  const std::size_t n = polygon.size();
  if (n == 0) return 0.0;
  if (std::abs(a) < 1e-300) {
    cplx s = 0.0;
    for (const cplx& z : polygon) s += z;
    return s / static_cast<double>(n);
  }
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx p = polygon[i];
    const cplx q = polygon[(i + 1) % n];
    const double w = p.real() * q.imag() - q.real() * p.imag();
    cx += (p.real() + q.real()) * w;
    cy += (p.imag() + q.imag()) * w;
  }
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

int winding_number(std::span<const cplx> polygon, cplx z) {
  // Crossing-number form of the winding number (Sunday's algorithm).
  int wn = 0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = polygon[i];
    const cplx b = polygon[(i + 1) % n];
    if (a.imag() <= z.imag()) {
      if (b.imag() > z.imag() && cross(a, b, z) > 0) ++wn;
    } else if (b.imag() <= z.imag() && cross(a, b, z) < 0) {
      --wn;
    }
  }
  return wn;
}

bool polygon_contains(std::span<const cplx> polygon, cplx z) { return winding_number(polygon, z) != 0; }

PolygonIndex::PolygonIndex(std::span<const cplx> polygon, std::size_t bands)
    : pts_(polygon.begin(), polygon.end()), box_(bounding_box(polygon)) {
  const std::size_t n = pts_.size();
  if (bands == 0) bands = std::clamp<std::size_t>(n / 8, 1, 4096);
  const double height = box_.ymax - box_.ymin;
  h_ = height > 0.0 ? height / static_cast<double>(bands) : 1.0;
  bands_.resize(bands);
  auto band_of = [&](double y) {
    const double t = std::floor((y - box_.ymin) / h_);
    return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(bands - 1)));
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double y0 = pts_[i].imag();
    const double y1 = pts_[(i + 1) % n].imag();
    const std::size_t b0 = band_of(std::min(y0, y1));
    const std::size_t b1 = band_of(std::max(y0, y1));
    for (std::size_t b = b0; b <= b1; ++b) bands_[b].push_back(static_cast<std::uint32_t>(i));
  }
}

int PolygonIndex::winding(cplx z) const {
  if (pts_.size() < 3 || !box_.contains(z)) return 0;
  const double t = std::floor((z.imag() - box_.ymin) / h_);
  const auto b = static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(bands_.size() - 1)));
  const std::size_t n = pts_.size();
  int wn = 0;
  for (const std::uint32_t i : bands_[b]) {
    const cplx a = pts_[i];
    const cplx e = pts_[(i + 1) % n];
    if (a.imag() <= z.imag()) {
      if (e.imag() > z.imag() && cross(a, e, z) > 0) ++wn;
    } else if (e.imag() <= z.imag() && cross(a, e, z) < 0) {
      --wn;
    }
  }
  return wn;
}

bool segments_intersect(cplx a, cplx b, cplx c, cplx d) {
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

std::size_t count_self_intersections(std::span<const cplx> pts) {
  std::size_t count = 0;
  const std::size_t nseg = pts.size() < 2 ? 0 : pts.size() - 1;
  for (std::size_t i = 0; i < nseg; ++i)
    for (std::size_t j = i + 2; j < nseg; ++j)
      if (segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1])) ++count;
  return count;
}

std::vector<cplx> dedupe_consecutive(std::span<const cplx> pts, double eps) {
  std::vector<cplx> out;
  out.reserve(pts.size());
  for (const cplx& z : pts)
    if (out.empty() || std::abs(z - out.back()) > eps) out.push_back(z);
  return out;
}

SegmentIndex::SegmentIndex(std::span<const cplx> pts, bool closed, double cell) {
  for (std::size_t i = 1; i < pts.size(); ++i) segs_.push_back({pts[i - 1], pts[i]});
  if (closed && pts.size() > 2) segs_.push_back({pts.back(), pts.front()});
  if (pts.size() == 1) segs_.push_back({pts[0], pts[0]});
  box_ = bounding_box(pts);
  const double w = std::max(box_.xmax - box_.xmin, 1e-300);
  const double h = std::max(box_.ymax - box_.ymin, 1e-300);
  if (!(cell > 0.0)) {
    // About one segment per cell on average, but no finer than the mesh.
    const double target = std::sqrt(w * h / std::max<std::size_t>(1, segs_.size())) * 2.0;
    cell = std::max({target, mesh_size(pts, closed), std::max(w, h) / 4096.0});
  }
  cell_ = cell;
  nx_ = static_cast<long long>(w / cell_) + 1;
  ny_ = static_cast<long long>(h / cell_) + 1;
  buckets_.assign(static_cast<std::size_t>(nx_ * ny_), {});
  for (std::uint32_t s = 0; s < segs_.size(); ++s) {
    const auto& sg = segs_[s];
    const long long x0 = static_cast<long long>((std::min(sg.a.real(), sg.b.real()) - box_.xmin) / cell_);
    const long long x1 = static_cast<long long>((std::max(sg.a.real(), sg.b.real()) - box_.xmin) / cell_);
    const long long y0 = static_cast<long long>((std::min(sg.a.imag(), sg.b.imag()) - box_.ymin) / cell_);
    const long long y1 = static_cast<long long>((std::max(sg.a.imag(), sg.b.imag()) - box_.ymin) / cell_);
    for (long long ix = std::max(0LL, x0); ix <= std::min(nx_ - 1, x1); ++ix)
      for (long long iy = std::max(0LL, y0); iy <= std::min(ny_ - 1, y1); ++iy)
        buckets_[static_cast<std::size_t>(ix * ny_ + iy)].push_back(s);
  }
}

double SegmentIndex::distance(cplx z) const {
  if (segs_.empty()) return INFINITY;
  // Expanding ring search; stops once the ring lies beyond the best distance.
  const double fx = (z.real() - box_.xmin) / cell_;
  const double fy = (z.imag() - box_.ymin) / cell_;
  const long long cx = std::clamp(static_cast<long long>(std::floor(fx)), 0LL, nx_ - 1);
  const long long cy = std::clamp(static_cast<long long>(std::floor(fy)), 0LL, ny_ - 1);
  // Distance from z to the clamped cell accounts for queries outside the box.
  const double outside = std::hypot(std::max({0.0, box_.xmin - z.real(), z.real() - box_.xmax}),
                                    std::max({0.0, box_.ymin - z.imag(), z.imag() - box_.ymax}));
  double best = INFINITY;
  const long long maxring = std::max(nx_, ny_);
  for (long long ring = 0; ring <= maxring; ++ring) {
    if (std::isfinite(best) && (static_cast<double>(ring) - 1.0) * cell_ + outside > best) break;
    for (long long ix = cx - ring; ix <= cx + ring; ++ix) {
      if (ix < 0 || ix >= nx_) continue;
      for (long long iy = cy - ring; iy <= cy + ring; ++iy) {
        if (iy < 0 || iy >= ny_) continue;
        if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
        for (auto s : buckets_[static_cast<std::size_t>(ix * ny_ + iy)])
          best = std::min(best, point_segment_distance(z, segs_[s].a, segs_[s].b));
      }
    }
  }
  return best;
}

double directed_hausdorff(std::span<const cplx> from, std::span<const cplx> to, bool to_closed) {
  if (from.empty() || to.empty()) return INFINITY;
  const SegmentIndex idx(to, to_closed);
  double worst = 0.0;
  for (const cplx& z : from) worst = std::max(worst, idx.distance(z));
  return worst;
}

double hausdorff_distance(const CurveApprox& a, const CurveApprox& b) {
  return std::max(directed_hausdorff(a.points, b.points, b.closed), directed_hausdorff(b.points, a.points, a.closed));
}

}  // namespace feig
