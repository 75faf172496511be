#include "feig/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "feig/errors.hpp"

namespace feig {

Ifs::Ifs(InverseBranch branch, SingularPoint c) : ib_(std::move(branch)), c_(c) {
  const cplx c4 = c_.c;
  a_ = {c4 / abs_alpha(), phi(1, c4), phi(2, c4), c4};
}

MapPoint Ifs::psi_jet(int k, cplx z) const {
  if (k < 1) throw InvalidArgument("psi index must be >= 1");
  const double s = std::pow(abs_alpha(), k);
  const Jet j = ib_.u_jet(std::conj(s * z), Side::lower);
  return {j.value, s * std::abs(j.deriv)};
}

MapPoint Ifs::phi_jet(int i, cplx z) const {
  switch (i) {
    case 1:
    case 2:
      return psi_jet(i, z);
    case 3: {
      const double a = abs_alpha();
      const Jet j1 = ib_.u_jet(std::conj(z), Side::lower);
      const cplx y = a * j1.value;
      const Jet j2 = ib_.u_jet(std::conj(y), Side::lower);
      return {a * j2.value, a * a * std::abs(j1.deriv) * std::abs(j2.deriv)};
    }
    default:
      throw InvalidArgument("phi index must be 1, 2 or 3");
  }
}

MapPoint Ifs::apply_jet(const SymbolWord& w, cplx z) const {
  MapPoint p{z, 1.0};
  for (std::size_t k = w.size(); k-- > 0;) {
    const MapPoint q = phi_jet(w.symbols[k], p.value);
    p = {q.value, q.deriv_mag * p.deriv_mag};
  }
  return p;
}

cplx Ifs::apply(const SymbolWord& w, cplx z) const { return apply_jet(w, z).value; }

double Ifs::derivative_mag(const SymbolWord& w, cplx z) const { return apply_jet(w, z).deriv_mag; }

namespace {

template <class Fn>
CurveApprox sampled(Fn&& f, double t0, double t1, double resolution) {
  CurveApprox c;
  c.points = adaptive_sample(f, t0, t1, 16, 1e-4, resolution);
  return c;
}

void append(std::vector<cplx>& out, std::span<const cplx> pts, bool reversed) {
  if (reversed) {
    for (std::size_t k = pts.size(); k-- > 0;) out.push_back(pts[k]);
  } else {
    out.insert(out.end(), pts.begin(), pts.end());
  }
}

}  // namespace

CompactX build_X(const Ifs& ifs, double resolution) {
  if (!(resolution > 0.0)) throw InvalidArgument("resolution must be positive");
  const InverseBranch& ib = ifs.branch();
  const double a = ib.alpha();
  const double aa = ib.abs_alpha();
  const int r = ib.criticality();
  const cplx c = ifs.c();
  const cplx dir = std::polar(1.0, std::numbers::pi / r);
  const double h = std::abs(ib.u_star(a * a));
  const double period = 2.0 * std::log(aa);

  auto tau = [&](int n) {
    const double scale = std::pow(a, n);
    CurveApprox arc = sampled([&](double t) { return ib.u_star(scale * std::exp(t)); }, 0.0, period, resolution);
    arc.points.front() = ib.u_star(scale);
    arc.points.back() = ib.u_star(scale * a * a);
    return arc;
  };

  // Arcs tau_n accumulate at c; stop once both parities are within reach.
  std::vector<CurveApprox> arcs;
  for (int n = 0; n < 200; ++n) {
    arcs.push_back(tau(n));
    if (n >= 4 && std::abs(arcs[static_cast<std::size_t>(n)].points.back() - c) < 0.25 * resolution &&
        std::abs(arcs[static_cast<std::size_t>(n - 1)].points.back() - c) < 0.25 * resolution) {
      break;
    }
  }
  const int last = static_cast<int>(arcs.size()) - 1;

  CompactX x;
  x.c = c;
  x.c_scaled = c / aa;
  x.contact = dir * h / aa;

  // bottom: odd arcs out to c/|alpha|, even arcs back to the contact point.
  std::vector<cplx> bottom;
  for (int n = 3; n <= last; n += 2) {
    std::vector<cplx> scaled;
    for (const cplx& z : arcs[static_cast<std::size_t>(n)].points) scaled.push_back(z / aa);
    append(bottom, scaled, false);
  }
  bottom.push_back(x.c_scaled);
  for (int n = (last % 2 == 0 ? last : last - 1); n >= 2; n -= 2) {
    std::vector<cplx> scaled;
    for (const cplx& z : arcs[static_cast<std::size_t>(n)].points) scaled.push_back(z / aa);
    append(bottom, scaled, true);
  }
  x.bottom.points = dedupe_consecutive(bottom);

  // left: the outer part of tau_0, then the even arcs up to c.
  std::vector<cplx> left{x.contact, dir * h};
  for (int n = 2; n <= last; n += 2) append(left, arcs[static_cast<std::size_t>(n)].points, false);
  left.push_back(c);
  x.left.points = dedupe_consecutive(left);

  // right: u* of the ray beyond tau_0; one period in log t is one chi^2 step.
  const double span = period * (last / 2 + 1);
  CurveApprox right = sampled([&](double s) { return ib.u_star(dir * (h * std::exp(s))); }, 0.0, span, resolution);
  right.points.front() = ib.u_star(dir * h);
  right.points.push_back(c);
  x.right.points = dedupe_consecutive(right.points);

  x.boundary = x.bottom.points;
  append(x.boundary, x.left.points, false);
  append(x.boundary, x.right.points, true);
  x.boundary = dedupe_consecutive(x.boundary);
  if (std::abs(x.boundary.front() - x.boundary.back()) == 0.0) x.boundary.pop_back();
  x.diam = diameter(x.boundary);
  return x;
}

CurveApprox limit_curve(const Ifs& ifs, int depth) {
  if (depth < 1) throw InvalidArgument("limit_curve depth must be >= 1");
  if (depth > 16) throw InvalidArgument("limit_curve depth must be <= 16");
  const auto& aj = ifs.junctions();
  std::vector<cplx> pts{aj[0], aj[3]};
  for (int level = 1; level <= depth; ++level) {
    std::vector<cplx> next;
    next.reserve(3 * (pts.size() - 1) + 1);
    // Each block keeps its own first vertex so vertex k is phi_w(a1) exactly.
    for (int i = 1; i <= 3; ++i) {
      const std::size_t n = i == 3 ? pts.size() : pts.size() - 1;
      for (std::size_t k = 0; k < n; ++k) next.push_back(ifs.phi(i, pts[k]));
    }
    pts = std::move(next);
  }
  CurveApprox out;
  out.points = std::move(pts);
  const std::size_t total = out.points.size();
  out.addresses.resize(total);
  for (std::size_t k = 0; k + 1 < total; ++k) {
    auto& sym = out.addresses[k].symbols;
    sym.resize(static_cast<std::size_t>(depth));
    std::size_t v = k;
    for (int d = depth; d-- > 0;) {
      sym[static_cast<std::size_t>(d)] = static_cast<std::uint16_t>(v % 3 + 1);
      v /= 3;
    }
  }
  out.addresses.back().symbols.assign(static_cast<std::size_t>(depth) + 1, 3);
  return out;
}

CurveApprox curve_L(const CurveApprox& limit, double abs_alpha, int scale_min, int scale_max) {
  if (scale_min > scale_max) throw InvalidArgument("scale_min must not exceed scale_max");
  CurveApprox out;
  for (int n = scale_min; n <= scale_max; ++n) {
    const double s = std::pow(abs_alpha, n);
    const std::size_t start = out.points.empty() ? 0 : 1;
    for (std::size_t k = start; k < limit.points.size(); ++k) out.points.push_back(s * limit.points[k]);
  }
  return out;
}

CurveApprox curve_L(const Ifs& ifs, int depth, int scale_min, int scale_max) {
  return curve_L(limit_curve(ifs, depth), ifs.abs_alpha(), scale_min, scale_max);
}

std::vector<cplx> sample_interior(std::span<const cplx> polygon, std::size_t count, std::uint64_t seed) {
  const Box b = bounding_box(polygon);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(b.xmin, b.xmax);
  std::uniform_real_distribution<double> uy(b.ymin, b.ymax);
  std::vector<cplx> out;
  out.reserve(count);
  std::size_t tries = 0;
  while (out.size() < count) {
    if (++tries > 1000 * count + 1000) throw InsufficientData("polygon has negligible area");
    const cplx z(ux(rng), uy(rng));
    if (polygon_contains(polygon, z)) out.push_back(z);
  }
  return out;
}

std::vector<cplx> map_polygon(const Ifs& ifs, int i, std::span<const cplx> polygon) {
  std::vector<cplx> out;
  out.reserve(polygon.size());
  for (const cplx& z : polygon) out.push_back(ifs.phi(i, z));
  return out;
}

InvarianceCheck check_forward_invariance(const Ifs& ifs, const CompactX& x, std::size_t stride) {
  InvarianceCheck out;
  const SegmentIndex idx(x.boundary, true);
  stride = std::max<std::size_t>(1, stride);
  for (std::size_t k = 0; k < x.boundary.size(); k += stride) {
    ++out.samples;
    for (int i = 1; i <= 3; ++i) {
      const cplx y = ifs.phi(i, x.boundary[k]);
      if (!x.contains(y)) {
        auto& w = out.worst_outside[static_cast<std::size_t>(i - 1)];
        w = std::max(w, idx.distance(y));
      }
    }
  }
  return out;
}

DisjointnessCheck check_disjointness(const Ifs& ifs, const CompactX& x, std::size_t samples, double tube,
                                     std::uint64_t seed) {
  DisjointnessCheck out;
  out.samples = samples;
  std::array<std::vector<cplx>, 3> polys;
  std::vector<SegmentIndex> idx;
  for (int i = 0; i < 3; ++i) {
    polys[static_cast<std::size_t>(i)] = map_polygon(ifs, i + 1, x.boundary);
    idx.emplace_back(polys[static_cast<std::size_t>(i)], true);
  }
  const auto pts = sample_interior(x.boundary, samples, seed);
  for (int i = 0; i < 3; ++i) {
    for (const cplx& z : pts) {
      const cplx y = ifs.phi(i + 1, z);
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        const auto& pj = polys[static_cast<std::size_t>(j)];
        if (polygon_contains(pj, y) && idx[static_cast<std::size_t>(j)].distance(y) > tube) {
          ++out.violations[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
      }
    }
  }
  return out;
}

std::array<std::array<double, 3>, 3> image_distances(const Ifs& ifs, const CompactX& x) {
  std::array<std::vector<cplx>, 3> polys;
  for (int i = 0; i < 3; ++i) polys[static_cast<std::size_t>(i)] = map_polygon(ifs, i + 1, x.boundary);
  std::array<std::array<double, 3>, 3> d{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const SegmentIndex ij(polys[j], true);
      double best = INFINITY;
      for (const cplx& z : polys[i]) best = std::min(best, ij.distance(z));
      d[i][j] = d[j][i] = best;
    }
  }
  return d;
}

std::array<double, 3> contraction_ratios(const Ifs& ifs, const CompactX& x, std::size_t pairs, std::uint64_t seed) {
  const auto pts = sample_interior(x.boundary, 2 * pairs, seed);
  std::array<double, 3> worst{};
  for (std::size_t k = 0; k < pairs; ++k) {
    const cplx p = pts[2 * k];
    const cplx q = pts[2 * k + 1];
    const double d = hyperbolic_distance(p, q);
    if (!(d > 0.0)) continue;
    for (int i = 0; i < 3; ++i) {
      const double di = hyperbolic_distance(ifs.phi(i + 1, p), ifs.phi(i + 1, q));
      worst[static_cast<std::size_t>(i)] = std::max(worst[static_cast<std::size_t>(i)], di / d);
    }
  }
  return worst;
}

double distortion_constant(const Ifs& ifs, std::span<const cplx> samples, int max_len) {
  if (samples.size() < 2) throw InsufficientData("distortion needs at least two sample points");
  // Depth-first over words; a child prepends the outer map.
  struct Node {
    std::vector<MapPoint> at;
    int len;
  };
  double worst = 1.0;
  std::vector<Node> stack;
  Node root{{}, 0};
  for (const cplx& z : samples) root.at.push_back({z, 1.0});
  stack.push_back(std::move(root));
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.len > 0) {
      double lo = INFINITY, hi = 0.0;
      for (const auto& p : node.at) {
        lo = std::min(lo, p.deriv_mag);
        hi = std::max(hi, p.deriv_mag);
      }
      worst = std::max(worst, hi / lo);
    }
    if (node.len == max_len) continue;
    for (int i = 1; i <= 3; ++i) {
      Node child{{}, node.len + 1};
      child.at.reserve(node.at.size());
      for (const auto& p : node.at) {
        const MapPoint q = ifs.phi_jet(i, p.value);
        child.at.push_back({q.value, q.deriv_mag * p.deriv_mag});
      }
      stack.push_back(std::move(child));
    }
  }
  return worst;
}

}  // namespace feig
