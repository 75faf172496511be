#include "feig/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <unordered_set>

#include "feig/errors.hpp"

namespace feig {
namespace {

constexpr std::int64_t kDepthCap = std::int64_t{1} << 60;
// Disc around 0 inside which the sector S between R+ and L agrees with the
// triangle; the distance from 0 to gamma-_1 is about 0.75.
constexpr double kDeltaReach = 0.6;
constexpr int kMaxLetters = 600;
// Relative distance within which a point may be coded into a neighbouring
// cell, and the search budget.
constexpr double kCodeTube = 3e-3;
constexpr int kCodeVisits = 4000;

cplx root_of_unity(int j, int r) { return std::polar(1.0, 2.0 * std::numbers::pi * j / r); }

std::int64_t sat_add(std::int64_t a, std::int64_t b) { return std::min(kDepthCap, a + b); }

void reverse_append(std::vector<cplx>& out, std::span<const cplx> pts) {
  for (std::size_t k = pts.size(); k-- > 0;) out.push_back(pts[k]);
}

double distance_to_origin(std::span<const cplx> polygon) {
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) d = std::min(d, point_segment_distance(0.0, polygon[i], polygon[(i + 1) % n]));
  return d;
}

// Keeps every stride-th vertex plus the two marked ones.
Piece decimated(const Piece& p, std::size_t max_vertices) {
  const std::size_t n = p.boundary.size();
  if (n <= max_vertices) return p;
  const std::size_t stride = (n + max_vertices - 1) / max_vertices;
  Piece out = p;
  out.boundary.points.clear();
  for (std::size_t k = 0; k < n; ++k) {
    if (k % stride != 0 && k != p.base_index && k != p.inf_index) continue;
    if (k == p.base_index) out.base_index = out.boundary.points.size();
    if (k == p.inf_index) out.inf_index = out.boundary.points.size();
    out.boundary.points.push_back(p.boundary.points[k]);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Generation

void Generation::push(PieceOp op) {
  switch (op.kind) {
    case OpKind::neg:
    case OpKind::conj:
      if (!ops.empty() && ops.back() == op) {
        ops.pop_back();
      } else {
        ops.push_back(op);
      }
      break;
    case OpKind::scale: {
      if (op.arg == 0) break;
      // Scalings by alpha^m commute with negation.
      std::size_t at = ops.size();
      if (at > 0 && ops[at - 1].kind == OpKind::neg) --at;
      if (at > 0 && ops[at - 1].kind == OpKind::scale) {
        ops[at - 1].arg += op.arg;
        if (ops[at - 1].arg == 0) ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(at - 1));
      } else {
        ops.insert(ops.begin() + static_cast<std::ptrdiff_t>(at), op);
      }
      break;
    }
    case OpKind::pull:
      ops.push_back(op);
      break;
  }
  // Depth bookkeeping: R/alpha^j in M_n; pulling back adds 2^j, dividing by
  // alpha first spends j and then doubles n.
  std::int64_t n = 0;
  int j = 0;
  for (const PieceOp& o : ops) {
    if (o.kind == OpKind::pull) {
      n = sat_add(n, j < 60 ? (std::int64_t{1} << j) : kDepthCap);
    } else if (o.kind == OpKind::scale) {
      if (o.arg > 0) {
        j += o.arg;
      } else {
        for (int k = 0; k < -o.arg; ++k) {
          if (j > 0) {
            --j;
          } else {
            n = std::min(kDepthCap, 2 * n);
          }
        }
      }
    }
  }
  depth = n;
  scale_exp = j;
}

void Generation::append(std::span<const PieceOp> more) {
  for (const PieceOp& op : more) push(op);
}

std::string Generation::str() const {
  std::string s = conj_seed ? "R0*" : "R0";
  s += "," + std::to_string(sector);
  for (const PieceOp& op : ops) {
    switch (op.kind) {
      case OpKind::pull:
        s += "|p" + std::to_string(op.arg);
        break;
      case OpKind::conj:
        s += "|c";
        break;
      case OpKind::neg:
        s += "|n";
        break;
      case OpKind::scale:
        s += "|s" + std::to_string(op.arg);
        break;
    }
  }
  if (!machine_word.empty()) s += "|w=" + machine_word;
  return s;
}

// --------------------------------------------------------------------- Piece

double Piece::area() const { return std::abs(signed_area(boundary.points)); }
double Piece::diam() const { return diameter(boundary.points); }
double Piece::mesh() const { return mesh_size(boundary.points, true); }
Box Piece::box() const { return bounding_box(boundary.points); }
bool Piece::contains(cplx z) const { return polygon_contains(boundary.points, z); }

CurveApprox RayPath::joined() const {
  CurveApprox out;
  for (const CurveApprox& a : arcs) {
    const std::size_t start = out.points.empty() ? 0 : 1;
    for (std::size_t k = start; k < a.points.size(); ++k) out.points.push_back(a.points[k]);
  }
  return out;
}

double RayPath::length() const {
  double s = 0.0;
  for (const CurveApprox& a : arcs) s += polyline_length(a.points);
  return s;
}

const char* to_string(PairRelation rel) {
  switch (rel) {
    case PairRelation::disjoint:
      return "disjoint";
    case PairRelation::nested:
      return "nested";
    case PairRelation::shared_arc:
      return "shared_arc";
    case PairRelation::shared_base_point:
      return "shared_base_point";
    case PairRelation::overlap:
      return "overlap";
    case PairRelation::ambiguous:
      return "ambiguous";
  }
  return "?";
}

// ------------------------------------------------------------ classification

namespace {

struct SideCount {
  std::size_t in = 0, out = 0, on = 0;
  double deepest_in = 0.0;  // largest distance to the boundary among inside points
  std::vector<cplx> near;
};

std::vector<cplx> probe_points(const Piece& p) {
  const std::size_t n = p.boundary.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 256);
  std::vector<cplx> out;
  for (std::size_t k = 0; k < n; k += stride) out.push_back(p.boundary.points[k]);
  try {
    const auto inner = sample_interior(p.boundary.points, 12, 0x5eed);
    out.insert(out.end(), inner.begin(), inner.end());
  } catch (const InsufficientData&) {
  }
  return out;
}

SideCount count_against(std::span<const cplx> probes, const PolygonIndex& poly, const SegmentIndex& edge,
                        double tube) {
  SideCount s;
  for (const cplx z : probes) {
    const double d = edge.distance(z);
    if (d <= tube) {
      ++s.on;
      s.near.push_back(z);
    } else if (poly.contains(z)) {
      ++s.in;
      s.deepest_in = std::max(s.deepest_in, d);
    } else {
      ++s.out;
    }
  }
  return s;
}

}  // namespace

PairRelation classify_pair(const Piece& a, const Piece& b, double tube) {
  if (!(tube > 0.0)) throw InvalidArgument("tube must be positive");
  if (!a.box().intersects(b.box(), tube)) return PairRelation::disjoint;
  const PolygonIndex pa(a.boundary.points), pb(b.boundary.points);
  const SegmentIndex ea(a.boundary.points, true), eb(b.boundary.points, true);
  const auto probes_a = probe_points(a);
  const auto probes_b = probe_points(b);
  const SideCount ab = count_against(probes_a, pb, eb, tube);
  const SideCount ba = count_against(probes_b, pa, ea, tube);

  if (ab.in == 0 && ba.in == 0) {
    std::vector<cplx> near = ab.near;
    near.insert(near.end(), ba.near.begin(), ba.near.end());
    if (near.empty()) return PairRelation::disjoint;
    // Shared base point: every contact lies near a base point common to both.
    const std::array<cplx, 2> ca{a.x_R, a.x_R_inf};
    const std::array<cplx, 2> cb{b.x_R, b.x_R_inf};
    const double radius = 8.0 * tube + 0.02 * std::min(a.box().diagonal(), b.box().diagonal());
    bool all_at_common = true;
    for (const cplx z : near) {
      bool hit = false;
      for (std::size_t i = 0; i < 2 && !hit; ++i) {
        if (i == 1 && a.inf_is_direction) continue;
        for (std::size_t k = 0; k < 2 && !hit; ++k) {
          if (k == 1 && b.inf_is_direction) continue;
          hit = std::abs(ca[i] - cb[k]) <= tube && std::abs(z - ca[i]) <= radius;
        }
      }
      all_at_common = all_at_common && hit;
    }
    if (all_at_common) return PairRelation::shared_base_point;
    return diameter(near) > 4.0 * tube ? PairRelation::shared_arc : PairRelation::disjoint;
  }
  if (ab.out == 0 && ab.in > 0) return PairRelation::nested;
  if (ba.out == 0 && ba.in > 0) return PairRelation::nested;
  const double margin = std::max(ab.deepest_in, ba.deepest_in);
  return margin <= 8.0 * tube ? PairRelation::ambiguous : PairRelation::overlap;
}

double contact_tube(const Piece& a, const Piece& b) { return 0.1 * std::min(a.mesh(), b.mesh()); }

void assign_levels(std::vector<Piece>& pieces, double tube) {
  const std::size_t n = pieces.size();
  std::vector<int> nesting(n, 0);
  std::vector<double> areas(n);
  for (std::size_t i = 0; i < n; ++i) areas[i] = pieces[i].area();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      if (classify_pair(pieces[i], pieces[k], tube) != PairRelation::nested) continue;
      if (areas[i] < areas[k]) {
        ++nesting[i];
      } else {
        ++nesting[k];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) pieces[i].level = 1 + nesting[i];
}

// One slope shared by all chains, one intercept per chain: log diam R_m is
// regressed on m after removing each chain's means. C is the largest
// intercept relative to diam R_1, so every fitted line lies under C lambda^m.
DecayFit diameter_decay(const std::vector<std::vector<double>>& chains) {
  double sxx = 0, sxy = 0, syy = 0;
  std::size_t m = 0;
  std::vector<std::array<double, 3>> means;  // mean index, mean log diam, log diam R_1
  for (const auto& c : chains) {
    if (c.size() < 2) continue;
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (!(c[k] > 0.0)) throw InvalidArgument("diameters must be positive");
      mx += static_cast<double>(k);
      my += std::log(c[k]);
    }
    mx /= static_cast<double>(c.size());
    my /= static_cast<double>(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double x = static_cast<double>(k) - mx;
      const double y = std::log(c[k]) - my;
      sxx += x * x;
      sxy += x * y;
      syy += y * y;
    }
    means.push_back({mx, my, std::log(c[0])});
    m += c.size();
  }
  if (means.empty() || !(sxx > 0.0)) throw InsufficientData("diameter decay needs a chain with at least two levels");
  const double slope = sxy / sxx;
  double log_c = -std::numeric_limits<double>::infinity();
  for (const auto& [mx, my, y0] : means) log_c = std::max(log_c, my - slope * mx - y0);
  DecayFit fit;
  fit.lambda = std::exp(slope);
  fit.C = std::exp(log_c);
  fit.r2 = syy > 0.0 ? slope * sxy / syy : 1.0;
  fit.points = m;
  return fit;
}

DecayFit diameter_decay(const std::vector<std::vector<Piece>>& chains) {
  std::vector<std::vector<double>> d;
  for (const auto& c : chains) {
    std::vector<double> row;
    for (const Piece& p : c) row.push_back(p.diam());
    d.push_back(std::move(row));
  }
  return diameter_decay(d);
}

// ----------------------------------------------------------------- Partition

Partition::Partition(Ifs ifs, PartitionOptions opts) : ifs_(std::move(ifs)), opts_(opts) {
  if (opts_.curve_depth < 1 || opts_.curve_depth > 12) throw InvalidArgument("curve_depth must be in 1..12");
  if (opts_.inner_scales < 1 || opts_.outer_scales < 1) throw InvalidArgument("scale window must be nonempty");
  if (opts_.arc_points < 4 || opts_.ray_points < 1) throw InvalidArgument("too few arc or ray points");
  const int r = criticality();
  const double aa = ifs_.abs_alpha();
  I_ = limit_curve(ifs_, opts_.curve_depth);
  L_ = curve_L(I_, aa, -opts_.inner_scales, opts_.outer_scales);

  // Curves in the upper half-plane by increasing argument:
  // L, zeta L*, zeta L, zeta^2 L*, ..., -L*.
  auto curve = [&](int k) {
    const cplx rot = root_of_unity((k + 1) / 2, r);
    std::vector<cplx> pts;
    pts.reserve(L_.size());
    for (const cplx z : L_.points) pts.push_back(rot * (k % 2 == 0 ? z : std::conj(z)));
    return pts;
  };
  const double rho = std::abs(L_.points.back());
  for (int j = 1; j < r; ++j) {
    const auto lo = curve(j - 1);
    const auto hi = curve(j);
    Piece p;
    p.boundary.closed = true;
    auto& b = p.boundary.points;
    b.push_back(0.0);
    b.insert(b.end(), lo.begin(), lo.end());
    const double th0 = std::arg(lo.back());
    double th1 = std::arg(hi.back());
    if (th1 <= th0) th1 += 2.0 * std::numbers::pi;
    const double thm = std::numbers::pi * j / r;
    const int half = opts_.arc_points / 2;
    for (int k = 1; k <= half; ++k) b.push_back(std::polar(rho, th0 + (thm - th0) * k / half));
    p.inf_index = b.size() - 1;
    for (int k = 1; k < half; ++k) b.push_back(std::polar(rho, thm + (th1 - thm) * k / half));
    reverse_append(b, hi);
    p.base_index = 0;
    p.x_R = 0.0;
    p.x_R_inf = std::polar(1.0, thm);
    p.inf_is_direction = true;
    p.side = Side::upper;
    p.gen.sector = j;
    sectors_.push_back(std::move(p));
  }
  for (int j = 1; j < r; ++j) {
    Piece p = sectors_[static_cast<std::size_t>(j - 1)];
    for (cplx& z : p.boundary.points) z = std::conj(z);
    p.x_R_inf = std::conj(p.x_R_inf);
    p.side = Side::lower;
    p.gen.conj_seed = true;
    sectors_.push_back(std::move(p));
  }
  for (Piece& p : sectors_) p.level = 1;

  if (r != 2) return;

  // The machine.
  const InverseBranch& ib = ifs_.branch();
  const cplx c = ifs_.c();
  auto ustar = [&](cplx z) { return ib.u(std::conj(z), Side::lower); };
  const std::size_t block = I_.size() - 1;
  const auto idx_c1 = static_cast<std::size_t>(opts_.inner_scales) * block;  // c/|alpha|
  const std::size_t idx_c = idx_c1 + block;                                  // c
  MachineDomain& m = machine_;
  auto image = [&](auto&& f, std::span<const cplx> pts) {
    CurveApprox out;
    out.points.reserve(pts.size());
    for (const cplx z : pts) out.points.push_back(f(z));
    return out;
  };
  std::vector<cplx> L_with_0{0.0};
  L_with_0.insert(L_with_0.end(), L_.points.begin(), L_.points.end());
  m.gamma_minus = image(ustar, L_with_0);
  m.gamma_minus.points.push_back(c);
  std::vector<cplx> negLc;
  for (const cplx z : L_with_0) negLc.push_back(-std::conj(z));
  m.gamma_plus = image(ustar, negLc);
  m.gamma_plus.points.push_back(c);
  m.gamma_minus_1 = image(ustar, std::span<const cplx>(L_with_0).first(idx_c + 2));
  m.gamma_minus_1.points.back() = c / aa;
  m.beta1 = image(ustar, std::span<const cplx>(L_.points).subspan(idx_c1, block + 1));
  m.beta1.points.back() = c / aa;
  m.beta2 = image(ustar, std::span<const cplx>(L_with_0).first(idx_c1 + 2));

  auto& d = m.delta.points;
  d.push_back(0.0);
  d.insert(d.end(), m.gamma_minus_1.points.begin(), m.gamma_minus_1.points.end());
  for (std::size_t k = idx_c1; k-- > 0;) d.push_back(L_.points[k]);
  m.delta.closed = true;
  m.delta0 = image(ustar, d);
  m.delta0.closed = true;
  m.a_delta = image([&](cplx z) { return z / aa; }, d);
  m.a_delta.closed = true;
  m.seed = apply(sectors_[1], seed_generation().ops);

  in_delta_.emplace(m.delta.points);
  in_a_.emplace(m.a_delta.points);
  in_b_.emplace(m.delta0.points);
  in_r2_.emplace(m.seed.boundary.points);
  near_delta_.emplace(m.delta.points, true);
  near_a_.emplace(m.a_delta.points, true);
  near_b_.emplace(m.delta0.points, true);
  near_r2_.emplace(m.seed.boundary.points, true);
  has_machine_ = true;
}

void Partition::require_quadratic(const char* what) const {
  if (!has_machine_) throw InvalidArgument(std::string(what) + " is implemented for r = 2 only");
}

std::vector<Piece> Partition::depth0_sectors() const { return sectors_; }

Piece Partition::sector(int j, bool conj) const {
  const int r = criticality();
  if (j < 1 || j >= r) throw InvalidArgument("sector index must be in 1..r-1");
  return sectors_[static_cast<std::size_t>((conj ? r - 1 : 0) + j - 1)];
}

Side Partition::map_side(const PieceOp& op, Side side, int r) {
  switch (op.kind) {
    case OpKind::pull: {
      // u maps the upper half-plane into -Pi and the lower one into Pi.
      const double mid = (side == Side::upper ? -1.0 : 1.0) * std::numbers::pi / (2.0 * r) +
                         2.0 * std::numbers::pi * op.arg / r;
      return std::sin(mid) > 0.0 ? Side::upper : Side::lower;
    }
    case OpKind::conj:
    case OpKind::neg:
      return opposite(side);
    case OpKind::scale:
      return (op.arg % 2 == 0) ? side : opposite(side);
  }
  return side;
}

cplx Partition::map_point(const PieceOp& op, cplx z, Side side) const {
  switch (op.kind) {
    case OpKind::pull: {
      // Points of a piece lie in its closed half-plane; round-off across the
      // slit would pick the other sheet.
      if ((side == Side::upper) == (z.imag() < 0.0)) z = cplx(z.real(), 0.0);
      return root_of_unity(op.arg, criticality()) * branch().u(z, side);
    }
    case OpKind::conj:
      return std::conj(z);
    case OpKind::neg:
      return -z;
    case OpKind::scale:
      return std::pow(ifs_.branch().alpha(), op.arg) * z;
  }
  return z;
}

Piece Partition::apply(const Piece& p, const PieceOp& op) const {
  const int r = criticality();
  if (op.kind == OpKind::pull && (op.arg < 0 || op.arg >= r)) throw InvalidArgument("branch index out of range");
  Piece q = p;
  for (cplx& z : q.boundary.points) z = map_point(op, z, p.side);
  q.x_R = map_point(op, p.x_R, p.side);
  q.boundary.points[p.base_index] = q.x_R;
  if (p.inf_is_direction) {
    switch (op.kind) {
      case OpKind::pull: {
        // u tends to conj(c) at infinity in the upper half-plane, to c in the lower.
        const cplx c = ifs_.c();
        q.x_R_inf = root_of_unity(op.arg, r) * (p.side == Side::upper ? std::conj(c) : c);
        q.inf_is_direction = false;
        q.boundary.points[p.inf_index] = q.x_R_inf;
        break;
      }
      case OpKind::conj:
        q.x_R_inf = std::conj(p.x_R_inf);
        break;
      case OpKind::neg:
        q.x_R_inf = -p.x_R_inf;
        break;
      case OpKind::scale:
        q.x_R_inf = op.arg % 2 == 0 ? p.x_R_inf : -p.x_R_inf;
        break;
    }
  } else {
    q.x_R_inf = map_point(op, p.x_R_inf, p.side);
    q.boundary.points[p.inf_index] = q.x_R_inf;
  }
  q.side = map_side(op, p.side, r);
  q.gen.push(op);
  q.depth = q.gen.depth;
  q.level = 0;
  return q;
}

Piece Partition::apply(const Piece& p, std::span<const PieceOp> ops) const {
  Piece q = p;
  for (const PieceOp& op : ops) q = apply(q, op);
  return q;
}

cplx Partition::chain_point(const Generation& gen, cplx z) const {
  Side side = gen.conj_seed ? Side::lower : Side::upper;
  for (const PieceOp& op : gen.ops) {
    z = map_point(op, z, side);
    side = map_side(op, side, criticality());
  }
  return z;
}

Piece Partition::build(const Generation& gen) const {
  Piece p = apply(sector(gen.sector, gen.conj_seed), gen.ops);
  p.gen.machine_word = gen.machine_word;
  return p;
}

Piece Partition::pullback_piece(const Piece& p, int branch) const { return apply(p, PieceOp{OpKind::pull, branch}); }

Piece Partition::rescale_piece(const Piece& p) const { return apply(p, PieceOp{OpKind::scale, -1}); }

std::vector<std::vector<Piece>> Partition::census(int max_depth) const {
  if (max_depth < 0) throw InvalidArgument("census depth must be >= 0");
  std::vector<std::vector<Piece>> out{sectors_};
  for (int n = 1; n <= max_depth; ++n) {
    std::vector<Piece> next;
    for (const Piece& p : out.back()) {
      for (int j = 0; j < criticality(); ++j) next.push_back(pullback_piece(p, j));
    }
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<cplx> Partition::ray_template(int j, bool conj) const {
  const double aa = ifs_.abs_alpha();
  const double t0 = std::abs(L_.points.front());
  const double t1 = std::abs(L_.points.back());
  const cplx dir = std::polar(1.0, std::numbers::pi * j / criticality());
  std::vector<cplx> pts{0.0};
  const int steps = static_cast<int>(std::ceil(std::log(t1 / t0) / std::log(aa) * opts_.ray_points));
  for (int k = 0; k <= steps; ++k) {
    const cplx z = dir * (t0 * std::pow(t1 / t0, static_cast<double>(k) / steps));
    pts.push_back(conj ? std::conj(z) : z);
  }
  return pts;
}

Vein Partition::compute_vein(const Piece& p) const {
  Vein v;
  const auto ray = ray_template(p.gen.sector, p.gen.conj_seed);
  Side side = p.gen.conj_seed ? Side::lower : Side::upper;
  std::vector<cplx> pts = ray;
  for (const PieceOp& op : p.gen.ops) {
    for (cplx& z : pts) z = map_point(op, z, side);
    side = map_side(op, side, criticality());
  }
  if (!p.inf_is_direction) pts.push_back(p.x_R_inf);
  v.arc.points = std::move(pts);
  v.length = polyline_length(v.arc.points);
  return v;
}

// ------------------------------------------------------------------ machine

const MachineDomain& Partition::machine() const {
  require_quadratic("the machine");
  return machine_;
}

Generation Partition::seed_generation() const {
  // R2 = u(R0*)/|alpha| = -u(R0*)/alpha.
  Generation g;
  g.sector = 1;
  g.conj_seed = true;
  g.push({OpKind::pull, 0});
  g.push({OpKind::scale, -1});
  g.push({OpKind::neg, 0});
  return g;
}

void Partition::push_letter(Generation& gen, char letter) const {
  if (letter == 'A') {
    gen.push({OpKind::scale, -1});
    gen.push({OpKind::neg, 0});
  } else if (letter == 'B') {
    gen.push({OpKind::conj, 0});
    gen.push({OpKind::pull, 0});
  } else {
    throw InvalidArgument("machine words use the letters A and B");
  }
}

Piece Partition::machine_piece(const std::string& word) const {
  require_quadratic("the machine");
  Generation g = seed_generation();
  for (std::size_t k = word.size(); k-- > 0;) push_letter(g, word[k]);
  g.machine_word = word;
  return build(g);
}

std::vector<Piece> Partition::machine_tile(int max_word_len) const {
  require_quadratic("the machine");
  if (max_word_len < 0) throw InvalidArgument("word length must be >= 0");
  std::vector<Piece> out{machine_.seed};
  std::size_t begin = 0;
  for (int len = 1; len <= max_word_len; ++len) {
    const std::size_t end = out.size();
    for (const char letter : {'A', 'B'}) {
      for (std::size_t i = begin; i < end; ++i) {
        Generation g;
        push_letter(g, letter);
        Piece q = apply(out[i], g.ops);
        q.gen.machine_word = std::string(1, letter) + out[i].gen.machine_word;
        out.push_back(std::move(q));
      }
    }
    begin = end;
  }
  return out;
}

std::string Partition::machine_code(cplx w, cplx* in_seed) const {
  require_quadratic("the machine");
  const double aa = ifs_.abs_alpha();
  const auto& g = ifs_.branch().map();
  // Depth-first search over the cells containing w or passing within a
  // relative tube of it: adjacent closed cells share arcs whose polylines
  // disagree slightly, and the expanding steps would amplify a wrong pick.
  struct Frame {
    cplx w;
    std::array<char, 3> options{};
    int count = 0;
    int next = 0;
  };
  auto options_at = [&](cplx z) {
    Frame f;
    f.w = z;
    const double tol = kCodeTube * std::abs(z);
    const std::array<std::pair<char, double>, 3> cells{{
        {'R', in_r2_->contains(z) ? -1.0 : near_r2_->distance(z)},
        {'A', in_a_->contains(z) ? -1.0 : near_a_->distance(z)},
        {'B', in_b_->contains(z) ? -1.0 : near_b_->distance(z)},
    }};
    std::array<std::pair<char, double>, 3> sorted = cells;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
    for (const auto& [cell, d] : sorted) {
      if (d <= tol) f.options[static_cast<std::size_t>(f.count++)] = cell;
    }
    return f;
  };
  std::vector<Frame> stack{options_at(w)};
  int visits = 0;
  while (!stack.empty() && visits < kCodeVisits) {
    Frame& top = stack.back();
    if (top.next == top.count || stack.size() > static_cast<std::size_t>(kMaxLetters)) {
      stack.pop_back();
      continue;
    }
    ++visits;
    const char pick = top.options[static_cast<std::size_t>(top.next++)];
    if (pick == 'R') {
      if (in_seed != nullptr) *in_seed = top.w;
      std::string word;
      for (std::size_t k = 0; k + 1 < stack.size(); ++k) word.push_back(stack[k].options[static_cast<std::size_t>(stack[k].next - 1)]);
      return word;
    }
    cplx next;
    try {
      next = pick == 'A' ? top.w * aa : std::conj(g.g(top.w));
    } catch (const OutOfDomain&) {
      continue;
    }
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag()) || std::abs(next) > 4.0) continue;
    stack.push_back(options_at(next));
  }
  throw NotCovered("machine coding did not reach R2");
}

// ----------------------------------------------------------- point location

Generation Partition::locate_in_quadrant(cplx z, cplx* seed_point) const {
  const double aa = ifs_.abs_alpha();
  const double a2 = aa * aa;
  const auto& g = ifs_.branch().map();
  auto finish = [&](Generation& gen, const std::string& word, cplx p) {
    for (std::size_t k = word.size(); k-- > 0;) push_letter(gen, word[k]);
    if (seed_point != nullptr) *seed_point = g.g(aa * p);
  };
  auto in_triangle = [&](cplx w) { return in_delta_->contains(w) || near_delta_->distance(w) <= 1e-12; };

  // The sector between R+ and L is the union of |alpha|^k Delta.
  int k = 0;
  cplx zs = z;
  while (std::abs(zs) >= kDeltaReach && k < 400) {
    zs /= aa;
    ++k;
  }
  if (in_triangle(zs)) {
    cplx p;
    const std::string word = machine_code(zs, &p);
    Generation gen = seed_generation();
    finish(gen, word, p);
    for (int i = 0; i < k; ++i) {
      gen.push({OpKind::scale, 1});
      gen.push({OpKind::neg, 0});
    }
    return gen;
  }
  // Between L and the ray e^{i pi/2} R+: g maps it into the conjugate of
  // the sector near 1, where the machine applies after division by |alpha|.
  k = 0;
  cplx zz = z;
  while (std::abs(zz) >= kDeltaReach && k < 400) {
    zz /= a2;
    ++k;
  }
  const cplx w = std::conj(g.g(zz)) / aa;
  if (!in_triangle(w)) throw NotCovered("point is in neither the real nor the imaginary sector");
  cplx p;
  const std::string word = machine_code(w, &p);
  Generation gen = seed_generation();
  finish(gen, word, p);
  gen.push({OpKind::scale, 1});
  gen.push({OpKind::neg, 0});
  gen.push({OpKind::conj, 0});
  gen.push({OpKind::pull, 0});
  gen.push({OpKind::scale, 2 * k});
  return gen;
}

Generation Partition::locate(cplx z, cplx* seed_point) const {
  require_quadratic("point location");
  if (z == 0.0) throw NotCovered("0 is a base point of every level");
  std::vector<PieceOp> back;
  cplx t = z;
  if (z.real() < 0.0 && z.imag() >= 0.0) {
    t = -std::conj(z);
    back = {{OpKind::conj, 0}, {OpKind::neg, 0}};
  } else if (z.real() < 0.0) {
    t = -z;
    back = {{OpKind::neg, 0}};
  } else if (z.imag() < 0.0) {
    t = std::conj(z);
    back = {{OpKind::conj, 0}};
  }
  Generation gen = locate_in_quadrant(t, seed_point);
  gen.append(back);
  return gen;
}

Generation Partition::locate_sector_cell(cplx s, cplx* seed_point) const {
  // s lies in R0*; its conjugate lies in R0, symmetric about iR.
  cplx t = std::conj(s);
  PieceOp back{OpKind::conj, 0};
  if (t.real() < 0.0) {
    t = -s;
    back = {OpKind::neg, 0};
  }
  Generation gen = locate_in_quadrant(t, seed_point);
  gen.push(back);
  return gen;
}

CellChain Partition::nested_cells(cplx z, int max_level) const {
  if (max_level < 1) throw InvalidArgument("max_level must be >= 1");
  CellChain ch;
  ch.z = z;
  cplx s;
  ch.cells.push_back(locate(z, &s));
  ch.seed_points.push_back(s);
  for (int level = 2; level <= max_level; ++level) {
    cplx s2;
    Generation local;
    try {
      local = locate_sector_cell(s, &s2);
    } catch (const NotCovered&) {
      break;
    }
    Generation full = local;
    full.machine_word.clear();
    full.append(ch.cells.back().ops);
    ch.local.push_back(local);
    ch.cells.push_back(std::move(full));
    ch.seed_points.push_back(s2);
    s = s2;
  }
  return ch;
}

VeinPath Partition::vein_path_to_zero(cplx z, int max_level) const {
  VeinPath vp;
  if (z == 0.0) {
    vp.path.points = {0.0};
    return vp;
  }
  const CellChain ch = nested_cells(z, max_level);
  auto& pts = vp.path.points;
  pts.push_back(0.0);
  pts.push_back(chain_point(ch.cells[0], 0.0));
  for (std::size_t k = 0; k < ch.local.size(); ++k) {
    // Vein of cell k from its base point to the base point of cell k+1.
    const cplx target = chain_point(ch.local[k], 0.0);
    const Generation& gen = ch.cells[k];
    auto f = [&](double t) { return chain_point(gen, t * target); };
    const auto arc = adaptive_sample(f, 0.0, 1.0, 16, 1e-3);
    pts.insert(pts.end(), arc.begin() + 1, arc.end());
  }
  pts.push_back(z);
  vp.length = polyline_length(pts);
  vp.levels = static_cast<int>(ch.cells.size());
  return vp;
}

// ---------------------------------------------------------------------- rays

RayPath Partition::external_ray(cplx x, int depth) const {
  if (depth < 1 || depth > 12) throw InvalidArgument("ray depth must be in 1..12");
  const double aa = ifs_.abs_alpha();
  const cplx c = ifs_.c();
  const CurveApprox I = limit_curve(ifs_, depth);
  const CurveApprox Lw = curve_L(I, aa, -opts_.inner_scales, opts_.outer_scales);
  RayPath ray;
  ray.target = x;
  ray.truncation_depth = depth;
  if (x == 0.0) {
    CurveApprox l{{0.0}, {}, false};
    l.points.insert(l.points.end(), Lw.points.begin(), Lw.points.end());
    ray.arcs.push_back(std::move(l));
    return ray;
  }
  require_quadratic("external rays to base points");
  if (std::abs(x.imag()) > 1e-12 * std::abs(x)) throw NotCovered("rays are built to real base points only");
  const double sign = x.real() < 0.0 ? -1.0 : 1.0;
  double y = std::abs(x.real());
  const double x0 = branch().x0();
  const double tol = 1e-9;
  // Scale into (0, x0], the real side of the triangle, where A maps onto
  // [0, x0/|alpha|] and B onto [x0/|alpha|, x0] with B(0) = x0.
  int k = 0;
  while (y > x0 * (1.0 + tol)) {
    y /= aa;
    ++k;
  }
  std::string word;
  while (y > 0.0) {
    if (word.size() > 64) throw NotCovered("point is not a base point of the machine tiling");
    if (std::abs(y - x0) <= tol * x0) {
      y = 0.0;
      word.push_back('B');
    } else if (y < (x0 / aa) * (1.0 + tol)) {
      y *= aa;
      word.push_back('A');
    } else {
      y = branch().map().g_real(y);
      word.push_back('B');
    }
  }
  // The path from 0 to c is the arc of L; a letter a maps the path from q to
  // c onto one from a(q) to a(c) = c/|alpha|, which I continues to c.
  const std::size_t block = I.size() - 1;
  const auto idx_c = static_cast<std::size_t>(opts_.inner_scales + 1) * block;
  auto ustar = [&](cplx z) { return branch().u(std::conj(z), Side::lower); };
  CurveApprox to_c;
  to_c.points.push_back(0.0);
  to_c.points.insert(to_c.points.end(), Lw.points.begin(), Lw.points.begin() + static_cast<long>(idx_c) + 1);
  to_c.points.back() = c;
  std::vector<CurveApprox> arcs{to_c};
  for (std::size_t i = word.size(); i-- > 0;) {
    for (CurveApprox& a : arcs) {
      for (cplx& z : a.points) z = word[i] == 'A' ? z / aa : ustar(z);
    }
    arcs.back().points.back() = c / aa;
    arcs.push_back(I);
  }
  const double s = sign * std::pow(aa, k);
  for (CurveApprox& a : arcs) {
    a.addresses.clear();
    for (cplx& z : a.points) z *= s;
  }
  // Out along L to the window edge.
  const long first = static_cast<long>(k + 1 + opts_.inner_scales) * static_cast<long>(block);
  if (first >= 0 && first < static_cast<long>(Lw.size())) {
    CurveApprox tail;
    for (std::size_t i = static_cast<std::size_t>(first); i < Lw.size(); ++i) tail.points.push_back(sign * Lw.points[i]);
    tail.points.front() = arcs.back().points.back();
    arcs.push_back(std::move(tail));
  }
  ray.arcs = std::move(arcs);
  return ray;
}

// ------------------------------------------------------------------ coverage

namespace {

struct CensusNode {
  double key;
  bool imaginary;  // cell of the imaginary sector, E(w)
  std::string word;
  std::size_t slot;
};

struct NodeOrder {
  bool operator()(const CensusNode& a, const CensusNode& b) const {
    if (a.key != b.key) return a.key < b.key;
    if (a.imaginary != b.imaginary) return a.imaginary;
    return a.word > b.word;
  }
};

constexpr std::size_t kCensusVertices = 320;

}  // namespace

std::vector<Generation> Partition::near_zero_codes(double radius, int max_pieces, std::vector<Piece>* pieces) const {
  require_quadratic("the near-zero census");
  if (!(radius > 0.0) || radius >= kDeltaReach) throw InvalidArgument("radius must be in (0, 0.6)");
  if (max_pieces < 1) throw InvalidArgument("max_pieces must be >= 1");
  const double aa = ifs_.abs_alpha();
  std::vector<Piece> store;
  std::vector<std::size_t> free_slots;
  auto keep = [&](Piece p) {
    if (!free_slots.empty()) {
      const std::size_t s = free_slots.back();
      free_slots.pop_back();
      store[s] = std::move(p);
      return s;
    }
    store.push_back(std::move(p));
    return store.size() - 1;
  };
  std::priority_queue<CensusNode, std::vector<CensusNode>, NodeOrder> heap;
  const Piece seed = decimated(machine_.seed, kCensusVertices);
  heap.push({seed.diam(), false, "", keep(seed)});
  const std::array<PieceOp, 4> to_imag{{{OpKind::scale, 1}, {OpKind::neg, 0}, {OpKind::conj, 0}, {OpKind::pull, 0}}};
  const std::array<std::vector<PieceOp>, 3> mirrors{{{{OpKind::conj, 0}, {OpKind::neg, 0}}, {{OpKind::neg, 0}}, {{OpKind::conj, 0}}}};

  std::vector<Generation> codes;
  int count = 0;
  while (!heap.empty() && count < max_pieces) {
    const CensusNode node = heap.top();
    heap.pop();
    Piece p = std::move(store[node.slot]);
    free_slots.push_back(node.slot);
    if (distance_to_origin(p.boundary.points) <= radius) {
      Generation code = p.gen;
      code.machine_word.clear();
      codes.push_back(code);
      count += 4;
      if (pieces != nullptr) {
        p.gen.machine_word = (node.imaginary ? "E:" : "") + node.word;
        p.level = 1;
        pieces->push_back(p);
        for (const auto& m : mirrors) pieces->push_back(apply(p, m));
      }
    }
    if (node.imaginary || node.word.size() >= 40) continue;
    for (const char letter : {'A', 'B'}) {
      Generation g;
      push_letter(g, letter);
      Piece q = apply(p, g.ops);
      const double key = q.diam();
      heap.push({key, false, std::string(1, letter) + node.word, keep(std::move(q))});
    }
    if (p.x_R.real() > (1.0 / aa) * (1.0 + 1e-12)) {
      Piece e = apply(p, to_imag);
      const double key = e.diam();
      heap.push({key, true, node.word, keep(std::move(e))});
    }
  }
  return codes;
}

std::vector<Piece> Partition::near_zero_census(double radius, int max_pieces) const {
  std::vector<Piece> out;
  near_zero_codes(radius, max_pieces, &out);
  return out;
}

CoverageResult Partition::tiling_coverage(double radius, int max_pieces, std::size_t samples, double tube_frac,
                                          std::uint64_t seed) const {
  if (samples == 0) throw InvalidArgument("samples must be positive");
  const auto codes = near_zero_codes(radius, max_pieces, nullptr);
  std::unordered_set<std::string> known;
  for (const Generation& g : codes) known.insert(g.str());
  CoverageResult res;
  res.pieces = 4 * codes.size();
  res.samples = samples;
  res.tube = tube_frac * radius;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t covered = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double rr = radius * std::sqrt(unif(rng));
    const cplx z = std::polar(rr, 2.0 * std::numbers::pi * unif(rng));
    const double line = std::min(std::abs(z.real()), std::abs(z.imag()));
    if (line <= res.tube) {
      ++covered;
      continue;
    }
    const cplx t(std::abs(z.real()), std::abs(z.imag()));
    bool hit = false;
    try {
      hit = known.count(locate_in_quadrant(t, nullptr).str()) > 0;
    } catch (const NotCovered&) {
    }
    if (hit) {
      ++covered;
      continue;
    }
    const double u = line / res.tube;
    const std::size_t bin = u < 2 ? 0 : u < 4 ? 1 : u < 8 ? 2 : u < 16 ? 3 : 4;
    ++res.uncovered_by_line_distance[bin];
  }
  res.coverage = static_cast<double>(covered) / static_cast<double>(samples);
  return res;
}

}  // namespace feig
