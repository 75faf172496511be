#include "feig/inverse_branch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "feig/errors.hpp"

namespace feig {
namespace {

constexpr int kSeedNodes = 512;
constexpr int kSeedTerms = 140;
constexpr int kMaxDepth = 200;

struct NewtonResult {
  cplx v;
  bool ok;
};

// Newton on F(v) = z from v0.
NewtonResult newton_F(const FeigenbaumMap& map, cplx z, cplx v0, int max_iter = 30) {
  cplx v = v0;
  for (int it = 0; it < max_iter; ++it) {
    Jet f;
    try {
      f = map.F(v);
    } catch (const OutOfDomain&) {
      return {v, false};
    }
    if (f.deriv == 0.0) return {v, false};
    const cplx step = (f.value - z) / f.deriv;
    v -= step;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return {v, false};
    if (std::abs(step) <= 4e-16 * (1.0 + std::abs(v))) return {v, true};
  }
  try {
    return {v, std::abs(map.F(v).value - z) <= 1e-12 * (1.0 + std::abs(z))};
  } catch (const OutOfDomain&) {
    return {v, false};
  }
}

bool is_real(cplx z) { return z.imag() == 0.0; }

}  // namespace

InverseBranch::InverseBranch(FeigenbaumMap map) : map_(std::move(map)), x0_(find_x0(map_)) { build_seed(); }

// Taylor coefficients of V about 1 from a Cauchy integral on a circle well
// inside the disc of analyticity, with V continued along the real axis to
// the circle and then around it.
void InverseBranch::build_seed() {
  // The nearest critical values of F are alpha and the first maximum of F
  // along the negative axis, which comes closer than alpha for r >= 4.
  double reach = 1.0 - map_.alpha();
  try {
    double prev = 0.0;
    for (double v = -0.02; v > -20.0; v -= 0.02) {
      if (map_.F(v).deriv.real() < 0.0) {
        prev = v;
        continue;
      }
      double lo = prev, hi = v;  // F' < 0 at lo, >= 0 at hi
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (map_.F(mid).deriv.real() < 0.0 ? lo : hi) = mid;
      }
      reach = std::min(reach, map_.F(lo).value.real() - 1.0);
      break;
    }
  } catch (const OutOfDomain&) {
  }
  seed_reach_ = 0.985 * reach;
  seed_circle_ = 0.8565 * reach;
  cplx v = 0.0;
  for (int k = 1; k <= 60; ++k) {
    const double z = 1.0 + seed_circle_ * k / 60.0;
    const auto res = newton_F(map_, z, v);
    if (!res.ok) throw NonConvergence("seed continuation failed on the real axis");
    v = cplx(res.v.real(), 0.0);
  }
  std::vector<cplx> values(kSeedNodes);
  values[0] = v;
  for (int j = 1; j < kSeedNodes; ++j) {
    const double th0 = 2.0 * std::numbers::pi * (j - 1) / kSeedNodes;
    const double th1 = 2.0 * std::numbers::pi * j / kSeedNodes;
    int sub = 1;
    bool done = false;
    while (!done && sub <= 64) {
      cplx w = v;
      bool ok = true;
      for (int s = 1; s <= sub && ok; ++s) {
        const double th = th0 + (th1 - th0) * s / sub;
        const auto res = newton_F(map_, 1.0 + std::polar(seed_circle_, th), w);
        ok = res.ok && std::abs(res.v - w) < 0.5 * (1.0 + std::abs(w));
        w = res.v;
      }
      if (ok) {
        v = w;
        done = true;
      } else {
        sub *= 2;
      }
    }
    if (!done) throw NonConvergence("seed continuation failed on the Cauchy circle");
    values[static_cast<std::size_t>(j)] = v;
  }
  seed_.assign(kSeedTerms, 0.0);
  for (int k = 0; k < kSeedTerms; ++k) {
    cplx acc = 0.0;
    for (int j = 0; j < kSeedNodes; ++j)
      acc += values[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * std::numbers::pi * k * j / kSeedNodes);
    seed_[static_cast<std::size_t>(k)] = acc / (kSeedNodes * std::pow(seed_circle_, k));
  }
  // V is real on the real axis; drop the imaginary round-off.
  for (auto& b : seed_) b = cplx(b.real(), 0.0);
}

cplx InverseBranch::V_base(cplx z) const {
  const cplx d = z - 1.0;
  const double rho = std::abs(d);
  if (rho == 0.0) return 0.0;
  if (rho > 0.9 * seed_reach_) {
    // Past the seed disc (r >= 4): Newton continuation along the ray from 1.
    const cplx z1 = 1.0 + (0.9 * seed_reach_ / rho) * d;
    cplx v = V_base(z1);
    const int steps = static_cast<int>(std::ceil(std::abs(z - z1) / 0.02));
    for (int k = 1; k <= steps; ++k) {
      const auto res = newton_F(map_, z1 + (z - z1) * (static_cast<double>(k) / steps), v);
      if (!res.ok || std::abs(res.v - v) > 0.25 * (1.0 + std::abs(v))) throw BranchLoss("continuation of F^{-1} lost its branch");
      v = res.v;
    }
    return is_real(z) ? cplx(v.real(), 0.0) : v;
  }
  // Seed to ~1e-9; Newton supplies the rest.
  std::size_t terms = seed_.size();
  if (rho < seed_reach_ * 0.98) {
    const double need = std::ceil(-21.0 / std::log(rho / seed_reach_));
    terms = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(need, 2.0)), 2, seed_.size());
  }
  cplx v0 = 0.0;
  for (std::size_t k = terms; k-- > 0;) v0 = v0 * d + seed_[k];
  if (is_real(z)) v0 = cplx(v0.real(), 0.0);
  const auto res = newton_F(map_, z, v0, 12);
  if (!res.ok) throw NonConvergence("Newton inversion of F failed");
  if (std::abs(res.v - v0) > 1e-6 * (1.0 + std::abs(res.v))) throw BranchLoss("Newton left the seeded branch of F^{-1}");
  return is_real(z) ? cplx(res.v.real(), 0.0) : res.v;
}

// Principal r-th root, except that negative reals are rotated toward the
// half-plane `vside` they are approached from.
cplx InverseBranch::root(cplx v, Side vside) const {
  const int r = map_.criticality();
  const double mag = std::pow(std::abs(v), 1.0 / r);
  if (is_real(v)) {
    if (v.real() >= 0.0) return mag;
    const double ang = (vside == Side::upper ? 1.0 : -1.0) * std::numbers::pi / r;
    return std::polar(mag, ang);
  }
  return std::polar(mag, std::arg(v) / r);
}

cplx InverseBranch::V(cplx z, Side side) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw OutOfDomain("non-finite argument to V");
  return V_rec(z, side, 0);
}

cplx InverseBranch::V_rec(cplx z, Side side, int depth) const {
  if (std::abs(z) <= base_radius_) return V_base(z);
  if (depth >= kMaxDepth) throw OutOfDomain("continuation depth exhausted evaluating V");
  const double a = map_.alpha();
  // Division by alpha < 0 swaps the half-planes; V swaps them again.
  const Side inner_side = opposite(side);
  const cplx vin = V_rec(z / a, inner_side, depth + 1);
  const cplx w = root(vin, opposite(inner_side));
  return map_.alpha_pow_r() * V_rec(w, Side::upper, depth + 1);
}

cplx InverseBranch::u(cplx z) const {
  if (is_real(z) && !(z.real() >= map_.alpha() && z.real() <= 1.0)) {
    throw OutOfDomain("u is not defined on the slit (outside (alpha, 1))");
  }
  return u(z, Side::upper);
}

cplx InverseBranch::u(cplx z, Side side) const {
  const cplx v = V(z, side);
  if (!is_real(z)) {
    // V maps each half-plane into the opposite one.
    const double tol = 1e-9 * (1.0 + std::abs(v));
    if ((z.imag() > 0.0 && v.imag() > tol) || (z.imag() < 0.0 && v.imag() < -tol)) {
      throw BranchLoss("inverse branch left its sector");
    }
  }
  const Side vside = is_real(z) ? opposite(side) : (z.imag() > 0.0 ? Side::lower : Side::upper);
  return root(v, vside);
}

Jet InverseBranch::u_jet(cplx z, Side side) const {
  const cplx w = u(z, side);
  const int r = map_.criticality();
  const cplx v = std::pow(w, static_cast<double>(r));
  const Jet f = map_.F(is_real(w) ? cplx(v.real(), 0.0) : v);
  cplx wr1 = 1.0;
  for (int i = 0; i < r - 1; ++i) wr1 *= w;
  return {w, 1.0 / (f.deriv * static_cast<double>(r) * wr1)};
}

double hyperbolic_distance(cplx a, cplx b) {
  const double num = std::norm(a - b);
  return std::acosh(1.0 + num / (2.0 * a.imag() * b.imag()));
}

SingularPoint find_c(const InverseBranch& ib, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  cplx z(0.0, 1.0);
  int it = 0;
  double defect = INFINITY;
  for (; it < 400; ++it) {
    const cplx next = ib.chi(z);
    defect = std::abs(next - z);
    z = next;
    if (defect <= 1e-6) break;
  }
  // chi^2 is holomorphic: chi^2(z) = h(conj h(conj z)) with h = |alpha| u.
  const double a = ib.abs_alpha();
  for (int k = 0; k < 20; ++k) {
    const Jet h1 = ib.u_jet(std::conj(z));
    const cplx z1 = a * h1.value;
    const Jet h2 = ib.u_jet(std::conj(z1));
    const cplx z2 = a * h2.value;
    const cplx d = a * h2.deriv * std::conj(a * h1.deriv);
    const cplx step = (z2 - z) / (d - 1.0);
    z -= step;
    ++it;
    if (std::abs(step) <= 1e-16 * std::abs(z)) break;
  }
  defect = std::abs(ib.chi(z) - z);
  const double ang = std::arg(z);
  if (!(defect <= tol) || !(ang > 0.0 && ang < std::numbers::pi / ib.criticality())) {
    throw NonConvergence("chi iteration did not settle on a fixed point in the sector");
  }
  return {z, it, defect};
}

OmegaBoundary omega_boundary(const InverseBranch& ib, int n, int pts_per_arc) {
  if (n < 1) throw InvalidArgument("omega_boundary needs n >= 1");
  if (pts_per_arc < 2) throw InvalidArgument("pts_per_arc must be >= 2");
  OmegaBoundary out;
  out.real_segment = {0.0, ib.abs_alpha() * ib.x0()};
  const double a = ib.alpha();
  const double top = 2.0 * std::log(ib.abs_alpha());
  for (int k = 0; k <= n; ++k) {
    const double scale = std::pow(a, k);
    // Log parametrization of s in [1, alpha^2] spreads samples evenly in scale.
    auto f = [&](double t) { return ib.u_star(scale * std::exp(t)); };
    CurveApprox arc;
    arc.points = adaptive_sample(f, 0.0, top, pts_per_arc, 1e-4);
    // Pin the endpoints exactly to the images of the slit points.
    arc.points.front() = ib.u_star(scale);
    arc.points.back() = ib.u_star(scale * a * a);
    arc.points = dedupe_consecutive(arc.points);
    out.tau.push_back(std::move(arc));
  }
  return out;
}

double tau_junction_angle(const InverseBranch& ib, int n, double h) {
  const double a = ib.alpha();
  const double x = std::pow(a, n + 2);
  const cplx p = ib.u_star(x);
  // tau_n arrives from the |x|-smaller side, tau_{n+2} leaves on the larger.
  const cplx d1 = ib.u_star(x * (1.0 - h)) - p;
  const cplx d2 = ib.u_star(x * (1.0 + h)) - p;
  return std::abs(std::arg(d2 / d1));
}

}  // namespace feig
