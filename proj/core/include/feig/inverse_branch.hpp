#pragma once

#include <array>
#include <complex>
#include <vector>

#include "feig/curve.hpp"
#include "feig/feigenbaum_map.hpp"

namespace feig {

/// Which half-plane a boundary value on a slit is taken from.
enum class Side { upper, lower };

constexpr Side opposite(Side s) noexcept { return s == Side::upper ? Side::lower : Side::upper; }

/// Fixed point of chi in the sector {0 < arg z < pi/r}.
struct SingularPoint {
  cplx c;
  int iterations = 0;
  double defect = 0.0;
};

/// Boundary of omega = u*(upper half-plane): arcs tau_0..tau_n and the real
/// segment [0, |alpha| x0].
struct OmegaBoundary {
  std::vector<CurveApprox> tau;
  std::array<double, 2> real_segment{};
};

/// The inverse branch u of g with u(1) = 0 on the plane slit along
/// (-inf, alpha] and [1, inf), and the derived maps u*(z) = u(conj z) and
/// chi = |alpha| u*.
///
/// Internally u = V^{1/r} with V the inverse of F, which is single valued on
/// the larger slit plane C \ ((-inf, alpha] u [alpha^2, inf)). V is evaluated
/// by Newton from a precomputed Taylor seed near z = 1 and by the identity
/// V(z) = alpha^r V(u(z/alpha)) further out. Immutable after construction.
class InverseBranch {
 public:
  explicit InverseBranch(FeigenbaumMap map);

  const FeigenbaumMap& map() const noexcept { return map_; }
  int criticality() const noexcept { return map_.criticality(); }
  double alpha() const noexcept { return map_.alpha(); }
  double abs_alpha() const noexcept { return -map_.alpha(); }
  double x0() const noexcept { return x0_; }

  /// F^{-1}(z). For real z on a slit, `side` picks the one-sided limit.
  cplx V(cplx z, Side side = Side::upper) const;

  /// u(z) for z off the real axis or in [alpha, 1]. Throws OutOfDomain on
  /// the rest of the real line.
  cplx u(cplx z) const;
  /// One-sided boundary value; for non-real z the side is ignored.
  cplx u(cplx z, Side side) const;
  /// u and its complex derivative 1/g'(u).
  Jet u_jet(cplx z, Side side = Side::upper) const;

  /// u(conj z); real z is read as the limit from the upper half-plane.
  cplx u_star(cplx z) const { return u(std::conj(z), Side::lower); }
  /// |d u*/dz|, equal to |u'(conj z)|.
  double u_star_deriv_mag(cplx z) const { return std::abs(u_jet(std::conj(z), Side::lower).deriv); }

  cplx chi(cplx z) const { return abs_alpha() * u_star(z); }
  double chi_deriv_mag(cplx z) const { return abs_alpha() * u_star_deriv_mag(z); }

  /// Number of Taylor terms in the seed expansion of V about 1.
  std::size_t seed_terms() const noexcept { return seed_.size(); }

 private:
  cplx V_rec(cplx z, Side side, int depth) const;
  cplx V_base(cplx z) const;
  cplx root(cplx v, Side vside) const;
  void build_seed();

  FeigenbaumMap map_;
  double x0_;
  double base_radius_ = 1.5;
  std::vector<cplx> seed_;  // Taylor coefficients of V about z = 1
  // V is analytic on the disc about 1 reaching the critical value alpha.
  double seed_reach_ = 0.0;   // 1 - alpha, rounded down
  double seed_circle_ = 0.0;  // radius of the Cauchy circle
};

/// Fixed point of chi reached by iteration from z = i, polished by Newton on
/// chi^2. Throws NonConvergence when the defect stays above `tol`.
SingularPoint find_c(const InverseBranch& ib, double tol = 1e-12);

/// Arcs tau_k = u*(alpha^k [1, alpha^2]) for k = 0..n, adaptively refined
/// from `pts_per_arc` initial samples until chord deviation < 1e-4 diam.
OmegaBoundary omega_boundary(const InverseBranch& ib, int n, int pts_per_arc = 64);

/// Angle at the common endpoint u*(alpha^{n+2}) between tau_n and tau_{n+2},
/// from one-sided difference quotients at relative offset `h`.
double tau_junction_angle(const InverseBranch& ib, int n, double h = 1e-9);

/// Poincare distance in the upper half-plane.
double hyperbolic_distance(cplx a, cplx b);

}  // namespace feig
