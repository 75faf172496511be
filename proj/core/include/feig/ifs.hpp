#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "feig/curve.hpp"
#include "feig/inverse_branch.hpp"

namespace feig {

/// Value of a map together with the modulus of its (anti)holomorphic
/// derivative.
struct MapPoint {
  cplx value;
  double deriv_mag;
};

/// The finite system {phi_1, phi_2, phi_3} and the induced system {psi_k}:
///   psi_k(z) = u*(|alpha|^k z), phi_1 = psi_1, phi_2 = psi_2, phi_3 = chi^2.
/// phi_1 and phi_2 reverse orientation; phi_3 preserves it.
class Ifs {
 public:
  Ifs(InverseBranch branch, SingularPoint c);

  const InverseBranch& branch() const noexcept { return ib_; }
  const SingularPoint& singular_point() const noexcept { return c_; }
  cplx c() const noexcept { return c_.c; }
  double abs_alpha() const noexcept { return ib_.abs_alpha(); }

  /// a1 = c/|alpha|, a2 = phi_1(a4), a3 = phi_2(a4), a4 = c; the limit arc
  /// runs a1 -> a4 and phi_1, phi_2, phi_3 cover [a1,a2], [a2,a3], [a3,a4].
  const std::array<cplx, 4>& junctions() const noexcept { return a_; }

  cplx phi(int i, cplx z) const { return phi_jet(i, z).value; }
  MapPoint phi_jet(int i, cplx z) const;
  double phi_deriv_mag(int i, cplx z) const { return phi_jet(i, z).deriv_mag; }

  cplx psi(int k, cplx z) const { return psi_jet(k, z).value; }
  MapPoint psi_jet(int k, cplx z) const;

  /// phi_{w_1} o ... o phi_{w_n}(z): the last symbol acts first.
  cplx apply(const SymbolWord& w, cplx z) const;
  /// |(phi_w)'(z)| by the chain rule, |f*'(z)| = |f'(conj z)| for the
  /// antiholomorphic factors.
  double derivative_mag(const SymbolWord& w, cplx z) const;
  MapPoint apply_jet(const SymbolWord& w, cplx z) const;

 private:
  InverseBranch ib_;
  SingularPoint c_;
  std::array<cplx, 4> a_{};
};

/// Boundary of the carrier X: bottom arcs tau_n/|alpha| (n >= 2), left side
/// (upper part of tau_0 and the even arcs tau_2j), right side
/// u*(e^{i pi/r} t) for t beyond tau_0.
struct CompactX {
  CurveApprox bottom;
  CurveApprox left;
  CurveApprox right;
  cplx c;
  cplx c_scaled;  // c/|alpha|
  cplx contact;   // top of tau_0 divided by |alpha|, where bottom meets left
  /// bottom ++ left ++ reversed(right) as one closed polygon.
  std::vector<cplx> boundary;
  double diam = 0.0;

  bool contains(cplx z) const { return polygon_contains(boundary, z); }
};

/// Builds X with polylines refined to absolute chord deviation `resolution`;
/// the infinite families of arcs are truncated once they are within
/// `resolution` of their limit points.
CompactX build_X(const Ifs& ifs, double resolution = 1e-6);

/// Ordered polyline through the 3^depth + 1 cylinder junctions of the limit
/// arc I, from c/|alpha| to c. Vertex k < 3^depth carries the word w with
/// vertex = phi_w(a1); the final vertex c carries 3...3 of length depth+1,
/// the truncation of its constant address.
CurveApprox limit_curve(const Ifs& ifs, int depth);

/// Union of |alpha|^n I for n in [scale_min, scale_max], concatenated from
/// the inside out and joined at |alpha|^n c. Addresses are not carried.
CurveApprox curve_L(const Ifs& ifs, int depth, int scale_min, int scale_max);
/// Same, reusing an already computed limit curve.
CurveApprox curve_L(const CurveApprox& limit, double abs_alpha, int scale_min, int scale_max);

/// Uniform random interior points of a closed polygon (rejection sampling
/// in the bounding box).
std::vector<cplx> sample_interior(std::span<const cplx> polygon, std::size_t count, std::uint64_t seed);

// Sampled checks of the carrier's properties. Each returns measured values;
// the callers decide tolerances.

struct InvarianceCheck {
  /// Worst distance outside X of an image point phi_i(z), z on the boundary
  /// (0 when every image point is inside).
  std::array<double, 3> worst_outside{};
  std::size_t samples = 0;
};
InvarianceCheck check_forward_invariance(const Ifs& ifs, const CompactX& x, std::size_t stride = 1);

struct DisjointnessCheck {
  /// violations[i][j]: interior samples of phi_i(X) strictly inside phi_j(X)
  /// by more than the tube.
  std::array<std::array<std::size_t, 3>, 3> violations{};
  std::size_t samples = 0;
};
DisjointnessCheck check_disjointness(const Ifs& ifs, const CompactX& x, std::size_t samples, double tube,
                                     std::uint64_t seed);

/// Minimal distance between the boundaries of phi_i(X) and phi_j(X).
std::array<std::array<double, 3>, 3> image_distances(const Ifs& ifs, const CompactX& x);

/// Largest ratio rho(phi_i x, phi_i y)/rho(x, y) over random pairs in X, in
/// the hyperbolic metric of the upper half-plane.
std::array<double, 3> contraction_ratios(const Ifs& ifs, const CompactX& x, std::size_t pairs, std::uint64_t seed);

/// sup over words of length <= max_len of sup/inf of |phi_w'| across the
/// given sample points of X.
double distortion_constant(const Ifs& ifs, std::span<const cplx> samples, int max_len);

/// Images of X under the maps, as polygons.
std::vector<cplx> map_polygon(const Ifs& ifs, int i, std::span<const cplx> polygon);

}  // namespace feig
