#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace feig {

using cplx = std::complex<double>;

/// Limits for evaluating g outside the disc where its Taylor series is trusted.
struct ContinuationPolicy {
  int max_depth = 64;
  double tol = 1e-12;
};

/// Value and first derivative of an analytic function at one point.
struct Jet {
  cplx value;
  cplx deriv;
};

/// The even fixed point g(z) = F(z^r) = 1 + sum_k c_k z^{rk} of the
/// period-doubling renormalization operator, normalized by g(0) = 1, together
/// with its rescaling constant alpha = 1/g(1) < -1.
///
/// Immutable after construction; every member function is safe to call
/// concurrently.
class FeigenbaumMap {
 public:
  FeigenbaumMap(int r, std::vector<double> coeffs, double residual);

  int criticality() const noexcept { return r_; }
  int order() const noexcept { return static_cast<int>(coeffs_.size()); }
  double alpha() const noexcept { return alpha_; }
  /// alpha^r, positive since r is even.
  double alpha_pow_r() const noexcept { return alpha_r_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double residual() const noexcept { return residual_; }
  /// Radius in the z-plane inside which the truncated series is used directly.
  double radius() const noexcept { return radius_; }
  /// Same disc in the w = z^r plane.
  double series_radius_w() const noexcept { return radius_w_; }

  /// F and F' with functional-equation continuation beyond the series disc:
  /// F(w) = alpha * F(F(w / alpha^r)^r).
  Jet F(cplx w, const ContinuationPolicy& policy = {}) const;

  /// Truncated series only (first `terms` coefficients; all when negative).
  Jet F_series(cplx w, int terms = -1) const;

  cplx g(cplx z, const ContinuationPolicy& policy = {}) const;
  cplx g_prime(cplx z, const ContinuationPolicy& policy = {}) const;
  Jet g_jet(cplx z, const ContinuationPolicy& policy = {}) const;

  /// Real evaluation on the series disc; used by the real-line utilities.
  double g_real(double x) const;
  double g_prime_real(double x) const;

  /// Overrides the validity radius (z-plane); used when deserializing.
  void set_radius(double radius);

 private:
  Jet F_rec(cplx w, int depth, const ContinuationPolicy& policy) const;
  double estimate_radius(double tol) const;

  int r_;
  std::vector<double> coeffs_;
  double alpha_;
  double alpha_r_;
  double residual_;
  double radius_;
  double radius_w_;
};

/// Solves g(x) = alpha g(g(x/alpha)) for even criticality r by Newton's method
/// on the Taylor coefficients of F.
///
/// Throws BadCriticality for odd r or r < 2 and NonConvergence when the
/// defect on the real validation grid stays above `tol`.
FeigenbaumMap solve_feigenbaum(int r, int order = 40, double tol = 1e-12);

/// sup over `points` equispaced x in [0,1] of |g(x) - alpha g(g(x/alpha))|.
double functional_equation_defect(const FeigenbaumMap& map, int points = 512);

cplx eval_g(const FeigenbaumMap& map, cplx z, const ContinuationPolicy& policy = {});
cplx eval_g_prime(const FeigenbaumMap& map, cplx z, const ContinuationPolicy& policy = {});

/// The unique zero of g in (0,1).
double find_x0(const FeigenbaumMap& map);

/// |alpha| estimated from the superstable period-doubling cascade of
/// x -> 1 - mu |x|^r, independently of the fixed-point solver.
double alpha_oracle(int r, double precision = 1e-9);

/// Ratios d_n / d_{n+1} produced along the cascade (absolute values), for
/// diagnostics.
std::vector<double> alpha_cascade_ratios(int r, int levels);

}  // namespace feig
