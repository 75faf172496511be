#include "feig/feigenbaum_map.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <cstdio>
#include <string>

#include "feig/errors.hpp"

namespace feig {
namespace {

// Horner evaluation of 1 + sum_{k=1}^{n} c_k w^k and its derivative.
Jet horner(std::span<const double> c, std::size_t n, cplx w) {
  cplx p = 0.0;
  cplx dp = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    dp = dp * w + p;
    p = p * w + c[k];
  }
  // p now holds sum c_k w^{k-1}; shift by one power.
  return {1.0 + p * w, p + dp * w};
}

cplx ipow(cplx z, int n) {
  cplx out = 1.0;
  for (int i = 0; i < n; ++i) out *= z;
  return out;
}

// Collocation residual for the truncated polynomial: F(w) - alpha F(F(w/alpha^r)^r)
// at the nodes, alpha = 1/F(1). Real nodes contribute one row each, complex
// nodes their real and imaginary parts.
Eigen::VectorXd collocation_residual(const Eigen::VectorXd& c, int r, const std::vector<cplx>& nodes,
                                     bool real_nodes) {
  std::span<const double> cs(c.data(), static_cast<std::size_t>(c.size()));
  const std::size_t n = cs.size();
  const double alpha = 1.0 / horner(cs, n, 1.0).value.real();
  const double alpha_r = std::pow(alpha, r);
  const std::size_t rows = real_nodes ? 1 : 2;
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows * nodes.size()));
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const cplx w = nodes[j];
    const cplx inner = horner(cs, n, w / alpha_r).value;
    const cplx rhs = alpha * horner(cs, n, ipow(inner, r)).value;
    const cplx d = horner(cs, n, w).value - rhs;
    out[static_cast<Eigen::Index>(rows * j)] = d.real();
    if (!real_nodes) out[static_cast<Eigen::Index>(rows * j + 1)] = d.imag();
  }
  return out;
}

// Chebyshev nodes of x in [0, 1] mapped through w = x^r, one per unknown.
std::vector<cplx> real_nodes(Eigen::Index n, int r) {
  std::vector<cplx> nodes;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = std::cos((static_cast<double>(j) + 0.5) * std::numbers::pi / static_cast<double>(n));
    nodes.emplace_back(std::pow(0.5 * (1.0 + t), r), 0.0);
  }
  return nodes;
}

// Nodes on the semicircle |w| = rho, two rows each: a least-squares system
// oversampled twofold.
std::vector<cplx> arc_nodes(Eigen::Index n, double rho) {
  const auto m = n;
  std::vector<cplx> nodes;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double theta = (static_cast<double>(j) + 0.5) * std::numbers::pi / static_cast<double>(m);
    nodes.push_back(std::polar(rho, theta));
  }
  return nodes;
}

// Newton with a numerically assembled Jacobian and step halving.
Eigen::VectorXd newton_collocation(Eigen::VectorXd c, int r, const std::vector<cplx>& nodes, bool real) {
  const auto n = c.size();
  Eigen::VectorXd res = collocation_residual(c, r, nodes, real);
  double norm = res.lpNorm<Eigen::Infinity>();
  Eigen::MatrixXd jac(res.size(), n);
  int stalled = 0;
  for (int it = 0; it < 60 && std::isfinite(norm); ++it) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(c[k]));
      Eigen::VectorXd cp = c;
      cp[k] += h;
      jac.col(k) = (collocation_residual(cp, r, nodes, real) - res) / h;
    }
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-res);
    double lambda = 1.0;
    Eigen::VectorXd trial = c + step;
    Eigen::VectorXd trial_res = collocation_residual(trial, r, nodes, real);
    while (!(trial_res.lpNorm<Eigen::Infinity>() < norm) && lambda > 1e-4) {
      lambda *= 0.5;
      trial = c + lambda * step;
      trial_res = collocation_residual(trial, r, nodes, real);
    }
    const double trial_norm = trial_res.lpNorm<Eigen::Infinity>();
    if (!(trial_norm < norm)) break;
    stalled = trial_norm > 0.5 * norm ? stalled + 1 : 0;
    c = trial;
    res = trial_res;
    norm = trial_norm;
    if (step.lpNorm<Eigen::Infinity>() * lambda < 1e-15 * (1.0 + c.lpNorm<Eigen::Infinity>())) break;
    if (stalled >= 3) break;
  }
  return c;
}

}  // namespace

FeigenbaumMap::FeigenbaumMap(int r, std::vector<double> coeffs, double residual)
    : r_(r), coeffs_(std::move(coeffs)), residual_(residual) {
  if (r_ < 2 || r_ % 2 != 0) throw BadCriticality("criticality must be an even integer >= 2");
  if (coeffs_.empty()) throw InvalidArgument("empty coefficient vector");
  alpha_ = 1.0 / horner(coeffs_, coeffs_.size(), 1.0).value.real();
  alpha_r_ = std::pow(alpha_, r_);
  // Continuation of real arguments drifts to the attracting fixed point w*
  // of w -> F(w/alpha^r)^r, so the series disc must reach past it; the
  // agreement tolerance is relaxed only as far as needed for that.
  double w_star = 1.0;
  for (int i = 0; i < 500; ++i) w_star = std::pow(horner(coeffs_, coeffs_.size(), w_star / alpha_r_).value.real(), r_);
  for (double tol = 1e-12; tol <= 1e-6; tol *= 10.0) {
    radius_w_ = estimate_radius(tol);
    if (radius_w_ > 1.1 * std::abs(w_star)) break;
  }
  radius_ = std::pow(radius_w_, 1.0 / r_);
}

void FeigenbaumMap::set_radius(double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
  radius_ = radius;
  radius_w_ = std::pow(radius, r_);
}

// Largest circle in the w-plane on which the order-N and order-N/2 partial
// sums agree to within tol.
double FeigenbaumMap::estimate_radius(double tol) const {
  const std::size_t n = coeffs_.size();
  const std::size_t half = std::max<std::size_t>(1, n / 2);
  double best = 0.05;
  for (double rad = 0.05; rad < 16.0; rad += 0.05) {
    double worst = 0.0;
    for (int j = 0; j <= 64; ++j) {
      const cplx w = std::polar(rad, std::numbers::pi * j / 64.0);
      worst = std::max(worst, std::abs(horner(coeffs_, n, w).value - horner(coeffs_, half, w).value));
    }
    if (!(worst <= tol)) break;
    best = rad;
  }
  return best;
}

Jet FeigenbaumMap::F_series(cplx w, int terms) const {
  const std::size_t n = terms < 0 ? coeffs_.size() : std::min<std::size_t>(coeffs_.size(), static_cast<std::size_t>(terms));
  return horner(coeffs_, n, w);
}

Jet FeigenbaumMap::F(cplx w, const ContinuationPolicy& policy) const {
  return F_rec(w, 0, policy);
}

Jet FeigenbaumMap::F_rec(cplx w, int depth, const ContinuationPolicy& policy) const {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw OutOfDomain("non-finite argument to F");
  if (std::abs(w) <= radius_w_) return horner(coeffs_, coeffs_.size(), w);
  if (depth >= policy.max_depth) throw OutOfDomain("continuation depth exhausted evaluating F");
  const Jet inner = F_rec(w / alpha_r_, depth + 1, policy);
  const cplx inner_pow = ipow(inner.value, r_);
  const Jet outer = F_rec(inner_pow, depth + 1, policy);
  const cplx d_inner_pow = static_cast<double>(r_) * ipow(inner.value, r_ - 1) * inner.deriv / alpha_r_;
  return {alpha_ * outer.value, alpha_ * outer.deriv * d_inner_pow};
}

Jet FeigenbaumMap::g_jet(cplx z, const ContinuationPolicy& policy) const {
  const cplx w = ipow(z, r_);
  const Jet f = F(w, policy);
  return {f.value, f.deriv * static_cast<double>(r_) * ipow(z, r_ - 1)};
}

cplx FeigenbaumMap::g(cplx z, const ContinuationPolicy& policy) const { return g_jet(z, policy).value; }

cplx FeigenbaumMap::g_prime(cplx z, const ContinuationPolicy& policy) const {
  return g_jet(z, policy).deriv;
}

double FeigenbaumMap::g_real(double x) const { return g(cplx(x, 0.0)).real(); }

double FeigenbaumMap::g_prime_real(double x) const { return g_prime(cplx(x, 0.0)).real(); }

double functional_equation_defect(const FeigenbaumMap& map, int points) {
  const double alpha = map.alpha();
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = points > 1 ? static_cast<double>(i) / (points - 1) : 0.0;
    const double lhs = map.g_real(x);
    const double rhs = alpha * map.g_real(map.g_real(x / alpha));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

FeigenbaumMap solve_feigenbaum(int r, int order, double tol) {
  if (r < 2 || r % 2 != 0) throw BadCriticality("criticality r must be even and >= 2, got " + std::to_string(r));
  if (order < 10) throw InvalidArgument("order must be >= 10");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");

  // Seed: a low-order square solve at real Chebyshev nodes of [0, 1], from
  // a few starting quadratic terms, since g''(0) drifts with r.
  const Eigen::Index seed_order = std::min(order, 12);
  Eigen::VectorXd seed;
  double seed_norm = INFINITY;
  for (double mu : {1.5, 1.8, 2.1, 2.5}) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(seed_order);
    c[0] = -mu;
    const auto nodes = real_nodes(seed_order, r);
    c = newton_collocation(c, r, nodes, true);
    const double h1 = 1.0 + c.sum();
    const double norm = collocation_residual(c, r, nodes, true).lpNorm<Eigen::Infinity>();
    if (c.allFinite() && h1 < -1e-3 && 1.0 / h1 < -1.0 && norm < seed_norm) {
      seed = c;
      seed_norm = norm;
    }
  }
  if (seed.size() == 0) throw NonConvergence("no Feigenbaum seed found at low order");

  // Refinement: monomials are ill-conditioned on [0, 1] at high order, so
  // the order is grown with nodes on a semicircle |w| = rho, which must stay
  // inside the disc of convergence; that disc shrinks as r grows.
  // Among the candidates meeting tol, the one whose series agrees with its
  // truncation on the widest disc is the most accurate off the real axis.
  std::vector<double> best;
  double best_defect = INFINITY;
  double best_radius = 0.0;
  double least_defect = INFINITY;
  for (double rho : {1.5, 1.0, 0.7, 0.5}) {
    Eigen::VectorXd c = seed;
    while (c.size() < order) {
      const auto next = std::min<Eigen::Index>(c.size() + 6, order);
      Eigen::VectorXd grown = Eigen::VectorXd::Zero(next);
      grown.head(c.size()) = c;
      c = newton_collocation(grown, r, arc_nodes(next, rho), false);
    }
    if (!c.allFinite()) continue;
    std::vector<double> coeffs(c.data(), c.data() + c.size());
    const double h1 = 1.0 + std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
    if (!(h1 < -1e-3 && 1.0 / h1 < -1.0)) continue;
    FeigenbaumMap candidate(r, coeffs, 0.0);
    double defect = INFINITY;
    try {
      defect = functional_equation_defect(candidate, 512);
    } catch (const Error&) {
      continue;
    }
    least_defect = std::min(least_defect, defect);
    if (defect <= tol && candidate.series_radius_w() > best_radius) {
      best_radius = candidate.series_radius_w();
      best_defect = defect;
      best = std::move(coeffs);
    }
  }
  if (best.empty()) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "Feigenbaum solve did not reach tol %.3g (best defect %.3g)", tol, least_defect);
    throw NonConvergence(msg);
  }
  return FeigenbaumMap(r, std::move(best), best_defect);
}

cplx eval_g(const FeigenbaumMap& map, cplx z, const ContinuationPolicy& policy) {
  return map.g(z, policy);
}

cplx eval_g_prime(const FeigenbaumMap& map, cplx z, const ContinuationPolicy& policy) {
  return map.g_prime(z, policy);
}

double find_x0(const FeigenbaumMap& map) {
  double lo = 0.0;
  double hi = 1.0;
  if (!(map.g_real(lo) > 0.0 && map.g_real(hi) < 0.0)) throw NonConvergence("g does not change sign on [0,1]");
  for (int i = 0; i < 200 && hi - lo > 1e-3; ++i) {
    const double mid = 0.5 * (lo + hi);
    (map.g_real(mid) > 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 50; ++i) {
    const double step = map.g_real(x) / map.g_prime_real(x);
    x -= step;
    if (std::abs(step) < 1e-16) break;
  }
  if (!(x > 0.0 && x < 1.0) || std::abs(map.g_real(x)) > 1e-12) throw NonConvergence("x0 Newton failed");
  return x;
}

}  // namespace feig
