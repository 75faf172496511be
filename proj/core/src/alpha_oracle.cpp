#include <cmath>
#include <vector>

#include "feig/errors.hpp"
#include "feig/feigenbaum_map.hpp"

namespace feig {
namespace {

using real = long double;

struct Orbit {
  real value;  // f_mu^n(0)
  real dmu;    // d/dmu of the same
};

// Iterates x -> 1 - mu |x|^r from the critical point.
Orbit iterate(real mu, int r, long steps) {
  real x = 0.0L;
  real dx = 0.0L;
  for (long k = 0; k < steps; ++k) {
    const real ax = std::fabs(x);
    const real p = std::pow(ax, static_cast<real>(r));
    const real dp = ax > 0.0L ? r * std::pow(ax, static_cast<real>(r - 1)) * (x > 0.0L ? 1.0L : -1.0L) : 0.0L;
    dx = -p - mu * dp * dx;
    x = 1.0L - mu * p;
  }
  return {x, dx};
}

// Superstable parameter of period 2^n near `guess`.
real superstable(int r, int n, real guess) {
  const long period = 1L << n;
  real mu = guess;
  real last_step = INFINITY;
  for (int it = 0; it < 100; ++it) {
    const Orbit o = iterate(mu, r, period);
    const real step = o.value / o.dmu;
    mu -= step;
    const real size = std::fabs(step);
    if (size < 1e-18L * std::fabs(mu)) return mu;
    // Rounding floor of the long orbit: steps stop shrinking quadratically.
    if (size < 1e-13L * std::fabs(mu) && size > 0.25L * last_step) return mu;
    last_step = size;
  }
  throw NonConvergence("superstable parameter search did not converge");
}

// Runs the cascade and returns |d_n / d_{n+1}| ratios. With precision > 0 it
// instead returns Aitken-accelerated ratios and stops once two consecutive
// accelerated values agree to `precision`.
std::vector<double> cascade(int r, int max_levels, double precision) {
  if (r < 2 || r % 2 != 0) throw BadCriticality("cascade oracle needs even r >= 2");
  std::vector<real> mus{0.0L, 1.0L};
  std::vector<real> dists{1.0L};  // d_1 = f_{mu_1}(0) = 1
  std::vector<double> ratios;
  std::vector<double> accel;
  real delta = 4.0L;
  for (int n = 2; n <= max_levels + 1; ++n) {
    const real last = mus[mus.size() - 1];
    const real prev = mus[mus.size() - 2];
    const real mu = superstable(r, n, last + (last - prev) / delta);
    delta = (last - prev) / (mu - last);
    mus.push_back(mu);
    dists.push_back(iterate(mu, r, 1L << (n - 1)).value);
    const real ratio = dists[dists.size() - 2] / dists.back();
    ratios.push_back(static_cast<double>(std::fabs(ratio)));
    if (precision <= 0.0 || ratios.size() < 3) continue;
    const std::size_t k = ratios.size();
    const double d1 = ratios[k - 1] - ratios[k - 2];
    const double d0 = ratios[k - 2] - ratios[k - 3];
    if (d1 == d0) return {ratios.back()};
    accel.push_back(ratios[k - 1] - d1 * d1 / (d1 - d0));
    if (accel.size() >= 2) {
      const double diff = std::fabs(accel.back() - accel[accel.size() - 2]);
      if (diff < precision) return accel;
    }
  }
  if (precision > 0.0) throw NonConvergence("alpha cascade did not stabilize");
  return ratios;
}

}  // namespace

double alpha_oracle(int r, double precision) {
  if (!(precision > 0.0)) throw InvalidArgument("precision must be positive");
  // Orbit sensitivity grows like (alpha^2 delta)^n; beyond ~14 levels the
  // long double orbit is noise, so the search is capped there.
  return cascade(r, 14, precision).back();
}

std::vector<double> alpha_cascade_ratios(int r, int levels) { return cascade(r, levels, 0.0); }

}  // namespace feig
