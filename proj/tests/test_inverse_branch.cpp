#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "feig/errors.hpp"
#include "feig/inverse_branch.hpp"
#include "fixture.hpp"

using namespace feig;
using feig::testing::quadratic_branch;
using feig::testing::quadratic_map;

TEST_CASE("u inverts g with u(1) = 0") {
  const auto& ib = quadratic_branch();
  const auto& map = quadratic_map();
  CHECK(std::abs(ib.u(1.0)) < 1e-14);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(-4.0, 1.0), im(0.05, 3.0);
  for (int k = 0; k < 100; ++k) {
    const cplx z(re(rng), k % 2 ? im(rng) : -im(rng));
    CHECK(std::abs(map.g(ib.u(z)) - z) < 1e-10 * std::max(1.0, std::abs(z)));
  }
}

TEST_CASE("inverse-branch functional equation u(z) = -alpha u(u(z/alpha))") {
  const auto& ib = quadratic_branch();
  const double alpha = ib.alpha();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> radius(0.05, 8.0), angle(0.05, std::numbers::pi - 0.05);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const cplx z = std::polar(radius(rng), k % 2 ? angle(rng) : -angle(rng));
    worst = std::max(worst, std::abs(ib.u(z) + alpha * ib.u(ib.u(z / alpha))));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("u on the real axis: x0 goes to x0/|alpha|") {
  const auto& ib = quadratic_branch();
  CHECK(std::abs(ib.u(ib.x0()) - ib.x0() / ib.abs_alpha()) < 1e-12);
  // u is real on (alpha, 1).
  for (double x = ib.alpha() + 0.05; x < 1.0; x += 0.25) CHECK(std::abs(ib.u(x).imag()) < 1e-14);
}

TEST_CASE("u and u* are conjugate-symmetric sheets") {
  const auto& ib = quadratic_branch();
  const cplx z(0.3, 0.7);
  CHECK(std::abs(ib.u_star(z) - ib.u(std::conj(z), Side::lower)) == 0.0);
  CHECK(std::abs(ib.u(std::conj(z), Side::lower) - std::conj(ib.u(z, Side::upper))) < 1e-14);
}

TEST_CASE("u' matches central differences") {
  const auto& ib = quadratic_branch();
  const double h = 1e-6;
  for (const cplx z : {cplx(0.2, 0.4), cplx(-1.0, 0.5), cplx(0.9, 1.5)}) {
    const Jet j = ib.u_jet(z);
    const cplx fd = (ib.u(z + h) - ib.u(z - h)) / (2.0 * h);
    CHECK(std::abs(j.deriv - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("singular point c is the fixed point of chi in the first sector") {
  const auto& ib = quadratic_branch();
  const auto& map = quadratic_map();
  const SingularPoint c = find_c(ib);
  CHECK(std::abs(ib.chi(c.c) - c.c) <= 1e-10);
  CHECK(std::arg(c.c) > 0.0);
  CHECK(std::arg(c.c) < std::numbers::pi / 2);
  // chi(c) = c means u*(c) = c/|alpha|, so g(c/|alpha|) = conj c, a check
  // that goes through g instead of the inverse branch.
  CHECK(std::abs(map.g(c.c / ib.abs_alpha()) - std::conj(c.c)) < 1e-10);
  CHECK(c.c.real() == doctest::Approx(1.831258984937132).epsilon(1e-12));
  CHECK(c.c.imag() == doctest::Approx(2.683150900474073).epsilon(1e-12));
}

TEST_CASE("tau arcs meet at angle pi/r") {
  const auto& ib = quadratic_branch();
  for (int n = 0; n <= 4; ++n) CHECK(std::abs(tau_junction_angle(ib, n) - std::numbers::pi / 2) <= 1e-2);
}

TEST_CASE("omega boundary arcs are chained") {
  const auto& ib = quadratic_branch();
  const OmegaBoundary ob = omega_boundary(ib, 4, 16);
  REQUIRE(ob.tau.size() == 5);
  for (const auto& arc : ob.tau) CHECK(arc.size() >= 2);
  CHECK(ob.real_segment[0] == doctest::Approx(0.0));
  CHECK(ob.real_segment[1] == doctest::Approx(ib.abs_alpha() * ib.x0()).epsilon(1e-12));
}

TEST_CASE("hyperbolic distance is a metric on the upper half-plane") {
  const cplx a(0.0, 1.0), b(0.0, std::exp(1.0)), c(1.0, 2.0);
  CHECK(hyperbolic_distance(a, b) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(hyperbolic_distance(a, a) == doctest::Approx(0.0));
  CHECK(hyperbolic_distance(a, c) == doctest::Approx(hyperbolic_distance(c, a)));
  CHECK(hyperbolic_distance(a, b) <= hyperbolic_distance(a, c) + hyperbolic_distance(c, b) + 1e-14);
}

TEST_CASE("quartic branch: functional equation and c in the narrower sector") {
  const InverseBranch ib(solve_feigenbaum(4, 40, 1e-8));
  const SingularPoint c = find_c(ib);
  CHECK(std::arg(c.c) > 0.0);
  CHECK(std::arg(c.c) < std::numbers::pi / 4);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> radius(0.05, 8.0), angle(0.05, std::numbers::pi - 0.05);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const cplx z = std::polar(radius(rng), k % 2 ? angle(rng) : -angle(rng));
    worst = std::max(worst, std::abs(ib.u(z) + ib.alpha() * ib.u(ib.u(z / ib.alpha()))));
  }
  CHECK(worst <= 1e-8);
}
