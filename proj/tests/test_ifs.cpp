#include <cmath>
#include <random>

#include "doctest.h"
#include "feig/errors.hpp"
#include "feig/ifs.hpp"
#include "fixture.hpp"

using namespace feig;
using feig::testing::quadratic_ifs;

TEST_CASE("junctions chain the three images end to end") {
  const auto& ifs = quadratic_ifs();
  const auto& a = ifs.junctions();
  const double tol = 1e-12 * std::abs(a[3]);
  CHECK(std::abs(a[0] - ifs.c() / ifs.abs_alpha()) < tol);
  CHECK(std::abs(a[3] - ifs.c()) < tol);
  // phi_1 fixes a1, phi_3 fixes a4, and consecutive images share an endpoint.
  CHECK(std::abs(ifs.phi(1, a[0]) - a[0]) < tol);
  CHECK(std::abs(ifs.phi(3, a[3]) - a[3]) < tol);
  CHECK(std::abs(ifs.phi(1, a[3]) - ifs.phi(2, a[0])) < 1e-10);
  CHECK(std::abs(ifs.phi(2, a[3]) - ifs.phi(3, a[0])) < 1e-10);
}

TEST_CASE("limit curve refines by vertex subsampling") {
  const auto& ifs = quadratic_ifs();
  const CurveApprox c4 = limit_curve(ifs, 4);
  const CurveApprox c5 = limit_curve(ifs, 5);
  CHECK(c4.points.size() == 82);
  CHECK(c5.points.size() == 244);
  CHECK(c4.addresses.size() == c4.points.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < c4.points.size(); ++k) worst = std::max(worst, std::abs(c4.points[k] - c5.points[3 * k]));
  CHECK(worst < 1e-10);
  CHECK(std::abs(c4.points.front() - ifs.junctions()[0]) < 1e-14);
  CHECK(std::abs(c4.points.back() - ifs.junctions()[3]) < 1e-14);
  CHECK_THROWS_AS(limit_curve(ifs, 0), InvalidArgument);
}

TEST_CASE("curve vertices are images of a1 under their addresses") {
  const auto& ifs = quadratic_ifs();
  const CurveApprox c3 = limit_curve(ifs, 3);
  for (const std::size_t k : {0u, 5u, 13u, 26u}) {
    CHECK(std::abs(ifs.apply(c3.addresses[k], ifs.junctions()[0]) - c3.points[k]) < 1e-10);
  }
  // Outermost symbol first: vertex 5 = 0*9 + 1*3 + 2.
  CHECK(c3.addresses[5].str() == "123");
}

TEST_CASE("phi derivative magnitudes match finite differences") {
  const auto& ifs = quadratic_ifs();
  const double h = 1e-6;
  for (int i = 1; i <= 3; ++i) {
    for (const cplx z : {cplx(0.9, 1.3), cplx(1.4, 2.2)}) {
      const MapPoint p = ifs.phi_jet(i, z);
      const double fd = std::abs(ifs.phi(i, z + h) - ifs.phi(i, z - h)) / (2.0 * h);
      CHECK(p.deriv_mag == doctest::Approx(fd).epsilon(1e-6));
      CHECK(p.deriv_mag < 1.0);
    }
  }
  CHECK_THROWS_AS(ifs.phi(4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(ifs.psi(0, 1.0), InvalidArgument);
}

TEST_CASE("word derivatives obey the chain rule") {
  const auto& ifs = quadratic_ifs();
  const cplx z(1.1, 1.6);
  const SymbolWord w{{2, 3, 1}};
  const SymbolWord inner{{3, 1}};
  const MapPoint p = ifs.apply_jet(inner, z);
  CHECK(ifs.derivative_mag(w, z) == doctest::Approx(ifs.phi_deriv_mag(2, p.value) * p.deriv_mag).epsilon(1e-14));
  CHECK(std::abs(ifs.apply(w, z) - ifs.phi(2, p.value)) < 1e-15);
}

TEST_CASE("compact X is forward invariant with disjoint images") {
  const auto& ifs = quadratic_ifs();
  const CompactX x = build_X(ifs);
  CHECK(x.diam > std::abs(ifs.c()) * 0.5);
  const InvarianceCheck inv = check_forward_invariance(ifs, x, 8);
  for (const double d : inv.worst_outside) CHECK(d <= 1e-6 * x.diam * 4.0);
  const auto dist = image_distances(ifs, x);
  // Only phi_1 X and phi_3 X are separated; the other pairs touch.
  CHECK(dist[0][2] > 0.0);
  CHECK(dist[0][2] == doctest::Approx(dist[2][0]));
}

TEST_CASE("contraction ratios are uniform below one") {
  const auto& ifs = quadratic_ifs();
  const CompactX x = build_X(ifs);
  const auto ratios = contraction_ratios(ifs, x, 200, 5);
  for (const double q : ratios) {
    CHECK(q > 0.0);
    CHECK(q < 1.0);
  }
}
