#include <cmath>
#include <vector>

#include "doctest.h"
#include "feig/errors.hpp"
#include "feig/feigenbaum_map.hpp"
#include "fixture.hpp"

using namespace feig;
using feig::testing::kAbsAlpha;
using feig::testing::quadratic_map;

namespace {

// Independent evaluation of g(x) = 1 + sum_k c_k x^{r(k+1)} for real x.
double g_oracle(const FeigenbaumMap& map, double x) {
  const double w = std::pow(x, map.criticality());
  double p = 0.0;
  const auto c = map.coeffs();
  for (std::size_t k = c.size(); k-- > 0;) p = p * w + c[k];
  return 1.0 + p * w;
}

}  // namespace

TEST_CASE("quadratic fixed point matches the literature value of alpha") {
  const auto& map = quadratic_map();
  CHECK(map.criticality() == 2);
  CHECK(map.order() == 40);
  CHECK(map.alpha() < -1.0);
  CHECK(std::abs(-map.alpha() - kAbsAlpha) < 1e-12);
  CHECK(map.alpha_pow_r() == doctest::Approx(map.alpha() * map.alpha()).epsilon(1e-15));
}

TEST_CASE("normalization g(0) = 1 and alpha = 1/g(1)") {
  const auto& map = quadratic_map();
  CHECK(map.g_real(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(1.0 / map.g_real(1.0) - map.alpha()) < 1e-13);
}

TEST_CASE("functional equation holds under an independent evaluator") {
  const auto& map = quadratic_map();
  const double alpha = map.alpha();
  double worst = 0.0;
  for (int i = 0; i <= 512; ++i) {
    const double x = i / 512.0;
    worst = std::max(worst, std::abs(g_oracle(map, x) - alpha * g_oracle(map, g_oracle(map, x / alpha))));
  }
  CHECK(worst <= 1e-10);
  CHECK(functional_equation_defect(map, 512) <= 1e-10);
}

TEST_CASE("library evaluation agrees with the oracle on the series disc") {
  const auto& map = quadratic_map();
  for (int i = -20; i <= 20; ++i) {
    const double x = i / 20.0;
    CHECK(map.g_real(x) == doctest::Approx(g_oracle(map, x)).epsilon(1e-14));
  }
}

TEST_CASE("g is even and real on the real axis") {
  const auto& map = quadratic_map();
  for (const cplx z : {cplx(0.3, 0.2), cplx(-0.7, 0.4), cplx(0.1, -0.9)}) {
    CHECK(std::abs(map.g(z) - map.g(-z)) < 1e-14);
    CHECK(std::abs(map.g(std::conj(z)) - std::conj(map.g(z))) < 1e-14);
  }
}

TEST_CASE("derivative matches central differences") {
  const auto& map = quadratic_map();
  const double h = 1e-6;
  for (const cplx z : {cplx(0.4, 0.3), cplx(1.5, 0.8), cplx(-2.0, 1.0)}) {
    const cplx fd = (map.g(z + h) - map.g(z - h)) / (2.0 * h);
    CHECK(std::abs(map.g_prime(z) - fd) < 1e-7 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("continuation beyond the series disc satisfies the functional equation") {
  const auto& map = quadratic_map();
  const double alpha = map.alpha();
  for (const cplx z : {cplx(2.0, 0.5), cplx(-3.0, 1.0), cplx(1.0, 2.5)}) {
    CHECK(std::abs(map.g(z) - alpha * map.g(map.g(z / alpha))) < 1e-9 * std::max(1.0, std::abs(map.g(z))));
  }
}

TEST_CASE("zero x0 of g in (0, 1)") {
  const auto& map = quadratic_map();
  const double x0 = find_x0(map);
  CHECK(x0 > 0.0);
  CHECK(x0 < 1.0);
  CHECK(std::abs(g_oracle(map, x0)) < 1e-13);
  CHECK(x0 == doctest::Approx(0.8323672369053164).epsilon(1e-13));
}

TEST_CASE("period-doubling cascade oracle agrees with the solver") {
  CHECK(std::abs(alpha_oracle(2, 1e-9) - kAbsAlpha) < 1e-6);
  const auto ratios = alpha_cascade_ratios(2, 10);
  REQUIRE(ratios.size() >= 6);
  // Ratios converge toward |alpha|.
  CHECK(std::abs(ratios.back() - kAbsAlpha) < std::abs(ratios[2] - kAbsAlpha));
}

TEST_CASE("quartic criticality solves") {
  const auto map = solve_feigenbaum(4, 40, 1e-8);
  // Literature value of |alpha| for r = 4.
  CHECK(std::abs(-map.alpha() - 1.6903029714) < 1e-8);
  CHECK(functional_equation_defect(map, 256) <= 1e-8);
  CHECK(std::abs(map.g(cplx(0.3, 0.5)) - map.alpha() * map.g(map.g(cplx(0.3, 0.5) / map.alpha()))) < 1e-7);
}

TEST_CASE("odd or sub-quadratic criticality is rejected") {
  CHECK_THROWS_AS(solve_feigenbaum(3), BadCriticality);
  CHECK_THROWS_AS(solve_feigenbaum(1), BadCriticality);
  CHECK_THROWS_AS(solve_feigenbaum(0), BadCriticality);
}

TEST_CASE("unreachable tolerance reports non-convergence") {
  // Below double-precision rounding of the defect.
  CHECK_THROWS_AS(solve_feigenbaum(2, 40, 1e-18), NonConvergence);
  CHECK_THROWS_AS(solve_feigenbaum(2, 6), InvalidArgument);
}
