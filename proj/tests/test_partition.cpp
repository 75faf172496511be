#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "feig/errors.hpp"
#include "feig/partition.hpp"
#include "fixture.hpp"

using namespace feig;
using feig::testing::quadratic_partition;

namespace {

Piece square_piece(cplx lo, double side) {
  Piece p;
  p.boundary.closed = true;
  p.boundary.points = {lo, lo + side, lo + cplx(side, side), lo + cplx(0, side)};
  p.x_R = lo;
  return p;
}

}  // namespace

TEST_CASE("generation ops cancel and merge") {
  Generation g;
  g.push({OpKind::neg, 0});
  g.push({OpKind::neg, 0});
  CHECK(g.ops.empty());
  g.push({OpKind::pull, 0});
  g.push({OpKind::scale, 2});
  g.push({OpKind::neg, 0});
  g.push({OpKind::scale, -2});
  // The second scaling moves past the negation and annihilates the first.
  REQUIRE(g.ops.size() == 2);
  CHECK(g.ops[0].kind == OpKind::pull);
  CHECK(g.ops[1].kind == OpKind::neg);
  CHECK(g.depth == 1);
  CHECK(g.scale_exp == 0);
}

TEST_CASE("pullback after rescaling doubles the depth") {
  Generation g;
  g.push({OpKind::pull, 0});
  g.push({OpKind::scale, -1});
  g.push({OpKind::pull, 0});
  CHECK(g.depth == 3);
}

TEST_CASE("census doubles with depth") {
  const auto& part = quadratic_partition();
  const auto census = part.census(3);
  REQUIRE(census.size() == 4);
  for (std::size_t d = 0; d < census.size(); ++d) {
    CHECK(census[d].size() == (std::size_t{2} << d));
    for (const Piece& p : census[d]) {
      CHECK(p.depth == static_cast<std::int64_t>(d));
      CHECK(p.boundary.closed);
    }
  }
}

TEST_CASE("depth-zero sectors are conjugate") {
  const auto& part = quadratic_partition();
  const auto sectors = part.depth0_sectors();
  REQUIRE(sectors.size() == 2);
  CHECK(sectors[0].side == Side::upper);
  CHECK(sectors[1].side == Side::lower);
  CHECK(std::abs(sectors[0].x_R - std::conj(sectors[1].x_R)) < 1e-12);
}

TEST_CASE("pair classification on synthetic squares") {
  const Piece big = square_piece({0, 0}, 4.0);
  const Piece inner = square_piece({1, 1}, 1.0);
  const Piece far = square_piece({10, 10}, 1.0);
  const Piece beside = square_piece({4, 0}, 4.0);
  const Piece shifted = square_piece({2, 2}, 4.0);
  const double tube = 1e-9;
  CHECK(classify_pair(big, inner, tube) == PairRelation::nested);
  CHECK(classify_pair(big, far, tube) == PairRelation::disjoint);
  CHECK(classify_pair(big, beside, tube) == PairRelation::shared_arc);
  CHECK(classify_pair(big, shifted, tube) == PairRelation::overlap);
  CHECK(std::string(to_string(PairRelation::shared_arc)) == "shared_arc");
}

TEST_CASE("decay fit recovers an exact geometric chain") {
  const std::vector<std::vector<double>> chains{{1.0, 0.5, 0.25, 0.125}, {3.0, 1.5, 0.75}};
  const DecayFit fit = diameter_decay(chains);
  CHECK(fit.lambda == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fit.C == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fit.points == 7);
  CHECK_THROWS_AS(diameter_decay(std::vector<std::vector<double>>{{1.0}}), InsufficientData);
  CHECK_THROWS_AS(diameter_decay(std::vector<std::vector<double>>{{1.0, -1.0}}), InvalidArgument);
}

TEST_CASE("located pieces contain the point") {
  const auto& part = quadratic_partition();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  int checked = 0;
  for (int k = 0; k < 40; ++k) {
    const cplx z(u(rng), u(rng));
    if (std::abs(z.imag()) < 1e-3 || std::abs(z.real()) < 1e-3) continue;
    cplx seed;
    const Generation gen = part.locate(z, &seed);
    CHECK(std::abs(part.chain_point(gen, seed) - z) < 1e-9 * std::max(1.0, std::abs(z)));
    ++checked;
  }
  CHECK(checked > 30);
}

TEST_CASE("external rays exist only for covered real base points") {
  const auto& part = quadratic_partition();
  CHECK_THROWS_AS(part.external_ray({0.3, 0.4}, 3), NotCovered);
  const RayPath to_zero = part.external_ray(0.0, 3);
  CHECK(to_zero.length() > 0.0);
}

TEST_CASE("machine is quadratic only") {
  const InverseBranch ib(solve_feigenbaum(4, 40, 1e-8));
  const Partition quartic(Ifs(ib, find_c(ib)));
  CHECK(quartic.depth0_sectors().size() == 6);
  CHECK_THROWS_AS(quartic.machine(), InvalidArgument);
}
