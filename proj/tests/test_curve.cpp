#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "feig/curve.hpp"

using namespace feig;

namespace {

std::vector<cplx> unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

double brute_distance(std::span<const cplx> pts, bool closed, cplx z) {
  double best = INFINITY;
  for (std::size_t i = 1; i < pts.size(); ++i) best = std::min(best, point_segment_distance(z, pts[i - 1], pts[i]));
  if (closed) best = std::min(best, point_segment_distance(z, pts.back(), pts.front()));
  return best;
}

std::vector<cplx> random_walk(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> step(0.0, 1.0);
  std::vector<cplx> pts{0.0};
  // Mixed step sizes exercise buckets of very different occupancy.
  for (std::size_t k = 1; k < n; ++k) pts.push_back(pts.back() + cplx(step(rng), step(rng)) * (k % 7 == 0 ? 5.0 : 0.1));
  return pts;
}

}  // namespace

TEST_CASE("square: area, length, mesh, diameter, centroid") {
  const auto sq = unit_square();
  CHECK(signed_area(sq) == doctest::Approx(1.0));
  std::vector<cplx> cw(sq.rbegin(), sq.rend());
  CHECK(signed_area(cw) == doctest::Approx(-1.0));
  CHECK(polyline_length(sq, true) == doctest::Approx(4.0));
  CHECK(polyline_length(sq, false) == doctest::Approx(3.0));
  CHECK(mesh_size(sq, true) == doctest::Approx(1.0));
  CHECK(diameter(sq) == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(centroid(sq) - cplx(0.5, 0.5)) < 1e-15);
  const Box b = bounding_box(sq);
  CHECK(b.xmin == 0.0);
  CHECK(b.ymax == 1.0);
}

TEST_CASE("diameter equals the brute-force maximum") {
  const auto pts = random_walk(300, 5);
  double brute = 0.0;
  for (const cplx a : pts) {
    for (const cplx b : pts) brute = std::max(brute, std::abs(a - b));
  }
  CHECK(diameter(pts) == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("point-segment distance") {
  CHECK(point_segment_distance({0.5, 1.0}, {0, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(point_segment_distance({2.0, 0.0}, {0, 0}, {1, 0}) == doctest::Approx(1.0));
  CHECK(point_segment_distance({0.3, 0.0}, {0, 0}, {1, 0}) == doctest::Approx(0.0));
  CHECK(point_segment_distance({1.0, 1.0}, {0, 0}, {0, 0}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("winding numbers and containment") {
  const auto sq = unit_square();
  CHECK(winding_number(sq, {0.5, 0.5}) == 1);
  std::vector<cplx> cw(sq.rbegin(), sq.rend());
  CHECK(winding_number(cw, {0.5, 0.5}) == -1);
  CHECK(winding_number(sq, {1.5, 0.5}) == 0);
  CHECK(polygon_contains(sq, {0.25, 0.75}));
  CHECK_FALSE(polygon_contains(sq, {-0.1, 0.5}));
}

TEST_CASE("segment intersection, including touching") {
  CHECK(segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}));
  CHECK(segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 1}));
  CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
  CHECK(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));
}

TEST_CASE("self-intersections of open polylines") {
  const std::vector<cplx> zigzag{{0, 0}, {1, 1}, {2, 0}, {3, 1}};
  CHECK(count_self_intersections(zigzag) == 0);
  const std::vector<cplx> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK(count_self_intersections(bowtie) == 1);
  const auto sq = unit_square();
  std::vector<cplx> closed_loop = sq;
  closed_loop.push_back(sq.front());
  // First and last segments meet at the repeated vertex.
  CHECK(count_self_intersections(closed_loop) == 1);
}

TEST_CASE("dedupe consecutive points") {
  const std::vector<cplx> pts{{0, 0}, {0, 0}, {1, 0}, {1, 1e-12}, {2, 0}};
  CHECK(dedupe_consecutive(pts).size() == 4);
  CHECK(dedupe_consecutive(pts, 1e-9).size() == 3);
}

TEST_CASE("segment index agrees with brute force") {
  for (const bool closed : {false, true}) {
    const auto pts = random_walk(500, closed ? 17 : 13);
    const SegmentIndex index(pts, closed);
    CHECK(index.segment_count() == (closed ? pts.size() : pts.size() - 1));
    std::mt19937_64 rng(23);
    const Box b = bounding_box(pts);
    std::uniform_real_distribution<double> ux(b.xmin - 5, b.xmax + 5), uy(b.ymin - 5, b.ymax + 5);
    for (int k = 0; k < 300; ++k) {
      const cplx z(ux(rng), uy(rng));
      CHECK(index.distance(z) == doctest::Approx(brute_distance(pts, closed, z)).epsilon(1e-12));
    }
  }
}

TEST_CASE("polygon index agrees with the winding number") {
  std::vector<cplx> star;
  for (int k = 0; k < 10; ++k) star.push_back(std::polar(k % 2 ? 0.4 : 1.0, std::numbers::pi * k / 5));
  const PolygonIndex index(star);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int k = 0; k < 1000; ++k) {
    const cplx z(u(rng), u(rng));
    CHECK(index.winding(z) == winding_number(star, z));
  }
}

TEST_CASE("hausdorff distance of parallel segments") {
  CurveApprox a, b;
  for (int k = 0; k <= 10; ++k) {
    a.points.push_back({k / 10.0, 0.0});
    b.points.push_back({k / 10.0, 0.25});
  }
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.25));
  CHECK(directed_hausdorff(a.points, a.points) == doctest::Approx(0.0));
  // A short curve near the start of a long one: close one way, far the other.
  const std::vector<cplx> stub{{0, 0}, {0.1, 0}};
  CHECK(directed_hausdorff(stub, a.points) == doctest::Approx(0.0));
  CHECK(directed_hausdorff(a.points, stub) == doctest::Approx(0.9));
}

TEST_CASE("adaptive sampling resolves a circle") {
  const auto pts = adaptive_sample([](double t) { return std::polar(1.0, t); }, 0.0, std::numbers::pi, 8, 1e-6);
  double worst = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) worst = std::max(worst, 1.0 - std::abs(0.5 * (pts[k] + pts[k - 1])));
  CHECK(worst <= 2e-6 * 2.0);
  CHECK(std::abs(pts.front() - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(pts.back() - cplx(-1, 0)) < 1e-15);
}

TEST_CASE("symbol words") {
  SymbolWord w{{1, 2, 3, 3}};
  CHECK(w.str() == "1233");
  CHECK(w.orientation() == 1);
  CHECK(SymbolWord{{1, 3}}.orientation() == -1);
  CHECK(SymbolWord{}.str().empty());
}
