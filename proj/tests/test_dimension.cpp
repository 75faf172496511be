#include <cmath>
#include <numbers>

#include "doctest.h"
#include "feig/dimension.hpp"
#include "feig/errors.hpp"
#include "fixture.hpp"

using namespace feig;
using feig::testing::quadratic_ifs;

namespace {

cplx basepoint() {
  static const cplx z = dimension_basepoint(quadratic_ifs(), build_X(quadratic_ifs()));
  return z;
}

const WordTree& tree10() {
  static const WordTree tree(quadratic_ifs(), basepoint(), 10, 9);
  return tree;
}

// Sum over all words of length m of |(phi_w)'(z)|^s, one word at a time.
double word_sum(int m, double s) {
  const auto& ifs = quadratic_ifs();
  SymbolWord w;
  w.symbols.assign(static_cast<std::size_t>(m), 1);
  double acc = 0.0;
  for (;;) {
    acc += std::pow(ifs.derivative_mag(w, basepoint()), s);
    std::size_t k = 0;
    while (k < w.size() && w.symbols[k] == 3) w.symbols[k++] = 1;
    if (k == w.size()) break;
    ++w.symbols[k];
  }
  return acc;
}

CurveApprox segment(std::size_t n) {
  CurveApprox c;
  for (std::size_t k = 0; k < n; ++k) c.points.push_back({static_cast<double>(k) / (n - 1), 0.0});
  return c;
}

}  // namespace

TEST_CASE("word tree indices round-trip") {
  for (int level = 0; level <= 4; ++level) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(std::pow(3, level)); ++i) {
      CHECK(WordTree::index(WordTree::word(level, i)) == i);
    }
  }
  // The outermost symbol is the low ternary digit.
  CHECK(WordTree::index(SymbolWord{{2, 1}}) == 1);
  CHECK(WordTree::index(SymbolWord{{1, 2}}) == 3);
}

TEST_CASE("word tree matches direct word derivatives") {
  const auto& ifs = quadratic_ifs();
  const WordTree& tree = tree10();
  CHECK(tree.depth() == 10);
  CHECK(tree.point_depth() == 9);
  for (const std::size_t i : {0u, 7u, 19u, 26u}) {
    const SymbolWord w = WordTree::word(3, i);
    CHECK(tree.log_deriv(3)[i] == doctest::Approx(std::log(ifs.derivative_mag(w, basepoint()))).epsilon(1e-12));
    CHECK(std::abs(tree.points(3)[i] - ifs.apply(w, basepoint())) < 1e-12);
  }
  CHECK_THROWS_AS(tree.points(10), InsufficientDepth);
  CHECK_THROWS_AS(WordTree(ifs, basepoint(), 16), InvalidArgument);
}

TEST_CASE("partition sums: trivial value, monotonicity, sample bracket") {
  const auto& ifs = quadratic_ifs();
  const cplx z = basepoint();
  const std::vector<cplx> samples{z, z + cplx(0.05, 0.0), z + cplx(0.0, -0.05)};
  CHECK(partition_sum(ifs, 0.0, 1, z, samples).value == doctest::Approx(3.0));
  double prev = INFINITY;
  for (const double s : {0.5, 0.9, 1.0, 1.1, 1.5}) {
    const PartitionSums p = partition_sum(ifs, s, 4, z, samples);
    CHECK(p.value < prev);
    CHECK(p.inf <= p.value);
    CHECK(p.value <= p.sup);
    prev = p.value;
  }
  CHECK_THROWS_AS(partition_sum(ifs, -1.0, 2, z, samples), InvalidArgument);
}

TEST_CASE("normalized root agrees with a word-by-word oracle") {
  const int m = 6;
  double lo = 0.5, hi = 1.5;
  for (int k = 0; k < 60; ++k) {
    const double s = 0.5 * (lo + hi);
    (word_sum(m, s) > word_sum(m - 1, s) ? lo : hi) = s;
  }
  CHECK(normalized_root(tree10(), m) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
}

TEST_CASE("dimension estimate brackets h strictly above one") {
  const DimensionEstimate est = estimate_dimension(tree10());
  CHECK(est.bowen_roots.size() == 10);
  CHECK(est.lo <= est.h);
  CHECK(est.h <= est.hi);
  CHECK(est.lo > 1.0);
  CHECK(est.hi < 1.01);
  // Frozen from the depth-10 tree at the basepoint.
  CHECK(est.h == doctest::Approx(1.0051709).epsilon(1e-6));
  CHECK(std::abs(bowen_root(tree10(), 10) - est.h) < 0.05);
  CHECK_THROWS_AS(bowen_root(tree10(), 1), InvalidArgument);
  CHECK_THROWS_AS(normalized_root(tree10(), 11), InsufficientDepth);
  CHECK_THROWS_AS(estimate_dimension(tree10(), 9), InsufficientDepth);
}

TEST_CASE("conformal measure is a probability with consistent cylinders") {
  const DimensionEstimate est = estimate_dimension(tree10());
  const ConformalMeasure mu = conformal_measure(tree10(), est.h, 8);
  CHECK(mu.weights.size() == 6561);
  CHECK(std::abs(mu.total_mass() - 1.0) <= 1e-14);
  CHECK(mu.max_weight() < 0.01);
  const ConformalityCheck chk = conformality_check(tree10(), mu);
  for (int i = 0; i < 3; ++i) CHECK(chk.residual[i] <= chk.bound[i]);
  CHECK(chk.mass[0] + chk.mass[1] + chk.mass[2] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("frostman ratios are bounded") {
  const DimensionEstimate est = estimate_dimension(tree10());
  const ConformalMeasure mu = conformal_measure(tree10(), est.h, 8);
  const CurveApprox curve = limit_curve(quadratic_ifs(), 4);
  const double d = diameter(curve.points);
  const std::vector<double> radii{d / 8, d / 16, d / 32};
  const FrostmanRatios fr = frostman_ratios(tree10(), mu, est.h, curve.points, radii);
  CHECK(fr.balls == curve.points.size() * radii.size());
  CHECK(fr.min_ratio > 0.0);
  CHECK(fr.max_ratio < 100.0 * fr.min_ratio);
  const ConformalMeasure coarse = conformal_measure(tree10(), est.h, 7);
  CHECK_THROWS(frostman_ratios(tree10(), coarse, est.h, curve.points, radii));
}

TEST_CASE("box counting recovers the dimension of smooth curves") {
  const CurveApprox seg = segment(20000);
  CHECK(box_counting_oracle(seg, dyadic_scales(seg, 3, 9)) == doctest::Approx(1.0).epsilon(0.02));
  CurveApprox circle;
  circle.closed = true;
  for (int k = 0; k < 20000; ++k) circle.points.push_back(std::polar(1.0, 2 * std::numbers::pi * k / 20000));
  CHECK(box_counting_oracle(circle, dyadic_scales(circle, 3, 9)) == doctest::Approx(1.0).epsilon(0.02));
  CHECK_THROWS_AS(box_counting_oracle(segment(100), dyadic_scales(segment(100), 2, 4)), InsufficientResolution);
  CHECK_THROWS_AS(box_counting_oracle(seg, std::vector<double>{1e-6, 1e-7}), InsufficientResolution);
}

TEST_CASE("box dimension of the limit arc lies in (1, 2) and is window-stable") {
  const CurveApprox curve = limit_curve(quadratic_ifs(), 10);
  const double full = box_counting_oracle(curve, dyadic_scales(curve, 3, 8));
  const double shifted = box_counting_oracle(curve, dyadic_scales(curve, 4, 8));
  CHECK(full > 1.0);
  CHECK(full < 2.0);
  CHECK(std::abs(full - shifted) < 0.03);
}

TEST_CASE("distance-monotone curves have M = 1") {
  CHECK(m_condition_estimate(segment(1000)).M_estimate == doctest::Approx(1.0));
  // A hairpin returns toward its start, so M exceeds one.
  CurveApprox hairpin;
  for (int k = 0; k <= 100; ++k) hairpin.points.push_back({k / 100.0, 0.0});
  for (int k = 100; k >= 0; --k) hairpin.points.push_back({k / 100.0, 0.01});
  CHECK(m_condition_estimate(hairpin).M_estimate > 10.0);
  const QuasicircleReport rep = m_condition_estimate(limit_curve(quadratic_ifs(), 6));
  CHECK(rep.depth == 6);
  CHECK(rep.M_estimate >= 1.0);
  CHECK(rep.M_estimate < 1.5);
}
