#include "verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <random>

#include "feig/curve.hpp"
#include "feig/dimension.hpp"
#include "feig/errors.hpp"
#include "feig/ifs.hpp"
#include "feig/inverse_branch.hpp"
#include "feig/partition.hpp"

namespace feig::verify {
namespace {

using nlohmann::json;

// Shared state, built on first use so that a suite pays only for what it needs.
class Context {
 public:
  Context(const FeigenbaumMap& map, std::uint64_t seed) : map_(map), seed_(seed) {}

  const FeigenbaumMap& map() const { return map_; }
  std::uint64_t seed() const { return seed_; }
  int r() const { return map_.criticality(); }

  const InverseBranch& branch() {
    if (!ib_) ib_.emplace(map_);
    return *ib_;
  }
  const Ifs& ifs() {
    if (!ifs_) ifs_.emplace(branch(), find_c(branch()));
    return *ifs_;
  }
  const CompactX& X() {
    if (!x_) x_ = build_X(ifs());
    return *x_;
  }
  const Partition& partition() {
    if (!partition_) partition_ = std::make_unique<Partition>(ifs());
    return *partition_;
  }
  const std::vector<std::vector<Piece>>& census4() {
    if (!census_) census_ = partition().census(4);
    return *census_;
  }
  const CurveApprox& limit(int depth) {
    auto& slot = limits_[static_cast<std::size_t>(depth)];
    if (!slot) slot = limit_curve(ifs(), depth);
    return *slot;
  }
  cplx basepoint() {
    if (!basepoint_) basepoint_ = dimension_basepoint(ifs(), X());
    return *basepoint_;
  }
  const WordTree& tree14() {
    if (!tree_) tree_ = std::make_unique<WordTree>(ifs(), basepoint(), kTreeDepth, kTreeDepth - 1);
    return *tree_;
  }
  const DimensionEstimate& estimate() {
    if (!estimate_) estimate_ = estimate_dimension(tree14());
    return *estimate_;
  }

  static constexpr int kTreeDepth = 14;

 private:
  const FeigenbaumMap& map_;
  std::uint64_t seed_;
  std::optional<InverseBranch> ib_;
  std::optional<Ifs> ifs_;
  std::optional<CompactX> x_;
  std::unique_ptr<Partition> partition_;
  std::optional<std::vector<std::vector<Piece>>> census_;
  std::array<std::optional<CurveApprox>, 16> limits_;
  std::optional<cplx> basepoint_;
  std::unique_ptr<WordTree> tree_;
  std::optional<DimensionEstimate> estimate_;
};

json point(cplx z) { return json::array({z.real(), z.imag()}); }

Status verdict(bool ok) { return ok ? Status::pass : Status::fail; }

void require_quadratic(Context& ctx, const char* what) {
  if (ctx.r() != 2) throw InvalidArgument(std::string(what) + " is implemented for r = 2 only");
}

// ------------------------------------------------------------------ core

void fixed_point_residual(Context& ctx, CheckResult& res) {
  const auto t0 = std::chrono::steady_clock::now();
  const FeigenbaumMap fresh = solve_feigenbaum(ctx.r(), 40, 1e-12);
  const double residual = functional_equation_defect(fresh, 512);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.measured = {{"residual", residual}, {"loaded_map_residual", functional_equation_defect(ctx.map(), 512)}};
  res.tolerance = "residual <= 1e-10 over 512 points at order 40; solve within 5 s";
  res.status = verdict(residual <= 1e-10 && secs <= 5.0);
}

void alpha_cross_oracle(Context& ctx, CheckResult& res) {
  const double solver = -ctx.map().alpha();
  const double oracle = alpha_oracle(ctx.r(), 1e-9);
  res.measured = {{"solver", solver}, {"oracle", oracle}, {"difference", std::abs(solver - oracle)}};
  res.tolerance = "|difference| <= 1e-6";
  res.status = verdict(std::abs(solver - oracle) <= 1e-6);
}

void inverse_branch_equation(Context& ctx, CheckResult& res) {
  const auto& ib = ctx.branch();
  const double alpha = ctx.map().alpha();
  std::mt19937_64 rng(ctx.seed());
  std::uniform_real_distribution<double> radius(0.05, 8.0), angle(0.05, std::numbers::pi - 0.05);
  std::uniform_int_distribution<int> half(0, 1);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const cplx z = std::polar(radius(rng), half(rng) ? angle(rng) : -angle(rng));
    worst = std::max(worst, std::abs(ib.u(z) + alpha * ib.u(ib.u(z / alpha))));
  }
  res.measured = {{"samples", 200}, {"max_defect", worst}};
  res.tolerance = "max |u(z) + alpha u(u(z/alpha))| <= 1e-8";
  res.status = verdict(worst <= 1e-8);
}

void singular_point(Context& ctx, CheckResult& res) {
  const auto& ib = ctx.branch();
  const SingularPoint c = find_c(ib);
  const double defect = std::abs(ib.chi(c.c) - c.c);
  const double arg = std::arg(c.c);
  res.measured = {{"c", point(c.c)}, {"defect", defect}, {"arg", arg}, {"iterations", c.iterations}};
  res.tolerance = "|chi(c) - c| <= 1e-10, 0 < arg c < pi/r";
  res.status = verdict(defect <= 1e-10 && arg > 0.0 && arg < std::numbers::pi / ctx.r());
}

void tau_angles(Context& ctx, CheckResult& res) {
  const double target = std::numbers::pi / ctx.r();
  json angles = json::array();
  double worst = 0.0;
  for (int n = 0; n <= 4; ++n) {
    const double a = tau_junction_angle(ctx.branch(), n);
    angles.push_back(a);
    worst = std::max(worst, std::abs(a - target));
  }
  res.measured = {{"angles", angles}, {"target", target}, {"max_deviation", worst}};
  res.tolerance = "|angle - pi/r| <= 1e-2 for n = 0..4";
  res.status = verdict(worst <= 1e-2);
}

// ------------------------------------------------------------------- ifs

void ifs_invariance(Context& ctx, CheckResult& res) {
  const auto& X = ctx.X();
  const double tube = 1e-6 * X.diam;
  const auto inv = check_forward_invariance(ctx.ifs(), X);
  const auto dis = check_disjointness(ctx.ifs(), X, 500, tube, ctx.seed());
  const auto dist = image_distances(ctx.ifs(), X);
  double outside = 0.0;
  for (const double d : inv.worst_outside) outside = std::max(outside, d);
  std::size_t violations = 0;
  bool adjacency_ok = true;
  json adjacent = json::array();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      violations += dis.violations[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const bool touching = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] <= tube;
      if (i < j && touching) adjacent.push_back(json::array({i + 1, j + 1}));
      adjacency_ok = adjacency_ok && (touching == (std::abs(i - j) <= 1));
    }
  }
  res.measured = {{"tube", tube},
                  {"worst_outside", outside},
                  {"overlap_samples", violations},
                  {"image_distance_13", dist[0][2]},
                  {"touching_pairs", adjacent}};
  res.tolerance = "images inside X and pairwise disjoint up to 1e-6 diam(X); phi_i(X), phi_j(X) touch iff |i-j| <= 1";
  res.status = verdict(outside <= tube && violations == 0 && adjacency_ok);
}

void contraction_distortion(Context& ctx, CheckResult& res) {
  const auto ratios = contraction_ratios(ctx.ifs(), ctx.X(), 300, ctx.seed());
  const auto samples = sample_interior(ctx.X().boundary, 40, ctx.seed());
  const double k = distortion_constant(ctx.ifs(), samples, 6);
  res.measured = {{"hyperbolic_contraction", {ratios[0], ratios[1], ratios[2]}}, {"distortion_K", k}};
  res.tolerance = "none (reported)";
  res.status = Status::report_only;
}

void curve_self_similarity(Context& ctx, CheckResult& res) {
  const auto& I = ctx.limit(10);
  const double aa = ctx.ifs().abs_alpha();
  // |alpha| L and L compared on the scales both windows cover.
  CurveApprox scaled = curve_L(I, aa, -3, 2);
  for (cplx& z : scaled.points) z *= aa;
  const CurveApprox window = curve_L(I, aa, -2, 3);
  // Copy k of each window spans vertices [k (N-1), (k+1)(N-1)]. Comparing
  // copy by copy bounds the distance between the unions and keeps every
  // comparison at a single scale.
  const std::size_t step = I.size() - 1;
  double worst = 0.0, hd = 0.0, mesh = 0.0;
  for (std::size_t k = 0; k * step + 1 < window.size(); ++k) {
    const std::span<const cplx> a(scaled.points.data() + k * step, step + 1);
    const std::span<const cplx> b(window.points.data() + k * step, step + 1);
    const double d = std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
    const double m = mesh_size(b);
    if (d / m >= worst) worst = d / m, hd = d, mesh = m;
  }
  res.measured = {{"hausdorff", hd}, {"mesh", mesh}, {"max_hausdorff_over_mesh", worst}, {"depth", 10}};
  res.tolerance = "hausdorff <= 2 mesh";
  res.status = verdict(worst <= 2.0);
}

void arc_simplicity(Context& ctx, CheckResult& res) {
  const auto& I = ctx.limit(4);
  const std::size_t in_arc = count_self_intersections(I.points);
  const CurveApprox window = curve_L(I, ctx.ifs().abs_alpha(), -20, 20);
  const std::size_t in_window = count_self_intersections(window.points);
  res.measured = {{"arc_segments", I.size() - 1},
                  {"arc_intersections", in_arc},
                  {"window_segments", window.size() - 1},
                  {"window_intersections", in_window}};
  res.tolerance = "0 intersections";
  res.status = verdict(in_arc == 0 && in_window == 0);
}

void forward_image(Context& ctx, CheckResult& res) {
  const auto& I = ctx.limit(8);
  const double aa = ctx.ifs().abs_alpha();
  constexpr int kOuter = 12;
  CurveApprox far = curve_L(I, aa, 1, kOuter);
  for (cplx& z : far.points) z = std::conj(z);
  const SegmentIndex index(far.points, false);
  const double reach = std::pow(aa, kOuter) * std::abs(ctx.ifs().c());
  double worst = 0.0;
  std::size_t used = 0, beyond = 0;
  // Interior vertices only: the endpoints are excluded from L_0.
  for (std::size_t k = 1; k + 1 < I.size(); ++k) {
    cplx w;
    try {
      w = eval_g(ctx.map(), I.points[k]);
    } catch (const OutOfDomain&) {
      ++beyond;
      continue;
    }
    if (std::abs(w) > reach) {
      ++beyond;
      continue;
    }
    worst = std::max(worst, index.distance(w) / std::abs(w));
    ++used;
  }
  res.measured = {{"points", used}, {"beyond_window", beyond}, {"max_relative_distance", worst}};
  res.tolerance = "dist(g(x), conj L_inf) <= 1e-6 |g(x)|";
  res.status = verdict(used > 0 && worst <= 1e-6);
}

// ---------------------------------------------------------------- markov

void markov_census(Context& ctx, CheckResult& res) {
  const auto& cen = ctx.census4();
  std::vector<const Piece*> all;
  json counts = json::array();
  for (const auto& level : cen) {
    counts.push_back(level.size());
    for (const auto& p : level) all.push_back(&p);
  }
  std::array<std::size_t, 6> hist{};
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t k = i + 1; k < all.size(); ++k) {
      ++hist[static_cast<std::size_t>(classify_pair(*all[i], *all[k], contact_tube(*all[i], *all[k])))];
    }
  }
  json rel;
  for (int k = 0; k < 6; ++k) rel[to_string(static_cast<PairRelation>(k))] = hist[static_cast<std::size_t>(k)];
  const std::size_t expected = static_cast<std::size_t>(2 * ctx.r() * (ctx.r() - 1));
  res.measured = {{"pieces_by_depth", counts}, {"relations", rel}};
  res.tolerance = "2r(r-1) pieces at depth 1; no overlap or ambiguous pair through depth 4";
  res.status = verdict(cen.size() > 1 && cen[1].size() == expected && hist[4] == 0 && hist[5] == 0);
}

void rescale_invariance(Context& ctx, CheckResult& res) {
  const auto& cen = ctx.census4();
  const auto& P = ctx.partition();
  double worst = 0.0, worst_match = 0.0;
  std::size_t checked = 0;
  for (int n = 1; n <= 2; ++n) {
    for (const auto& p : cen[static_cast<std::size_t>(n)]) {
      const Piece q = P.rescale_piece(p);
      // Several pieces share x_R; the pair of base points identifies one.
      const Piece* match = nullptr;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& o : cen[static_cast<std::size_t>(2 * n)]) {
        const double d = std::abs(o.x_R - q.x_R) + std::abs(o.x_R_inf - q.x_R_inf);
        if (d < best) best = d, match = &o;
      }
      if (!match) throw InsufficientData("no depth-2n pieces to match");
      const double ratio = hausdorff_distance(q.boundary, match->boundary) / std::max(q.mesh(), match->mesh());
      worst = std::max(worst, ratio);
      worst_match = std::max(worst_match, best);
      ++checked;
    }
  }
  res.measured = {{"pieces", checked}, {"max_hausdorff_over_mesh", worst}, {"max_base_point_mismatch", worst_match}};
  res.tolerance = "hausdorff <= 3 mesh";
  res.status = verdict(checked > 0 && worst <= 3.0);
}

void tiling_coverage(Context& ctx, CheckResult& res) {
  require_quadratic(ctx, "tiling coverage");
  const double radius = 0.5 / ctx.ifs().abs_alpha();
  json curve = json::array();
  double final_coverage = 0.0;
  for (const int cap : {500, 2000, 5000}) {
    const auto cov = ctx.partition().tiling_coverage(radius, cap, 20000, 0.005, ctx.seed());
    curve.push_back({{"max_pieces", cap}, {"pieces", cov.pieces}, {"coverage", cov.coverage}});
    final_coverage = cov.coverage;
  }
  res.measured = {{"radius", radius}, {"coverage_curve", curve}};
  res.tolerance = "coverage >= 0.99 at max-pieces 5000";
  res.status = verdict(final_coverage >= 0.99);
}

void diameter_decay_check(Context& ctx, CheckResult& res) {
  require_quadratic(ctx, "diameter decay");
  PartitionOptions opts;
  opts.curve_depth = 3;
  const Partition P(ctx.ifs(), opts);
  const double radius = 0.5 / ctx.ifs().abs_alpha();
  std::mt19937_64 rng(ctx.seed());
  std::uniform_real_distribution<double> coord(-radius, radius);
  std::vector<std::vector<double>> chains;
  constexpr int kLevels = 10;
  int attempts = 0;
  while (chains.size() < 60 && attempts < 600) {
    ++attempts;
    const cplx z(coord(rng), coord(rng));
    if (std::abs(z) > radius) continue;
    const auto cells = P.nested_cells(z, kLevels);
    std::vector<double> diams;
    for (const auto& g : cells.cells) {
      const double d = P.build(g).diam();
      // Below this the boundary polyline is round-off, not geometry.
      if (d < 1e-12 * std::abs(z)) break;
      diams.push_back(d);
    }
    if (diams.size() >= 5) chains.push_back(std::move(diams));
  }
  const DecayFit fit = diameter_decay(chains);
  res.measured = {{"chains", chains.size()}, {"lambda", fit.lambda}, {"C", fit.C}, {"r2", fit.r2}, {"points", fit.points}};
  res.tolerance = "lambda < 1 and R^2 > 0.9 over chains of length >= 5";
  res.status = verdict(chains.size() >= 20 && fit.lambda < 1.0 && fit.r2 > 0.9);
}

void vein_path_length(Context& ctx, CheckResult& res) {
  require_quadratic(ctx, "vein paths");
  std::mt19937_64 rng(ctx.seed());
  std::uniform_real_distribution<double> coord(-0.2, 0.2);
  std::vector<cplx> zs;
  while (zs.size() < 100) {
    const cplx z(coord(rng), coord(rng));
    if (std::abs(z) > 1e-3) zs.push_back(z);
  }
  auto fitted_c = [&](int max_level, std::size_t& failures) {
    double c = 0.0;
    for (const cplx z : zs) {
      try {
        c = std::max(c, ctx.partition().vein_path_to_zero(z, max_level).length / std::abs(z));
      } catch (const Error&) {
        ++failures;
      }
    }
    return c;
  };
  std::size_t fail_small = 0, fail_large = 0;
  const double c_small = fitted_c(6, fail_small);
  const double c_large = fitted_c(12, fail_large);
  const double change = std::abs(c_large / c_small - 1.0);
  res.measured = {{"C_levels_6", c_small}, {"C_levels_12", c_large}, {"relative_change", change},
                  {"failures", fail_small + fail_large}};
  res.tolerance = "every path length <= C |z|; C changes <= 20% when the levels double";
  res.status = verdict(fail_small + fail_large == 0 && change <= 0.2);
}

void ray_scaling(Context& ctx, CheckResult& res) {
  require_quadratic(ctx, "external rays");
  const auto& P = ctx.partition();
  const double aa = ctx.ifs().abs_alpha();
  const double top = ctx.branch().x0() / aa * (1.0 + 1e-9);
  std::vector<double> bases;
  for (const auto& p : P.machine_tile(3)) {
    if (p.x_R.imag() != 0.0 || p.x_R.real() > top || p.x_R.real() <= 0.0) continue;
    const double x = p.x_R.real();
    if (std::none_of(bases.begin(), bases.end(), [&](double b) { return std::abs(b - x) <= 1e-12; })) bases.push_back(x);
    if (bases.size() == 5) break;
  }
  json per = json::array();
  double worst = 0.0;
  for (const double x : bases) {
    const CurveApprox outer = P.external_ray(aa * x, 5).joined();
    CurveApprox inner = P.external_ray(x, 5).joined();
    for (cplx& z : inner.points) z *= aa;
    const double reach = 0.9 * std::min(std::abs(outer.points.back()), std::abs(inner.points.back()));
    std::vector<cplx> a, b;
    for (const cplx z : outer.points) {
      if (std::abs(z) < reach) a.push_back(z);
    }
    for (const cplx z : inner.points) {
      if (std::abs(z) < reach) b.push_back(z);
    }
    const double hd = std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
    const double ratio = hd / std::max(mesh_size(a), mesh_size(b));
    per.push_back({{"x", x}, {"hausdorff", hd}, {"ratio", ratio}});
    worst = std::max(worst, ratio);
  }
  res.measured = {{"base_points", per}, {"max_hausdorff_over_mesh", worst}};
  res.tolerance = "hausdorff <= 3 mesh for 5 base points";
  res.status = verdict(bases.size() == 5 && worst <= 3.0);
}

// ------------------------------------------------------------------- dim

void dimension_bracket(Context& ctx, CheckResult& res) {
  DimensionEstimate est = ctx.estimate();
  const auto& curve = ctx.limit(12);
  const auto scales = dyadic_scales(curve, 3, 9);
  est.box_dim = box_counting_oracle(curve, scales);
  const double width = est.hi - est.lo;
  res.measured = {{"h", est.h}, {"bracket", {est.lo, est.hi}}, {"width", width}, {"box_dim", est.box_dim},
                  {"depth", est.depth}};
  res.tolerance = "width < 0.02, 1 < lo <= hi < 2, box_dim within 0.05 of the bracket";
  res.status = verdict(width < 0.02 && est.lo > 1.0 && est.hi < 2.0 && est.box_dim >= est.lo - 0.05 &&
                       est.box_dim <= est.hi + 0.05);
}

void conformal_measure_check(Context& ctx, CheckResult& res) {
  const auto& tree = ctx.tree14();
  const double h = ctx.estimate().h;
  json rows = json::array();
  bool ok = true;
  double previous = std::numeric_limits<double>::infinity();
  for (int n = 8; n <= 12; ++n) {
    const auto mu = conformal_measure(tree, h, n);
    const auto cc = conformality_check(tree, mu);
    const double mass = mu.total_mass();
    const double top = mu.max_weight();
    ok = ok && std::abs(mass - 1.0) <= 1e-14 && top < previous;
    for (int i = 0; i < 3; ++i) ok = ok && cc.residual[static_cast<std::size_t>(i)] <= cc.bound[static_cast<std::size_t>(i)];
    rows.push_back({{"n", n},
                    {"mass", mass},
                    {"max_weight", top},
                    {"residual", {cc.residual[0], cc.residual[1], cc.residual[2]}},
                    {"bound", {cc.bound[0], cc.bound[1], cc.bound[2]}}});
    previous = top;
  }
  res.measured = {{"s", h}, {"levels", rows}};
  res.tolerance = "|mass - 1| <= 1e-14; residual <= bound per map; max weight decreasing in n";
  res.status = verdict(ok);
}

void frostman_check(Context& ctx, CheckResult& res) {
  const auto& tree = ctx.tree14();
  const double h = ctx.estimate().h;
  const auto& I = ctx.limit(6);
  std::mt19937_64 rng(ctx.seed());
  std::uniform_int_distribution<std::size_t> pick(0, I.size() - 1);
  std::vector<cplx> centers;
  for (int k = 0; k < 50; ++k) centers.push_back(I.points[pick(rng)]);
  const double d = diameter(I.points);
  std::vector<double> radii;
  for (int k = 2; k <= 7; ++k) radii.push_back(d * std::ldexp(1.0, -k));
  json rows = json::array();
  std::array<double, 2> spread{};
  for (int idx = 0; idx < 2; ++idx) {
    const int n = idx == 0 ? 10 : 12;
    const auto fr = frostman_ratios(tree, conformal_measure(tree, h, n), h, centers, radii);
    spread[static_cast<std::size_t>(idx)] = fr.max_ratio / fr.min_ratio;
    rows.push_back({{"n", n}, {"min", fr.min_ratio}, {"max", fr.max_ratio}, {"max_over_min", spread[static_cast<std::size_t>(idx)]}});
  }
  const double change = std::abs(spread[1] / spread[0] - 1.0);
  res.measured = {{"levels", rows}, {"relative_change", change}, {"balls", centers.size() * radii.size()}};
  res.tolerance = "max/min changes < 25% from n = 10 to 12";
  res.status = verdict(change < 0.25);
}

void m_condition(Context& ctx, CheckResult& res) {
  json rows = json::array();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, last = 0.0;
  for (const int depth : {8, 10, 12}) {
    const auto rep = m_condition_estimate(ctx.limit(depth));
    rows.push_back({{"depth", depth}, {"M", rep.M_estimate}});
    lo = std::min(lo, rep.M_estimate);
    hi = std::max(hi, rep.M_estimate);
    last = rep.M_estimate;
  }
  res.measured = {{"estimates", rows}, {"M", last}, {"relative_spread", hi / lo - 1.0}};
  res.tolerance = "estimates at depths 8, 10, 12 within 10%";
  res.status = verdict(hi / lo - 1.0 < 0.1);
}

struct CheckDef {
  int id;
  Suite suite;
  const char* name;
  const char* anchor;
  void (*run)(Context&, CheckResult&);
};

constexpr CheckDef kChecks[] = {
    {1, Suite::core, "fixed-point-residual", "renormalization fixed-point equation", fixed_point_residual},
    {2, Suite::core, "alpha-cross-oracle", "universal scaling constant alpha", alpha_cross_oracle},
    {3, Suite::core, "inverse-branch-equation", "functional equation of the inverse branch u", inverse_branch_equation},
    {4, Suite::core, "singular-point", "singular point c as fixed point of chi", singular_point},
    {5, Suite::core, "tau-junction-angles", "arcs tau_n and tau_n+2 meet at angle pi/r", tau_angles},
    {6, Suite::ifs, "ifs-invariance-disjointness", "carrier X: invariance, disjoint images, adjacency", ifs_invariance},
    {0, Suite::ifs, "contraction-distortion", "contraction and bounded distortion of the system", contraction_distortion},
    {7, Suite::ifs, "curve-self-similarity", "L invariant under z -> |alpha| z", curve_self_similarity},
    {8, Suite::ifs, "arc-simplicity", "I and L are simple curves", arc_simplicity},
    {9, Suite::ifs, "forward-image", "g maps L_0 onto conj(L_inf)", forward_image},
    {10, Suite::markov, "markov-census", "pieces are nested or have disjoint interiors", markov_census},
    {11, Suite::markov, "rescale-invariance", "pieces divided by alpha are pullback pieces", rescale_invariance},
    {12, Suite::markov, "tiling-coverage", "pieces tile a neighborhood of 0", tiling_coverage},
    {13, Suite::markov, "diameter-decay", "nested pieces shrink geometrically", diameter_decay_check},
    {14, Suite::markov, "vein-path-length", "vein paths to 0 have length comparable to |z|", vein_path_length},
    {15, Suite::markov, "ray-scaling", "rays scale with the point: l(|alpha| x) = |alpha| l(x)", ray_scaling},
    {16, Suite::dim, "dimension-bracket", "1 < HD(I) < 2 via the conformal-measure exponent", dimension_bracket},
    {17, Suite::dim, "conformal-measure", "h-conformal probability measure on I", conformal_measure_check},
    {18, Suite::dim, "frostman-ratios", "mu(B(x, r)) comparable to r^h", frostman_check},
    {19, Suite::dim, "m-condition", "I satisfies the three-point M-condition", m_condition},
};

}  // namespace

bool parse_suite(const std::string& name, Suite& out) {
  static const std::pair<const char*, Suite> names[] = {
      {"core", Suite::core}, {"ifs", Suite::ifs}, {"markov", Suite::markov}, {"dim", Suite::dim}, {"all", Suite::all}};
  for (const auto& [n, s] : names) {
    if (name == n) {
      out = s;
      return true;
    }
  }
  return false;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "fail";
    case Status::report_only:
      return "report-only";
  }
  return "fail";
}

std::vector<CheckResult> run_suite(const FeigenbaumMap& map, Suite suite, std::uint64_t seed,
                                   const std::function<void(const CheckResult&)>& on_result) {
  Context ctx(map, seed);
  std::vector<CheckResult> out;
  for (const auto& def : kChecks) {
    if (suite != Suite::all && def.suite != suite) continue;
    CheckResult res;
    res.id = def.id;
    res.name = def.name;
    res.anchor = def.anchor;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      def.run(ctx, res);
    } catch (const std::exception& e) {
      res.status = Status::fail;
      res.measured["error"] = e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(res);
    out.push_back(std::move(res));
  }
  return out;
}

json report_json(const FeigenbaumMap& map, const std::string& suite, std::uint64_t seed,
                 const std::vector<CheckResult>& results) {
  json checks = json::array();
  for (const auto& r : results) {
    checks.push_back({{"name", r.name},
                      {"paper_anchor", r.anchor},
                      {"status", to_string(r.status)},
                      {"measured", r.measured},
                      {"tolerance", r.tolerance}});
  }
  json c = nullptr;
  try {
    const InverseBranch ib(map);
    const SingularPoint sp = find_c(ib);
    c = {{"re", sp.c.real()}, {"im", sp.c.imag()}, {"defect", sp.defect}};
  } catch (const Error&) {
  }
  return {{"suite", suite}, {"seed", seed}, {"c", c}, {"checks", checks}};
}

}  // namespace feig::verify
