#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <string>

#include "CLI11.hpp"

#include "feig/dimension.hpp"
#include "feig/errors.hpp"
#include "feig/ifs.hpp"
#include "feig/inverse_branch.hpp"
#include "feig/io.hpp"
#include "feig/partition.hpp"
#include "verification.hpp"

namespace {

using namespace feig;

constexpr int kUsage = 2;
constexpr int kNumeric = 1;

// A failure the user caused; maps to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  return out;
}

FeigenbaumMap read_map(const std::string& path) {
  try {
    return load_map(path);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

struct Setup {
  InverseBranch ib;
  Ifs ifs;
  explicit Setup(const FeigenbaumMap& map) : ib(map), ifs(ib, find_c(ib)) {}
};

std::pair<int, int> parse_range(const std::string& text) {
  static const std::regex pattern(R"(^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw UsageError("--scales expects INT..INT, got '" + text + "'");
  const int lo = std::stoi(m[1]), hi = std::stoi(m[2]);
  if (lo > hi) throw UsageError("--scales range is empty");
  if (hi - lo > 40) throw UsageError("--scales spans more than 41 copies");
  return {lo, hi};
}

cplx parse_point(const std::string& text) {
  static const std::regex pattern(R"(^\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw UsageError("--point expects RE,IM, got '" + text + "'");
  try {
    return {std::stod(m[1]), std::stod(m[2])};
  } catch (const std::exception&) {
    throw UsageError("--point expects RE,IM, got '" + text + "'");
  }
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  int r = 2;
  int order = 40;
  double tol = 1e-12;
  std::string out;
};

int run_solve(const SolveArgs& a) {
  const FeigenbaumMap map = solve_feigenbaum(a.r, a.order, a.tol);
  save_map(map, a.out);
  std::printf("alpha = %.15f  residual = %.3e  radius = %.6f\n", map.alpha(), map.residual(), map.radius());
  return 0;
}

// ---------------------------------------------------------------- curve

struct CurveArgs {
  std::string map;
  int depth = 8;
  std::string scales = "0..0";
  std::string svg, csv;
};

int run_curve(const CurveArgs& a) {
  const auto [lo, hi] = parse_range(a.scales);
  const Setup s(read_map(a.map));
  const CurveApprox I = limit_curve(s.ifs, a.depth);
  const double aa = s.ifs.abs_alpha();
  const bool single = lo == 0 && hi == 0;
  if (!a.csv.empty()) {
    auto out = open_out(a.csv);
    out << "re,im,address\n";
    for (int n = lo; n <= hi; ++n) {
      CurveApprox copy = I;
      const double f = std::pow(aa, n);
      for (cplx& z : copy.points) z *= f;
      // Consecutive copies share the point |alpha|^n c.
      if (n > lo) {
        copy.points.erase(copy.points.begin());
        copy.addresses.erase(copy.addresses.begin());
      }
      write_curve_csv(out, copy, single ? std::string() : std::to_string(n) + ":", false);
    }
  }
  if (!a.svg.empty()) {
    const CurveApprox L = curve_L(I, aa, lo, hi);
    SvgCanvas svg;
    svg.add_path(L.points, false, "none", "#08306b", 1.0);
    for (int n = lo; n <= hi; ++n) svg.add_marker(std::pow(aa, n) * s.ifs.c(), "#cb181d");
    auto out = open_out(a.svg);
    svg.write(out);
  }
  std::printf("vertices per copy = %zu  copies = %d  mesh = %.3e\n", I.size(), hi - lo + 1, mesh_size(I.points));
  return 0;
}

// ---------------------------------------------------------------- tiles

struct TilesArgs {
  std::string map;
  int depth = 2;
  double radius = 0.0;
  int max_pieces = 500;
  std::string svg, census;
};

int run_tiles(const TilesArgs& a) {
  const Setup s(read_map(a.map));
  const Partition P(s.ifs);
  std::vector<Piece> pieces;
  for (auto& level : P.census(a.depth)) {
    for (auto& p : level) pieces.push_back(std::move(p));
  }
  if (a.radius > 0.0) {
    for (auto& p : P.near_zero_census(a.radius, a.max_pieces)) pieces.push_back(std::move(p));
  }
  if (!a.census.empty()) {
    auto out = open_out(a.census);
    out << census_json(pieces);
  }
  if (!a.svg.empty()) {
    // The unbounded sectors would swamp the picture.
    std::vector<Piece> bounded;
    for (const auto& p : pieces) {
      if (!p.inf_is_direction) bounded.push_back(p);
    }
    auto out = open_out(a.svg);
    write_tiling_svg(out, bounded);
  }
  std::printf("pieces = %zu\n", pieces.size());
  return 0;
}

// ------------------------------------------------------------------ dim

struct DimArgs {
  std::string map;
  int max_depth = 12;
  std::string report;
};

int run_dim(const DimArgs& a) {
  const Setup s(read_map(a.map));
  const CompactX X = build_X(s.ifs);
  const WordTree tree(s.ifs, dimension_basepoint(s.ifs, X), a.max_depth, 0);
  DimensionEstimate est = estimate_dimension(tree, std::min(3, a.max_depth - 2));
  const int curve_depth = std::min(a.max_depth, 12);
  const CurveApprox I = limit_curve(s.ifs, curve_depth);
  // Finest box side kept a few meshes above the polyline's resolution.
  const double mesh = mesh_size(I.points), diam = diameter(I.points);
  const int k_max = std::max(4, static_cast<int>(std::floor(std::log2(diam / (4.0 * mesh)))));
  est.box_dim = box_counting_oracle(I, dyadic_scales(I, std::min(3, k_max - 1), std::min(9, k_max)));
  const QuasicircleReport m = m_condition_estimate(I);
  auto out = open_out(a.report);
  out << dimension_report_json(est, m);
  std::printf("h = %.6f  bracket = [%.6f, %.6f]  box_dim = %.4f  M = %.4f\n", est.h, est.lo, est.hi, est.box_dim,
              m.M_estimate);
  return 0;
}

// ----------------------------------------------------------------- rays

struct RaysArgs {
  std::string map;
  std::string point;
  int depth = 5;
  std::string svg;
};

int run_rays(const RaysArgs& a) {
  const cplx x = parse_point(a.point);
  const Setup s(read_map(a.map));
  const Partition P(s.ifs);
  const RayPath ray = P.external_ray(x, a.depth);
  if (!a.svg.empty()) {
    SvgCanvas svg;
    for (const auto& arc : ray.arcs) svg.add_path(arc.points, false, "none", "#08306b", 1.0);
    svg.add_marker(x, "#cb181d");
    auto out = open_out(a.svg);
    svg.write(out);
  }
  std::printf("arcs = %zu  length = %.10f\n", ray.arcs.size(), ray.length());
  return 0;
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
  std::string map;
  std::string suite = "all";
  std::uint64_t seed = 1;
  std::string report;
};

int run_verify(const VerifyArgs& a) {
  verify::Suite suite{};
  if (!verify::parse_suite(a.suite, suite)) throw UsageError("unknown suite " + a.suite);
  const FeigenbaumMap map = read_map(a.map);
  const auto results = verify::run_suite(map, suite, a.seed, [](const verify::CheckResult& r) {
    const char* tag = r.status == verify::Status::pass ? "PASS" : r.status == verify::Status::fail ? "FAIL" : "REPORT";
    std::printf("%-6s %-28s %7.2fs  %s\n", tag, r.name.c_str(), r.seconds, r.measured.dump().c_str());
    std::fflush(stdout);
  });
  if (!a.report.empty()) {
    auto out = open_out(a.report);
    out << verify::report_json(map, a.suite, a.seed, results).dump(2) << '\n';
  }
  int failed = 0;
  for (const auto& r : results) {
    if (r.status == verify::Status::fail) {
      std::fprintf(stderr, "feig verify: check '%s' failed\n", r.name.c_str());
      ++failed;
    }
  }
  return failed ? kNumeric : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feigenbaum map, its invariant curve, Markov pieces and dimension estimates"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "solve the fixed-point equation and write the map JSON");
  c_solve->add_option("--r", solve.r, "criticality (even, >= 2)")->check(CLI::Range(2, 64));
  c_solve->add_option("--order", solve.order, "number of Taylor coefficients")->check(CLI::Range(4, 200));
  c_solve->add_option("--tol", solve.tol, "residual tolerance")->check(CLI::PositiveNumber);
  c_solve->add_option("--out", solve.out, "output map JSON")->required();

  CurveArgs curve;
  auto* c_curve = app.add_subcommand("curve", "limit arc I and the window of L = U |alpha|^n I");
  c_curve->add_option("--map", curve.map, "map JSON")->required()->check(CLI::ExistingFile);
  c_curve->add_option("--depth", curve.depth, "limit-arc depth (3^depth segments)")->check(CLI::Range(1, 14));
  c_curve->add_option("--scales", curve.scales, "window of copies n, as INT..INT");
  c_curve->add_option("--svg", curve.svg, "SVG output");
  c_curve->add_option("--csv", curve.csv, "CSV output (re,im,address)");

  TilesArgs tiles;
  auto* c_tiles = app.add_subcommand("tiles", "Markov pieces: pullback census and the tiling near 0");
  c_tiles->add_option("--map", tiles.map, "map JSON")->required()->check(CLI::ExistingFile);
  c_tiles->add_option("--depth", tiles.depth, "census depth")->check(CLI::Range(0, 6));
  c_tiles->add_option("--radius", tiles.radius, "disc around 0 to tile (0: none)")->check(CLI::NonNegativeNumber);
  c_tiles->add_option("--max-pieces", tiles.max_pieces, "cap on pieces near 0")->check(CLI::Range(1, 100000));
  c_tiles->add_option("--svg", tiles.svg, "SVG output");
  c_tiles->add_option("--census", tiles.census, "census JSON output");

  DimArgs dim;
  auto* c_dim = app.add_subcommand("dim", "Hausdorff dimension estimates of I");
  c_dim->add_option("--map", dim.map, "map JSON")->required()->check(CLI::ExistingFile);
  c_dim->add_option("--max-depth", dim.max_depth, "word length of the partition sums")->check(CLI::Range(6, 15));
  c_dim->add_option("--report", dim.report, "report JSON output")->required();

  RaysArgs rays;
  auto* c_rays = app.add_subcommand("rays", "external ray to a real base point");
  c_rays->add_option("--map", rays.map, "map JSON")->required()->check(CLI::ExistingFile);
  c_rays->add_option("--point", rays.point, "base point RE,IM")->required();
  c_rays->add_option("--depth", rays.depth, "limit-arc depth of the ray arcs")->check(CLI::Range(1, 10));
  c_rays->add_option("--svg", rays.svg, "SVG output");

  VerifyArgs ver;
  auto* c_verify = app.add_subcommand("verify", "run the verification suite");
  c_verify->add_option("--map", ver.map, "map JSON")->required()->check(CLI::ExistingFile);
  c_verify->add_option("--suite", ver.suite, "core, ifs, markov, dim or all")
      ->check(CLI::IsMember({"core", "ifs", "markov", "dim", "all"}));
  c_verify->add_option("--seed", ver.seed, "seed for sampled checks");
  c_verify->add_option("--report", ver.report, "report JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  const std::string which = app.get_subcommands().front()->get_name();
  try {
    if (c_solve->parsed()) return run_solve(solve);
    if (c_curve->parsed()) return run_curve(curve);
    if (c_tiles->parsed()) return run_tiles(tiles);
    if (c_dim->parsed()) return run_dim(dim);
    if (c_rays->parsed()) return run_rays(rays);
    if (c_verify->parsed()) return run_verify(ver);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "feig: %s\n", e.what());
    return kUsage;
  } catch (const BadCriticality& e) {
    std::fprintf(stderr, "feig %s: %s\n", which.c_str(), e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "feig %s: numeric check failed: %s\n", which.c_str(), e.what());
    return kNumeric;
  }
  return kUsage;
}
