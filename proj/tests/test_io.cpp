#include <sstream>
#include <string>

#include "doctest.h"
#include "feig/errors.hpp"
#include "feig/io.hpp"
#include "fixture.hpp"
#include "json.hpp"

using namespace feig;
using feig::testing::quadratic_ifs;
using feig::testing::quadratic_map;
using nlohmann::json;

TEST_CASE("map JSON round-trips losslessly") {
  const auto& map = quadratic_map();
  const std::string text = map_to_json(map);
  const json j = json::parse(text);
  for (const char* key : {"r", "order", "alpha", "coeffs", "residual", "radius"}) CHECK(j.contains(key));
  const FeigenbaumMap back = map_from_json(text);
  CHECK(back.alpha() == map.alpha());
  CHECK(back.g(cplx(0.3, 0.4)) == map.g(cplx(0.3, 0.4)));
  CHECK(map_to_json(back) == text);
}

TEST_CASE("malformed map JSON is rejected") {
  CHECK_THROWS_AS(map_from_json("not json"), InvalidArgument);
  CHECK_THROWS_AS(map_from_json("{}"), InvalidArgument);
  json j = json::parse(map_to_json(quadratic_map()));
  j["alpha"] = -2.6;
  CHECK_THROWS_AS(map_from_json(j.dump()), InvalidArgument);
}

TEST_CASE("reals print with 17 significant digits") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("curve CSV carries a header and addresses") {
  const CurveApprox c = limit_curve(quadratic_ifs(), 2);
  std::ostringstream out;
  write_curve_csv(out, c, "0:");
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "re,im,address");
  std::getline(in, line);
  CHECK(line.substr(line.rfind(',') + 1) == "0:11");
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == c.points.size());
}

TEST_CASE("census and dimension reports have the documented keys") {
  const auto pieces = feig::testing::quadratic_partition().census(1);
  std::vector<Piece> flat;
  for (const auto& level : pieces) flat.insert(flat.end(), level.begin(), level.end());
  const json census = json::parse(census_json(flat));
  REQUIRE(census.size() == flat.size());
  for (const char* key : {"depth", "gen", "x_R", "area", "diam"}) CHECK(census[0].contains(key));
  CHECK(census[0]["x_R"].size() == 2);

  DimensionEstimate est;
  est.h = 1.005;
  est.lo = 1.004;
  est.hi = 1.006;
  est.box_dim = 1.01;
  est.depth = 12;
  const json rep = json::parse(dimension_report_json(est, QuasicircleReport{1.0, 12}));
  for (const char* key : {"h", "bracket", "box_dim", "M_estimate", "depth"}) CHECK(rep.contains(key));
  CHECK(rep["bracket"][0] == 1.004);
  CHECK(rep["depth"] == 12);
}

TEST_CASE("SVG output is a fitted document") {
  SvgCanvas svg;
  const std::vector<cplx> tri{{0, 0}, {1, 0}, {0, 1}};
  svg.add_path(tri, true, "none", "black");
  svg.add_marker({0.5, 0.5}, "red");
  std::ostringstream out;
  svg.write(out);
  const std::string s = out.str();
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("viewBox") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);
}
