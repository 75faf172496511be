#include "feig/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "feig/errors.hpp"

namespace feig {

using nlohmann::json;

std::string map_to_json(const FeigenbaumMap& map) {
  json j;
  j["r"] = map.criticality();
  j["order"] = map.order();
  j["alpha"] = map.alpha();
  j["coeffs"] = std::vector<double>(map.coeffs().begin(), map.coeffs().end());
  j["residual"] = map.residual();
  j["radius"] = map.radius();
  return j.dump(2) + "\n";
}

FeigenbaumMap map_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
    FeigenbaumMap map(j.at("r").get<int>(), j.at("coeffs").get<std::vector<double>>(), j.at("residual").get<double>());
    if (j.at("order").get<int>() != map.order()) throw InvalidArgument("map order does not match its coefficients");
    const double alpha = j.at("alpha").get<double>();
    if (!(std::abs(alpha - map.alpha()) <= 1e-12 * std::abs(alpha))) {
      throw InvalidArgument("stored alpha disagrees with the coefficients");
    }
    map.set_radius(j.at("radius").get<double>());
    return map;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed map JSON: ") + e.what());
  }
}

void save_map(const FeigenbaumMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << map_to_json(map);
}

FeigenbaumMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return map_from_json(ss.str());
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_curve_csv(std::ostream& out, const CurveApprox& curve, std::string_view prefix, bool header) {
  if (header) out << "re,im,address\n";
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    out << format_real(curve.points[k].real()) << ',' << format_real(curve.points[k].imag()) << ',';
    if (curve.has_addresses()) out << prefix << curve.addresses[k].str();
    out << '\n';
  }
}

// ------------------------------------------------------------------ SVG

void SvgCanvas::add_path(std::span<const cplx> pts, bool closed, std::string fill, std::string stroke,
                         double stroke_width) {
  paths_.push_back({{pts.begin(), pts.end()}, closed, std::move(fill), std::move(stroke), stroke_width});
}

void SvgCanvas::add_marker(cplx z, std::string color) { markers_.emplace_back(z, std::move(color)); }

void SvgCanvas::write(std::ostream& out, double width_px) const {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  auto grow = [&](cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return;
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  };
  for (const auto& p : paths_) {
    for (const cplx z : p.pts) grow(z);
  }
  for (const auto& m : markers_) grow(m.first);
  if (!(x1 >= x0)) x0 = y0 = -1.0, x1 = y1 = 1.0;
  const double pad = 0.02 * std::max({x1 - x0, y1 - y0, 1e-12});
  x0 -= pad, x1 += pad, y0 -= pad, y1 += pad;
  const double w = x1 - x0, h = y1 - y0;
  // Plane y up becomes SVG y down: (x, y) -> (x, y0 + y1 - y).
  auto px = [&](cplx z) { return format_real(z.real()) + "," + format_real(y0 + y1 - z.imag()); };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px << "\" height=\"" << width_px * h / w
      << "\" viewBox=\"" << format_real(x0) << ' ' << format_real(y0) << ' ' << format_real(w) << ' '
      << format_real(h) << "\">\n";
  for (const auto& p : paths_) {
    if (p.pts.empty()) continue;
    out << "<path d=\"M";
    for (std::size_t k = 0; k < p.pts.size(); ++k) out << (k ? " L" : "") << px(p.pts[k]);
    if (p.closed) out << " Z";
    out << "\" fill=\"" << p.fill << "\" stroke=\"" << p.stroke << "\" stroke-width=\"" << p.stroke_width
        << "\" vector-effect=\"non-scaling-stroke\"/>\n";
  }
  for (const auto& [z, color] : markers_) {
    out << "<circle cx=\"" << format_real(z.real()) << "\" cy=\"" << format_real(y0 + y1 - z.imag()) << "\" r=\""
        << format_real(0.004 * std::max(w, h)) << "\" fill=\"" << color << "\"/>\n";
  }
  out << "</svg>\n";
}

// -------------------------------------------------------------- reports

std::string census_json(const std::vector<Piece>& pieces) {
  json arr = json::array();
  for (const auto& p : pieces) {
    arr.push_back({{"depth", p.depth},
                   {"gen", p.gen.str()},
                   {"x_R", {p.x_R.real(), p.x_R.imag()}},
                   {"area", p.area()},
                   {"diam", p.diam()}});
  }
  return arr.dump(2) + "\n";
}

void write_tiling_svg(std::ostream& out, const std::vector<Piece>& pieces) {
  SvgCanvas svg;
  for (const auto& p : pieces) {
    svg.add_path(p.boundary.points, true, p.depth % 2 == 0 ? "#9ecae1" : "#fdae6b", "#333333", 0.5);
  }
  svg.write(out);
}

std::string dimension_report_json(const DimensionEstimate& est, const QuasicircleReport& m) {
  json j;
  j["h"] = est.h;
  j["bracket"] = {est.lo, est.hi};
  j["box_dim"] = est.box_dim;
  j["M_estimate"] = m.M_estimate;
  j["depth"] = est.depth;
  return j.dump(2) + "\n";
}

}  // namespace feig
