#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "feig/curve.hpp"
#include "feig/dimension.hpp"
#include "feig/feigenbaum_map.hpp"
#include "feig/partition.hpp"

namespace feig {

/// {"r", "order", "alpha", "coeffs", "residual", "radius"}; doubles are
/// written in shortest round-trip form, so save/load is lossless.
std::string map_to_json(const FeigenbaumMap& map);
/// Rebuilds the map from its coefficients and checks the stored alpha
/// against the rebuilt one. Throws InvalidArgument on malformed input.
FeigenbaumMap map_from_json(std::string_view text);
void save_map(const FeigenbaumMap& map, const std::string& path);
FeigenbaumMap load_map(const std::string& path);

/// 17 significant digits.
std::string format_real(double x);

/// Header "re,im,address"; the address column carries `prefix` followed by
/// the vertex's ternary word (empty when the curve has no addresses).
void write_curve_csv(std::ostream& out, const CurveApprox& curve, std::string_view prefix = {},
                     bool header = true);

/// Minimal SVG writer: polylines in plane coordinates, y axis flipped, the
/// view box fitted to everything added.
class SvgCanvas {
 public:
  void add_path(std::span<const cplx> pts, bool closed, std::string fill, std::string stroke,
                double stroke_width = 1.0);
  void add_marker(cplx z, std::string color);
  void write(std::ostream& out, double width_px = 800.0) const;

 private:
  struct Path {
    std::vector<cplx> pts;
    bool closed;
    std::string fill, stroke;
    double stroke_width;
  };
  std::vector<Path> paths_;
  std::vector<std::pair<cplx, std::string>> markers_;
};

/// [{"depth", "gen", "x_R": [re, im], "area", "diam"}, ...]
std::string census_json(const std::vector<Piece>& pieces);
/// One path per piece, fill keyed by depth parity.
void write_tiling_svg(std::ostream& out, const std::vector<Piece>& pieces);

/// {"h", "bracket": [lo, hi], "box_dim", "M_estimate", "depth"}
std::string dimension_report_json(const DimensionEstimate& est, const QuasicircleReport& m);

}  // namespace feig
