#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "feig/curve.hpp"
#include "feig/ifs.hpp"
#include "feig/inverse_branch.hpp"

namespace feig {

/// Elementary map in a generation chain.
enum class OpKind : std::uint8_t {
  pull,   // z -> e^{2 pi i j/r} u(z), slits read from the piece's half-plane
  conj,   // z -> conj z
  neg,    // z -> -z
  scale,  // z -> alpha^m z
};

struct PieceOp {
  OpKind kind = OpKind::neg;
  int arg = 0;  // branch j for pull, exponent m for scale

  friend bool operator==(const PieceOp&, const PieceOp&) = default;
};

/// How a piece is produced: a depth-0 sector followed by elementary maps,
/// first op applied first. With (depth, scale_exp) = (n, j) the piece R
/// satisfies g^n(R / alpha^j) in M_0.
struct Generation {
  int sector = 1;  // 1..r-1
  bool conj_seed = false;
  std::vector<PieceOp> ops;
  /// Word over {A, B}, outermost letter first, for pieces made by the machine.
  std::string machine_word;
  std::int64_t depth = 0;
  int scale_exp = 0;

  /// Appends an op, cancelling adjacent inverses and merging scalings (which
  /// commute with negation), then recomputes depth and scale_exp.
  void push(PieceOp op);
  void append(std::span<const PieceOp> more);
  std::string str() const;
};

/// A Markov piece with its boundary polyline and base points.
struct Piece {
  std::int64_t depth = 0;
  Generation gen;
  CurveApprox boundary;  // closed
  cplx x_R;
  /// Second base point; for the unbounded sectors the unit direction of
  /// their straight ray instead.
  cplx x_R_inf;
  bool inf_is_direction = false;
  /// Level within the generated family (1 = maximal); 0 when unassigned.
  int level = 0;
  Side side = Side::upper;  // open half-plane containing the piece
  std::size_t base_index = 0;
  std::size_t inf_index = 0;

  double area() const;
  double diam() const;
  double mesh() const;
  Box box() const;
  bool contains(cplx z) const;
};

struct Vein {
  CurveApprox arc;  // x_R -> x_R_inf
  double length = 0.0;
};

/// The triangle Delta bounded by (0, x0), gamma-_1 and the arc of L from 0
/// to c/|alpha|, with the arcs the machine is built from.
struct MachineDomain {
  CurveApprox delta;    // closed, counterclockwise from 0
  CurveApprox delta0;   // u*(Delta)
  CurveApprox a_delta;  // Delta/|alpha|
  Piece seed;           // R2 = u*(R0)/|alpha|
  CurveApprox gamma_minus;    // u*(L): x0 -> c
  CurveApprox gamma_plus;     // u*(-L*): x0 -> c
  CurveApprox gamma_minus_1;  // u*(L from 0 to c): x0 -> c/|alpha|
  CurveApprox beta1;          // u*(L_0)
  CurveApprox beta2;          // gamma-_1 minus beta1
};

/// Boundary arcs from a base point out to the edge of the scale window.
struct RayPath {
  cplx target;
  std::vector<CurveApprox> arcs;
  int truncation_depth = 0;

  CurveApprox joined() const;
  double length() const;
};

enum class PairRelation { disjoint, nested, shared_arc, shared_base_point, overlap, ambiguous };

const char* to_string(PairRelation rel);

/// Classification of two closed pieces from winding tests
/// and boundary proximity; points within `tube` of the other boundary count
/// as on it. `overlap` means interiors meet without nesting; `ambiguous` that
/// the only evidence for it lies within a few tubes of a boundary.
PairRelation classify_pair(const Piece& a, const Piece& b, double tube);

/// Tube for comparing two pieces: shared arcs are inscribed through different
/// vertex sets, so their polylines differ by a fraction of the coarser mesh.
double contact_tube(const Piece& a, const Piece& b);

/// Assigns levels by inclusion: 1 + the number of other pieces nesting it.
void assign_levels(std::vector<Piece>& pieces, double tube);

struct DecayFit {
  double C = 0.0;
  double lambda = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of log diam R_m = a_chain + m log lambda over nested
/// chains (common rate, per-chain offset); C is the smallest constant with
/// every fitted line below C lambda^m diam R_1, r2 the within-chain R^2.
/// Throws InsufficientData without a chain of two or more levels.
DecayFit diameter_decay(const std::vector<std::vector<double>>& chain_diameters);
DecayFit diameter_decay(const std::vector<std::vector<Piece>>& chains);

struct PartitionOptions {
  int curve_depth = 5;   // depth of the limit arc polyline
  int inner_scales = 8;  // the L window is |alpha|^n I, -inner <= n <= outer
  int outer_scales = 6;
  int arc_points = 48;   // vertices on the far arc of a sector
  int ray_points = 8;    // samples of a straight ray per factor |alpha|
};

/// Nested cells of a point: generations of the pieces R_1 > R_2 > ...
/// containing it and its preimage in each seed sector.
struct CellChain {
  cplx z;
  std::vector<Generation> cells;
  std::vector<cplx> seed_points;
  /// local[k] is cell k+1 written in the seed sector of cell k.
  std::vector<Generation> local;
};

struct VeinPath {
  CurveApprox path;  // 0 -> ... -> z
  double length = 0.0;
  int levels = 0;
};

struct CoverageResult {
  double coverage = 0.0;
  std::size_t pieces = 0;
  std::size_t samples = 0;
  double tube = 0.0;
  /// Uncovered samples binned by distance to the nearest line e^{i pi j/r} R
  /// in units of the tube width: [0,2), [2,4), [4,8), [8,16), >= 16.
  std::array<std::size_t, 5> uncovered_by_line_distance{};
};

/// Piece generation for one Feigenbaum map: sectors, pullbacks, rescaling,
/// the A/B machine and the point location built on it. The machine and
/// everything that locates points is implemented for r = 2.
class Partition {
 public:
  explicit Partition(Ifs ifs, PartitionOptions opts = {});

  const Ifs& ifs() const noexcept { return ifs_; }
  const InverseBranch& branch() const noexcept { return ifs_.branch(); }
  int criticality() const noexcept { return ifs_.branch().criticality(); }
  const PartitionOptions& options() const noexcept { return opts_; }
  /// Window polyline of L from |alpha|^-inner c/|alpha| to |alpha|^outer c.
  const CurveApprox& L() const noexcept { return L_; }
  const CurveApprox& limit_arc() const noexcept { return I_; }

  /// R_{0,j} for j = 1..r-1 followed by their conjugates.
  std::vector<Piece> depth0_sectors() const;
  Piece sector(int j, bool conj) const;

  cplx map_point(const PieceOp& op, cplx z, Side side) const;
  static Side map_side(const PieceOp& op, Side side, int r);
  Piece apply(const Piece& p, const PieceOp& op) const;
  Piece apply(const Piece& p, std::span<const PieceOp> ops) const;
  /// Image of a point of the seed sector under the whole chain.
  cplx chain_point(const Generation& gen, cplx z) const;
  Piece build(const Generation& gen) const;

  Piece pullback_piece(const Piece& p, int branch) const;
  /// R -> R/alpha.
  Piece rescale_piece(const Piece& p) const;
  /// All pullbacks of the sectors through depth max_depth, grouped by depth.
  std::vector<std::vector<Piece>> census(int max_depth) const;

  /// Vein: the chain applied to the straight ray of the seed sector.
  Vein compute_vein(const Piece& p) const;

  const MachineDomain& machine() const;
  Piece machine_piece(const std::string& word) const;
  /// w(R2) for all words with |w| <= max_word_len, shortest first.
  std::vector<Piece> machine_tile(int max_word_len) const;
  /// Machine word locating a point of the closed triangle, and the point's
  /// image in R2 after undoing the word.
  std::string machine_code(cplx w, cplx* in_seed = nullptr) const;

  /// Level-1 piece containing z (any z != 0 off the lines), with z's
  /// preimage in the seed sector. Throws NotCovered.
  Generation locate(cplx z, cplx* seed_point = nullptr) const;
  CellChain nested_cells(cplx z, int max_level) const;
  VeinPath vein_path_to_zero(cplx z, int max_level) const;

  /// Ray to 0 (L itself) or to a real base point of a piece of the machine
  /// tiling and its rescalings; arcs are polylines of limit-curve depth
  /// `depth`. Throws NotCovered for other points.
  RayPath external_ray(cplx x, int depth) const;

  /// Level-1 pieces meeting the disc, largest first, until max_pieces
  /// (counting the four symmetric copies of each).
  std::vector<Piece> near_zero_census(double radius, int max_pieces) const;
  CoverageResult tiling_coverage(double radius, int max_pieces, std::size_t samples = 20000,
                                 double tube_frac = 0.005, std::uint64_t seed = 1) const;

 private:
  void require_quadratic(const char* what) const;
  Generation locate_in_quadrant(cplx z, cplx* seed_point) const;
  Generation locate_sector_cell(cplx z, cplx* seed_point) const;
  Generation seed_generation() const;
  void push_letter(Generation& gen, char letter) const;
  std::vector<cplx> ray_template(int j, bool conj) const;
  std::vector<Generation> near_zero_codes(double radius, int max_pieces, std::vector<Piece>* pieces) const;

  Ifs ifs_;
  PartitionOptions opts_;
  CurveApprox I_;
  CurveApprox L_;
  std::vector<Piece> sectors_;  // j = 1..r-1, then conjugates
  MachineDomain machine_;
  bool has_machine_ = false;
  // Point location in the triangle.
  std::optional<PolygonIndex> in_delta_, in_a_, in_b_, in_r2_;
  std::optional<SegmentIndex> near_delta_, near_a_, near_b_, near_r2_;
};

}  // namespace feig
