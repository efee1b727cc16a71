#pragma once

#include <utility>
#include <vector>

#include "iso/profile.hpp"
#include "iso/spaces.hpp"

namespace iso {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

struct Rect {
  Interval x;  // horizontal extent (r, or signed xi)
  Interval y;  // vertical extent (s or sigma)
};

// One horizontal band of a staircase region: for y in `extent` the
// horizontal slice equals `spans` (disjoint, sorted, nonempty).
struct Band {
  Interval extent;
  std::vector<Interval> spans;
};

struct VSeg {
  double x;
  Interval y;
};

struct HSeg {
  double y;
  Interval x;
};

struct BoundarySegments {
  std::vector<VSeg> vertical;
  std::vector<HSeg> horizontal;
};

// Axis-aligned staircase region stored as horizontal bands with increasing,
// non-overlapping extents.  All operations copy coordinates verbatim and
// compare them exactly, so region algebra (union, transpose, clipping,
// boundary extraction) introduces no rounding of its own.
struct StairRegion {
  std::vector<Band> bands;

  bool empty() const { return bands.empty(); }
  double area() const;
  std::vector<Rect> rects() const;

  // Exchanges the roles of the axes (horizontal bands become vertical
  // strips and vice versa); exact.
  StairRegion transposed() const;

  // Part of the region strictly below the line y = t.
  StairRegion below(double t) const;

  // Horizontal slice just below y = t; empty when t is at or below the
  // region or inside a gap.
  std::vector<Interval> slice_below(double t) const;

  // Decomposition of the topological boundary into maximal vertical and
  // horizontal segments.
  BoundarySegments boundary() const;

  // Sorts bands, merges touching spans and identical adjacent bands, drops
  // empty pieces.  Every mutating helper re-establishes this form.
  void normalize();

  // Exact union of (possibly overlapping, unsorted) rectangles.
  static StairRegion from_rects(std::vector<Rect> rs);
};

// Uniform-lattice carrier over the quadrant (r >= 0, s >= 0).  The edge
// vectors describe the sampling lattice used for cell interchange and for
// discretisation-slack reporting; the region holds the exact set, which
// need not stay lattice-aligned under rearrangement.
struct QuadrantGrid {
  Params params;
  std::vector<double> r_edges;
  std::vector<double> s_edges;
  StairRegion region;

  static QuadrantGrid from_cells(const Params& params,
                                 std::vector<double> r_edges,
                                 std::vector<double> s_edges,
                                 const std::vector<std::pair<int, int>>& cells);

  // Lattice cells [i, j] whose closed rectangle lies inside the region.
  std::vector<std::pair<int, int>> covered_cells() const;
};

// Carrier over the flattened half-plane (signed xi, sigma >= 0); the
// flattening is defined for h = 1 only.
struct HalfPlaneGrid {
  Params params;
  std::vector<double> xi_edges;
  std::vector<double> sigma_edges;
  StairRegion region;
};

// Cells whose centre lies under the interpolated profile, on a uniform
// nr x ns lattice spanning [0, r0] x [0, f-range].  First-order in the cell
// size by construction.
QuadrantGrid rasterize_profile(const Params& params, const Profile& prof,
                               int nr, int ns);

// Declared discretisation slack for rearrangement monotonicity reports:
// 4 * (max cell diagonal) / (smallest feature of the region).
double epsilon_grid(const QuadrantGrid& grid);

}  // namespace iso
