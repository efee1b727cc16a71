#pragma once

#include <array>
#include <vector>

#include "iso/grid.hpp"
#include "iso/profile.hpp"
#include "iso/spaces.hpp"

namespace iso {

// Simple polyline in the closed quadrant bounding a region together with
// the coordinate axes; carries the boundary data for the curve-form
// perimeter integral.
struct GeneratingCurve {
  std::vector<std::array<double, 2>> vertices;  // (r, s) pairs

  // Throws std::invalid_argument unless the polyline is simple, stays in
  // the closed quadrant, and starts/ends on a coordinate axis.
  void validate() const;
};

// Weighted perimeter of the set generated by a profile:
//   c_hk * Int sqrt(f'^2 + r^{2 alpha}) r^{h-1} f^{k-1} dr,
// evaluated in curve form panel-by-panel (8-point Gauss-Legendre), so the
// vertical-tangent endpoint integrates without blow-up.
double perimeter_profile(const Params& params, const Profile& prof);

// Weighted volume (c_hk / k) * Int r^{h-1} f^k dr of the same set.
double volume_profile(const Params& params, const Profile& prof);

// Curve-form perimeter c_hk * Sum_seg Int |(N_r, r^alpha N_s)| r^{h-1} s^{k-1} dH^1.
// Segments lying on a coordinate axis bound no surface of the generated
// set (the axes are interior folds) and contribute zero.
double perimeter_curve(const Params& params, const GeneratingCurve& curve);

// Segment-exact weighted perimeter/volume of the staircase set carried by
// a quadrant grid.  Vertical faces integrate r^{h-1} d(s^k)/k, horizontal
// faces integrate s^{k-1} d(r^{alpha+h})/(alpha+h); axis segments are folds
// and contribute zero.
double perimeter_grid(const QuadrantGrid& grid);
double volume_grid(const QuadrantGrid& grid);

// Scale-invariant ratio P^d / V^{d-1}, d = h + k(1 + alpha).
double iso_ratio(const Params& params, double P, double V);

// Nearest lattice edge of the grid's s-axis (used by the truncation ops).
double snap_to_s_edge(const QuadrantGrid& grid, double t);

// The part of the grid set below the line s = t (t snapped to an edge).
QuadrantGrid truncate_y(const QuadrantGrid& grid, double t);

// Weight of the horizontal cut face at height t (snapped): the slice taken
// just below t, integrated with the horizontal-face weight.
double slice_weight_y(const QuadrantGrid& grid, double t);

// Perimeter of the grid set restricted to the open half-plane {s < t}:
// vertical faces clipped at t, horizontal faces at heights >= t dropped.
double perimeter_grid_below(const QuadrantGrid& grid, double t);

}  // namespace iso
