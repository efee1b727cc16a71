#pragma once

#include <array>
#include <string>
#include <vector>

#include "iso/grid.hpp"
#include "iso/spaces.hpp"

namespace iso {

// Flattening coordinate change on the first coordinate,
//   psi(x) = sgn(x) |x|^{a+1}/(a+1),
// and its inverse phi.  psi straightens the anisotropic length element so
// perimeter in (xi, eta) is plain Euclidean.
std::array<double, 2> psi_point(double alpha, const std::array<double, 2>& xy);
std::array<double, 2> phi_point(double alpha,
                                const std::array<double, 2>& xieta);

// Exact integral over [xi_lo, xi_hi] of the flattened density
// |(a+1) xi|^{-a/(a+1)}; the antiderivative is phi's first component, so
// intervals across 0 need no splitting.
double mu_interval(double alpha, double xi_lo, double xi_hi);

// Weighted measure of a half-plane region: flattened density in xi times
// the shell weight k omega_k sigma^{k-1} in sigma.  Equals the Lebesgue
// volume of the represented set (this is the Jacobian identity).
double mu_volume(const HalfPlaneGrid& grid);

// Euclidean perimeter of the represented rotational set: vertical faces
// weigh omega_k d(sigma^k) at any xi (0 included), horizontal faces weigh
// k omega_k sigma^{k-1} |d xi|; sigma = 0 is the rotation fold and carries
// no boundary.
double perimeter_halfplane(const HalfPlaneGrid& grid);

// Quadrant carrier -> half-plane carrier through psi, mirroring every span
// to both signs of xi (h = 1 only).  Spans reaching r = 0 merge across 0.
HalfPlaneGrid flatten_grid(const QuadrantGrid& grid);

// Inverse of flatten_grid for xi-symmetric regions (as produced by
// steiner_xi); asymmetry beyond exact mirroring is an internal error.
QuadrantGrid fold_grid(const HalfPlaneGrid& grid);

// Steiner step: every sigma-row keeps its length but is centred at 0.
HalfPlaneGrid steiner_xi(const HalfPlaneGrid& grid);

// Schwartz step: every column's sigma-occupancy becomes (0, rho) with the
// shell measure sigma^k preserved exactly.
HalfPlaneGrid schwartz_sigma(const HalfPlaneGrid& grid);
QuadrantGrid schwartz_sigma(const QuadrantGrid& grid);

// Radial step for h >= 2: each s-row F becomes (0, g) with
// g^{h+a} = sum over F of d(r^{h+a}).
QuadrantGrid radial_rearrange_r(const QuadrantGrid& grid);

// Exact anisotropic dilation (r, s) -> (lambda r, lambda^{1+a} s).
QuadrantGrid dilate_grid(const QuadrantGrid& grid, double lambda);

struct StageTrace {
  std::string stage;
  double perimeter = 0.0;
  double volume = 0.0;
};

struct RearrangeResult {
  QuadrantGrid grid;
  std::vector<StageTrace> trace;
  double epsilon_grid = 0.0;
};

// Full symmetrization pipeline: for h = 1 flatten -> Steiner -> Schwartz ->
// fold, for h >= 2 radial -> Schwartz, then a volume-restoring dilation.
// Stages are exact on the interval algebra, so the output perimeter does
// not exceed the input perimeter and the volume is restored to the input
// value up to roundoff.
RearrangeResult rearrange_full(const QuadrantGrid& grid);

}  // namespace iso
