#pragma once

#include "iso/profile.hpp"

namespace iso {

// Parameter triple of the weighted quadrant geometry: block dimensions
// h >= 1 (radial x-block) and k >= 1 (radial y-block) plus the vertical
// weight exponent alpha > 0.  Validated on construction.
struct Params {
  int h = 1;
  int k = 1;
  double alpha = 1.0;

  Params() = default;
  Params(int h_in, int k_in, double alpha_in);
};

// Volume omega_m of the unit ball in R^m, via the Gamma-function formula
// evaluated with lgamma.  Supports 1 <= m <= 64.
double unit_ball_volume(int m);

// Scaling dimension d = h + k(1 + alpha) of the anisotropic dilations.
double homogeneous_dimension(const Params& p);

// Normalisation constant h*k*omega_h*omega_k shared by every weighted
// perimeter and volume formula.
double weight_constant(const Params& p);

// Anisotropic dilation (x, y) -> (lambda x, lambda^{1+alpha} y) applied to
// a profile: radii scale by lambda, heights by lambda^{1+alpha}, slopes by
// lambda^alpha.  The mapping is applied node-by-node, so vertical-tangent
// markers and node clustering survive untouched.
Profile dilate_profile(const Params& p, const Profile& prof, double lambda);

}  // namespace iso
