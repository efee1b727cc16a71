#pragma once

#include <vector>

#include "iso/profile.hpp"
#include "iso/spaces.hpp"

namespace iso {

// Terminal behavior of a trial curve started from the regular series at the
// origin.  Exactly one of these holds at termination.
enum class TerminalKind {
  kHitZeroVerticalTangent,  // closed on the axis with a vertical tangent
  kCrossedZeroEarly,        // steepened past vertical and swung back
  kFlattened,               // landed transversally or lifted off
  kBlewUp,                  // left the radius cap without closing
};

const char* terminal_name(TerminalKind kind);

struct ShootingConfig {
  double f0 = 1.0;        // initial height of the trial curve
  double c_min = 0.0;     // lower bracket end for C; 0 = h/4
  double c_max = 0.0;     // upper bracket end for C; 0 = 4h
  double tol_c = 0.0;     // bracket width target; 0 = 1e-9 * h
  double tol_step = 1e-10;  // relative local error target per step
  double r_cap = 0.0;     // runaway radius; 0 = 50 * natural length scale
  int max_steps = 400000;   // accepted-step budget per trial
  int max_bisect = 200;
};

struct ShootOutcome {
  TerminalKind kind = TerminalKind::kBlewUp;
  double c = 0.0;     // curvature parameter used
  Profile profile;    // trial curve up to termination (raw gauge)
  double r_end = 0.0;
  double f_end = 0.0;
  double z_end = 0.0;  // inclination at termination
  int steps = 0;
};

struct ShootResult {
  double c = 0.0;      // critical curvature after rescaling to r0 = 1
  Profile profile;     // rescaled profile ending at (1, 0) vertically
  int iterations = 0;  // trial integrations performed
  double c_low = 0.0;  // final raw bracket (gauge of the trial height f0)
  double c_high = 0.0;
  double r0_raw = 0.0;  // touchdown radius before rescaling
};

// Second-order right-hand side of the generating-curve equation,
//   f'' = a f'/r + (f'^2 + r^{2a})((k-1)/f - (h-1) f'/r^{2a+1})
//         - C (f'^2 + r^{2a})^{3/2} / r^{2a}.
// The axis values r = 0 and f = 0 are rejected; starts use the series.
double ode_rhs(const Params& p, double c, double r, double f, double fp);

// Inclination z = f' / sqrt(r^{2a} + f'^2), in [-1, 1].
double z_substitution(const Params& p, double r, double fp);

// Integrate a single trial curve at curvature c from the series start and
// classify its terminal behavior.  The adaptive stepper swaps to a rotated
// parametrization once the slope passes -10 so vertical tangents are
// crossed without blow-up.
ShootOutcome integrate_profile(const Params& p, double c,
                               const ShootingConfig& cfg = {});

// Bisect the curvature until the trial curve closes on the axis, then
// rescale the touchdown radius to 1.  Throws bracket_error (with the sweep
// trace in the message) when no sign change is found, numerical_error on
// integrator breakdown.
ShootResult shoot(const Params& p, const ShootingConfig& cfg = {});

// Pointwise defect of the first integral of the curve equation:
//   rho(r) = z(r) - [ r^{1-h} I(r) - (C/h) r ],
//   I(r)   = integral_0^r s^{2a+h-1} (k-1) / (f sqrt(s^{2a} + f'^2)) ds,
// together with the least-squares coefficient of r^{1-h} over the window
// (an empirical estimate of the free intercept, expected to vanish).
struct ZorroResidual {
  std::vector<double> r;
  std::vector<double> rho;
  double max_abs = 0.0;
  double intercept = 0.0;
};
ZorroResidual residual_zorro(const Params& p, double c, const Profile& prof,
                             double window_lo = 0.05, double window_hi = 0.95);

// Curvature constant from the measures of a critical set: ((d-1)/d) P/V.
double mean_curvature_constant(const Params& p, double perimeter,
                               double volume);

// Closed-form critical profile for k = 1 in the r0 = 1 normalization:
// f(r) = integral over [arcsin r, pi/2] of sin^{a+1}, sampled at n nodes
// clustered quadratically toward the touchdown.
Profile closed_form_k1(const Params& p, int n);

}  // namespace iso
