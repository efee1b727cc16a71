#pragma once

#include <vector>

namespace iso {

// Sampled radial profile f(r) of a symmetrised set: radii strictly
// increasing, values nonnegative and non-increasing.  Slopes are optional;
// when present, the final entry may be -infinity, marking a vertical
// tangent at the outer radius.
struct Profile {
  std::vector<double> r;
  std::vector<double> f;
  std::vector<double> fp;  // empty, or one slope per node

  double r0() const { return r.back(); }
  bool has_slopes() const { return !fp.empty(); }

  // Throws std::invalid_argument on structural violations: size mismatch,
  // non-increasing radii, increasing/non-finite values, positive slopes.
  void validate() const;
};

// Piecewise-cubic view of a profile shared by all quadrature routines.
// Panels with moderate slope are Hermite cubics of f in r; panels that
// reach |f'| > 10 (or the vertical marker) are re-parameterised as Hermite
// cubics in the rotated abscissa (r - f)/sqrt(2), which stays regular
// through a vertical tangent.
class ProfileInterp {
 public:
  explicit ProfileInterp(const Profile& prof);

  struct Point {
    double r, f;    // position on the curve
    double dr, df;  // derivatives with respect to the panel parameter
  };

  int panel_count() const { return static_cast<int>(kind_.size()); }

  // Samples panel i at t in [0, 1]; t = 0 and t = 1 land on the nodes.
  Point sample(int panel, double t) const;

  // Evaluates f at a radius within the sampled range; rotated panels are
  // inverted by bisection.
  double value_at(double r) const;

  // Slope at node i (monotone-cubic fill-in when the profile carried no
  // slopes); may be -infinity at the last node.
  double node_slope(int i) const { return slope_[i]; }

 private:
  enum class PanelKind { kGraph, kRotated };

  std::vector<double> r_, f_, slope_;
  std::vector<PanelKind> kind_;
  std::vector<double> rho_, g_, gp_;  // rotated-frame node data

  Point sample_graph(int i, double t) const;
  Point sample_rotated(int i, double t) const;
};

}  // namespace iso
