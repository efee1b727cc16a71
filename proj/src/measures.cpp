#include "iso/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "iso/errors.hpp"
#include "iso/quadrature.hpp"

namespace iso {

namespace {

// Orientation of the triple (a, b, c): sign of the cross product.
int orient(const std::array<double, 2>& a, const std::array<double, 2>& b,
           const std::array<double, 2>& c) {
  const double v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  return (v > 0.0) - (v < 0.0);
}

bool on_segment(const std::array<double, 2>& a, const std::array<double, 2>& b,
                const std::array<double, 2>& p) {
  return orient(a, b, p) == 0 && std::min(a[0], b[0]) <= p[0] &&
         p[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= p[1] &&
         p[1] <= std::max(a[1], b[1]);
}

bool segments_cross(const std::array<double, 2>& a, const std::array<double, 2>& b,
                    const std::array<double, 2>& c, const std::array<double, 2>& d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
         (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
}

// Perimeter weight of one straight segment of a generating curve.
double segment_weight(const Params& p, double c_hk, double r1, double s1,
                      double r2, double s2) {
  if (r1 == 0.0 && r2 == 0.0) return 0.0;  // fold axis of the x-block
  if (s1 == 0.0 && s2 == 0.0) return 0.0;  // fold axis of the y-block
  const double dr = r2 - r1, ds = s2 - s1;
  const double a = p.alpha;
  const int h = p.h, k = p.k;
  return c_hk * integrate_adaptive(
                    [&](double t) {
                      const double r = r1 + t * dr;
                      const double s = s1 + t * ds;
                      const double len =
                          std::sqrt(ds * ds + std::pow(r, 2 * a) * dr * dr);
                      return len * std::pow(r, h - 1) * std::pow(s, k - 1);
                    },
                    0.0, 1.0, 1e-13);
}

}  // namespace

void GeneratingCurve::validate() const {
  const auto fail = [](const char* msg) {
    throw std::invalid_argument(std::string("generating curve: ") + msg);
  };
  const auto& v = vertices;
  if (v.size() < 2) fail("need at least two vertices");
  for (const auto& p : v) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || p[0] < 0.0 || p[1] < 0.0) {
      fail("vertices must lie in the closed quadrant");
    }
  }
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i] == v[i + 1]) fail("repeated consecutive vertex");
  }
  const auto on_axis = [](const std::array<double, 2>& p) {
    return p[0] == 0.0 || p[1] == 0.0;
  };
  if (!on_axis(v.front()) || !on_axis(v.back())) {
    fail("polyline must start and end on a coordinate axis");
  }
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    for (size_t j = i + 2; j + 1 < v.size(); ++j) {
      if (i == 0 && j + 2 == v.size() && v.front() == v.back()) continue;
      if (segments_cross(v[i], v[i + 1], v[j], v[j + 1])) {
        fail("polyline is self-intersecting");
      }
    }
  }
}

double perimeter_profile(const Params& params, const Profile& prof) {
  const ProfileInterp interp(prof);
  const double c = weight_constant(params);
  const double a = params.alpha;
  const int h = params.h, k = params.k;
  double total = 0.0;
  for (int panel = 0; panel < interp.panel_count(); ++panel) {
    // Panels where the profile has already collapsed to the axis carry no
    // boundary mass, even for k = 1 where f^{k-1} alone would not vanish.
    if (std::fmax(prof.f[panel], prof.f[panel + 1]) <= 0.0) continue;
    total += gauss8(
        [&](double t) {
          const auto q = interp.sample(panel, t);
          if (!std::isfinite(q.f) || !std::isfinite(q.df)) {
            throw numerical_error("perimeter_profile: non-finite integrand");
          }
          const double speed =
              std::sqrt(q.df * q.df + std::pow(q.r, 2 * a) * q.dr * q.dr);
          return speed * std::pow(q.r, h - 1) * std::pow(std::fmax(q.f, 0.0), k - 1);
        },
        0.0, 1.0);
  }
  return c * total;
}

double volume_profile(const Params& params, const Profile& prof) {
  const ProfileInterp interp(prof);
  const double c = weight_constant(params);
  const int h = params.h, k = params.k;
  double total = 0.0;
  for (int panel = 0; panel < interp.panel_count(); ++panel) {
    total += gauss8(
        [&](double t) {
          const auto q = interp.sample(panel, t);
          return std::pow(q.r, h - 1) * std::pow(std::fmax(q.f, 0.0), k) * q.dr;
        },
        0.0, 1.0);
  }
  return c / k * total;
}

double perimeter_curve(const Params& params, const GeneratingCurve& curve) {
  curve.validate();
  const double c = weight_constant(params);
  double total = 0.0;
  for (size_t i = 0; i + 1 < curve.vertices.size(); ++i) {
    const auto& a = curve.vertices[i];
    const auto& b = curve.vertices[i + 1];
    total += segment_weight(params, c, a[0], a[1], b[0], b[1]);
  }
  return total;
}

namespace {

// Weight of a vertical boundary face at radius x spanning [y.lo, y.hi].
double vface(const Params& p, double c, double x, const Interval& y) {
  if (x == 0.0) return 0.0;
  return c * std::pow(x, p.h - 1) *
         (std::pow(y.hi, p.k) - std::pow(y.lo, p.k)) / p.k;
}

// Weight of a horizontal boundary face at height y spanning [x.lo, x.hi].
double hface(const Params& p, double c, double y, const Interval& x) {
  if (y == 0.0) return 0.0;
  const double e = p.alpha + p.h;
  return c * std::pow(y, p.k - 1) * (std::pow(x.hi, e) - std::pow(x.lo, e)) / e;
}

}  // namespace

double perimeter_grid(const QuadrantGrid& grid) {
  const double c = weight_constant(grid.params);
  const BoundarySegments segs = grid.region.boundary();
  double total = 0.0;
  for (const VSeg& v : segs.vertical) total += vface(grid.params, c, v.x, v.y);
  for (const HSeg& h : segs.horizontal) total += hface(grid.params, c, h.y, h.x);
  return total;
}

double volume_grid(const QuadrantGrid& grid) {
  const Params& p = grid.params;
  const double c = weight_constant(p);
  double total = 0.0;
  for (const Rect& r : grid.region.rects()) {
    total += (std::pow(r.x.hi, p.h) - std::pow(r.x.lo, p.h)) / p.h *
             (std::pow(r.y.hi, p.k) - std::pow(r.y.lo, p.k)) / p.k;
  }
  return c * total;
}

double iso_ratio(const Params& params, double P, double V) {
  if (!(P > 0.0) || !(V > 0.0)) {
    throw std::invalid_argument("iso_ratio: P and V must be positive");
  }
  const double d = homogeneous_dimension(params);
  return std::pow(P, d) / std::pow(V, d - 1.0);
}

double snap_to_s_edge(const QuadrantGrid& grid, double t) {
  double best = grid.s_edges.front();
  for (double e : grid.s_edges) {
    if (std::fabs(e - t) < std::fabs(best - t)) best = e;
  }
  return best;
}

QuadrantGrid truncate_y(const QuadrantGrid& grid, double t) {
  const double tt = snap_to_s_edge(grid, t);
  QuadrantGrid out = grid;
  out.region = grid.region.below(tt);
  return out;
}

double slice_weight_y(const QuadrantGrid& grid, double t) {
  const double tt = snap_to_s_edge(grid, t);
  const Params& p = grid.params;
  const double c = weight_constant(p);
  const double e = p.alpha + p.h;
  double run = 0.0;
  for (const Interval& s : grid.region.slice_below(tt)) {
    run += (std::pow(s.hi, e) - std::pow(s.lo, e)) / e;
  }
  return c * std::pow(tt, p.k - 1) * run;
}

double perimeter_grid_below(const QuadrantGrid& grid, double t) {
  const double tt = snap_to_s_edge(grid, t);
  const double c = weight_constant(grid.params);
  const BoundarySegments segs = grid.region.boundary();
  double total = 0.0;
  for (const VSeg& v : segs.vertical) {
    if (v.y.lo >= tt) continue;
    total += vface(grid.params, c, v.x, {v.y.lo, std::min(v.y.hi, tt)});
  }
  for (const HSeg& h : segs.horizontal) {
    if (h.y < tt) total += hface(grid.params, c, h.y, h.x);
  }
  return total;
}

}  // namespace iso
