#include "iso/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace iso {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

// Slope magnitude beyond which a panel is treated in rotated coordinates.
constexpr double kRotateThreshold = 10.0;

double hermite(double v0, double v1, double m0, double m1, double u) {
  const double u2 = u * u;
  const double u3 = u2 * u;
  return v0 * (2 * u3 - 3 * u2 + 1) + m0 * (u3 - 2 * u2 + u) +
         v1 * (3 * u2 - 2 * u3) + m1 * (u3 - u2);
}

double hermite_du(double v0, double v1, double m0, double m1, double u) {
  const double u2 = u * u;
  return v0 * (6 * u2 - 6 * u) + m0 * (3 * u2 - 4 * u + 1) +
         v1 * (6 * u - 6 * u2) + m1 * (3 * u2 - 2 * u);
}

// Fritsch-Carlson shape-preserving slopes for non-increasing data.
std::vector<double> monotone_slopes(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  std::vector<double> m(n, 0.0);
  if (n == 2) {
    m[0] = m[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return m;
  }
  std::vector<double> d(n - 1);
  for (int i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);

  auto clip = [](double slope, double secant) {
    if (secant == 0.0 || slope * secant <= 0.0) return 0.0;
    if (std::fabs(slope) > 3.0 * std::fabs(secant)) return 3.0 * secant;
    return slope;
  };

  {  // three-point endpoint estimates, clipped to the adjacent secant
    const double h0 = x[1] - x[0], h1 = x[2] - x[1];
    m[0] = clip(((2 * h0 + h1) * d[0] - h0 * d[1]) / (h0 + h1), d[0]);
    const double hm = x[n - 1] - x[n - 2], hp = x[n - 2] - x[n - 3];
    m[n - 1] =
        clip(((2 * hm + hp) * d[n - 2] - hm * d[n - 3]) / (hm + hp), d[n - 2]);
  }
  for (int i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m[i] = 0.0;
      continue;
    }
    // Weighted harmonic mean (Fritsch-Butland form): never overshoots the
    // neighbouring secants, so monotonicity of the data is preserved.
    const double w1 = 2 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
    const double w2 = (x[i + 1] - x[i]) + 2 * (x[i] - x[i - 1]);
    m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
  }
  return m;
}

}  // namespace

void Profile::validate() const {
  const auto fail = [](const std::string& msg) {
    throw std::invalid_argument("profile: " + msg);
  };
  if (r.size() < 2) fail("need at least two nodes");
  if (f.size() != r.size()) fail("radius/value length mismatch");
  if (!fp.empty() && fp.size() != r.size()) fail("slope length mismatch");
  if (!(r.front() >= 0.0)) fail("radii must be nonnegative");
  const double slack = 1e-12 * (1.0 + std::fabs(f.front()));
  for (size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(f[i])) fail("non-finite node");
    if (f[i] < -slack) fail("negative value");
    if (i > 0) {
      if (!(r[i] > r[i - 1])) fail("radii must be strictly increasing");
      if (f[i] > f[i - 1] + slack) fail("values must be non-increasing");
    }
  }
  for (size_t i = 0; i < fp.size(); ++i) {
    if (std::isfinite(fp[i])) {
      if (fp[i] > 0.0) fail("slopes must be nonpositive");
    } else if (!(fp[i] < 0.0 && i + 1 == fp.size())) {
      // -inf is the vertical-tangent marker and may appear only at the end.
      fail("non-finite slope away from the outer radius");
    }
  }
}

ProfileInterp::ProfileInterp(const Profile& prof) {
  prof.validate();
  r_ = prof.r;
  f_ = prof.f;
  slope_ = prof.has_slopes() ? prof.fp : monotone_slopes(r_, f_);

  const int n = static_cast<int>(r_.size());
  rho_.resize(n);
  g_.resize(n);
  gp_.resize(n);
  for (int i = 0; i < n; ++i) {
    rho_[i] = (r_[i] - f_[i]) / kSqrt2;
    g_[i] = (r_[i] + f_[i]) / kSqrt2;
    // dg/drho = (1 + f')/(1 - f'): maps f' in [-inf, 0] onto [-1, 1].
    gp_[i] = std::isfinite(slope_[i]) ? (1.0 + slope_[i]) / (1.0 - slope_[i])
                                      : -1.0;
  }
  kind_.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const bool steep = !(std::fabs(slope_[i]) <= kRotateThreshold) ||
                       !(std::fabs(slope_[i + 1]) <= kRotateThreshold);
    kind_[i] = steep ? PanelKind::kRotated : PanelKind::kGraph;
  }
}

ProfileInterp::Point ProfileInterp::sample_graph(int i, double t) const {
  const double dr = r_[i + 1] - r_[i];
  const double m0 = slope_[i] * dr, m1 = slope_[i + 1] * dr;
  Point p;
  p.r = r_[i] + t * dr;
  p.f = hermite(f_[i], f_[i + 1], m0, m1, t);
  p.dr = dr;
  p.df = hermite_du(f_[i], f_[i + 1], m0, m1, t);
  return p;
}

ProfileInterp::Point ProfileInterp::sample_rotated(int i, double t) const {
  const double drho = rho_[i + 1] - rho_[i];
  const double m0 = gp_[i] * drho, m1 = gp_[i + 1] * drho;
  const double g = hermite(g_[i], g_[i + 1], m0, m1, t);
  const double dg = hermite_du(g_[i], g_[i + 1], m0, m1, t);
  const double rho = rho_[i] + t * drho;
  Point p;
  p.r = (g + rho) / kSqrt2;
  p.f = (g - rho) / kSqrt2;
  p.dr = (dg + drho) / kSqrt2;
  p.df = (dg - drho) / kSqrt2;
  return p;
}

ProfileInterp::Point ProfileInterp::sample(int panel, double t) const {
  return kind_[panel] == PanelKind::kGraph ? sample_graph(panel, t)
                                           : sample_rotated(panel, t);
}

double ProfileInterp::value_at(double r) const {
  if (!(r >= r_.front() && r <= r_.back())) {
    throw std::invalid_argument("profile interpolation: radius out of range");
  }
  const int n = static_cast<int>(r_.size());
  int i = static_cast<int>(std::upper_bound(r_.begin(), r_.end(), r) -
                           r_.begin()) -
          1;
  i = std::clamp(i, 0, n - 2);
  if (kind_[i] == PanelKind::kGraph) {
    const double dr = r_[i + 1] - r_[i];
    return hermite(f_[i], f_[i + 1], slope_[i] * dr, slope_[i + 1] * dr,
                   (r - r_[i]) / dr);
  }
  // Rotated panel: r(t) is increasing between the nodes; invert by bisection.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sample_rotated(i, mid).r < r ? lo : hi) = mid;
  }
  return sample_rotated(i, 0.5 * (lo + hi)).f;
}

}  // namespace iso
