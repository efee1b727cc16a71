#include "iso/htype.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "iso/errors.hpp"
#include "iso/quadrature.hpp"
#include "iso/spaces.hpp"

namespace iso {

namespace {

// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
// three-term recurrence.  Orders used here are tiny, so no caching.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

}  // namespace

HTypeStructure::HTypeStructure(int h, int k, const std::vector<QEntry>& upper)
    : h_(h), k_(k) {
  if (h < 2 || h % 2 != 0)
    throw std::invalid_argument("HTypeStructure: h must be even and >= 2");
  if (k < 1) throw std::invalid_argument("HTypeStructure: k must be >= 1");
  b_.assign(k, std::vector<double>(static_cast<size_t>(h) * h, 0.0));
  for (const QEntry& e : upper) {
    if (e.layer < 1 || e.layer > k)
      throw std::invalid_argument("HTypeStructure: layer index out of range");
    if (e.row < 1 || e.col > h || e.row >= e.col)
      throw std::invalid_argument(
          "HTypeStructure: entry must satisfy 1 <= row < col <= h");
    if (!std::isfinite(e.value))
      throw std::invalid_argument("HTypeStructure: non-finite entry");
    std::vector<double>& m = b_[e.layer - 1];
    const int i = e.row - 1, j = e.col - 1;
    if (m[i * h_ + j] != 0.0)
      throw std::invalid_argument("HTypeStructure: duplicate entry");
    m[i * h_ + j] = 2.0 * e.value;
    m[j * h_ + i] = -2.0 * e.value;
  }
}

std::vector<double> HTypeStructure::kaplan_matrix(
    const std::vector<double>& y) const {
  if (static_cast<int>(y.size()) != k_)
    throw std::invalid_argument("kaplan_matrix: y must have k components");
  std::vector<double> jm(static_cast<size_t>(h_) * h_, 0.0);
  for (int l = 0; l < k_; ++l) {
    if (y[l] == 0.0) continue;
    const std::vector<double>& m = b_[l];
    for (int i = 0; i < h_; ++i)
      for (int j = 0; j < h_; ++j) jm[j * h_ + i] += y[l] * m[i * h_ + j];
  }
  return jm;
}

std::vector<double> HTypeStructure::kaplan_apply(
    const std::vector<double>& y, const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != h_)
    throw std::invalid_argument("kaplan_apply: x must have h components");
  const std::vector<double> jm = kaplan_matrix(y);
  std::vector<double> out(h_, 0.0);
  for (int r = 0; r < h_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < h_; ++c) acc += jm[r * h_ + c] * x[c];
    out[r] = acc;
  }
  return out;
}

HTypeCertificate validate_htype(const HTypeStructure& s, double tol) {
  const int h = s.h(), k = s.k();
  std::vector<std::vector<double>> js(k);
  for (int a = 0; a < k; ++a) {
    std::vector<double> e(k, 0.0);
    e[a] = 1.0;
    js[a] = s.kaplan_matrix(e);
  }
  HTypeCertificate cert;
  cert.valid = true;
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) {
      const std::vector<double>& ja = js[a];
      const std::vector<double>& jb = js[b];
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < h; ++c) {
          double acc = 0.0;
          for (int m = 0; m < h; ++m)
            acc += ja[m * h + r] * jb[m * h + c] + jb[m * h + r] * ja[m * h + c];
          const double target = (a == b && r == c) ? 2.0 : 0.0;
          const double viol = std::abs(acc - target);
          if (viol > cert.max_violation) {
            cert.max_violation = viol;
            cert.layer_a = a;
            cert.layer_b = b;
            cert.row = r;
            cert.col = c;
          }
        }
      }
    }
  }
  cert.valid = cert.max_violation <= tol;
  return cert;
}

double horizontal_normal_sq(const HTypeStructure& s,
                            const std::vector<double>& x,
                            const std::vector<double>& nx,
                            const std::vector<double>& ny) {
  if (static_cast<int>(nx.size()) != s.h() ||
      static_cast<int>(x.size()) != s.h() ||
      static_cast<int>(ny.size()) != s.k())
    throw std::invalid_argument("horizontal_normal_sq: size mismatch");
  const std::vector<double> w = s.kaplan_apply(ny, x);
  double acc = 0.0;
  for (int i = 0; i < s.h(); ++i) {
    const double c = nx[i] + w[i];
    acc += c * c;
  }
  return acc;
}

std::vector<SpherePoint> sphere_rule(int m, int polar_order,
                                     int azimuth_order) {
  if (m < 1) throw std::invalid_argument("sphere_rule: m must be >= 1");
  if (polar_order < 2 || azimuth_order < 4)
    throw std::invalid_argument("sphere_rule: order too small");
  const double pi = 3.14159265358979323846;
  std::vector<SpherePoint> rule;
  if (m == 1) {
    rule.push_back({1.0, {1.0}});
    rule.push_back({1.0, {-1.0}});
    return rule;  // total exactly 2 = 1 * omega_1
  }
  if (m == 2) {
    rule.reserve(azimuth_order);
    for (int a = 0; a < azimuth_order; ++a) {
      const double phi = 2.0 * pi * a / azimuth_order;
      rule.push_back({2.0 * pi / azimuth_order, {std::cos(phi), std::sin(phi)}});
    }
    return rule;  // total exactly 2*pi = 2 * omega_2
  }
  // Polar reduction: point (cos t, sin t * xi) with xi on the equator and
  // surface density sin^{m-2} t on [0, pi].
  std::vector<double> nodes, weights;
  gauss_legendre(polar_order, nodes, weights);
  const std::vector<SpherePoint> equator =
      sphere_rule(m - 1, polar_order, azimuth_order);
  rule.reserve(static_cast<size_t>(polar_order) * equator.size());
  double total = 0.0;
  for (int a = 0; a < polar_order; ++a) {
    const double t = 0.5 * pi * (nodes[a] + 1.0);
    const double wt = 0.5 * pi * weights[a] *
                      std::pow(std::sin(t), static_cast<double>(m - 2));
    for (const SpherePoint& q : equator) {
      SpherePoint p;
      p.weight = wt * q.weight;
      p.x.resize(m);
      p.x[0] = std::cos(t);
      for (int i = 1; i < m; ++i) p.x[i] = std::sin(t) * q.x[i - 1];
      total += p.weight;
      rule.push_back(std::move(p));
    }
  }
  // Pin the total mass to the exact sphere area so constant integrands are
  // reproduced exactly regardless of the polar order.
  const double exact = m * unit_ball_volume(m);
  const double scale = exact / total;
  for (SpherePoint& p : rule) p.weight *= scale;
  return rule;
}

double perimeter_H(const HTypeStructure& s, const Profile& prof) {
  const HTypeCertificate cert = validate_htype(s);
  if (!cert.valid)
    throw std::invalid_argument(
        "perimeter_H: structure fails the orthogonality identity (violation " +
        std::to_string(cert.max_violation) + ")");
  const int h = s.h(), k = s.k();
  prof.validate();

  // The angular factor of the integrand depends on (omega, theta) only
  // through g = |J_theta omega|^2; collapse the product rule to the distinct
  // values of g (a single bucket when the identity holds).
  const std::vector<SpherePoint> omega_rule = sphere_rule(h);
  const std::vector<SpherePoint> theta_rule = sphere_rule(k);
  std::vector<std::pair<double, double>> pairs;  // (g, weight)
  pairs.reserve(omega_rule.size() * theta_rule.size());
  for (const SpherePoint& th : theta_rule) {
    const std::vector<double> jm = s.kaplan_matrix(th.x);
    for (const SpherePoint& om : omega_rule) {
      double g = 0.0;
      for (int r = 0; r < h; ++r) {
        double acc = 0.0;
        for (int c = 0; c < h; ++c) acc += jm[r * h + c] * om.x[c];
        g += acc * acc;
      }
      pairs.emplace_back(g, th.weight * om.weight);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::pair<double, double>> buckets;
  for (const auto& [g, w] : pairs) {
    if (!buckets.empty() && g - buckets.back().first <= 1e-13 * (1.0 + g))
      buckets.back().second += w;
    else
      buckets.emplace_back(g, w);
  }

  const ProfileInterp interp(prof);
  double total = 0.0;
  for (int panel = 0; panel < interp.panel_count(); ++panel) {
    // Skip panels where the profile sits on the axis: they bound no set.
    if (std::fmax(prof.f[panel], prof.f[panel + 1]) <= 0.0) continue;
    total += gauss8(
        [&](double t) {
          const ProfileInterp::Point q = interp.sample(panel, t);
          const double radial = std::pow(q.r, h - 1) *
                                std::pow(std::fmax(q.f, 0.0), k - 1);
          double angular = 0.0;
          for (const auto& [g, w] : buckets)
            angular +=
                w * std::sqrt(q.df * q.df + q.r * q.r * q.dr * q.dr * g);
          return radial * angular;
        },
        0.0, 1.0);
  }
  if (!std::isfinite(total))
    throw numerical_error("perimeter_H: non-finite integral");
  return total;
}

}  // namespace iso
