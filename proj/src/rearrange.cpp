#include "iso/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "iso/errors.hpp"
#include "iso/measures.hpp"

namespace iso {

namespace {

double psi_x(double alpha, double x) {
  return std::copysign(std::pow(std::abs(x), alpha + 1.0) / (alpha + 1.0), x);
}

double phi_x(double alpha, double xi) {
  return std::copysign(std::pow((alpha + 1.0) * std::abs(xi), 1.0 / (alpha + 1.0)),
                       xi);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("flattening: alpha must be positive");
}

double power_sum(const std::vector<Interval>& spans, double expo) {
  double acc = 0.0;
  for (const Interval& sp : spans)
    acc += std::pow(sp.hi, expo) - std::pow(sp.lo, expo);
  return acc;
}

// Rearranges every column of the region to (0, rho) preserving the
// sigma^k shell measure; shared by both carriers.
StairRegion schwartz_columns(const StairRegion& region, int k) {
  StairRegion cols = region.transposed();
  for (Band& band : cols.bands) {
    const double mass = power_sum(band.spans, static_cast<double>(k));
    const double rho = std::pow(mass, 1.0 / k);
    band.spans = {Interval{0.0, rho}};
  }
  cols.normalize();
  return cols.transposed();
}

}  // namespace

std::array<double, 2> psi_point(double alpha,
                                const std::array<double, 2>& xy) {
  check_alpha(alpha);
  return {psi_x(alpha, xy[0]), xy[1]};
}

std::array<double, 2> phi_point(double alpha,
                                const std::array<double, 2>& xieta) {
  check_alpha(alpha);
  return {phi_x(alpha, xieta[0]), xieta[1]};
}

double mu_interval(double alpha, double xi_lo, double xi_hi) {
  check_alpha(alpha);
  return phi_x(alpha, xi_hi) - phi_x(alpha, xi_lo);
}

double mu_volume(const HalfPlaneGrid& grid) {
  const double wk = unit_ball_volume(grid.params.k);
  double acc = 0.0;
  for (const Band& band : grid.region.bands) {
    const double shell = wk * (std::pow(band.extent.hi, grid.params.k) -
                               std::pow(band.extent.lo, grid.params.k));
    double width = 0.0;
    for (const Interval& sp : band.spans)
      width += mu_interval(grid.params.alpha, sp.lo, sp.hi);
    acc += shell * width;
  }
  return acc;
}

double perimeter_halfplane(const HalfPlaneGrid& grid) {
  const int k = grid.params.k;
  const double wk = unit_ball_volume(k);
  const BoundarySegments segs = grid.region.boundary();
  double acc = 0.0;
  for (const VSeg& v : segs.vertical)
    acc += wk * (std::pow(v.y.hi, k) - std::pow(v.y.lo, k));
  for (const HSeg& hseg : segs.horizontal) {
    if (hseg.y == 0.0) continue;  // rotation fold
    acc += k * wk * std::pow(hseg.y, k - 1) * hseg.x.length();
  }
  if (!std::isfinite(acc))
    throw numerical_error("perimeter_halfplane: non-finite result");
  return acc;
}

HalfPlaneGrid flatten_grid(const QuadrantGrid& grid) {
  if (grid.params.h != 1)
    throw std::invalid_argument("flatten_grid: defined for h = 1 only");
  const double a = grid.params.alpha;
  HalfPlaneGrid out;
  out.params = grid.params;
  out.sigma_edges = grid.s_edges;
  out.xi_edges.reserve(2 * grid.r_edges.size());
  for (auto it = grid.r_edges.rbegin(); it != grid.r_edges.rend(); ++it)
    out.xi_edges.push_back(-psi_x(a, *it));
  for (double r : grid.r_edges) out.xi_edges.push_back(psi_x(a, r));
  std::sort(out.xi_edges.begin(), out.xi_edges.end());
  out.xi_edges.erase(
      std::unique(out.xi_edges.begin(), out.xi_edges.end()),
      out.xi_edges.end());

  out.region = grid.region;
  for (Band& band : out.region.bands) {
    std::vector<Interval> spans;
    spans.reserve(2 * band.spans.size());
    for (const Interval& sp : band.spans) {
      const double lo = psi_x(a, sp.lo), hi = psi_x(a, sp.hi);
      spans.push_back(Interval{-hi, -lo});
      spans.push_back(Interval{lo, hi});
    }
    band.spans = std::move(spans);
  }
  out.region.normalize();  // merges the mirror pairs that meet at xi = 0
  return out;
}

QuadrantGrid fold_grid(const HalfPlaneGrid& grid) {
  if (grid.params.h != 1)
    throw std::invalid_argument("fold_grid: defined for h = 1 only");
  const double a = grid.params.alpha;
  QuadrantGrid out;
  out.params = grid.params;
  out.s_edges = grid.sigma_edges;
  out.r_edges.clear();
  for (double xi : grid.xi_edges)
    if (xi >= 0.0) out.r_edges.push_back(phi_x(a, xi) + 0.0);  // -0 -> +0
  if (out.r_edges.empty() || out.r_edges.front() != 0.0)
    out.r_edges.insert(out.r_edges.begin(), 0.0);
  std::sort(out.r_edges.begin(), out.r_edges.end());
  out.r_edges.erase(std::unique(out.r_edges.begin(), out.r_edges.end()),
                    out.r_edges.end());

  out.region = grid.region;
  for (Band& band : out.region.bands) {
    std::vector<Interval> spans;
    for (const Interval& sp : band.spans) {
      if (sp.hi <= 0.0) {
        // must be the mirror of a positive span; checked below
        continue;
      }
      if (sp.lo < 0.0) {
        if (sp.lo != -sp.hi)
          throw numerical_error(
              "fold_grid: span across 0 is not centred; region is not "
              "xi-symmetric");
        spans.push_back(Interval{0.0, phi_x(a, sp.hi)});
      } else {
        const bool mirrored =
            std::any_of(band.spans.begin(), band.spans.end(),
                        [&](const Interval& q) {
                          return q.lo == -sp.hi && q.hi == -sp.lo;
                        });
        if (!mirrored)
          throw numerical_error(
              "fold_grid: positive span without exact mirror; region is not "
              "xi-symmetric");
        spans.push_back(Interval{phi_x(a, sp.lo), phi_x(a, sp.hi)});
      }
    }
    // verify the negative side mirrors the positive side exactly
    for (const Interval& sp : band.spans) {
      if (sp.hi > 0.0) continue;
      const bool mirrored =
          std::any_of(band.spans.begin(), band.spans.end(),
                      [&](const Interval& q) {
                        return q.lo == -sp.hi && q.hi == -sp.lo;
                      });
      if (!mirrored)
        throw numerical_error(
            "fold_grid: negative span without exact mirror; region is not "
            "xi-symmetric");
    }
    band.spans = std::move(spans);
  }
  out.region.normalize();
  return out;
}

HalfPlaneGrid steiner_xi(const HalfPlaneGrid& grid) {
  HalfPlaneGrid out = grid;
  for (Band& band : out.region.bands) {
    double len = 0.0;
    for (const Interval& sp : band.spans) len += sp.length();
    const double half = 0.5 * len;
    band.spans = {Interval{-half, half}};
  }
  out.region.normalize();
  std::vector<double> sym;
  sym.reserve(2 * grid.xi_edges.size());
  for (double xi : grid.xi_edges) {
    sym.push_back(xi);
    sym.push_back(-xi);
  }
  std::sort(sym.begin(), sym.end());
  sym.erase(std::unique(sym.begin(), sym.end()), sym.end());
  out.xi_edges = std::move(sym);
  return out;
}

HalfPlaneGrid schwartz_sigma(const HalfPlaneGrid& grid) {
  HalfPlaneGrid out = grid;
  out.region = schwartz_columns(grid.region, grid.params.k);
  return out;
}

QuadrantGrid schwartz_sigma(const QuadrantGrid& grid) {
  QuadrantGrid out = grid;
  out.region = schwartz_columns(grid.region, grid.params.k);
  return out;
}

QuadrantGrid radial_rearrange_r(const QuadrantGrid& grid) {
  const double expo = grid.params.h + grid.params.alpha;
  QuadrantGrid out = grid;
  for (Band& band : out.region.bands) {
    const double mass = power_sum(band.spans, expo);
    const double g = std::pow(mass, 1.0 / expo);
    band.spans = {Interval{0.0, g}};
  }
  out.region.normalize();
  return out;
}

QuadrantGrid dilate_grid(const QuadrantGrid& grid, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("dilate_grid: lambda must be positive");
  const double mu = std::pow(lambda, 1.0 + grid.params.alpha);
  QuadrantGrid out = grid;
  for (double& r : out.r_edges) r *= lambda;
  for (double& s : out.s_edges) s *= mu;
  for (Band& band : out.region.bands) {
    band.extent.lo *= mu;
    band.extent.hi *= mu;
    for (Interval& sp : band.spans) {
      sp.lo *= lambda;
      sp.hi *= lambda;
    }
  }
  return out;
}

RearrangeResult rearrange_full(const QuadrantGrid& grid) {
  const double v_in = volume_grid(grid);
  if (!(v_in > 0.0) || !std::isfinite(v_in))
    throw std::invalid_argument(
        "rearrange_full: input volume must be positive and finite");

  RearrangeResult res;
  res.epsilon_grid = epsilon_grid(grid);
  res.trace.push_back({"input", perimeter_grid(grid), v_in});

  QuadrantGrid q;
  if (grid.params.h == 1) {
    HalfPlaneGrid hp = flatten_grid(grid);
    hp = steiner_xi(hp);
    res.trace.push_back({"steiner_xi", perimeter_halfplane(hp),
                         mu_volume(hp)});
    hp = schwartz_sigma(hp);
    res.trace.push_back({"schwartz_sigma", perimeter_halfplane(hp),
                         mu_volume(hp)});
    q = fold_grid(hp);
  } else {
    q = radial_rearrange_r(grid);
    res.trace.push_back(
        {"radial_rearrange_r", perimeter_grid(q), volume_grid(q)});
    q = schwartz_sigma(q);
    res.trace.push_back({"schwartz_sigma", perimeter_grid(q), volume_grid(q)});
  }

  const double v_now = volume_grid(q);
  const double d = homogeneous_dimension(grid.params);
  const double lambda = std::pow(v_in / v_now, 1.0 / d);
  q = dilate_grid(q, lambda);
  res.trace.push_back({"dilate", perimeter_grid(q), volume_grid(q)});
  res.grid = std::move(q);
  return res;
}

}  // namespace iso
