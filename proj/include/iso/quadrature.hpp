#pragma once

#include <cmath>

#include "iso/errors.hpp"

namespace iso {

// Fixed 8-point Gauss-Legendre rule on [a, b].  Exact for polynomials of
// degree <= 15; the per-panel workhorse for all profile integrals.
template <class F>
double gauss8(F&& f, double a, double b) {
  // Abscissae (positive half) and weights for [-1, 1].
  static constexpr double kX[4] = {
      0.1834346424956498049394761,
      0.5255324099163289858177390,
      0.7966664774136267395915539,
      0.9602898564975362316835609,
  };
  static constexpr double kW[4] = {
      0.3626837833783619829651504,
      0.3137066458778872873379622,
      0.2223810344533744705443560,
      0.1012285362903762591525314,
  };
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double dx = half * kX[i];
    sum += kW[i] * (f(mid - dx) + f(mid + dx));
  }
  return half * sum;
}

namespace detail {

struct Gk15Result {
  double value;  // 15-point Kronrod estimate
  double error;  // |Kronrod - embedded 7-point Gauss|
};

// One Gauss-Kronrod 7/15 evaluation on [a, b].
template <class F>
Gk15Result gk15(F& f, double a, double b) {
  // Kronrod abscissae (positive half, descending); odd indices are the
  // embedded Gauss-7 nodes.
  static constexpr double kXgk[8] = {
      0.9914553711208126392068547, 0.9491079123427585245261897,
      0.8648644233597690727897128, 0.7415311855993944398638648,
      0.5860872354676911302941448, 0.4058451513773971669066064,
      0.2077849550078984676006894, 0.0,
  };
  static constexpr double kWgk[8] = {
      0.0229353220105292249637320, 0.0630920926299785532907007,
      0.1047900103222501838398763, 0.1406532597155259187451896,
      0.1690047266392679028265834, 0.1903505780647854099132564,
      0.2044329400752988924141620, 0.2094821410847278280129992,
  };
  static constexpr double kWg[4] = {
      0.1294849661688696932706114, 0.2797053914892766679014678,
      0.3818300505051189449503698, 0.4179591836734693877551020,
  };
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_mid = f(mid);
  double kronrod = kWgk[7] * f_mid;
  double gauss = kWg[3] * f_mid;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kWgk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {kronrod, std::fabs(kronrod - gauss)};
}

template <class F>
double gk_adapt(F& f, double a, double b, const Gk15Result& whole, double rel_tol,
                double abs_tol, int depth) {
  if (!std::isfinite(whole.value)) {
    throw numerical_error("adaptive quadrature: non-finite integrand");
  }
  const double tol = std::fmax(abs_tol, rel_tol * std::fabs(whole.value));
  if (whole.error <= tol || depth >= 48) {
    return whole.value;
  }
  const double mid = 0.5 * (a + b);
  const Gk15Result left = gk15(f, a, mid);
  const Gk15Result right = gk15(f, mid, b);
  return gk_adapt(f, a, mid, left, rel_tol, abs_tol, depth + 1) +
         gk_adapt(f, mid, b, right, rel_tol, abs_tol, depth + 1);
}

}  // namespace detail

// Adaptive Gauss-Kronrod 7/15 quadrature with recursive bisection.  Accepts
// a segment once the embedded error estimate drops below
// max(abs_tol, rel_tol*|segment value|); integrable endpoint singularities
// are resolved by the bisection cascade.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-12,
                          double abs_tol = 0.0) {
  if (a == b) return 0.0;
  const detail::Gk15Result whole = detail::gk15(f, a, b);
  return detail::gk_adapt(f, a, b, whole, rel_tol, abs_tol, 0);
}

}  // namespace iso
