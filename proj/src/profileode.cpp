#include "iso/profileode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "iso/errors.hpp"
#include "iso/quadrature.hpp"

namespace iso {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) embedded pair on a state of at most 3 components.
// The right-hand side returns false when asked to evaluate outside its
// domain; the step is then rejected and retried shorter.
// ---------------------------------------------------------------------------

using State = std::array<double, 3>;

struct StepResult {
  State y{};    // fifth-order end state
  double err;   // scaled error norm; accept when <= 1
  bool finite;  // all stages evaluated cleanly
};

template <class Rhs>
StepResult dp5_step(const Rhs& rhs, int n, double t, const State& y0, double h,
                    const State& atol, double rtol) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  StepResult res;
  res.err = kInf;
  res.finite = false;

  State k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{};
  auto eval = [&](double frac, const State& y, State& k) {
    if (!rhs(t + frac * h, y, k)) return false;
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(k[i])) return false;
    return true;
  };

  if (!eval(0.0, y0, k1)) return res;
  for (int i = 0; i < n; ++i) ytmp[i] = y0[i] + h * a21 * k1[i];
  if (!eval(1.0 / 5, ytmp, k2)) return res;
  for (int i = 0; i < n; ++i)
    ytmp[i] = y0[i] + h * (a31 * k1[i] + a32 * k2[i]);
  if (!eval(3.0 / 10, ytmp, k3)) return res;
  for (int i = 0; i < n; ++i)
    ytmp[i] = y0[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  if (!eval(4.0 / 5, ytmp, k4)) return res;
  for (int i = 0; i < n; ++i)
    ytmp[i] =
        y0[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  if (!eval(8.0 / 9, ytmp, k5)) return res;
  for (int i = 0; i < n; ++i)
    ytmp[i] = y0[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
  if (!eval(1.0, ytmp, k6)) return res;
  for (int i = 0; i < n; ++i)
    res.y[i] = y0[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
  if (!eval(1.0, res.y, k7)) return res;

  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                          e6 * k6[i] + e7 * k7[i]);
    const double scale =
        atol[i] + rtol * std::max(std::abs(y0[i]), std::abs(res.y[i]));
    acc += (e / scale) * (e / scale);
  }
  res.err = std::sqrt(acc / n);
  res.finite = std::isfinite(res.err);
  return res;
}

// ---------------------------------------------------------------------------
// The two charts of the curve equation.
//
// Chart A follows the graph (r, f(r)) through the state (f, z) with the
// inclination z = f'/sqrt(r^{2a} + f'^2); it is regular while the curve is
// moderately sloped.  Chart B follows the 45-degree-rotated graph with
// state (r, s, p), independent variable rho = (r - s)/sqrt(2) and rotated
// slope p = (1 + f')/(1 - f'); it is regular straight through vertical
// tangents (p = -1) and is used once f' passes -10.
// ---------------------------------------------------------------------------

struct ChartA {
  int h, k;
  double alpha, c;
  bool operator()(double r, const State& y, State& dy) const {
    const double f = y[0], z = y[1];
    const double omz = 1.0 - z * z;
    if (r <= 0.0 || omz <= 0.0) return false;
    if (k > 1 && f <= 0.0) return false;
    const double ra = std::pow(r, alpha);
    const double root = std::sqrt(omz);
    dy[0] = z * ra / root;
    dy[1] = (k - 1) * ra * root / f - c - (h - 1) * z / r;
    dy[2] = 0.0;
    return true;
  }
};

struct ChartB {
  int h, k;
  double alpha, c;
  bool operator()(double /*rho*/, const State& y, State& dy) const {
    const double r = y[0], s = y[1], p = y[2];
    if (r <= 0.0) return false;
    if (k > 1 && s <= 0.0) return false;
    const double r2a = std::pow(r, 2.0 * alpha);
    const double pm = p - 1.0, pq = p + 1.0;
    const double m = pm * pm + r2a * pq * pq;
    dy[0] = pq / kSqrt2;
    dy[1] = pm / kSqrt2;
    double acc = -c * m * std::sqrt(m) / r2a;
    acc += alpha * pm * pq * pq / r;
    acc -= (h - 1) * m * pm / (r2a * r);
    if (k > 1) acc += (k - 1) * m * pq / s;
    dy[2] = acc / (2.0 * kSqrt2);
    return true;
  }
};

double chart_b_z(const State& y, double alpha) {
  const double r2a = std::pow(y[0], 2.0 * alpha);
  const double pm = y[2] - 1.0, pq = y[2] + 1.0;
  return pm / std::sqrt(pm * pm + r2a * pq * pq);
}

// Identifier of the step event that ended (or re-charted) a trajectory.
enum class StopId {
  kSwitch,   // chart A -> chart B handover at slope -10
  kFloorA,   // f reached the floor while moderately sloped
  kLiftA,    // inclination returned to zero
  kFloorB,   // s reached the floor in the rotated chart
  kPlunge,   // rotated slope fell past -30 (deep back-swing)
  kRmin,     // back-swing returned to the axis r = 0
  kLiftB,    // rotated slope reached +1 (slope zero) after steepening
  kCap,      // radius exceeded the runaway cap
  kVertical, // p crossed -1 (vertical moment; closing pass only)
};

struct Trial {
  TerminalKind kind = TerminalKind::kBlewUp;
  StopId stop = StopId::kCap;
  bool large_side = false;  // curvature too large (swung back) at this c
  double r_end = 0.0, f_end = 0.0, z_end = 0.0, p_end = 1.0;
  Profile prof;
  int steps = 0;
};

struct EventSpec {
  StopId id;
  double theta;  // location of the trigger within the step, in (0, 1]
  State y;       // state at the trigger
  double t;
};

void check_config(const ShootingConfig& cfg) {
  if (!(cfg.f0 > 0.0) || !std::isfinite(cfg.f0))
    throw std::invalid_argument("shooting: f0 must be positive");
  if (!(cfg.tol_step > 0.0) || cfg.tol_step > 0.1)
    throw std::invalid_argument("shooting: tol_step out of range");
  if (cfg.max_steps < 100 || cfg.max_bisect < 4)
    throw std::invalid_argument("shooting: budgets too small");
}

// Integrates one trial curve.  `dense` collects the accepted nodes into a
// Profile; `stop_at_vertical` arms the p = -1 event used by the closing
// pass of the shooter.
Trial run_trial(const Params& par, double c, const ShootingConfig& cfg,
                bool dense, bool stop_at_vertical) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("shooting: curvature must be positive");
  check_config(cfg);

  const double a = par.alpha;
  const double f0 = cfg.f0;
  const double r_scale =
      std::pow(f0 * par.h * (a + 2.0) / c, 1.0 / (a + 2.0));
  const double eps = 1e-6 * r_scale;
  const double floor_f = 1e-8 * f0;
  const double r_cap = cfg.r_cap > 0.0 ? cfg.r_cap : 50.0 * r_scale;
  const double r_min = 1e-10 * r_scale;
  // Dense passes cap the step so the sampled profile's accuracy follows the
  // step tolerance at the method's fifth order (cap ~ tol^{1/5}); bisection
  // trials only need the terminal classification and keep a coarse cap.
  const double h_max =
      dense ? std::clamp(0.4 * std::pow(cfg.tol_step, 0.2), 1e-4, 1.0 / 16) *
                  r_scale
            : r_scale / 16;
  const double h_min = 1e-15 * r_scale;

  Trial trial;
  auto push = [&](double r, double f, double fp) {
    if (!dense) return;
    Profile& prof = trial.prof;
    if (!prof.r.empty() && (r <= prof.r.back() + 1e-12 * r_scale ||
                            f >= prof.f.back() - 1e-15 * f0))
      return;
    prof.r.push_back(r);
    prof.f.push_back(f);
    prof.fp.push_back(fp);
  };
  push(0.0, f0, 0.0);

  const ChartA fa{par.h, par.k, a, c};
  const ChartB fb{par.h, par.k, a, c};

  // Series start: f = f0 - (C/(h(a+2))) r^{a+2}, f' = -(C/h) r^{a+1}.
  const double fp_eps = -(c / par.h) * std::pow(eps, a + 1.0);
  State y{f0 - c / (par.h * (a + 2.0)) * std::pow(eps, a + 2.0),
          fp_eps / std::sqrt(std::pow(eps, 2.0 * a) + fp_eps * fp_eps), 0.0};
  double t = eps;
  push(t, y[0], fp_eps);

  const State atol_a{1e-13 * f0, 1e-13, 1e-13};
  const State atol_b{1e-13 * r_scale, 1e-13 * f0, 1e-13};
  const double rtol = cfg.tol_step;

  bool in_a = true;
  double h = 1e-3 * r_scale;
  int steps = 0;

  // Locates the earliest trigger of `g` within an accepted step by
  // re-stepping from the step start with a shrinking fraction.
  auto locate = [&](auto& rhs, int n, const State& y0, double t0, double hh,
                    auto&& g, StopId id, const State& atol) -> EventSpec {
    double lo = 0.0, hi = 1.0;
    State yhi;
    for (int it = 0; it < 60; ++it) {
      const double midf = 0.5 * (lo + hi);
      const StepResult sub = dp5_step(rhs, n, t0, y0, midf * hh, atol, rtol);
      if (!sub.finite || g(sub.y, t0 + midf * hh) <= 0.0) {
        hi = midf;
      } else {
        lo = midf;
      }
    }
    const StepResult sub = dp5_step(rhs, n, t0, y0, hi * hh, atol, rtol);
    yhi = sub.finite ? sub.y : y0;
    return EventSpec{id, hi, yhi, t0 + hi * hh};
  };

  auto finish_a = [&](StopId id, double r, const State& yy) {
    trial.stop = id;
    trial.r_end = r;
    trial.f_end = yy[0];
    trial.z_end = yy[1];
    trial.p_end = 1.0;  // moderately sloped: small-curvature side
  };
  auto finish_b = [&](StopId id, const State& yy) {
    trial.stop = id;
    trial.r_end = yy[0];
    trial.f_end = yy[1];
    trial.z_end = chart_b_z(yy, a);
    trial.p_end = yy[2];
  };

  bool done = false;
  while (!done) {
    if (h > h_max) h = h_max;
    if (h < h_min)
      throw numerical_error("shooting: step size underflow at c=" +
                            std::to_string(c));
    StepResult st;
    if (in_a)
      st = dp5_step(fa, 2, t, y, h, atol_a, rtol);
    else
      st = dp5_step(fb, 3, t, y, h, atol_b, rtol);
    if (!st.finite) {
      h *= 0.5;
      continue;
    }
    if (st.err > 1.0) {
      h *= std::clamp(0.9 * std::pow(st.err, -0.2), 0.2, 0.9);
      continue;
    }
    if (++steps > cfg.max_steps)
      throw numerical_error("shooting: step budget exhausted at c=" +
                            std::to_string(c));

    if (in_a) {
      const double r1 = t + h;
      std::vector<EventSpec> hits;
      auto g_floor = [&](const State& s, double) { return s[0] - floor_f; };
      auto g_lift = [&](const State& s, double) { return -s[1]; };
      auto g_switch = [&](const State& s, double rr) {
        return s[1] + 10.0 / std::sqrt(100.0 + std::pow(rr, 2.0 * a));
      };
      if (g_floor(st.y, r1) <= 0.0)
        hits.push_back(locate(fa, 2, y, t, h, g_floor, StopId::kFloorA, atol_a));
      if (g_lift(st.y, r1) <= 0.0)
        hits.push_back(locate(fa, 2, y, t, h, g_lift, StopId::kLiftA, atol_a));
      if (g_switch(st.y, r1) <= 0.0)
        hits.push_back(
            locate(fa, 2, y, t, h, g_switch, StopId::kSwitch, atol_a));
      if (r1 >= r_cap) hits.push_back(EventSpec{StopId::kCap, 1.0, st.y, r1});

      if (!hits.empty()) {
        const EventSpec& ev = *std::min_element(
            hits.begin(), hits.end(),
            [](const EventSpec& x, const EventSpec& y2) {
              return x.theta < y2.theta;
            });
        if (ev.id == StopId::kSwitch) {
          const double r = ev.t, f = ev.y[0], z = ev.y[1];
          const double ra = std::pow(r, a);
          const double fp = z * ra / std::sqrt(std::max(1e-300, 1.0 - z * z));
          push(r, f, fp);
          y = State{r, f, (1.0 + fp) / (1.0 - fp)};
          t = (r - f) / kSqrt2;
          in_a = false;
          h = 1e-3 * r_scale;
          continue;
        }
        finish_a(ev.id, ev.t, ev.y);
        done = true;
        continue;
      }
      t = r1;
      y = st.y;
      {
        const double ra = std::pow(t, a);
        const double fp =
            y[1] * ra / std::sqrt(std::max(1e-300, 1.0 - y[1] * y[1]));
        push(t, y[0], fp);
      }
    } else {
      const double rho1 = t + h;
      std::vector<EventSpec> hits;
      auto g_floor = [&](const State& s, double) { return s[1] - floor_f; };
      auto g_plunge = [&](const State& s, double) { return s[2] + 30.0; };
      auto g_rmin = [&](const State& s, double) { return s[0] - r_min; };
      auto g_lift = [&](const State& s, double) { return 1.0 - s[2]; };
      auto g_cap = [&](const State& s, double) { return r_cap - s[0]; };
      auto g_vert = [&](const State& s, double) { return s[2] + 1.0; };
      if (g_floor(st.y, rho1) <= 0.0)
        hits.push_back(
            locate(fb, 3, y, t, h, g_floor, StopId::kFloorB, atol_b));
      if (g_plunge(st.y, rho1) <= 0.0)
        hits.push_back(
            locate(fb, 3, y, t, h, g_plunge, StopId::kPlunge, atol_b));
      if (g_rmin(st.y, rho1) <= 0.0)
        hits.push_back(locate(fb, 3, y, t, h, g_rmin, StopId::kRmin, atol_b));
      if (g_lift(st.y, rho1) <= 0.0)
        hits.push_back(locate(fb, 3, y, t, h, g_lift, StopId::kLiftB, atol_b));
      if (g_cap(st.y, rho1) <= 0.0)
        hits.push_back(locate(fb, 3, y, t, h, g_cap, StopId::kCap, atol_b));
      if (stop_at_vertical && g_vert(st.y, rho1) <= 0.0)
        hits.push_back(
            locate(fb, 3, y, t, h, g_vert, StopId::kVertical, atol_b));

      if (!hits.empty()) {
        const EventSpec& ev = *std::min_element(
            hits.begin(), hits.end(),
            [](const EventSpec& x, const EventSpec& y2) {
              return x.theta < y2.theta;
            });
        // Resolve the approach to the terminal event with geometric
        // sub-steps so the sampled slopes keep climbing through the
        // near-vertical regime instead of stopping at the last full step.
        if (dense && ev.theta > 0.0) {
          for (int j = 1; j <= 6; ++j) {
            const double frac = ev.theta * (1.0 - std::ldexp(1.0, -2 * j));
            if (!(frac > 0.0)) continue;
            const StepResult sub = dp5_step(fb, 3, t, y, frac * h, atol_b, rtol);
            if (!sub.finite) continue;
            const double pq = sub.y[2] + 1.0;
            const double fp = pq > 1e-14 ? (sub.y[2] - 1.0) / pq : -kInf;
            push(sub.y[0], sub.y[1], fp);
          }
        }
        finish_b(ev.id, ev.y);
        done = true;
        continue;
      }
      t = rho1;
      y = st.y;
      {
        const double pq = y[2] + 1.0;
        const double fp = pq > 1e-14 ? (y[2] - 1.0) / pq : -kInf;
        push(y[0], y[1], fp);
      }
    }
    h *= std::clamp(0.9 * std::pow(std::max(st.err, 1e-10), -0.2), 0.2, 5.0);
  }

  trial.steps = steps;

  // Classification.  The touchdown acceptance (tiny height and inclination
  // within 1e-6 of -1) is checked first; the remaining kinds follow from
  // the event that fired.
  const bool tiny_f = trial.f_end <= floor_f * (1.0 + 1e-9);
  const bool vertical_z = trial.z_end <= -1.0 + 1e-6;
  if (tiny_f && vertical_z && trial.stop != StopId::kCap) {
    trial.kind = TerminalKind::kHitZeroVerticalTangent;
  } else {
    switch (trial.stop) {
      case StopId::kFloorA:
      case StopId::kLiftA:
      case StopId::kLiftB:
        trial.kind = TerminalKind::kFlattened;
        break;
      case StopId::kFloorB:
        trial.kind = trial.p_end <= -1.0 ? TerminalKind::kCrossedZeroEarly
                                         : TerminalKind::kFlattened;
        break;
      case StopId::kPlunge:
      case StopId::kRmin:
      case StopId::kVertical:
        trial.kind = TerminalKind::kCrossedZeroEarly;
        break;
      case StopId::kCap:
        trial.kind = TerminalKind::kBlewUp;
        break;
      case StopId::kSwitch:
        throw numerical_error("shooting: handover left unresolved");
    }
  }
  trial.large_side = trial.p_end < -1.0 ||
                     trial.stop == StopId::kPlunge ||
                     trial.stop == StopId::kRmin ||
                     trial.stop == StopId::kVertical;
  return trial;
}

}  // namespace

const char* terminal_name(TerminalKind kind) {
  switch (kind) {
    case TerminalKind::kHitZeroVerticalTangent:
      return "HitZeroVerticalTangent";
    case TerminalKind::kCrossedZeroEarly:
      return "CrossedZeroEarly";
    case TerminalKind::kFlattened:
      return "Flattened";
    case TerminalKind::kBlewUp:
      return "BlewUp";
  }
  return "Unknown";
}

double ode_rhs(const Params& p, double c, double r, double f, double fp) {
  if (!(c > 0.0)) throw std::invalid_argument("ode_rhs: c must be positive");
  if (!(r > 0.0) || !(f > 0.0))
    throw std::invalid_argument(
        "ode_rhs: axis values are singular; use the series start");
  const double r2a = std::pow(r, 2.0 * p.alpha);
  const double q = fp * fp + r2a;
  double rhs = p.alpha * fp / r;
  rhs += q * ((p.k - 1) / f - (p.h - 1) * fp / (r2a * r));
  rhs -= c * q * std::sqrt(q) / r2a;
  return rhs;
}

double z_substitution(const Params& p, double r, double fp) {
  if (!(r > 0.0)) throw std::invalid_argument("z_substitution: r must be > 0");
  if (std::isinf(fp)) return fp > 0 ? 1.0 : -1.0;
  const double ra = std::pow(r, p.alpha);
  return fp / std::hypot(ra, fp);
}

ShootOutcome integrate_profile(const Params& p, double c,
                               const ShootingConfig& cfg) {
  const Trial trial = run_trial(p, c, cfg, true, false);
  ShootOutcome out;
  out.kind = trial.kind;
  out.c = c;
  out.profile = trial.prof;
  out.r_end = trial.r_end;
  out.f_end = trial.f_end;
  out.z_end = trial.z_end;
  out.steps = trial.steps;
  return out;
}

ShootResult shoot(const Params& par, const ShootingConfig& cfg) {
  check_config(cfg);
  const double hh = static_cast<double>(par.h);
  double clo = cfg.c_min > 0.0 ? cfg.c_min : 0.25 * hh;
  double chi = cfg.c_max > 0.0 ? cfg.c_max : 4.0 * hh;
  if (!(clo > 0.0) || !(clo < chi))
    throw std::invalid_argument("shoot: bracket must be positive and ordered");
  const double tol_c = cfg.tol_c > 0.0 ? cfg.tol_c : 1e-9 * hh;

  int iters = 0;
  auto large_at = [&](double c) {
    ++iters;
    return run_trial(par, c, cfg, false, false).large_side;
  };

  bool lo_large = large_at(clo);
  bool hi_large = large_at(chi);
  if (lo_large || !hi_large) {
    // The default bracket missed; sweep a geometric grid and look for the
    // flattening -> back-swing transition.
    std::ostringstream trace;
    trace.setf(std::ios::scientific);
    trace.precision(3);
    bool found = false;
    double c_prev = 0.0;
    bool prev_large = false;
    for (int j = 0; j <= 16 && !found; ++j) {
      const double cj = (hh / 16.0) * std::pow(2.0, 0.5 * j);
      const Trial tr = run_trial(par, cj, cfg, false, false);
      ++iters;
      trace << cj << " -> " << terminal_name(tr.kind) << "; ";
      if (j > 0 && !prev_large && tr.large_side) {
        clo = c_prev;
        chi = cj;
        found = true;
      }
      c_prev = cj;
      prev_large = tr.large_side;
    }
    if (!found)
      throw bracket_error("shoot: no transition in the curvature sweep: " +
                          trace.str());
  }

  int bisect = 0;
  while (chi - clo > tol_c && bisect < cfg.max_bisect) {
    const double mid = 0.5 * (clo + chi);
    if (large_at(mid))
      chi = mid;
    else
      clo = mid;
    ++bisect;
  }

  // Closing pass on the back-swinging side: it reaches the vertical moment
  // (or lands on the floor within bracket resolution), from which the
  // touchdown radius extrapolates via f ~ K sqrt(r0 - r),
  // K^2 = 2 k r0^{2a} / C.
  Trial fin = run_trial(par, chi, cfg, true, true);
  ++iters;
  if (fin.stop != StopId::kVertical && fin.stop != StopId::kFloorA &&
      fin.stop != StopId::kFloorB)
    throw numerical_error(
        std::string("shoot: closing trajectory ended with ") +
        terminal_name(fin.kind) + " instead of reaching the axis");
  const double r_v = fin.r_end, s_v = std::fmax(fin.f_end, 0.0);
  const double r0_raw =
      r_v + s_v * s_v * chi / (2.0 * par.k * std::pow(r_v, 2.0 * par.alpha));

  Profile prof = fin.prof;
  while (!prof.r.empty() &&
         (prof.r.back() >= r0_raw * (1.0 - 1e-14) || prof.f.back() <= 0.0)) {
    prof.r.pop_back();
    prof.f.pop_back();
    prof.fp.pop_back();
  }
  if (prof.r.size() < 8)
    throw numerical_error("shoot: closing trajectory left too few nodes");
  prof.r.push_back(r0_raw);
  prof.f.push_back(0.0);
  prof.fp.push_back(-kInf);

  ShootResult out;
  out.iterations = iters;
  out.c_low = clo;
  out.c_high = chi;
  out.r0_raw = r0_raw;
  out.profile = dilate_profile(par, prof, 1.0 / r0_raw);
  out.c = chi * r0_raw;
  return out;
}

ZorroResidual residual_zorro(const Params& par, double c, const Profile& prof,
                             double window_lo, double window_hi) {
  prof.validate();
  if (!prof.has_slopes())
    throw std::invalid_argument("residual_zorro: profile needs slopes");
  if (!(window_lo >= 0.0) || !(window_hi <= 1.0) || !(window_lo < window_hi))
    throw std::invalid_argument("residual_zorro: bad window");
  const ProfileInterp interp(prof);
  const double r0 = prof.r0();
  const int n = static_cast<int>(prof.r.size());

  // Cumulative integral I(r) at the nodes, panel by panel.  The integrand
  // is written parametrically so vertical tangents stay finite:
  //   u^{2a+h-1}(k-1) dr^2 / (f sqrt(u^{2a} dr^2 + df^2)).
  std::vector<double> prefix(n, 0.0);
  if (par.k > 1) {
    for (int panel = 0; panel + 1 < n; ++panel) {
      const double part = gauss8(
          [&](double tt) {
            const ProfileInterp::Point q = interp.sample(panel, tt);
            const double u2a = std::pow(q.r, 2.0 * par.alpha);
            const double num =
                (par.k - 1) * std::pow(q.r, 2.0 * par.alpha + par.h - 1) *
                q.dr * q.dr;
            const double den =
                std::fmax(q.f, 1e-300) *
                std::sqrt(u2a * q.dr * q.dr + q.df * q.df);
            return num / den;
          },
          0.0, 1.0);
      prefix[panel + 1] = prefix[panel] + part;
    }
  }

  ZorroResidual res;
  double sum_num = 0.0, sum_den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = prof.r[i];
    if (r < window_lo * r0 || r > window_hi * r0) continue;
    const double z = std::isinf(prof.fp[i])
                         ? (prof.fp[i] > 0 ? 1.0 : -1.0)
                         : z_substitution(par, r, prof.fp[i]);
    const double expected =
        std::pow(r, 1.0 - par.h) * prefix[i] - (c / par.h) * r;
    const double rho = z - expected;
    res.r.push_back(r);
    res.rho.push_back(rho);
    res.max_abs = std::max(res.max_abs, std::abs(rho));
    const double basis = std::pow(r, 1.0 - par.h);
    sum_num += rho * basis;
    sum_den += basis * basis;
  }
  if (res.r.empty())
    throw std::invalid_argument("residual_zorro: no nodes in the window");
  res.intercept = sum_den > 0.0 ? sum_num / sum_den : 0.0;
  return res;
}

double mean_curvature_constant(const Params& p, double perimeter,
                               double volume) {
  if (!(perimeter > 0.0) || !(volume > 0.0))
    throw std::invalid_argument(
        "mean_curvature_constant: P and V must be positive");
  const double d = homogeneous_dimension(p);
  return (d - 1.0) / d * perimeter / volume;
}

Profile closed_form_k1(const Params& par, int n) {
  if (par.k != 1)
    throw std::invalid_argument("closed_form_k1: requires k = 1");
  if (n < 2) throw std::invalid_argument("closed_form_k1: need n >= 2");
  const double pi_half = 1.5707963267948966192;
  Profile prof;
  prof.r.resize(n);
  prof.f.resize(n);
  prof.fp.resize(n);
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) {
    u[i] = pi_half * i / (n - 1);
    prof.r[i] = std::sin(u[i]);
  }
  prof.r[n - 1] = 1.0;
  prof.f[n - 1] = 0.0;
  for (int i = n - 2; i >= 0; --i) {
    const double panel = integrate_adaptive(
        [&](double s) { return std::pow(std::sin(s), par.alpha + 1.0); },
        u[i], u[i + 1], 1e-13, 1e-16);
    prof.f[i] = prof.f[i + 1] + panel;
  }
  for (int i = 0; i + 1 < n; ++i) {
    const double r = prof.r[i];
    prof.fp[i] = -std::pow(r, par.alpha + 1.0) / std::sqrt(1.0 - r * r);
  }
  prof.fp[n - 1] = -kInf;
  prof.validate();
  return prof;
}

}  // namespace iso
