#include "verify_suites.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "iso/grid.hpp"
#include "iso/htype.hpp"
#include "iso/measures.hpp"
#include "iso/profileode.hpp"
#include "iso/quadrature.hpp"
#include "iso/rearrange.hpp"
#include "iso/spaces.hpp"

namespace iso::verify {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

int thread_count() {
  if (const char* env = std::getenv("ISO_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n > 64 ? 64 : n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw > 16 ? 16 : hw);
}

// Index-sharded parallel loop; results must be written to per-index slots
// so the reduction order (and therefore every output byte) stays fixed.
void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Hand-rolled draws on top of mt19937 (whose stream is pinned by the
// standard) keep randomized fixtures identical across toolchains.
double rng_unit(std::mt19937& g) {
  const std::uint64_t hi = g() >> 5, lo = g() >> 6;
  return (hi * 67108864.0 + lo) * (1.0 / 9007199254740992.0);
}

int rng_int(std::mt19937& g, int lo, int hi) {
  return lo + static_cast<int>(g() % static_cast<unsigned>(hi - lo + 1));
}

std::mt19937 engine_for(unsigned seed, int criterion) {
  return std::mt19937(seed * 0x9E3779B9u + static_cast<unsigned>(criterion));
}

// Random union of lattice cells with edge steps in [0.2, 1.0].
QuadrantGrid random_union_grid(std::mt19937& g, const Params& par) {
  const int nx = rng_int(g, 2, 5);
  const int ny = rng_int(g, 2, 5);
  std::vector<double> r_edges{0.0}, s_edges{0.0};
  for (int i = 0; i < nx; ++i)
    r_edges.push_back(r_edges.back() + 0.2 + 0.8 * rng_unit(g));
  for (int j = 0; j < ny; ++j)
    s_edges.push_back(s_edges.back() + 0.2 + 0.8 * rng_unit(g));
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (g() & 1u) cells.emplace_back(i, j);
  if (cells.empty())
    cells.emplace_back(rng_int(g, 0, nx - 1), rng_int(g, 0, ny - 1));
  return QuadrantGrid::from_cells(par, std::move(r_edges), std::move(s_edges),
                                  cells);
}

std::string fmt(const char* pattern, ...)
#if defined(__GNUC__)
    __attribute__((format(printf, 1, 2)))
#endif
    ;
std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

const std::array<Params, 4> kClosedFormCases{Params(1, 1, 1.0),
                                             Params(2, 1, 1.0),
                                             Params(2, 1, 2.0),
                                             Params(3, 1, 0.5)};

CriterionResult c1_closed_form(unsigned) {
  constexpr double tol_c = 1e-6, tol_sup = 1e-6, tol_time = 2.0;
  std::array<double, 4> dc{}, sup{}, secs{};
  parallel_for(4, [&](int i) {
    const Params& p = kClosedFormCases[static_cast<size_t>(i)];
    const double t0 = now_seconds();
    ShootResult res = shoot(p, {});
    secs[static_cast<size_t>(i)] = now_seconds() - t0;
    dc[static_cast<size_t>(i)] = std::fabs(res.c - p.h);
    Profile ref = closed_form_k1(p, 200);
    ProfileInterp interp(res.profile);
    double worst = 0.0;
    for (size_t j = 0; j < ref.r.size(); ++j)
      worst = std::fmax(worst,
                        std::fabs(interp.value_at(ref.r[j]) - ref.f[j]));
    sup[static_cast<size_t>(i)] = worst;
  });
  double worst_dc = 0.0, worst_sup = 0.0, worst_secs = 0.0;
  for (int i = 0; i < 4; ++i) {
    worst_dc = std::fmax(worst_dc, dc[static_cast<size_t>(i)]);
    worst_sup = std::fmax(worst_sup, sup[static_cast<size_t>(i)]);
    worst_secs = std::fmax(worst_secs, secs[static_cast<size_t>(i)]);
  }
  CriterionResult res;
  res.pass =
      worst_dc <= tol_c && worst_sup <= tol_sup && worst_secs < tol_time;
  res.detail = fmt("max |C-h| %.2e, sup-norm %.2e, slowest %.2f s", worst_dc,
                   worst_sup, worst_secs);
  return res;
}

CriterionResult c2_arccos_identity(unsigned) {
  constexpr double tol = 1e-10;
  const double half_pi = 2.0 * std::atan(1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double r = static_cast<double>(i) / 99.0;
    const double lhs = 0.5 * (std::acos(r) + r * std::sqrt(1.0 - r * r));
    const double rhs = integrate_adaptive(
        [](double s) {
          const double t = std::sin(s);
          return t * t;
        },
        std::asin(r), half_pi, 1e-14, 1e-16);
    worst = std::fmax(worst, std::fabs(lhs - rhs));
  }
  CriterionResult res;
  res.pass = worst <= tol;
  res.detail = fmt("max deviation %.2e at 100 nodes", worst);
  return res;
}

CriterionResult c3_curvature_constant(unsigned) {
  constexpr double tol_pv = 1e-7, tol_kappa = 1e-6;
  const Params p1(1, 1, 1.0);
  Profile prof1 = closed_form_k1(p1, 2000);
  const double P1 = perimeter_profile(p1, prof1);
  const double V1 = volume_profile(p1, prof1);
  const double k1 = mean_curvature_constant(p1, P1, V1);
  const Params p2(2, 1, 1.0);
  Profile prof2 = closed_form_k1(p2, 2000);
  const double k2 = mean_curvature_constant(
      p2, perimeter_profile(p2, prof2), volume_profile(p2, prof2));
  const double dP = std::fabs(P1 - 4.0);
  const double dV = std::fabs(V1 - 8.0 / 3.0);
  const double dk1 = std::fabs(k1 - 1.0);
  const double dk2 = std::fabs(k2 - 2.0);
  CriterionResult res;
  res.pass = dP <= tol_pv && dV <= tol_pv && dk1 <= tol_kappa &&
             dk2 <= tol_kappa;
  res.detail = fmt("|P-4| %.2e, |V-8/3| %.2e, constants off %.2e / %.2e", dP,
                   dV, dk1, dk2);
  return res;
}

CriterionResult c4_unit_square(unsigned) {
  constexpr double tol = 1e-12;
  const Params p(1, 1, 1.0);
  QuadrantGrid g =
      QuadrantGrid::from_cells(p, {0.0, 1.0}, {0.0, 1.0}, {{0, 0}});
  const double P = perimeter_grid(g);
  const double V = volume_grid(g);
  const double I = iso_ratio(p, P, V);
  CriterionResult res;
  res.pass = std::fabs(P - 6.0) <= tol && std::fabs(V - 4.0) <= tol &&
             std::fabs(I - 13.5) <= tol && I > 9.0;
  res.detail = fmt("P %.17g, V %.17g, ratio %.17g", P, V, I);
  return res;
}

CriterionResult c5_dilation_invariance(unsigned) {
  constexpr double tol = 1e-6;
  std::array<double, 4> worst_case{};
  parallel_for(4, [&](int i) {
    const Params& p = kClosedFormCases[static_cast<size_t>(i)];
    ShootResult res = shoot(p, {});
    const double base = iso_ratio(p, perimeter_profile(p, res.profile),
                                  volume_profile(p, res.profile));
    double worst = 0.0;
    for (double lambda : {0.5, 2.0, 10.0}) {
      Profile d = dilate_profile(p, res.profile, lambda);
      const double scaled =
          iso_ratio(p, perimeter_profile(p, d), volume_profile(p, d));
      worst = std::fmax(worst, std::fabs(scaled - base) / base);
    }
    worst_case[static_cast<size_t>(i)] = worst;
  });
  double worst = 0.0;
  for (double w : worst_case) worst = std::fmax(worst, w);
  CriterionResult res;
  res.pass = worst <= tol;
  res.detail = fmt("max relative ratio drift %.2e over lambda {0.5, 2, 10}",
                   worst);
  return res;
}

CriterionResult c6_rearrangement(unsigned seed) {
  constexpr double tol_volume = 1e-9, tol_time = 30.0;
  std::mt19937 g = engine_for(seed, 6);
  std::vector<QuadrantGrid> grids;
  grids.reserve(100);
  for (int h : {1, 2}) {
    const Params par(h, 1, 1.0);
    for (int i = 0; i < 50; ++i) grids.push_back(random_union_grid(g, par));
  }
  const double t0 = now_seconds();
  std::vector<double> slack(grids.size()), dv(grids.size());
  std::vector<char> ok(grids.size(), 0);
  parallel_for(static_cast<int>(grids.size()), [&](int i) {
    const QuadrantGrid& in = grids[static_cast<size_t>(i)];
    const double p0 = perimeter_grid(in);
    const double v0 = volume_grid(in);
    RearrangeResult rr = rearrange_full(in);
    const double p1 = perimeter_grid(rr.grid);
    const double v1 = volume_grid(rr.grid);
    slack[static_cast<size_t>(i)] =
        p1 / (p0 * (1.0 + rr.epsilon_grid));
    dv[static_cast<size_t>(i)] = std::fabs(v1 - v0) / v0;
    ok[static_cast<size_t>(i)] =
        p1 <= p0 * (1.0 + rr.epsilon_grid) ? 1 : 0;
  });
  const double elapsed = now_seconds() - t0;
  double worst_slack = 0.0, worst_dv = 0.0;
  bool all_ok = true;
  for (size_t i = 0; i < grids.size(); ++i) {
    worst_slack = std::fmax(worst_slack, slack[i]);
    worst_dv = std::fmax(worst_dv, dv[i]);
    all_ok = all_ok && ok[i] == 1;
  }
  CriterionResult res;
  res.pass = all_ok && worst_dv <= tol_volume && elapsed < tol_time;
  res.detail = fmt("100 grids, worst P/(P_in(1+eps)) %.6f, worst |dV|/V "
                   "%.2e, %.2f s",
                   worst_slack, worst_dv, elapsed);
  return res;
}

CriterionResult c7_residual(unsigned) {
  constexpr double tol_residual = 1e-5, tol_intercept = 1e-4;
  const std::array<Params, 3> cases{Params(1, 2, 1.0), Params(2, 2, 1.0),
                                    Params(2, 2, 2.0)};
  std::array<double, 3> max_abs{}, intercept{};
  parallel_for(3, [&](int i) {
    const Params& p = cases[static_cast<size_t>(i)];
    ShootResult res = shoot(p, {});
    ZorroResidual zr = residual_zorro(p, res.c, res.profile);
    max_abs[static_cast<size_t>(i)] = zr.max_abs;
    intercept[static_cast<size_t>(i)] = std::fabs(zr.intercept);
  });
  double worst_r = 0.0, worst_d = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst_r = std::fmax(worst_r, max_abs[static_cast<size_t>(i)]);
    worst_d = std::fmax(worst_d, intercept[static_cast<size_t>(i)]);
  }
  CriterionResult res;
  res.pass = worst_r <= tol_residual && worst_d <= tol_intercept;
  res.detail = fmt("max residual %.2e, max |intercept| %.2e", worst_r,
                   worst_d);
  return res;
}

CriterionResult c8_normal_identity(unsigned seed) {
  constexpr double tol_pointwise = 1e-10, tol_perimeter = 1e-8;
  const HTypeStructure heis(2, 1, {QEntry{1, 1, 2, 0.5}});
  std::mt19937 g = engine_for(seed, 8);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x0 = (2.0 * rng_unit(g) - 1.0) * 1.5;
    const double x1 = (2.0 * rng_unit(g) - 1.0) * 1.5;
    const double norm = std::hypot(x0, x1);
    if (norm < 0.05) continue;  // radial direction ill-defined at the pole
    const double a = 2.0 * rng_unit(g) - 1.0;
    const double b = 2.0 * rng_unit(g) - 1.0;
    const std::vector<double> x{x0, x1};
    const std::vector<double> nx{a * x0 / norm, a * x1 / norm};
    const std::vector<double> ny{b};
    const double lhs = horizontal_normal_sq(heis, x, nx, ny);
    const double rhs = a * a + (x0 * x0 + x1 * x1) * b * b;
    worst = std::fmax(worst, std::fabs(lhs - rhs));
  }
  const Params p(2, 1, 1.0);
  Profile prof = closed_form_k1(p, 400);
  const double ph = perimeter_H(heis, prof);
  const double pp = perimeter_profile(p, prof);
  const double rel = std::fabs(ph - pp) / pp;
  CriterionResult res;
  res.pass = worst <= tol_pointwise && rel <= tol_perimeter;
  res.detail = fmt("pointwise %.2e over 1000 configs, perimeter rel %.2e",
                   worst, rel);
  return res;
}

CriterionResult c9_certificates(unsigned) {
  const HTypeStructure heis(2, 1, {QEntry{1, 1, 2, 0.5}});
  const HTypeStructure doubled(2, 2,
                               {QEntry{1, 1, 2, 0.5}, QEntry{2, 1, 2, 0.5}});
  const HTypeStructure scaled(2, 1, {QEntry{1, 1, 2, 1.0}});
  const HTypeCertificate ok = validate_htype(heis);
  const HTypeCertificate bad1 = validate_htype(doubled);
  const HTypeCertificate bad2 = validate_htype(scaled);
  CriterionResult res;
  res.pass = ok.valid && !bad1.valid && bad1.max_violation > 0.0 &&
             !bad2.valid && bad2.max_violation > 0.0;
  res.detail = fmt("reference valid; counterexample violations %.3g / %.3g",
                   bad1.max_violation, bad2.max_violation);
  return res;
}

CriterionResult c10_truncation(unsigned seed) {
  constexpr double tol_exact = 1e-12;
  const std::array<Params, 5> tuples{Params(1, 1, 1.0), Params(2, 1, 1.0),
                                     Params(1, 2, 1.5), Params(2, 2, 2.0),
                                     Params(3, 1, 0.5)};
  std::mt19937 g = engine_for(seed, 10);
  double worst_split = 0.0, worst_mono = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Params& par = tuples[static_cast<size_t>(i % 5)];
    QuadrantGrid grid = random_union_grid(g, par);
    const double total = perimeter_grid(grid);
    const double s_max = grid.s_edges.back();
    for (int draw = 0; draw < 4; ++draw) {
      const double t = snap_to_s_edge(grid, rng_unit(g) * s_max);
      const double lhs = perimeter_grid(truncate_y(grid, t));
      const double rhs =
          perimeter_grid_below(grid, t) + slice_weight_y(grid, t);
      worst_split =
          std::fmax(worst_split, std::fabs(lhs - rhs) / (1.0 + lhs));
      worst_mono =
          std::fmax(worst_mono, (lhs - total) / (1.0 + total));
    }
  }
  CriterionResult res;
  res.pass = worst_split <= tol_exact && worst_mono <= tol_exact;
  res.detail = fmt("split defect %.2e, monotonicity margin %.2e", worst_split,
                   worst_mono);
  return res;
}

CriterionResult c11_flattening(unsigned seed) {
  constexpr double tol_volume = 1e-10, tol_perimeter = 1e-8;
  const std::array<int, 4> ks{1, 2, 3, 4};
  const std::array<double, 5> alphas{0.5, 1.0, 1.5, 2.0, 3.0};
  std::mt19937 g = engine_for(seed, 11);
  double worst_v = 0.0, worst_p = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Params par(1, ks[static_cast<size_t>(i % 4)],
                     alphas[static_cast<size_t>(i % 5)]);
    QuadrantGrid grid = random_union_grid(g, par);
    HalfPlaneGrid flat = flatten_grid(grid);
    const double v = volume_grid(grid);
    const double p = perimeter_grid(grid);
    worst_v = std::fmax(worst_v, std::fabs(mu_volume(flat) - v) / v);
    worst_p =
        std::fmax(worst_p, std::fabs(perimeter_halfplane(flat) - p) / p);
  }
  CriterionResult res;
  res.pass = worst_v <= tol_volume && worst_p <= tol_perimeter;
  res.detail = fmt("volume rel %.2e, perimeter rel %.2e over 20 sets",
                   worst_v, worst_p);
  return res;
}

struct CriterionSpec {
  int id;
  const char* label;
  CriterionResult (*run)(unsigned);
};

const std::array<CriterionSpec, 11> kCriteria{{
    {1, "closed-form agreement (k=1)", c1_closed_form},
    {2, "arccos identity", c2_arccos_identity},
    {3, "mean-curvature constant", c3_curvature_constant},
    {4, "unit-square exactness", c4_unit_square},
    {5, "dilation invariance of the ratio", c5_dilation_invariance},
    {6, "rearrangement monotonicity", c6_rearrangement},
    {7, "profile residual and intercept", c7_residual},
    {8, "normal identity and perimeter match", c8_normal_identity},
    {9, "bracket-tensor certificates", c9_certificates},
    {10, "truncation decomposition", c10_truncation},
    {11, "flattening consistency", c11_flattening},
}};

}  // namespace

std::vector<int> suite_ids(const std::string& suite) {
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  if (suite == "profileode") return {1, 2, 3, 5, 7};
  if (suite == "measures") return {4, 10};
  if (suite == "rearrange") return {6, 11};
  if (suite == "htype") return {8, 9};
  throw std::invalid_argument(
      "unknown suite '" + suite +
      "' (expected all, measures, htype, rearrange, or profileode)");
}

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids,
                                          unsigned seed) {
  std::vector<CriterionResult> out;
  for (int id : ids) {
    if (id < 1 || id > static_cast<int>(kCriteria.size()))
      throw std::invalid_argument("criterion id out of range");
    const CriterionSpec& spec = kCriteria[static_cast<size_t>(id - 1)];
    const double t0 = now_seconds();
    CriterionResult res;
    try {
      res = spec.run(seed);
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    res.id = spec.id;
    res.label = spec.label;
    res.seconds = now_seconds() - t0;
    out.push_back(std::move(res));
  }
  return out;
}

int print_and_tally(const std::vector<CriterionResult>& results) {
  int failures = 0;
  for (const CriterionResult& r : results) {
    if (!r.pass) ++failures;
    std::printf("[%s] %2d %-36s %s (%.2f s)\n", r.pass ? "PASS" : "FAIL",
                r.id, r.label.c_str(), r.detail.c_str(), r.seconds);
  }
  return failures;
}

}  // namespace iso::verify
