#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iso/errors.hpp"
#include "iso/formats.hpp"
#include "iso/grid.hpp"
#include "iso/htype.hpp"
#include "iso/measures.hpp"
#include "iso/profileode.hpp"
#include "iso/rearrange.hpp"
#include "iso/spaces.hpp"
#include "iso/version.hpp"
#include "json.hpp"
#include "verify_suites.hpp"

namespace {

// Exit codes shared by every subcommand: 0 success, 2 numerical failure,
// 3 invariant violation, 4 input error.
constexpr int kExitOk = 0;
constexpr int kExitNumerical = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitInput = 4;

std::string strip_json_suffix(const std::string& path) {
  const std::string suffix = ".json";
  if (path.size() > suffix.size() &&
      path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return path.substr(0, path.size() - suffix.size());
  return path;
}

bool looks_like_json(const std::string& text) {
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') continue;
    return ch == '{';
  }
  return false;
}

struct SolveArgs {
  int h = 1, k = 1;
  double alpha = 1.0;
  double tol_c = 0.0, tol_step = 1e-10;
  unsigned seed = 1;
  std::string out;
};

int run_solve(const SolveArgs& a) {
  const iso::Params params(a.h, a.k, a.alpha);
  iso::ShootingConfig cfg;
  cfg.tol_c = a.tol_c;
  cfg.tol_step = a.tol_step;
  iso::ShootResult res = iso::shoot(params, cfg);

  iso::SolveReport rep;
  rep.params = params;
  rep.c = res.c;
  rep.r0 = res.profile.r0();
  rep.perimeter = iso::perimeter_profile(params, res.profile);
  rep.volume = iso::volume_profile(params, res.profile);
  rep.iso = iso::iso_ratio(params, rep.perimeter, rep.volume);
  rep.residual_max = iso::residual_zorro(params, res.c, res.profile).max_abs;
  rep.iterations = res.iterations;
  rep.seed = a.seed;
  rep.tol_c = a.tol_c > 0.0 ? a.tol_c : 1e-9 * params.h;
  rep.tol_step = a.tol_step;

  const std::string report = iso::report_to_json(rep);
  std::fputs(report.c_str(), stdout);
  if (!a.out.empty()) {
    const std::string base = strip_json_suffix(a.out);
    iso::write_text_file(base + ".json", report);
    iso::write_text_file(base + ".csv", iso::profile_to_csv(res.profile));
  }
  return kExitOk;
}

struct MeasureArgs {
  std::string input;
  int h = 1, k = 1;
  double alpha = 1.0;
  double dilate = 1.0;
  std::string out;
};

int run_measure(const MeasureArgs& a) {
  const std::string text = iso::read_text_file(a.input);
  iso::Params params(a.h, a.k, a.alpha);
  double P = 0.0, V = 0.0;
  if (looks_like_json(text)) {
    iso::QuadrantGrid grid = iso::grid_from_json(text);
    if (a.dilate != 1.0) grid = iso::dilate_grid(grid, a.dilate);
    params = grid.params;
    P = iso::perimeter_grid(grid);
    V = iso::volume_grid(grid);
  } else {
    iso::Profile prof = iso::profile_from_csv(text);
    if (a.dilate != 1.0) prof = iso::dilate_profile(params, prof, a.dilate);
    P = iso::perimeter_profile(params, prof);
    V = iso::volume_profile(params, prof);
  }
  nlohmann::ordered_json j;
  j["h"] = params.h;
  j["k"] = params.k;
  j["alpha"] = params.alpha;
  j["dilate"] = a.dilate;
  j["P"] = P;
  j["V"] = V;
  j["I"] = iso::iso_ratio(params, P, V);
  j["version"] = iso::kVersion;
  const std::string body = j.dump(2) + "\n";
  std::fputs(body.c_str(), stdout);
  if (!a.out.empty()) iso::write_text_file(a.out, body);
  return kExitOk;
}

struct RearrangeArgs {
  std::string input;
  std::string out;
};

int run_rearrange(const RearrangeArgs& a) {
  iso::QuadrantGrid grid = iso::grid_from_json(iso::read_text_file(a.input));
  iso::RearrangeResult res = iso::rearrange_full(grid);
  for (const iso::StageTrace& st : res.trace) {
    std::printf("stage %-16s perimeter %.17g volume %.17g\n",
                st.stage.c_str(), st.perimeter, st.volume);
  }
  std::printf("epsilon_grid %.17g\n", res.epsilon_grid);
  const std::string body = iso::grid_to_json(res.grid);
  if (!a.out.empty())
    iso::write_text_file(a.out, body);
  else
    std::fputs(body.c_str(), stdout);
  return kExitOk;
}

struct HTypeArgs {
  std::string action;
  std::string input;
  std::string profile;
};

int run_htype(const HTypeArgs& a) {
  const iso::HTypeStructure s =
      iso::htype_from_json(iso::read_text_file(a.input));
  if (a.action == "validate") {
    const iso::HTypeCertificate cert = iso::validate_htype(s);
    std::printf("%s\n", cert.valid ? "true" : "false");
    if (!cert.valid) {
      std::printf("max_violation %.17g at layers (%d, %d) entry (%d, %d)\n",
                  cert.max_violation, cert.layer_a + 1, cert.layer_b + 1,
                  cert.row + 1, cert.col + 1);
      return kExitInvariant;
    }
    return kExitOk;
  }
  if (a.action == "perimeter") {
    if (a.profile.empty())
      throw std::invalid_argument("htype perimeter needs --profile <csv>");
    const iso::Profile prof =
        iso::profile_from_csv(iso::read_text_file(a.profile));
    std::printf("%.17g\n", iso::perimeter_H(s, prof));
    return kExitOk;
  }
  throw std::invalid_argument("htype action must be validate or perimeter");
}

struct VerifyArgs {
  std::string suite = "all";
  unsigned seed = 1;
};

int run_verify(const VerifyArgs& a) {
  const std::vector<int> ids = iso::verify::suite_ids(a.suite);
  const auto results = iso::verify::run_criteria(ids, a.seed);
  const int failures = iso::verify::print_and_tally(results);
  std::printf("%d/%zu criteria passed (suite %s, seed %u)\n",
              static_cast<int>(results.size()) - failures, results.size(),
              a.suite.c_str(), a.seed);
  return failures == 0 ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted isoperimetric profile toolkit"};
  app.require_subcommand(1);
  // --h is a domain flag, so the short help alias has to go.
  app.set_help_flag("--help", "print help and exit");

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "find the critical curvature and touchdown profile");
  solve->set_help_flag("--help", "print help and exit");
  solve->add_option("--h", solve_args.h, "radial block dimension");
  solve->add_option("--k", solve_args.k, "vertical block dimension");
  solve->add_option("--alpha", solve_args.alpha, "weight exponent");
  solve->add_option("--tol-c", solve_args.tol_c,
                    "bisection width target (0 = default 1e-9*h)");
  solve->add_option("--tol-step", solve_args.tol_step,
                    "integrator relative tolerance");
  solve->add_option("--seed", solve_args.seed, "seed recorded in the report");
  solve->add_option("--out", solve_args.out,
                    "output base; writes <base>.json and <base>.csv");

  MeasureArgs measure_args;
  CLI::App* measure = app.add_subcommand(
      "measure", "perimeter, volume, and ratio of a profile CSV or grid JSON");
  measure->set_help_flag("--help", "print help and exit");
  measure->add_option("input", measure_args.input, "profile CSV or grid JSON")
      ->required();
  measure->add_option("--h", measure_args.h, "block dimension for CSV input");
  measure->add_option("--k", measure_args.k, "block dimension for CSV input");
  measure->add_option("--alpha", measure_args.alpha,
                      "weight exponent for CSV input");
  measure->add_option("--dilate", measure_args.dilate,
                      "apply an anisotropic dilation before measuring");
  measure->add_option("--out", measure_args.out, "also write the JSON triple");

  RearrangeArgs rearrange_args;
  CLI::App* rearrange = app.add_subcommand(
      "rearrange", "symmetrize a grid set and report the stage trace");
  rearrange->set_help_flag("--help", "print help and exit");
  rearrange
      ->add_option("input", rearrange_args.input, "grid JSON")
      ->required();
  rearrange->add_option("--out", rearrange_args.out,
                        "write the rearranged grid JSON here");

  HTypeArgs htype_args;
  CLI::App* htype = app.add_subcommand(
      "htype", "validate a bracket tensor or integrate a group perimeter");
  htype->set_help_flag("--help", "print help and exit");
  htype->add_option("action", htype_args.action, "validate | perimeter")
      ->required();
  htype->add_option("input", htype_args.input, "structure JSON")->required();
  htype->add_option("--profile", htype_args.profile,
                    "profile CSV for the perimeter action");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "run the module verification suites");
  verify->set_help_flag("--help", "print help and exit");
  verify->add_option("--suite", verify_args.suite,
                     "all | measures | htype | rearrange | profileode");
  verify->add_option("--seed", verify_args.seed,
                     "seed for randomized fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (measure->parsed()) return run_measure(measure_args);
    if (rearrange->parsed()) return run_rearrange(rearrange_args);
    if (htype->parsed()) return run_htype(htype_args);
    if (verify->parsed()) return run_verify(verify_args);
    std::fputs("no subcommand selected\n", stderr);
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  } catch (const iso::numerical_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
}
