#pragma once

#include <string>
#include <vector>

namespace iso::verify {

// One checked criterion of the verification suite.
struct CriterionResult {
  int id = 0;
  std::string label;
  bool pass = false;
  std::string detail;  // headline numbers behind the verdict
  double seconds = 0.0;
};

// Maps a suite name (all, measures, htype, rearrange, profileode) to the
// criterion ids it covers; throws std::invalid_argument on unknown names.
std::vector<int> suite_ids(const std::string& suite);

// Runs the requested criteria (deterministic for a fixed seed; sweeps use
// up to ISO_THREADS workers with index-ordered reductions).
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids,
                                          unsigned seed);

// Prints one line per result and returns the number of failures.
int print_and_tally(const std::vector<CriterionResult>& results);

}  // namespace iso::verify
