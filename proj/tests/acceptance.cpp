// Acceptance gate: runs every verification criterion with a pinned seed and
// prints one verdict line apiece; exits nonzero if any criterion fails.

#include <cstdio>

#include "../tools/verify_suites.hpp"

int main() {
  constexpr unsigned kSeed = 7;
  const auto results =
      iso::verify::run_criteria(iso::verify::suite_ids("all"), kSeed);
  const int failures = iso::verify::print_and_tally(results);
  std::printf("acceptance: %zu criteria, %d failure%s (seed %u)\n",
              results.size(), failures, failures == 1 ? "" : "s", kSeed);
  return failures == 0 ? 0 : 1;
}
