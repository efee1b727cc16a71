#pragma once

#include <string>

#include "iso/grid.hpp"
#include "iso/htype.hpp"
#include "iso/profile.hpp"
#include "iso/spaces.hpp"

namespace iso {

// Profile CSV: header "r,f" or "r,f,fp", one row per node, full %.17g
// precision, "-inf" allowed in the slope column of the last node.
std::string profile_to_csv(const Profile& prof);
Profile profile_from_csv(const std::string& text);

// Quadrant grid JSON.  Writing emits both the lattice view ("cells", the
// [i,j] pairs covered by the region) and the exact interval view
// ("strips"); reading prefers "strips" when present so rearranged regions
// round-trip without snapping.
std::string grid_to_json(const QuadrantGrid& grid);
QuadrantGrid grid_from_json(const std::string& text);

// Bracket tensor JSON: {"h": .., "k": .., "Q": [[layer,i,j,value], ...]}
// with 1-based strictly-upper entries.
HTypeStructure htype_from_json(const std::string& text);

// Shooting run summary, serialized with reproducibility metadata.
struct SolveReport {
  Params params;
  double c = 0.0;
  double r0 = 0.0;
  double perimeter = 0.0;
  double volume = 0.0;
  double iso = 0.0;
  double residual_max = 0.0;
  int iterations = 0;
  unsigned seed = 0;
  double tol_c = 0.0;
  double tol_step = 0.0;
};
std::string report_to_json(const SolveReport& rep);

// Whole-file text helpers; failures surface as std::invalid_argument so
// callers can map them to an input-error exit.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace iso
