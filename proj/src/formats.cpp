#include "iso/formats.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "iso/version.hpp"
#include "json.hpp"

namespace iso {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& field, int line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  while (end != nullptr && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == begin || end == nullptr || *end != '\0') {
    throw std::invalid_argument("profile csv: bad number '" + field +
                                "' on line " + std::to_string(line_no));
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> doubles_from_json(const ordered_json& j,
                                      const char* what) {
  if (!j.is_array()) {
    throw std::invalid_argument(std::string("grid json: ") + what +
                                " must be an array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw std::invalid_argument(std::string("grid json: ") + what +
                                  " holds a non-number");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Params params_from_json(const ordered_json& j) {
  if (!j.contains("params") || !j["params"].is_object()) {
    throw std::invalid_argument("grid json: missing params object");
  }
  const auto& p = j["params"];
  for (const char* key : {"h", "k", "alpha"}) {
    if (!p.contains(key) || !p[key].is_number()) {
      throw std::invalid_argument(std::string("grid json: params.") + key +
                                  " missing or non-numeric");
    }
  }
  return Params(p["h"].get<int>(), p["k"].get<int>(),
                p["alpha"].get<double>());
}

ordered_json region_to_strips(const StairRegion& region) {
  ordered_json strips = ordered_json::array();
  for (const Band& band : region.bands) {
    ordered_json spans = ordered_json::array();
    for (const Interval& sp : band.spans) {
      spans.push_back(ordered_json::array({sp.lo, sp.hi}));
    }
    strips.push_back(ordered_json{{"s", ordered_json::array({band.extent.lo,
                                                             band.extent.hi})},
                                  {"r", std::move(spans)}});
  }
  return strips;
}

StairRegion region_from_strips(const ordered_json& strips) {
  if (!strips.is_array()) {
    throw std::invalid_argument("grid json: strips must be an array");
  }
  StairRegion region;
  for (const auto& strip : strips) {
    if (!strip.is_object() || !strip.contains("s") || !strip.contains("r")) {
      throw std::invalid_argument("grid json: strip needs 's' and 'r'");
    }
    std::vector<double> ext = doubles_from_json(strip["s"], "strip extent");
    if (ext.size() != 2) {
      throw std::invalid_argument("grid json: strip extent needs two numbers");
    }
    Band band;
    band.extent = Interval{ext[0], ext[1]};
    if (!strip["r"].is_array()) {
      throw std::invalid_argument("grid json: strip spans must be an array");
    }
    for (const auto& sp : strip["r"]) {
      std::vector<double> seg = doubles_from_json(sp, "strip span");
      if (seg.size() != 2) {
        throw std::invalid_argument("grid json: strip span needs two numbers");
      }
      band.spans.push_back(Interval{seg[0], seg[1]});
    }
    region.bands.push_back(std::move(band));
  }
  region.normalize();
  return region;
}

}  // namespace

std::string profile_to_csv(const Profile& prof) {
  prof.validate();
  std::string out = prof.has_slopes() ? "r,f,fp\n" : "r,f\n";
  for (size_t i = 0; i < prof.r.size(); ++i) {
    out += format_double(prof.r[i]);
    out += ',';
    out += format_double(prof.f[i]);
    if (prof.has_slopes()) {
      out += ',';
      out += format_double(prof.fp[i]);
    }
    out += '\n';
  }
  return out;
}

Profile profile_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("profile csv: empty input");
  }
  std::string header = trim(line);
  bool with_slopes;
  if (header == "r,f") {
    with_slopes = false;
  } else if (header == "r,f,fp") {
    with_slopes = true;
  } else {
    throw std::invalid_argument("profile csv: header must be 'r,f' or "
                                "'r,f,fp', got '" + header + "'");
  }

  Profile prof;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    size_t want = with_slopes ? 3u : 2u;
    if (fields.size() != want) {
      throw std::invalid_argument("profile csv: expected " +
                                  std::to_string(want) + " fields on line " +
                                  std::to_string(line_no));
    }
    prof.r.push_back(parse_double(fields[0], line_no));
    prof.f.push_back(parse_double(fields[1], line_no));
    if (with_slopes) prof.fp.push_back(parse_double(fields[2], line_no));
  }
  prof.validate();
  return prof;
}

std::string grid_to_json(const QuadrantGrid& grid) {
  ordered_json j;
  j["params"] = ordered_json{{"h", grid.params.h},
                             {"k", grid.params.k},
                             {"alpha", grid.params.alpha}};
  j["r_edges"] = grid.r_edges;
  j["s_edges"] = grid.s_edges;
  ordered_json cells = ordered_json::array();
  for (const auto& [i, k] : grid.covered_cells()) {
    cells.push_back(ordered_json::array({i, k}));
  }
  j["cells"] = std::move(cells);
  j["strips"] = region_to_strips(grid.region);
  return j.dump(2) + "\n";
}

QuadrantGrid grid_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("grid json: parse failure: ") +
                                e.what());
  }
  Params params = params_from_json(j);
  if (!j.contains("r_edges") || !j.contains("s_edges")) {
    throw std::invalid_argument("grid json: missing edge vectors");
  }
  std::vector<double> r_edges = doubles_from_json(j["r_edges"], "r_edges");
  std::vector<double> s_edges = doubles_from_json(j["s_edges"], "s_edges");

  if (j.contains("strips")) {
    QuadrantGrid grid;
    grid.params = params;
    grid.r_edges = std::move(r_edges);
    grid.s_edges = std::move(s_edges);
    grid.region = region_from_strips(j["strips"]);
    return grid;
  }

  if (!j.contains("cells")) {
    throw std::invalid_argument("grid json: need 'cells' or 'strips'");
  }
  std::vector<std::pair<int, int>> cells;
  for (const auto& c : j["cells"]) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() ||
        !c[1].is_number_integer()) {
      throw std::invalid_argument("grid json: cell entries are [i, j] pairs");
    }
    cells.emplace_back(c[0].get<int>(), c[1].get<int>());
  }
  return QuadrantGrid::from_cells(params, std::move(r_edges),
                                  std::move(s_edges), cells);
}

HTypeStructure htype_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("htype json: parse failure: ") +
                                e.what());
  }
  for (const char* key : {"h", "k"}) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
      throw std::invalid_argument(std::string("htype json: ") + key +
                                  " missing or non-integer");
    }
  }
  if (!j.contains("Q") || !j["Q"].is_array()) {
    throw std::invalid_argument("htype json: Q must be an array");
  }
  std::vector<QEntry> entries;
  for (const auto& row : j["Q"]) {
    if (!row.is_array() || row.size() != 4 || !row[0].is_number_integer() ||
        !row[1].is_number_integer() || !row[2].is_number_integer() ||
        !row[3].is_number()) {
      throw std::invalid_argument(
          "htype json: Q entries are [layer, i, j, value]");
    }
    entries.push_back(QEntry{row[0].get<int>(), row[1].get<int>(),
                             row[2].get<int>(), row[3].get<double>()});
  }
  return HTypeStructure(j["h"].get<int>(), j["k"].get<int>(), entries);
}

std::string report_to_json(const SolveReport& rep) {
  ordered_json j;
  j["h"] = rep.params.h;
  j["k"] = rep.params.k;
  j["alpha"] = rep.params.alpha;
  j["C"] = rep.c;
  j["r0"] = rep.r0;
  j["P"] = rep.perimeter;
  j["V"] = rep.volume;
  j["I"] = rep.iso;
  j["residual_max"] = rep.residual_max;
  j["iterations"] = rep.iterations;
  j["seed"] = rep.seed;
  j["tol_c"] = rep.tol_c;
  j["tol_step"] = rep.tol_step;
  j["version"] = kVersion;
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open '" + path + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::invalid_argument("cannot open '" + path + "' for writing");
  }
  out << text;
  if (!out) {
    throw std::invalid_argument("short write to '" + path + "'");
  }
}

}  // namespace iso
