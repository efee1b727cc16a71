#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "iso/formats.hpp"
#include "iso/grid.hpp"
#include "iso/htype.hpp"
#include "iso/profileode.hpp"
#include "iso/version.hpp"

namespace {

bool message_contains(const std::exception& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("profile csv round-trips bitwise") {
  const iso::Profile prof = iso::closed_form_k1({1, 1, 1.0}, 64);
  const std::string text = iso::profile_to_csv(prof);
  CHECK(text.rfind("r,f,fp\n", 0) == 0);
  CHECK(text.find("-inf") != std::string::npos);

  const iso::Profile back = iso::profile_from_csv(text);
  REQUIRE(back.r.size() == prof.r.size());
  for (size_t i = 0; i < prof.r.size(); ++i) {
    CHECK(back.r[i] == prof.r[i]);
    CHECK(back.f[i] == prof.f[i]);
    CHECK(back.fp[i] == prof.fp[i]);
  }
  CHECK(iso::profile_to_csv(back) == text);
}

TEST_CASE("profile csv without slopes uses the short header") {
  iso::Profile prof;
  prof.r = {0.0, 0.5, 1.0};
  prof.f = {1.0, 0.75, 0.0};
  const std::string text = iso::profile_to_csv(prof);
  CHECK(text.rfind("r,f\n", 0) == 0);
  const iso::Profile back = iso::profile_from_csv(text);
  CHECK_FALSE(back.has_slopes());
  CHECK(back.f[1] == 0.75);
}

TEST_CASE("profile csv rejects malformed input with a line number") {
  CHECK_THROWS_AS(iso::profile_from_csv(""), std::invalid_argument);
  CHECK_THROWS_AS(iso::profile_from_csv("x,y\n0,1\n"), std::invalid_argument);

  try {
    iso::profile_from_csv("r,f\n0,1\n0.5,oops\n");
    FAIL("expected a parse failure");
  } catch (const std::invalid_argument& e) {
    CHECK(message_contains(e, "line 3"));
    CHECK(message_contains(e, "oops"));
  }

  try {
    iso::profile_from_csv("r,f,fp\n0,1\n");
    FAIL("expected a field-count failure");
  } catch (const std::invalid_argument& e) {
    CHECK(message_contains(e, "line 2"));
  }
}

TEST_CASE("grid json round-trips the exact region") {
  std::mt19937 gen(31337u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> re{0.0}, se{0.0};
  for (int i = 0; i < 3; ++i) re.push_back(re.back() + 0.2 + u(gen));
  for (int j = 0; j < 3; ++j) se.push_back(se.back() + 0.2 + u(gen));
  const iso::QuadrantGrid grid = iso::QuadrantGrid::from_cells(
      {2, 1, 1.5}, re, se, {{0, 0}, {1, 0}, {0, 1}, {2, 2}});

  const std::string text = iso::grid_to_json(grid);
  const iso::QuadrantGrid back = iso::grid_from_json(text);
  CHECK(back.params.h == 2);
  CHECK(back.params.k == 1);
  CHECK(back.params.alpha == 1.5);
  CHECK(back.r_edges == grid.r_edges);
  CHECK(back.s_edges == grid.s_edges);

  const auto ra = grid.region.rects();
  const auto rb = back.region.rects();
  REQUIRE(ra.size() == rb.size());
  for (size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i].x.lo == rb[i].x.lo);
    CHECK(ra[i].x.hi == rb[i].x.hi);
    CHECK(ra[i].y.lo == rb[i].y.lo);
    CHECK(ra[i].y.hi == rb[i].y.hi);
  }

  // A second dump is byte-identical.
  CHECK(iso::grid_to_json(back) == text);
}

TEST_CASE("grid json accepts the lattice view when no strips are present") {
  const std::string text = R"({
    "params": {"h": 1, "k": 1, "alpha": 1.0},
    "r_edges": [0.0, 1.0, 2.0],
    "s_edges": [0.0, 1.0],
    "cells": [[0, 0], [1, 0]]
  })";
  const iso::QuadrantGrid grid = iso::grid_from_json(text);
  const auto rects = grid.region.rects();
  REQUIRE(rects.size() == 1);  // adjacent cells merge
  CHECK(rects[0].x.hi == 2.0);
  CHECK(rects[0].y.hi == 1.0);
}

TEST_CASE("grid json surfaces malformed documents as input errors") {
  CHECK_THROWS_AS(iso::grid_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(iso::grid_from_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS(
      iso::grid_from_json(
          R"({"params": {"h": 1, "k": 1, "alpha": 1.0}})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      iso::grid_from_json(
          R"({"params": {"h": 1, "k": 1, "alpha": 1.0},
              "r_edges": [0, 1], "s_edges": [0, 1],
              "cells": [[0]]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      iso::grid_from_json(
          R"({"params": {"h": 1, "k": 1, "alpha": 1.0},
              "r_edges": [0, 1], "s_edges": [0, 1],
              "strips": [{"s": [0, 1]}]})"),
      std::invalid_argument);
}

TEST_CASE("bracket tensor json") {
  const iso::HTypeStructure s = iso::htype_from_json(
      R"({"h": 2, "k": 1, "Q": [[1, 1, 2, 0.5]]})");
  CHECK(s.h() == 2);
  CHECK(s.k() == 1);
  CHECK(iso::validate_htype(s).valid);

  CHECK_THROWS_AS(iso::htype_from_json("["), std::invalid_argument);
  CHECK_THROWS_AS(iso::htype_from_json(R"({"h": 2, "k": 1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      iso::htype_from_json(R"({"h": 2, "k": 1, "Q": [[1, 1, 2]]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      iso::htype_from_json(R"({"h": 2.5, "k": 1, "Q": []})"),
      std::invalid_argument);
}

TEST_CASE("solve report serialization") {
  iso::SolveReport rep;
  rep.params = iso::Params{2, 2, 1.0};
  rep.c = 2.59297905411;
  rep.r0 = 1.0;
  rep.perimeter = 12.5;
  rep.volume = 3.25;
  rep.iso = 99.0;
  rep.residual_max = 4.2e-10;
  rep.iterations = 37;
  rep.seed = 7;
  rep.tol_c = 2e-9;
  rep.tol_step = 1e-10;

  const auto j = nlohmann::json::parse(iso::report_to_json(rep));
  CHECK(j.at("h").get<int>() == 2);
  CHECK(j.at("k").get<int>() == 2);
  CHECK(j.at("alpha").get<double>() == 1.0);
  CHECK(j.at("C").get<double>() == rep.c);
  CHECK(j.at("r0").get<double>() == 1.0);
  CHECK(j.at("P").get<double>() == 12.5);
  CHECK(j.at("V").get<double>() == 3.25);
  CHECK(j.at("I").get<double>() == 99.0);
  CHECK(j.at("residual_max").get<double>() == 4.2e-10);
  CHECK(j.at("iterations").get<int>() == 37);
  CHECK(j.at("seed").get<unsigned>() == 7u);
  CHECK(j.at("tol_c").get<double>() == 2e-9);
  CHECK(j.at("tol_step").get<double>() == 1e-10);
  CHECK(j.at("version").get<std::string>() == iso::kVersion);
}

TEST_CASE("text file helpers") {
  CHECK_THROWS_AS(iso::read_text_file("/nonexistent/path/file.txt"),
                  std::invalid_argument);

  const std::string path = "/tmp/iso_formats_roundtrip.txt";
  const std::string payload = "line one\nline two\n";
  iso::write_text_file(path, payload);
  CHECK(iso::read_text_file(path) == payload);
  std::remove(path.c_str());
}
