#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "iso/htype.hpp"
#include "iso/measures.hpp"
#include "iso/profileode.hpp"
#include "iso/spaces.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

iso::HTypeStructure heisenberg() {
  return iso::HTypeStructure(2, 1, {iso::QEntry{1, 1, 2, 0.5}});
}

// Left quaternion multiplications by i, j, k as one 3-layer tensor on R^4.
iso::HTypeStructure quaternionic() {
  return iso::HTypeStructure(
      4, 3,
      {iso::QEntry{1, 1, 2, -0.5}, iso::QEntry{1, 3, 4, -0.5},
       iso::QEntry{2, 1, 3, -0.5}, iso::QEntry{2, 2, 4, 0.5},
       iso::QEntry{3, 1, 4, -0.5}, iso::QEntry{3, 2, 3, -0.5}});
}

std::vector<double> random_vec(std::mt19937& gen, int n) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(static_cast<size_t>(n));
  for (double& x : v) x = d(gen);
  return v;
}

double norm_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("tensor construction rejects malformed input") {
  using iso::HTypeStructure;
  using iso::QEntry;
  CHECK_THROWS_AS(HTypeStructure(3, 1, {QEntry{1, 1, 2, 0.5}}),
                  std::invalid_argument);  // odd horizontal dimension
  CHECK_THROWS_AS(HTypeStructure(2, 0, {}), std::invalid_argument);
  CHECK_THROWS_AS(HTypeStructure(2, 1, {QEntry{2, 1, 2, 0.5}}),
                  std::invalid_argument);  // layer out of range
  CHECK_THROWS_AS(HTypeStructure(2, 1, {QEntry{1, 2, 1, 0.5}}),
                  std::invalid_argument);  // not strictly upper
  CHECK_THROWS_AS(HTypeStructure(2, 1, {QEntry{1, 1, 1, 0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(HTypeStructure(2, 1, {QEntry{1, 1, 3, 0.5}}),
                  std::invalid_argument);  // column out of range
  CHECK_THROWS_AS(
      HTypeStructure(2, 1, {QEntry{1, 1, 2, 0.5}, QEntry{1, 1, 2, 0.25}}),
      std::invalid_argument);  // duplicate slot
  CHECK_THROWS_AS(HTypeStructure(2, 1, {QEntry{1, 1, 2, std::nan("")}}),
                  std::invalid_argument);
}

TEST_CASE("reference structure pairing matrix") {
  const iso::HTypeStructure heis = heisenberg();
  CHECK(heis.h() == 2);
  CHECK(heis.k() == 1);
  CHECK(heis.bracket(0, 0, 1) == 1.0);  // doubled tensor entry
  CHECK(heis.bracket(0, 1, 0) == -1.0);

  const std::vector<double> j = heis.kaplan_matrix({1.0});
  REQUIRE(j.size() == 4);
  CHECK(j[0] == 0.0);
  CHECK(j[1] == -1.0);
  CHECK(j[2] == 1.0);
  CHECK(j[3] == 0.0);

  const std::vector<double> zero = heis.kaplan_matrix({0.0});
  for (double v : zero) CHECK(v == 0.0);

  // J^2 = -Id for a unit vertical direction.
  const std::vector<double> e1{1.0, 0.0};
  const auto je1 = heis.kaplan_apply({1.0}, e1);
  const auto jje1 = heis.kaplan_apply({1.0}, je1);
  CHECK(jje1[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(jje1[1] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("pairing is linear in the vertical slot and skew in the horizontal ones") {
  std::mt19937 gen(4711u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  // A generic (non-orthogonal) skew tensor on R^4 with two layers.
  const iso::HTypeStructure s(
      4, 2,
      {iso::QEntry{1, 1, 2, u(gen)}, iso::QEntry{1, 1, 3, u(gen)},
       iso::QEntry{1, 2, 4, u(gen)}, iso::QEntry{2, 1, 4, u(gen)},
       iso::QEntry{2, 3, 4, u(gen)}, iso::QEntry{2, 2, 3, u(gen)}});

  for (int trial = 0; trial < 50; ++trial) {
    const auto y1 = random_vec(gen, 2);
    const auto y2 = random_vec(gen, 2);
    const auto x = random_vec(gen, 4);
    const auto w = random_vec(gen, 4);
    const double a = u(gen), b = u(gen);

    std::vector<double> y_mix{a * y1[0] + b * y2[0], a * y1[1] + b * y2[1]};
    const auto lhs = s.kaplan_apply(y_mix, x);
    const auto t1 = s.kaplan_apply(y1, x);
    const auto t2 = s.kaplan_apply(y2, x);
    for (int i = 0; i < 4; ++i) {
      CHECK(lhs[static_cast<size_t>(i)] ==
            doctest::Approx(a * t1[static_cast<size_t>(i)] +
                            b * t2[static_cast<size_t>(i)])
                .epsilon(1e-12));
    }

    // <J_Y x, w> = -<x, J_Y w>.
    CHECK(dot(s.kaplan_apply(y1, x), w) ==
          doctest::Approx(-dot(x, s.kaplan_apply(y1, w))).epsilon(1e-12));
    CHECK(std::fabs(dot(s.kaplan_apply(y1, x), x)) <=
          1e-13 * (1.0 + norm_sq(x)));
  }
}

TEST_CASE("orthogonality certificates") {
  CHECK(iso::validate_htype(heisenberg()).valid);
  CHECK(iso::validate_htype(quaternionic()).valid);

  // Two identical layers: the cross term J_1^T J_2 + J_2^T J_1 = 2 Id.
  const iso::HTypeStructure doubled(
      2, 2, {iso::QEntry{1, 1, 2, 0.5}, iso::QEntry{2, 1, 2, 0.5}});
  const iso::HTypeCertificate cd = iso::validate_htype(doubled);
  CHECK_FALSE(cd.valid);
  CHECK(cd.max_violation == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cd.layer_a != cd.layer_b);

  // Doubling the entry scales J^T J by 4: the diagonal is off by 6.
  const iso::HTypeStructure scaled(2, 1, {iso::QEntry{1, 1, 2, 1.0}});
  const iso::HTypeCertificate cs = iso::validate_htype(scaled);
  CHECK_FALSE(cs.valid);
  CHECK(cs.max_violation == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(cs.row == cs.col);
}

TEST_CASE("orthogonal pairing preserves lengths") {
  std::mt19937 gen(90210u);
  for (const auto& s : {heisenberg(), quaternionic()}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto y = random_vec(gen, s.k());
      const auto x = random_vec(gen, s.h());
      const auto jx = s.kaplan_apply(y, x);
      CHECK(norm_sq(jx) ==
            doctest::Approx(norm_sq(y) * norm_sq(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("frame projection of a boundary normal") {
  std::mt19937 gen(31415u);
  const iso::HTypeStructure heis = heisenberg();

  SUBCASE("at the vertical axis only the horizontal part survives") {
    const std::vector<double> x{0.0, 0.0};
    const std::vector<double> nx{0.3, -0.4};
    const std::vector<double> ny{7.0};
    CHECK(iso::horizontal_normal_sq(heis, x, nx, ny) ==
          doctest::Approx(0.25).epsilon(1e-14));
  }

  SUBCASE("radial normals split into squares") {
    for (const auto& s : {heisenberg(), quaternionic()}) {
      for (int trial = 0; trial < 25; ++trial) {
        const auto x = random_vec(gen, s.h());
        const auto y = random_vec(gen, s.k());
        std::uniform_real_distribution<double> u(0.5, 2.0);
        const double c = u(gen);
        std::vector<double> nx(x);
        for (double& v : nx) v *= c;
        // <J_y x, x> = 0 makes the cross term drop out.
        const double expect =
            c * c * norm_sq(x) + norm_sq(y) * norm_sq(x);
        CHECK(iso::horizontal_normal_sq(s, x, nx, y) ==
              doctest::Approx(expect).epsilon(1e-11));
      }
    }
  }

  SUBCASE("generic tensors feel the anisotropy") {
    // One weak layer: |J_y x| varies with the direction of x.
    const iso::HTypeStructure weak(4, 1, {iso::QEntry{1, 1, 2, 0.5}});
    const std::vector<double> y{1.0};
    const std::vector<double> zero_nx{0.0, 0.0, 0.0, 0.0};
    const double along = iso::horizontal_normal_sq(
        weak, {1.0, 0.0, 0.0, 0.0}, zero_nx, y);
    const double across = iso::horizontal_normal_sq(
        weak, {0.0, 0.0, 1.0, 0.0}, zero_nx, y);
    CHECK(along == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(across == 0.0);
  }
}

TEST_CASE("product sphere rule carries the surface measure") {
  for (int m = 1; m <= 5; ++m) {
    const auto rule = iso::sphere_rule(m);
    double mass = 0.0, moment = 0.0;
    for (const auto& q : rule) {
      REQUIRE(static_cast<int>(q.x.size()) == m);
      CHECK(norm_sq(q.x) == doctest::Approx(1.0).epsilon(1e-13));
      mass += q.weight;
      moment += q.weight * q.x[0] * q.x[0];
    }
    const double total = m * iso::unit_ball_volume(m);
    CHECK(mass == doctest::Approx(total).epsilon(1e-12));
    // Degree-2 moments give each coordinate an equal share; the tolerance
    // covers rounding accumulated over tens of thousands of nodes at m = 5.
    CHECK(moment == doctest::Approx(total / m).epsilon(1e-9));
  }
}

TEST_CASE("frame perimeter matches the weighted form at alpha = 1") {
  const iso::Profile pansu = iso::closed_form_k1({1, 1, 1.0}, 800);

  const double via_frame = iso::perimeter_H(heisenberg(), pansu);
  const double via_weight = iso::perimeter_profile({2, 1, 1.0}, pansu);
  CHECK(via_frame == doctest::Approx(via_weight).epsilon(1e-12));
  CHECK(via_frame == doctest::Approx(kPi * kPi).epsilon(1e-6));

  const double quat_frame = iso::perimeter_H(quaternionic(), pansu);
  const double quat_weight = iso::perimeter_profile({4, 3, 1.0}, pansu);
  CHECK(quat_frame == doctest::Approx(quat_weight).epsilon(1e-10));
}

TEST_CASE("frame perimeter edge cases") {
  iso::Profile zero;
  zero.r = {0.0, 0.5, 1.0};
  zero.f = {0.0, 0.0, 0.0};
  CHECK(iso::perimeter_H(heisenberg(), zero) == 0.0);

  const iso::HTypeStructure scaled(2, 1, {iso::QEntry{1, 1, 2, 1.0}});
  CHECK_THROWS_AS(iso::perimeter_H(scaled, iso::closed_form_k1({1, 1, 1.0}, 50)),
                  std::invalid_argument);
}
