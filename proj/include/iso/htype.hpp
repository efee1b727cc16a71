#pragma once

#include <vector>

#include "iso/profile.hpp"

namespace iso {

// One strictly-upper-triangle entry of the defining skew tensor.
struct QEntry {
  int layer;  // 1-based, in [1, k]
  int row;    // 1-based, in [1, h]
  int col;    // 1-based, row < col
  double value;
};

// Two-step algebra data on R^h x R^k defined by a tensor Q^l_{ij} that is
// skew in (i, j).  The commutator coefficients of the associated frame are
// B^l_{ij} = 2 Q^l_{ij}; they are formed once, exactly, at construction and
// drive every evaluation (Kaplan matrices, frame pairings, validation).
class HTypeStructure {
 public:
  // Strictly-upper-triangle entries; the skew completion is implied.
  // h must be even and positive; duplicate entries are rejected.
  HTypeStructure(int h, int k, const std::vector<QEntry>& upper);

  int h() const { return h_; }
  int k() const { return k_; }

  // Commutator coefficient B^l_{ij} (0-based indices).
  double bracket(int l, int i, int j) const { return b_[l][i * h_ + j]; }

  // Kaplan matrix J_Y, row-major h x h, with (J_Y)_{ji} = <Y, [X_i, X_j]>.
  std::vector<double> kaplan_matrix(const std::vector<double>& y) const;

  // J_Y x for an h-vector x.
  std::vector<double> kaplan_apply(const std::vector<double>& y,
                                   const std::vector<double>& x) const;

 private:
  int h_;
  int k_;
  std::vector<std::vector<double>> b_;  // one dense skew matrix per layer
};

struct HTypeCertificate {
  bool valid = false;
  double max_violation = 0.0;
  // Location of the worst entry of J_a^T J_b + J_b^T J_a - 2 delta_ab Id
  // over basis pairs (a, b); all indices 0-based.
  int layer_a = -1;
  int layer_b = -1;
  int row = -1;
  int col = -1;
};

// Checks the polarized orthogonality identity
//   J_a^T J_b + J_b^T J_a = 2 delta_ab Id
// on all basis pairs; linearity in Y makes basis pairs sufficient.
HTypeCertificate validate_htype(const HTypeStructure& s, double tol = 1e-12);

// Squared length of the frame projection of a Euclidean boundary normal
// (nx, ny) at a point with horizontal coordinate x:
//   |N_H|^2 = sum_i (nx_i + (J_{ny} x)_i)^2.
// The frame coefficients depend on x only.
double horizontal_normal_sq(const HTypeStructure& s,
                            const std::vector<double>& x,
                            const std::vector<double>& nx,
                            const std::vector<double>& ny);

// Product-sphere quadrature rule on S^{m-1}: pairs (weight, unit point),
// built recursively (Gauss-Legendre in the polar angle, uniform on S^1,
// point pair on S^0) and normalised so the weights sum to m * omega_m.
struct SpherePoint {
  double weight;
  std::vector<double> x;
};
std::vector<SpherePoint> sphere_rule(int m, int polar_order = 12,
                                     int azimuth_order = 24);

// Perimeter of the set generated by the profile under the structure's
// horizontal frame, obtained by integrating |N_H| over the boundary with
// the product-sphere rule.  Requires a validated structure; for those the
// angular factor is constant and the value coincides with the alpha = 1
// weighted perimeter of the same profile.
double perimeter_H(const HTypeStructure& s, const Profile& prof);

}  // namespace iso
