#include "iso/spaces.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace iso {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Params::Params(int h_in, int k_in, double alpha_in)
    : h(h_in), k(k_in), alpha(alpha_in) {
  if (h < 1) throw std::invalid_argument("params: h must be >= 1");
  if (k < 1) throw std::invalid_argument("params: k must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("params: alpha must be positive and finite");
  }
}

double unit_ball_volume(int m) {
  if (m < 1 || m > 64) {
    throw std::invalid_argument("unit_ball_volume: dimension out of range [1, 64]");
  }
  // omega_m = pi^{m/2} / Gamma(m/2 + 1), computed in log space.
  return std::exp(0.5 * m * std::log(kPi) - std::lgamma(0.5 * m + 1.0));
}

double homogeneous_dimension(const Params& p) {
  return p.h + p.k * (1.0 + p.alpha);
}

double weight_constant(const Params& p) {
  return p.h * p.k * unit_ball_volume(p.h) * unit_ball_volume(p.k);
}

Profile dilate_profile(const Params& p, const Profile& prof, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("dilate_profile: lambda must be positive");
  }
  prof.validate();
  Profile out = prof;
  const double vert = std::pow(lambda, 1.0 + p.alpha);
  const double slope = std::pow(lambda, p.alpha);
  for (double& v : out.r) v *= lambda;
  for (double& v : out.f) v *= vert;
  for (double& v : out.fp) v *= slope;  // -inf markers stay -inf
  return out;
}

}  // namespace iso
