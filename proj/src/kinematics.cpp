#include "eprlab/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace eprlab {

Velocity angle_to_velocity(Angle theta) { return {std::abs(theta.canonical().sin())}; }

double lorentz_contract(double dy_proper, Velocity v) {
  if (!(v.beta >= 0.0 && v.beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
  if (!(dy_proper >= 0.0)) throw std::invalid_argument("proper length must be non-negative");
  // (1 - b)(1 + b) keeps precision near beta = 1.
  return dy_proper * std::sqrt((1.0 - v.beta) * (1.0 + v.beta));
}

double observed_aperture(double dy_max, Angle theta) {
  if (!(dy_max > 0.0)) throw std::invalid_argument("dy_max must be positive");
  return dy_max * std::abs(theta.canonical().cos());
}

Aperture Aperture::make(double dy, double dy_max) {
  if (!(dy_max > 0.0)) throw std::invalid_argument("dy_max must be positive");
  if (!(dy >= 0.0 && dy <= dy_max)) throw std::invalid_argument("aperture outside [0, dy_max]");
  return {dy, dy_max};
}

double Aperture::pass_fraction() const {
  const double ratio = dy / dy_max;
  return ratio * ratio;
}

double Vec3::norm() const { return std::sqrt(dot(*this)); }

PreferredDirection PreferredDirection::make(const Vec3& nu) {
  if (std::abs(nu.norm() - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("preferred direction must be a unit vector");
  }
  return PreferredDirection(nu);
}

PreferredDirection PreferredDirection::in_plane(Angle theta) {
  return PreferredDirection(Vec3{theta.cos(), theta.sin(), 0.0});
}

PreferredDirection PreferredDirection::perpendicular() const {
  return PreferredDirection(Vec3{-nu_.y, nu_.x, nu_.z});
}

FourVector null_direction(const PreferredDirection& nu) { return {1.0, nu.vector()}; }

AnisotropyParameter AnisotropyParameter::make(double r) {
  if (!(std::abs(r) < 1.0)) throw std::invalid_argument("anisotropy parameter needs |r| < 1");
  return {r};
}

double bogoslovsky_norm_4(const FourVector& x, const FourVector& nu, AnisotropyParameter r) {
  const double square = x.minkowski_square();
  if (!(square > 0.0)) throw std::invalid_argument("Bogoslovsky norm needs a timelike vector");
  if (std::abs(nu.minkowski_square()) > kProbabilityTolerance) {
    throw std::invalid_argument("preferred 4-direction must be null");
  }
  const double projection = nu.minkowski_dot(x);
  if (projection == 0.0 && r.r < 0.0) {
    throw std::invalid_argument("Bogoslovsky norm diverges for nu.x = 0 with r < 0");
  }
  return std::pow(projection * projection / square, r.r / 2.0) * std::sqrt(square);
}

double bogoslovsky_norm_3(const FieldVector& e, const PreferredDirection& nu, AnisotropyParameter r) {
  const double magnitude = e.magnitude();
  if (!(magnitude > 0.0)) throw std::invalid_argument("field vector must be non-zero");
  const double cosine = std::abs(nu.vector().dot(e.e)) / magnitude;
  if (cosine == 0.0 && r.r < 0.0) {
    throw std::invalid_argument("Bogoslovsky norm diverges for a field orthogonal to nu with r < 0");
  }
  return std::pow(cosine, r.r) * magnitude;
}

}  // namespace eprlab
