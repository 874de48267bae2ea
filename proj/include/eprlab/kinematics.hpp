#pragma once

#include <array>

#include "eprlab/core.hpp"

// Relativistic box kinematics and the anisotropic (Bogoslovsky) norms.
// Velocities are fractions of c; c never appears explicitly.

namespace eprlab {

struct Velocity {
  double beta = 0.0;
};

/// Box velocity forced by the relative angle of the two instruments:
/// beta = |sin(theta)|.
Velocity angle_to_velocity(Angle theta);

/// Length of a proper length dy_proper seen from a frame moving at v.
/// Throws std::invalid_argument for beta outside [0, 1] or a negative length.
double lorentz_contract(double dy_proper, Velocity v);

/// Aperture of the other box as measured by the observer: dy_max * |cos(theta)|.
double observed_aperture(double dy_max, Angle theta);

struct Aperture {
  double dy = 0.0;
  double dy_max = 1.0;

  static Aperture make(double dy, double dy_max);
  /// Pass probability of a positively charged ball, (dy / dy_max)^2.
  double pass_fraction() const;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
};

/// Unit spatial direction: a polarizer's optical axis.
class PreferredDirection {
 public:
  /// Throws unless |nu| = 1 within kProbabilityTolerance.
  static PreferredDirection make(const Vec3& nu);
  /// Unit vector at angle theta in the polarization (x, y) plane.
  static PreferredDirection in_plane(Angle theta);

  const Vec3& vector() const { return nu_; }
  /// The in-plane direction rotated by +90 degrees.
  PreferredDirection perpendicular() const;

 private:
  explicit PreferredDirection(const Vec3& nu) : nu_(nu) {}
  Vec3 nu_;
};

/// Contravariant 4-vector with signature (+, -, -, -).
struct FourVector {
  double t = 0.0;
  Vec3 space;

  /// x^i y_i
  double minkowski_dot(const FourVector& o) const { return t * o.t - space.dot(o.space); }
  double minkowski_square() const { return minkowski_dot(*this); }
};

/// The null vector (1, nu).
FourVector null_direction(const PreferredDirection& nu);

/// Anisotropy magnitude, |r| < 1.
struct AnisotropyParameter {
  double r = 0.0;

  static AnisotropyParameter make(double r);
};

/// Electric field vector of a photon.
struct FieldVector {
  Vec3 e;

  double magnitude() const { return e.norm(); }
};

/// ||x|| = ((nu_i x^i)^2 / (x^i x_i))^(r/2) * sqrt(x^i x_i).
///
/// x must be timelike and nu null. A zero nu_i x^i with r < 0 diverges and is
/// rejected. Throws std::invalid_argument.
double bogoslovsky_norm_4(const FourVector& x, const FourVector& nu, AnisotropyParameter r);

/// ||e|| = (|nu . e| / |e|)^r * |e|. Throws for a zero field.
double bogoslovsky_norm_3(const FieldVector& e, const PreferredDirection& nu, AnisotropyParameter r);

}  // namespace eprlab
