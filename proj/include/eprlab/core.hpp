#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string_view>

namespace eprlab {

/// Absolute tolerance for analytic probability identities.
inline constexpr double kProbabilityTolerance = 1e-12;

/// A plane angle stored in radians.
class Angle {
 public:
  constexpr Angle() = default;

  static Angle radians(double value);
  static Angle degrees(double value);

  constexpr double value() const { return radians_; }
  double to_degrees() const { return radians_ * 180.0 / std::numbers::pi; }

  /// Equivalent angle in [-pi, pi). sin and cos are unchanged up to rounding.
  Angle canonical() const;

  double cos() const { return std::cos(radians_); }
  double sin() const { return std::sin(radians_); }

  friend Angle operator-(Angle lhs, Angle rhs) { return Angle(lhs.radians_ - rhs.radians_); }
  friend Angle operator+(Angle lhs, Angle rhs) { return Angle(lhs.radians_ + rhs.radians_); }
  friend bool operator==(Angle, Angle) = default;

 private:
  constexpr explicit Angle(double radians) : radians_(radians) {}
  double radians_ = 0.0;
};

struct PolarizerSettings {
  Angle theta_a;
  Angle theta_b;
};

/// Canonicalized theta_a - theta_b.
Angle relative_angle(const PolarizerSettings& settings);

enum class PhotonCharge { Positive, Negative };
enum class Outcome { Yes, No };

std::string_view to_string(PhotonCharge charge);
std::string_view to_string(Outcome outcome);

/// Index of a joint outcome cell in (YY, YN, NY, NN) order.
enum class Cell { YY = 0, YN = 1, NY = 2, NN = 3 };

constexpr Cell cell_of(Outcome a, Outcome b) {
  if (a == Outcome::Yes) return b == Outcome::Yes ? Cell::YY : Cell::YN;
  return b == Outcome::Yes ? Cell::NY : Cell::NN;
}

inline constexpr std::array<std::string_view, 4> kCellNames = {"yy", "yn", "ny", "nn"};

/// Probabilities of the four joint outcomes of one pair of polarizer tests.
struct JointDistribution {
  double p_yy = 0.0;
  double p_yn = 0.0;
  double p_ny = 0.0;
  double p_nn = 0.0;

  /// Throws std::invalid_argument unless every cell is in [0, 1] and the
  /// cells sum to 1 within kProbabilityTolerance.
  static JointDistribution make(double yy, double yn, double ny, double nn);

  double operator[](Cell cell) const;
  std::array<double, 4> cells() const { return {p_yy, p_yn, p_ny, p_nn}; }
  double total() const { return p_yy + p_yn + p_ny + p_nn; }
  bool is_normalized(double tolerance = kProbabilityTolerance) const;

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;
};

struct Marginals {
  double p_a_yes = 0.0;
  double p_b_yes = 0.0;
};

/// Row and column sums. Throws std::invalid_argument for a corrupted
/// (non-normalized) distribution.
Marginals marginals(const JointDistribution& d);

/// A conditional distribution together with the probability of its
/// condition, e.g. the per-charge distribution with weight 1/2.
struct WeightedDistribution {
  double weight = 0.0;
  JointDistribution distribution;

  double operator[](Cell cell) const { return weight * distribution[cell]; }
};

/// Entrywise weighted sum. The weights must add up to 1.
JointDistribution sum_distributions(const WeightedDistribution& a, const WeightedDistribution& b);

/// Largest entrywise absolute difference.
double max_abs_difference(const JointDistribution& a, const JointDistribution& b);

}  // namespace eprlab
