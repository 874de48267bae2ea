#include "eprlab/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace eprlab {

Angle Angle::radians(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("angle must be finite");
  return Angle(value);
}

Angle Angle::degrees(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("angle must be finite");
  return Angle(value * std::numbers::pi / 180.0);
}

Angle Angle::canonical() const {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (radians_ >= -std::numbers::pi && radians_ < std::numbers::pi) return *this;
  double wrapped = std::fmod(radians_ + std::numbers::pi, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  wrapped -= std::numbers::pi;
  // fmod rounding can land exactly on +pi.
  if (wrapped >= std::numbers::pi) wrapped -= kTwoPi;
  return Angle(wrapped);
}

Angle relative_angle(const PolarizerSettings& settings) {
  return (settings.theta_a - settings.theta_b).canonical();
}

std::string_view to_string(PhotonCharge charge) {
  return charge == PhotonCharge::Positive ? "+" : "-";
}

std::string_view to_string(Outcome outcome) { return outcome == Outcome::Yes ? "Yes" : "No"; }

JointDistribution JointDistribution::make(double yy, double yn, double ny, double nn) {
  JointDistribution d{yy, yn, ny, nn};
  for (double p : d.cells()) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("probability outside [0, 1]: " + std::to_string(p));
    }
  }
  if (!d.is_normalized()) {
    throw std::invalid_argument("joint distribution does not sum to 1: " + std::to_string(d.total()));
  }
  return d;
}

double JointDistribution::operator[](Cell cell) const {
  switch (cell) {
    case Cell::YY: return p_yy;
    case Cell::YN: return p_yn;
    case Cell::NY: return p_ny;
    case Cell::NN: return p_nn;
  }
  return 0.0;
}

bool JointDistribution::is_normalized(double tolerance) const {
  for (double p : cells()) {
    if (!std::isfinite(p) || p < -tolerance || p > 1.0 + tolerance) return false;
  }
  return std::abs(total() - 1.0) <= tolerance;
}

Marginals marginals(const JointDistribution& d) {
  if (!d.is_normalized()) throw std::invalid_argument("marginals of a non-normalized distribution");
  return {d.p_yy + d.p_yn, d.p_yy + d.p_ny};
}

JointDistribution sum_distributions(const WeightedDistribution& a, const WeightedDistribution& b) {
  if (a.weight < 0.0 || b.weight < 0.0 ||
      std::abs(a.weight + b.weight - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("weights of summed distributions must add up to 1");
  }
  JointDistribution out{a[Cell::YY] + b[Cell::YY], a[Cell::YN] + b[Cell::YN],
                        a[Cell::NY] + b[Cell::NY], a[Cell::NN] + b[Cell::NN]};
  if (!out.is_normalized()) throw std::invalid_argument("summed distribution is not normalized");
  return out;
}

double max_abs_difference(const JointDistribution& a, const JointDistribution& b) {
  double worst = 0.0;
  const auto ca = a.cells();
  const auto cb = b.cells();
  for (std::size_t i = 0; i < ca.size(); ++i) worst = std::max(worst, std::abs(ca[i] - cb[i]));
  return worst;
}

}  // namespace eprlab
