#include "eprlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace eprlab {
namespace {

/// Joint distribution of two independent pass events.
JointDistribution independent(double pass_a, double pass_b) {
  return JointDistribution::make(pass_a * pass_b, pass_a * (1.0 - pass_b), (1.0 - pass_a) * pass_b,
                                 (1.0 - pass_a) * (1.0 - pass_b));
}

Outcome outcome_of(bool passed) { return passed ? Outcome::Yes : Outcome::No; }

void require_charge_blind(ObserverView view, std::string_view model) {
  if (view != ObserverView::ChargeBlind) {
    throw std::invalid_argument(std::string(model) + " has no hidden charge; only the charge-blind view exists");
  }
}

PredictionSet assemble(ObserverView view, const JointDistribution& positive, const JointDistribution& negative) {
  ChargeSplit split{{0.5, positive}, {0.5, negative}};
  PredictionSet out{split, sum_distributions(split.positive, split.negative)};
  if (view == ObserverView::ChargeBlind) out.per_charge.reset();
  return out;
}

/// Per-box pass probabilities of a positively charged ball for one observer.
struct BoxPassProbabilities {
  double a;
  double b;
};

BoxPassProbabilities balls_positive_pass(const PolarizerSettings& settings, ObserverView view, double dy_max) {
  const Angle theta = relative_angle(settings);
  const double own = Aperture::make(dy_max, dy_max).pass_fraction();
  const double other = Aperture::make(observed_aperture(dy_max, theta), dy_max).pass_fraction();
  if (view == ObserverView::B) return {other, own};
  return {own, other};
}

struct ChargePassProbabilities {
  BoxPassProbabilities positive;
  BoxPassProbabilities negative;
};

ChargePassProbabilities aniso_pass(const PolarizerSettings& settings, ObserverView view, AnisotropyParameter r) {
  const auto nu_a = PreferredDirection::in_plane(settings.theta_a);
  const auto nu_b = PreferredDirection::in_plane(settings.theta_b);
  const auto& nu_view = view == ObserverView::B ? nu_b : nu_a;
  const FieldVector positive{nu_view.vector()};
  const FieldVector negative{nu_view.perpendicular().vector()};
  return {{aniso_pass_probability(positive, nu_a, r), aniso_pass_probability(positive, nu_b, r)},
          {aniso_pass_probability(negative, nu_a, r), aniso_pass_probability(negative, nu_b, r)}};
}

AnisotropyParameter require_open_unit(AnisotropyParameter r) {
  if (!(r.r > 0.0 && r.r < 1.0)) throw std::invalid_argument("probability law needs 0 < r < 1");
  return r;
}

}  // namespace

std::string_view to_string(ObserverView view) {
  switch (view) {
    case ObserverView::A: return "A";
    case ObserverView::B: return "B";
    case ObserverView::ChargeBlind: return "blind";
  }
  return "?";
}

JointDistribution qm_predict(const PolarizerSettings& settings) {
  const Angle theta = relative_angle(settings);
  const double c = theta.cos();
  const double s = theta.sin();
  return JointDistribution::make(0.5 * c * c, 0.5 * s * s, 0.5 * s * s, 0.5 * c * c);
}

TrialRecord qm_sample(const PolarizerSettings& settings, TrialStream& stream) {
  const Angle theta = relative_angle(settings);
  const double c = theta.cos();
  const double s = theta.sin();
  TrialRecord record;
  const bool a_passed = stream.bernoulli(0.5);
  // After A's test the partner is polarized along theta_A (passed) or
  // perpendicular to it (absorbed).
  const bool b_passed = stream.bernoulli(a_passed ? c * c : s * s);
  record.outcome_a = outcome_of(a_passed);
  record.outcome_b = outcome_of(b_passed);
  return record;
}

PredictionSet QuantumModel::predict(const PolarizerSettings& settings, ObserverView view) const {
  require_charge_blind(view, "qm");
  return {std::nullopt, qm_predict(settings)};
}

PredictionSet balls_predict(const PolarizerSettings& settings, ObserverView view, double dy_max) {
  const auto pass = balls_positive_pass(settings, view, dy_max);
  // P+(Yes) = P-(No) at every box.
  return assemble(view, independent(pass.a, pass.b), independent(1.0 - pass.a, 1.0 - pass.b));
}

TrialRecord balls_sample(const PolarizerSettings& settings, TrialStream& stream, ObserverView view, double dy_max) {
  const auto pass = balls_positive_pass(settings, view, dy_max);
  TrialRecord record;
  const bool positive = stream.bernoulli(0.5);
  record.charge = positive ? PhotonCharge::Positive : PhotonCharge::Negative;
  const double pa = positive ? pass.a : 1.0 - pass.a;
  const double pb = positive ? pass.b : 1.0 - pass.b;
  record.outcome_a = outcome_of(stream.bernoulli(pa));
  record.outcome_b = outcome_of(stream.bernoulli(pb));
  return record;
}

BallsBoxesModel::BallsBoxesModel(ObserverView sampling_view, double dy_max)
    : sampling_view_(sampling_view), dy_max_(dy_max) {
  if (!(dy_max > 0.0)) throw std::invalid_argument("dy_max must be positive");
}

AnisotropicPassProbability evaluate_aniso_pass(const FieldVector& e, const PreferredDirection& nu,
                                               AnisotropyParameter r) {
  require_open_unit(r);
  const double norm = bogoslovsky_norm_3(e, nu, r);
  // norm / |e| = cosine^r, so (norm^2 / |e|^2)^(1/r) = cosine^(2r * 1/r) = cosine^2.
  const double cosine = std::min(1.0, std::abs(nu.vector().dot(e.e)) / e.magnitude());
  return {norm, cosine * cosine};
}

double aniso_pass_probability(const FieldVector& e, const PreferredDirection& nu, AnisotropyParameter r) {
  return evaluate_aniso_pass(e, nu, r).probability;
}

PredictionSet aniso_predict(const PolarizerSettings& settings, ObserverView view, AnisotropyParameter r) {
  const auto pass = aniso_pass(settings, view, require_open_unit(r));
  return assemble(view, independent(pass.positive.a, pass.positive.b),
                  independent(pass.negative.a, pass.negative.b));
}

TrialRecord aniso_sample(const PolarizerSettings& settings, TrialStream& stream, AnisotropyParameter r,
                         ObserverView view) {
  const auto pass = aniso_pass(settings, view, require_open_unit(r));
  TrialRecord record;
  // The field starts at a random direction (relative to the viewing axis) and
  // rotates counter-clockwise until it meets the axis or its perpendicular.
  const double start = 2.0 * std::numbers::pi * stream.uniform();
  record.hidden_angle = Angle::radians(start);
  const auto quadrant = static_cast<int>(start / (std::numbers::pi / 2.0));
  const bool positive = quadrant % 2 == 1;
  record.charge = positive ? PhotonCharge::Positive : PhotonCharge::Negative;
  const auto& box = positive ? pass.positive : pass.negative;
  record.outcome_a = outcome_of(stream.bernoulli(box.a));
  record.outcome_b = outcome_of(stream.bernoulli(box.b));
  return record;
}

double preferred_direction_overlap(const PolarizerSettings& settings) {
  const double dot = PreferredDirection::in_plane(settings.theta_a)
                         .vector()
                         .dot(PreferredDirection::in_plane(settings.theta_b).vector());
  return dot * dot;
}

AnisotropicModel::AnisotropicModel(double r, ObserverView sampling_view)
    : r_(require_open_unit(AnisotropyParameter::make(r))), sampling_view_(sampling_view) {}

namespace {

/// Distance between two axes modulo pi, in [0, pi/2].
double axis_distance(double x, double y) {
  const double d = std::fmod(std::abs(x - y), std::numbers::pi);
  return std::min(d, std::numbers::pi - d);
}

}  // namespace

JointDistribution lhv_predict(const PolarizerSettings& settings) {
  // Both Yes-windows are arcs of length pi/2 on a circle of length pi; they
  // overlap on pi/2 - delta, and so do the No-windows.
  const double delta = axis_distance(settings.theta_a.value(), settings.theta_b.value());
  const double disagree = delta / std::numbers::pi;
  return JointDistribution::make(0.5 - disagree, disagree, disagree, 0.5 - disagree);
}

Outcome lhv_answer(Angle axis, Angle lambda) {
  return outcome_of(axis_distance(axis.value(), lambda.value()) < std::numbers::pi / 4.0);
}

TrialRecord lhv_sample(const PolarizerSettings& settings, TrialStream& stream) {
  const Angle lambda = Angle::radians(std::numbers::pi * stream.uniform());
  TrialRecord record;
  record.hidden_angle = lambda;
  record.outcome_a = lhv_answer(settings.theta_a, lambda);
  record.outcome_b = lhv_answer(settings.theta_b, lambda);
  return record;
}

PredictionSet LocalHiddenVariableModel::predict(const PolarizerSettings& settings, ObserverView view) const {
  require_charge_blind(view, "lhv");
  return {std::nullopt, lhv_predict(settings)};
}

std::unique_ptr<ExperimentModel> make_model(std::string_view name, double r, ObserverView sampling_view) {
  if (name == "qm") return std::make_unique<QuantumModel>();
  if (name == "balls") return std::make_unique<BallsBoxesModel>(sampling_view);
  if (name == "aniso") return std::make_unique<AnisotropicModel>(r, sampling_view);
  if (name == "lhv") return std::make_unique<LocalHiddenVariableModel>();
  throw std::invalid_argument("unknown model: " + std::string(name));
}

}  // namespace eprlab
