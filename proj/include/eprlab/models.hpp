#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "eprlab/core.hpp"
#include "eprlab/kinematics.hpp"
#include "eprlab/random.hpp"

namespace eprlab {

/// Whose account of the experiment is computed. ChargeBlind only reports the
/// charge-summed distribution.
enum class ObserverView { A, B, ChargeBlind };

std::string_view to_string(ObserverView view);

struct ChargeSplit {
  WeightedDistribution positive;
  WeightedDistribution negative;

  const WeightedDistribution& operator[](PhotonCharge charge) const {
    return charge == PhotonCharge::Positive ? positive : negative;
  }
};

struct PredictionSet {
  std::optional<ChargeSplit> per_charge;
  JointDistribution summed;
};

struct TrialRecord {
  std::optional<PhotonCharge> charge;
  Outcome outcome_a = Outcome::No;
  Outcome outcome_b = Outcome::No;
  std::optional<Angle> hidden_angle;
};

/// One description of the two-photon polarizer experiment.
///
/// predict() is the analytic account of an observer; sample() runs one trial
/// with randomness drawn only from the supplied stream. Implementations are
/// immutable and safe to share between threads.
class ExperimentModel {
 public:
  virtual ~ExperimentModel() = default;

  virtual std::string_view id() const = 0;
  virtual PredictionSet predict(const PolarizerSettings& settings, ObserverView view) const = 0;
  virtual TrialRecord sample(const PolarizerSettings& settings, TrialStream& stream) const = 0;
  /// Whether sample() reports a hidden charge.
  virtual bool has_charge() const = 0;
  /// The view whose per-charge distributions sample() reproduces.
  virtual ObserverView sampling_view() const { return ObserverView::ChargeBlind; }

  JointDistribution distribution(const PolarizerSettings& settings) const {
    return predict(settings, ObserverView::ChargeBlind).summed;
  }
};

// -- standard quantum mechanics ---------------------------------------------

/// (cos^2/2, sin^2/2, sin^2/2, cos^2/2) of the relative angle.
JointDistribution qm_predict(const PolarizerSettings& settings);

/// A passes with probability 1/2; B then passes with cos^2 if A passed and
/// sin^2 otherwise.
TrialRecord qm_sample(const PolarizerSettings& settings, TrialStream& stream);

class QuantumModel final : public ExperimentModel {
 public:
  std::string_view id() const override { return "qm"; }
  PredictionSet predict(const PolarizerSettings& settings, ObserverView view) const override;
  TrialRecord sample(const PolarizerSettings& settings, TrialStream& stream) const override {
    return qm_sample(settings, stream);
  }
  bool has_charge() const override { return false; }
};

// -- balls and boxes --------------------------------------------------------

/// Each observer sees their own box at full aperture and the other box
/// contracted to dy_max * |cos(theta)|. Outcomes at the two boxes are
/// independent given the charge.
PredictionSet balls_predict(const PolarizerSettings& settings, ObserverView view, double dy_max = 1.0);
TrialRecord balls_sample(const PolarizerSettings& settings, TrialStream& stream,
                         ObserverView view = ObserverView::A, double dy_max = 1.0);

class BallsBoxesModel final : public ExperimentModel {
 public:
  explicit BallsBoxesModel(ObserverView sampling_view = ObserverView::A, double dy_max = 1.0);

  std::string_view id() const override { return "balls"; }
  PredictionSet predict(const PolarizerSettings& settings, ObserverView view) const override {
    return balls_predict(settings, view, dy_max_);
  }
  TrialRecord sample(const PolarizerSettings& settings, TrialStream& stream) const override {
    return balls_sample(settings, stream, sampling_view_, dy_max_);
  }
  bool has_charge() const override { return true; }
  ObserverView sampling_view() const override { return sampling_view_; }

 private:
  ObserverView sampling_view_;
  double dy_max_;
};

// -- anisotropic spacetime --------------------------------------------------

/// Pass probability of a photon with field e at a polarizer with axis nu.
struct AnisotropicPassProbability {
  double norm;         ///< Bogoslovsky length of e
  double probability;  ///< (norm^2 / |e|^2)^(1/r)
};

/// The probability law raises the squared norm ratio (cosine^(2r)) to 1/r.
/// The exponents are composed exactly, so the probability is the squared
/// direction cosine for every r in (0, 1). Throws for r outside (0, 1) or a
/// zero field.
AnisotropicPassProbability evaluate_aniso_pass(const FieldVector& e, const PreferredDirection& nu,
                                               AnisotropyParameter r);
double aniso_pass_probability(const FieldVector& e, const PreferredDirection& nu, AnisotropyParameter r);

/// Positive pairs carry fields along the viewing observer's axis, negative
/// pairs perpendicular to it; each photon is tested against its own polarizer.
PredictionSet aniso_predict(const PolarizerSettings& settings, ObserverView view, AnisotropyParameter r);
TrialRecord aniso_sample(const PolarizerSettings& settings, TrialStream& stream, AnisotropyParameter r,
                         ObserverView view = ObserverView::A);

/// (nu_A . nu_B)^2 for axes at the two polarizer angles.
double preferred_direction_overlap(const PolarizerSettings& settings);

class AnisotropicModel final : public ExperimentModel {
 public:
  explicit AnisotropicModel(double r = 0.5, ObserverView sampling_view = ObserverView::A);

  std::string_view id() const override { return "aniso"; }
  PredictionSet predict(const PolarizerSettings& settings, ObserverView view) const override {
    return aniso_predict(settings, view, r_);
  }
  TrialRecord sample(const PolarizerSettings& settings, TrialStream& stream) const override {
    return aniso_sample(settings, stream, r_, sampling_view_);
  }
  bool has_charge() const override { return true; }
  ObserverView sampling_view() const override { return sampling_view_; }
  double r() const { return r_.r; }

 private:
  AnisotropyParameter r_;
  ObserverView sampling_view_;
};

// -- local hidden variables -------------------------------------------------

/// Deterministic baseline: lambda uniform on [0, pi); a side answers Yes iff
/// its axis lies within pi/4 of lambda (mod pi).
JointDistribution lhv_predict(const PolarizerSettings& settings);
TrialRecord lhv_sample(const PolarizerSettings& settings, TrialStream& stream);
/// The deterministic local answer of one side for hidden angle lambda.
Outcome lhv_answer(Angle axis, Angle lambda);

class LocalHiddenVariableModel final : public ExperimentModel {
 public:
  std::string_view id() const override { return "lhv"; }
  PredictionSet predict(const PolarizerSettings& settings, ObserverView view) const override;
  TrialRecord sample(const PolarizerSettings& settings, TrialStream& stream) const override {
    return lhv_sample(settings, stream);
  }
  bool has_charge() const override { return false; }
};

/// Builds a model by CLI name: qm, balls, aniso, lhv.
std::unique_ptr<ExperimentModel> make_model(std::string_view name, double r = 0.5,
                                            ObserverView sampling_view = ObserverView::A);

}  // namespace eprlab
