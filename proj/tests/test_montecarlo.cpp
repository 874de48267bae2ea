#include <cmath>
#include <stdexcept>
#include <thread>

#include "doctest.h"
#include "eprlab/montecarlo.hpp"
#include "oracles.hpp"

using namespace eprlab;

namespace {

PolarizerSettings deg(double a, double b) { return {Angle::degrees(a), Angle::degrees(b)}; }

const QuantumModel kQm;
const BallsBoxesModel kBalls;
const AnisotropicModel kAniso{0.5};
const LocalHiddenVariableModel kLhv;
const std::array<const ExperimentModel*, 4> kModels = {&kQm, &kBalls, &kAniso, &kLhv};

}  // namespace

TEST_CASE("run_trials basics") {
  const auto one = run_trials(kQm, deg(0, 0), 1, 77);
  CHECK(one.n == 1);
  CHECK(one.counts[0] + one.counts[3] == 1);
  CHECK(one.model_id == "qm");
  CHECK(one.seed == 77);
  CHECK_FALSE(one.per_charge_counts);
  CHECK_THROWS_AS(run_trials(kQm, deg(0, 0), 0, 1), std::invalid_argument);

  const auto charged = run_trials(kBalls, deg(10, 0), 1000, 5);
  CHECK(charged.per_charge_counts);
  CHECK(charged.is_consistent());
}

TEST_CASE("determinism and partition invariance") {
  const auto settings = deg(33, -4);
  for (const auto* model : kModels) {
    const auto reference = run_trials(*model, settings, 30011, 123456789);
    CHECK(reference == run_trials(*model, settings, 30011, 123456789));
    for (unsigned workers : {2u, 3u, 8u}) CHECK(reference == run_trials(*model, settings, 30011, 123456789, workers));

    // Uneven sub-batches merged in any order.
    const auto p1 = run_trial_range(*model, settings, 0, 7, 123456789);
    const auto p2 = run_trial_range(*model, settings, 7, 20000, 123456789);
    const auto p3 = run_trial_range(*model, settings, 20000, 30011, 123456789);
    CHECK(merge(merge(p1, p2), p3) == reference);
    CHECK(merge(p1, merge(p2, p3)) == reference);
    CHECK(merge(merge(p3, p1), p2) == reference);
    CHECK(reference.is_consistent());
  }
  CHECK(run_trials(kQm, settings, 1000, 1) != run_trials(kQm, settings, 1000, 2));
}

TEST_CASE("merge rejects tallies of different runs") {
  const auto a = run_trials(kQm, deg(0, 0), 10, 1);
  CHECK_THROWS_AS(merge(a, run_trials(kQm, deg(0, 0), 10, 2)), std::invalid_argument);
  CHECK_THROWS_AS(merge(a, run_trials(kLhv, deg(0, 0), 10, 1)), std::invalid_argument);
}

TEST_CASE("to_empirical") {
  Tally t;
  t.counts = {10, 0, 0, 10};
  t.n = 20;
  auto e = to_empirical(t);
  CHECK(e.estimate == JointDistribution{0.5, 0, 0, 0.5});

  t.counts = {1, 1, 1, 1};
  t.n = 4;
  e = to_empirical(t);
  CHECK(e.estimate == JointDistribution{0.25, 0.25, 0.25, 0.25});
  for (double se : e.standard_errors) CHECK(se == doctest::Approx(std::sqrt(0.25 * 0.75 / 4)));

  const auto run = run_trials(kAniso, deg(12, 0), 9999, 4);
  CHECK(to_empirical(run).estimate.total() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(to_empirical(run, PhotonCharge::Positive).n + to_empirical(run, PhotonCharge::Negative).n == 9999);
  CHECK_THROWS_AS(to_empirical(run_trials(kQm, deg(1, 0), 5, 1), PhotonCharge::Positive), std::invalid_argument);
}

TEST_CASE("convergence report") {
  EmpiricalDistribution exact;
  exact.n = 1000;
  exact.estimate = {0.375, 0.125, 0.125, 0.375};
  auto report = convergence_report({0.375, 0.125, 0.125, 0.375}, exact);
  for (const auto& cell : report.cells) {
    REQUIRE(cell.z);
    CHECK(*cell.z == 0.0);
  }
  CHECK(report.chi_square == 0.0);
  CHECK(report.degrees_of_freedom == 3);
  CHECK(report.p_value == doctest::Approx(1.0));

  EmpiricalDistribution impossible;
  impossible.n = 100;
  impossible.estimate = {0.49, 0.01, 0.0, 0.5};
  report = convergence_report({0.5, 0, 0, 0.5}, impossible);
  CHECK(report.hard_failure());
  CHECK(report.cells[1].hard_failure);
  CHECK_FALSE(report.cells[1].z);
  CHECK(report.degrees_of_freedom == 1);

  EmpiricalDistribution certain;
  certain.n = 100;
  certain.estimate = {1, 0, 0, 0};
  CHECK_FALSE(convergence_report({1, 0, 0, 0}, certain).hard_failure());
  certain.estimate = {0.99, 0.01, 0, 0};
  CHECK(convergence_report({1, 0, 0, 0}, certain).hard_failure());

  // One observation against a uniform analytic distribution gives chi^2 = 3
  // whatever the outcome; P(chi^2_3 > 3) = 0.39162517627.
  EmpiricalDistribution shifted;
  shifted.n = 1;
  shifted.estimate = {1, 0, 0, 0};
  report = convergence_report({0.25, 0.25, 0.25, 0.25}, shifted);
  CHECK(report.chi_square == doctest::Approx(3.0));
  CHECK(report.p_value == doctest::Approx(0.3916251762710878).epsilon(1e-12));
}

TEST_CASE("qm 30 degree run lands within four standard errors") {
  const auto tally = run_trials(kQm, deg(30, 0), 1'000'000, 2024, 4);
  const double p_yy = to_empirical(tally).estimate.p_yy;
  CHECK(std::abs(p_yy - 0.375) < 4 * oracle::kQmSeAt30);
  CHECK(oracle::kQmSeAt30 == doctest::Approx(oracle::binomial_se(0.375, 1e6)).epsilon(1e-15));
}

TEST_CASE("sampler and predictor agree for every model on a 15 degree grid") {
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  for (const auto* model : kModels) {
    for (int d = 0; d <= 90; d += 15) {
      const auto settings = deg(d, 0);
      const auto tally = run_trials(*model, settings, 1'000'000, 31337 + d, workers);
      const auto report = convergence_report(model->distribution(settings), to_empirical(tally));
      INFO(model->id() << " at " << d << " deg: chi2 " << report.chi_square << " p " << report.p_value);
      REQUIRE_FALSE(report.hard_failure());
      REQUIRE(report.p_value > 1e-4);
      REQUIRE(report.max_abs_z() < 4.0);

      if (model->has_charge()) {
        // Positive charges arrive half of the time.
        const double n = static_cast<double>(tally.n);
        const double plus = static_cast<double>(tally.charge_total(PhotonCharge::Positive)) / n;
        REQUIRE(std::abs(plus - 0.5) < 4 * oracle::binomial_se(0.5, n));
        // Per-charge tallies converge to the per-charge accounts, not only to the sums.
        const auto prediction = model->predict(settings, model->sampling_view());
        for (PhotonCharge charge : {PhotonCharge::Positive, PhotonCharge::Negative}) {
          const auto per = convergence_report((*prediction.per_charge)[charge].distribution,
                                              to_empirical(tally, charge));
          REQUIRE_FALSE(per.hard_failure());
          REQUIRE(per.max_abs_z() < 4.0);
        }
      }
    }
  }
}

TEST_CASE("view B sampling reproduces the B account per charge") {
  const BallsBoxesModel balls_b(ObserverView::B);
  const auto settings = deg(30, 0);
  const auto tally = run_trials(balls_b, settings, 400000, 8, 4);
  const auto prediction = balls_b.predict(settings, ObserverView::B);
  for (PhotonCharge charge : {PhotonCharge::Positive, PhotonCharge::Negative}) {
    const auto report = convergence_report((*prediction.per_charge)[charge].distribution, to_empirical(tally, charge));
    CHECK_FALSE(report.hard_failure());
    CHECK(report.max_abs_z() < 4.0);
  }
}

TEST_CASE("z-scores have nominal tails across independent seeds") {
  // 100 seeds x 4 cells at n = 1e5; P(|Z| > 2) = 0.0455.
  int exceed = 0;
  int cells = 0;
  const auto settings = deg(30, 0);
  const auto analytic = qm_predict(settings);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto report = convergence_report(analytic, to_empirical(run_trials(kQm, settings, 100'000, seed * 7919, 4)));
    for (const auto& cell : report.cells) {
      ++cells;
      if (std::abs(*cell.z) > 2.0) ++exceed;
    }
  }
  const double rate = static_cast<double>(exceed) / cells;
  // The four cells of one run are correlated (yy = nn mirrors), so allow the
  // binomial band computed on runs rather than cells.
  CHECK(std::abs(rate - 0.0455) < 4 * std::sqrt(0.0455 * 0.9545 / 100));
}
