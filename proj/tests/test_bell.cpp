#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "eprlab/bell.hpp"
#include "oracles.hpp"

using namespace eprlab;

namespace {

const QuantumModel kQm;
const BallsBoxesModel kBalls;
const AnisotropicModel kAniso{0.25};
const LocalHiddenVariableModel kLhv;

ChshSettings standard() {
  return {Angle::degrees(0), Angle::degrees(45), Angle::degrees(22.5), Angle::degrees(67.5)};
}

/// Unreduced scan over the 4-angle grid straight from the model, used to check
/// the tabulated and symmetry-reduced search.
double brute_force_max_abs_s(const ExperimentModel& model, double step_deg) {
  const int cells = static_cast<int>(std::lround(180.0 / step_deg));
  const auto e = [&](int i, int j) {
    return correlation(model.distribution({Angle::degrees(i * step_deg), Angle::degrees(j * step_deg)}));
  };
  double best = 0.0;
  for (int a = 0; a < cells; ++a)
    for (int ap = 0; ap < cells; ++ap)
      for (int b = 0; b < cells; ++b)
        for (int bp = 0; bp < cells; ++bp) {
          const double terms[4] = {e(a, b), e(a, bp), e(ap, b), e(ap, bp)};
          const double total = terms[0] + terms[1] + terms[2] + terms[3];
          for (double t : terms) best = std::max(best, std::abs(total - 2 * t));
        }
  return best;
}

}  // namespace

TEST_CASE("correlation") {
  CHECK(correlation(qm_predict({Angle::degrees(0), Angle::degrees(0)})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(correlation(qm_predict({Angle::degrees(45), Angle::degrees(0)}))) < 1e-15);
  CHECK(correlation(qm_predict({Angle::degrees(30), Angle::degrees(0)})) ==
        doctest::Approx(oracle::qm_correlation(oracle::deg(30), 0)).epsilon(1e-14));
  CHECK(correlation(qm_predict({Angle::degrees(30), Angle::degrees(0)})) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(correlation({0.5, 0.5, 0.5, 0.5}), std::invalid_argument);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-720, 720);
  for (int i = 0; i < 5000; ++i) {
    const PolarizerSettings s{Angle::degrees(u(rng)), Angle::degrees(u(rng))};
    for (const ExperimentModel* m : {static_cast<const ExperimentModel*>(&kQm), static_cast<const ExperimentModel*>(&kBalls),
                                     static_cast<const ExperimentModel*>(&kAniso), static_cast<const ExperimentModel*>(&kLhv)}) {
      REQUIRE(std::abs(correlation(m->distribution(s))) <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("chsh at the standard settings") {
  const double direct = oracle::chsh_direct(oracle::qm_correlation, 0, oracle::deg(45), oracle::deg(22.5),
                                            oracle::deg(67.5));
  CHECK(std::abs(direct - oracle::kTsirelson) < 1e-12);

  for (const ExperimentModel* m : {static_cast<const ExperimentModel*>(&kQm), static_cast<const ExperimentModel*>(&kBalls),
                                   static_cast<const ExperimentModel*>(&kAniso)}) {
    const auto result = chsh(*m, standard());
    CHECK(std::abs(result.s_value - oracle::kTsirelson) < 1e-9);
    CHECK_FALSE(result.empirical);
  }

  const auto lhv = chsh(kLhv, standard());
  CHECK(lhv.s_value <= 2.0 + 1e-9);
  const auto grid = [](double x, double y) {
    const auto p = oracle::lhv_lambda_grid(x, y, 200000);
    return p[0] + p[3] - p[1] - p[2];
  };
  const double lhv_brute = oracle::chsh_direct(grid, 0, oracle::deg(45), oracle::deg(22.5), oracle::deg(67.5));
  CHECK(std::abs(lhv.s_value - lhv_brute) < 1e-4);
  CHECK(lhv.s_value == doctest::Approx(oracle::kLhvChshAtStandardSettings).epsilon(1e-12));

  const ChshSettings equal{Angle::degrees(10), Angle::degrees(10), Angle::degrees(10), Angle::degrees(10)};
  CHECK(chsh(kQm, equal).s_value == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("hidden-theory models reproduce the QM statistic for random settings") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-180, 180);
  for (int i = 0; i < 2000; ++i) {
    const ChshSettings s{Angle::degrees(u(rng)), Angle::degrees(u(rng)), Angle::degrees(u(rng)), Angle::degrees(u(rng))};
    const double qm = chsh(kQm, s).s_value;
    REQUIRE(std::abs(chsh(kBalls, s).s_value - qm) <= 1e-12);
    REQUIRE(std::abs(chsh(kAniso, s).s_value - qm) <= 1e-12);
  }
}

TEST_CASE("chsh statistic sign forms") {
  const std::array<double, 4> e = {0.1, 0.2, 0.3, 0.4};
  CHECK(chsh_statistic(e) == doctest::Approx(0.1 - 0.2 + 0.3 + 0.4));
  CHECK(chsh_statistic(e, ChshForm::MinusAB) == doctest::Approx(-0.1 + 0.2 + 0.3 + 0.4));
  CHECK(chsh_statistic(e, ChshForm::MinusAPrimeB) == doctest::Approx(0.1 + 0.2 - 0.3 + 0.4));
  CHECK(chsh_statistic(e, ChshForm::MinusAPrimeBPrime) == doctest::Approx(0.1 + 0.2 + 0.3 - 0.4));
}

TEST_CASE("chsh scan") {
  const auto qm = chsh_scan(kQm, Angle::degrees(2.5));
  CHECK(std::abs(std::abs(qm.s_value) - oracle::kTsirelson) < 1e-6);
  const auto lhv = chsh_scan(kLhv, Angle::degrees(2.5));
  CHECK(std::abs(lhv.s_value) <= 2.0 + 1e-9);
  const auto balls = chsh_scan(kBalls, Angle::degrees(2.5));
  CHECK(std::abs(std::abs(balls.s_value) - std::abs(qm.s_value)) <= 1e-12);

  // Reduced and unreduced searches agree with a direct brute force on a coarse grid.
  for (const ExperimentModel* m : {static_cast<const ExperimentModel*>(&kQm), static_cast<const ExperimentModel*>(&kLhv)}) {
    const double brute = brute_force_max_abs_s(*m, 7.5);
    CHECK(std::abs(std::abs(chsh_scan(*m, Angle::degrees(7.5), {false, 1}).s_value) - brute) < 1e-12);
    CHECK(std::abs(std::abs(chsh_scan(*m, Angle::degrees(7.5), {true, 1}).s_value) - brute) < 1e-12);
  }

  CHECK_THROWS_AS(chsh_scan(kQm, Angle::degrees(20)), std::invalid_argument);
  CHECK_THROWS_AS(chsh_scan(kQm, Angle::degrees(7)), std::invalid_argument);
  CHECK_THROWS_AS(chsh_scan(kQm, Angle::degrees(0)), std::invalid_argument);
}

TEST_CASE("chsh scan is identical for any worker count") {
  const auto sequential = chsh_scan(kQm, Angle::degrees(5), {false, 1});
  for (unsigned workers : {2u, 5u, 16u}) {
    const auto parallel = chsh_scan(kQm, Angle::degrees(5), {false, workers});
    CHECK(parallel.s_value == sequential.s_value);
    CHECK(parallel.settings.a == sequential.settings.a);
    CHECK(parallel.settings.a_prime == sequential.settings.a_prime);
    CHECK(parallel.settings.b == sequential.settings.b);
    CHECK(parallel.settings.b_prime == sequential.settings.b_prime);
    CHECK(parallel.form == sequential.form);
  }
}

TEST_CASE("empirical chsh is within four standard errors of the analytic value") {
  for (const ExperimentModel* m : {static_cast<const ExperimentModel*>(&kQm), static_cast<const ExperimentModel*>(&kBalls),
                                   static_cast<const ExperimentModel*>(&kAniso), static_cast<const ExperimentModel*>(&kLhv)}) {
    const auto analytic = chsh(*m, standard());
    const auto empirical = chsh_empirical(*m, standard(), 1'000'000, 99, 4);
    REQUIRE(empirical.empirical);
    INFO(m->id() << " S = " << empirical.s_value << " +- " << empirical.empirical->s_standard_error);
    CHECK(std::abs(empirical.s_value - analytic.s_value) < 4 * empirical.empirical->s_standard_error);
  }
}
