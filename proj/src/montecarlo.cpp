#include "eprlab/montecarlo.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace eprlab {
namespace {

std::size_t index_of(Cell cell) { return static_cast<std::size_t>(cell); }
std::size_t index_of(PhotonCharge charge) { return charge == PhotonCharge::Positive ? 0 : 1; }

std::uint64_t sum(const CellCounts& c) { return c[0] + c[1] + c[2] + c[3]; }

EmpiricalDistribution empirical_from(const CellCounts& counts, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("empirical distribution of zero trials");
  EmpiricalDistribution out;
  out.n = n;
  const double total = static_cast<double>(n);
  std::array<double, 4> p{};
  for (std::size_t i = 0; i < 4; ++i) p[i] = static_cast<double>(counts[i]) / total;
  out.estimate = {p[0], p[1], p[2], p[3]};
  for (std::size_t i = 0; i < 4; ++i) out.standard_errors[i] = std::sqrt(p[i] * (1.0 - p[i]) / total);
  return out;
}

}  // namespace

void Tally::record(const TrialRecord& trial) {
  const auto cell = index_of(cell_of(trial.outcome_a, trial.outcome_b));
  ++counts[cell];
  ++n;
  if (trial.charge) {
    if (!per_charge_counts) per_charge_counts.emplace();
    ++(*per_charge_counts)[index_of(*trial.charge)][cell];
  }
}

bool Tally::is_consistent() const {
  if (sum(counts) != n) return false;
  if (!per_charge_counts) return true;
  for (std::size_t i = 0; i < 4; ++i) {
    if ((*per_charge_counts)[0][i] + (*per_charge_counts)[1][i] != counts[i]) return false;
  }
  return true;
}

std::uint64_t Tally::charge_total(PhotonCharge charge) const {
  return per_charge_counts ? sum((*per_charge_counts)[index_of(charge)]) : 0;
}

Tally merge(const Tally& lhs, const Tally& rhs) {
  if (lhs.seed != rhs.seed || lhs.model_id != rhs.model_id) {
    throw std::invalid_argument("cannot merge tallies of different runs");
  }
  Tally out = lhs;
  out.n += rhs.n;
  for (std::size_t i = 0; i < 4; ++i) out.counts[i] += rhs.counts[i];
  if (rhs.per_charge_counts) {
    if (!out.per_charge_counts) out.per_charge_counts.emplace();
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t i = 0; i < 4; ++i) (*out.per_charge_counts)[c][i] += (*rhs.per_charge_counts)[c][i];
    }
  }
  return out;
}

Tally run_trial_range(const ExperimentModel& model, const PolarizerSettings& settings, std::uint64_t begin,
                      std::uint64_t end, std::uint64_t seed) {
  Tally tally;
  tally.seed = seed;
  tally.model_id = std::string(model.id());
  if (model.has_charge()) tally.per_charge_counts.emplace();
  for (std::uint64_t i = begin; i < end; ++i) {
    TrialStream stream(seed, i);
    tally.record(model.sample(settings, stream));
  }
  return tally;
}

Tally run_trials(const ExperimentModel& model, const PolarizerSettings& settings, std::uint64_t n,
                 std::uint64_t seed, unsigned workers) {
  if (n == 0) throw std::invalid_argument("run_trials needs at least one trial");
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, n));
  if (workers == 1) return run_trial_range(model, settings, 0, n, seed);

  std::vector<Tally> parts(workers);
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = n * w / workers;
    const std::uint64_t end = n * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] { parts[w] = run_trial_range(model, settings, begin, end, seed); });
  }
  threads.clear();

  Tally out = parts.front();
  for (std::size_t w = 1; w < parts.size(); ++w) out = merge(out, parts[w]);
  return out;
}

EmpiricalDistribution to_empirical(const Tally& tally) { return empirical_from(tally.counts, tally.n); }

EmpiricalDistribution to_empirical(const Tally& tally, PhotonCharge charge) {
  if (!tally.per_charge_counts) throw std::invalid_argument("tally has no per-charge counts");
  const auto& counts = (*tally.per_charge_counts)[index_of(charge)];
  return empirical_from(counts, sum(counts));
}

bool ConvergenceReport::hard_failure() const {
  return std::any_of(cells.begin(), cells.end(), [](const CellCheck& c) { return c.hard_failure; });
}

double ConvergenceReport::max_abs_z() const {
  double worst = 0.0;
  for (const auto& c : cells) {
    if (c.z) worst = std::max(worst, std::abs(*c.z));
  }
  return worst;
}

ConvergenceReport convergence_report(const JointDistribution& analytic, const EmpiricalDistribution& empirical) {
  if (empirical.n == 0) throw std::invalid_argument("convergence report of zero trials");
  ConvergenceReport report;
  const double n = static_cast<double>(empirical.n);
  const auto expected = analytic.cells();
  const auto observed = empirical.estimate.cells();
  int live_cells = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    auto& cell = report.cells[i];
    cell.analytic = expected[i];
    cell.observed = observed[i];
    if (expected[i] <= kProbabilityTolerance) {
      cell.hard_failure = observed[i] != 0.0;
    } else if (expected[i] >= 1.0 - kProbabilityTolerance) {
      cell.hard_failure = observed[i] != 1.0;
    } else {
      const double se = std::sqrt(expected[i] * (1.0 - expected[i]) / n);
      cell.z = (observed[i] - expected[i]) / se;
      const double deviation = (observed[i] - expected[i]) * n;
      report.chi_square += deviation * deviation / (expected[i] * n);
      ++live_cells;
    }
  }
  report.degrees_of_freedom = std::max(0, live_cells - 1);
  if (report.degrees_of_freedom > 0) {
    report.p_value = boost::math::gamma_q(report.degrees_of_freedom / 2.0, report.chi_square / 2.0);
  }
  return report;
}

}  // namespace eprlab
