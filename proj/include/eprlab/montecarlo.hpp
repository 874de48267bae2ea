#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eprlab/core.hpp"
#include "eprlab/models.hpp"

namespace eprlab {

using CellCounts = std::array<std::uint64_t, 4>;

/// Outcome counts of a batch of trials.
struct Tally {
  CellCounts counts{};
  /// Indexed by PhotonCharge; present for models with a hidden charge.
  std::optional<std::array<CellCounts, 2>> per_charge_counts;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string model_id;

  void record(const TrialRecord& trial);
  /// Counts sum to n and per-charge counts sum to the totals.
  bool is_consistent() const;
  std::uint64_t charge_total(PhotonCharge charge) const;

  friend bool operator==(const Tally&, const Tally&) = default;
};

/// Combines tallies of disjoint trial ranges of the same run. Associative and
/// commutative. Throws std::invalid_argument on seed or model mismatch.
Tally merge(const Tally& lhs, const Tally& rhs);

/// Runs trials [begin, end) of the stream keyed by seed.
Tally run_trial_range(const ExperimentModel& model, const PolarizerSettings& settings, std::uint64_t begin,
                      std::uint64_t end, std::uint64_t seed);

/// Runs n trials split across `workers` threads. The result depends only on
/// (model, settings, n, seed). Throws std::invalid_argument for n = 0.
Tally run_trials(const ExperimentModel& model, const PolarizerSettings& settings, std::uint64_t n,
                 std::uint64_t seed, unsigned workers = 1);

struct EmpiricalDistribution {
  JointDistribution estimate;
  std::array<double, 4> standard_errors{};
  std::uint64_t n = 0;
};

EmpiricalDistribution to_empirical(const Tally& tally);
/// Empirical distribution of one charge, normalized by that charge's count.
EmpiricalDistribution to_empirical(const Tally& tally, PhotonCharge charge);

struct CellCheck {
  double analytic = 0.0;
  double observed = 0.0;
  /// Absent for cells whose analytic probability is 0 or 1.
  std::optional<double> z;
  /// An exact-match cell that did not match (an impossible event occurred).
  bool hard_failure = false;
};

struct ConvergenceReport {
  std::array<CellCheck, 4> cells;
  double chi_square = 0.0;
  int degrees_of_freedom = 0;
  /// Upper-tail probability of chi_square; 1 when no degree of freedom.
  double p_value = 1.0;

  bool hard_failure() const;
  double max_abs_z() const;
};

/// Per-cell z-scores (standard error from the analytic p) and Pearson
/// chi-square over the non-degenerate cells.
ConvergenceReport convergence_report(const JointDistribution& analytic, const EmpiricalDistribution& empirical);

}  // namespace eprlab
