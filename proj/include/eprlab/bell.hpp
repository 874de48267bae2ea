#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "eprlab/core.hpp"
#include "eprlab/models.hpp"

namespace eprlab {

/// E = P(YY) + P(NN) - P(YN) - P(NY). Throws for a non-normalized input.
double correlation(const JointDistribution& d);

struct ChshSettings {
  Angle a;
  Angle a_prime;
  Angle b;
  Angle b_prime;
};

/// Which of the four terms carries the minus sign. The default statistic is
/// S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
/// The enumerator value is the index of the negated term.
enum class ChshForm { MinusAB = 0, MinusABPrime = 1, MinusAPrimeB = 2, MinusAPrimeBPrime = 3 };

struct EmpiricalProvenance {
  std::uint64_t trials_per_setting = 0;
  std::uint64_t seed = 0;
  /// Combined standard error of s_value.
  double s_standard_error = 0.0;
};

struct ChshResult {
  ChshSettings settings;
  ChshForm form = ChshForm::MinusABPrime;
  double s_value = 0.0;
  /// E(a,b), E(a,b'), E(a',b), E(a',b').
  std::array<double, 4> correlations{};
  /// Absent for analytic results.
  std::optional<EmpiricalProvenance> empirical;
};

/// S from four correlations in (ab, ab', a'b, a'b') order.
double chsh_statistic(const std::array<double, 4>& correlations, ChshForm form = ChshForm::MinusABPrime);

/// Analytic S from the model's charge-summed distributions.
ChshResult chsh(const ExperimentModel& model, const ChshSettings& settings);

/// Monte-Carlo S; each setting pair runs trials_per_setting trials on its own
/// stream derived from seed.
ChshResult chsh_empirical(const ExperimentModel& model, const ChshSettings& settings,
                          std::uint64_t trials_per_setting, std::uint64_t seed, unsigned workers = 1);

struct ScanOptions {
  /// Fix a = 0; S depends only on angle differences.
  bool symmetry_reduction = true;
  unsigned workers = 1;
};

/// Exhaustive search of all four settings on a grid over [0, 180) degrees and
/// all four sign forms for the largest |S|. Ties keep the first cell found in
/// row-major (a, a', b, b', form) order regardless of worker count.
/// Throws std::invalid_argument unless 0 < resolution <= 15 degrees and
/// divides 180 degrees.
ChshResult chsh_scan(const ExperimentModel& model, Angle resolution, ScanOptions options = {});

}  // namespace eprlab
