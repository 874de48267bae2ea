#include "eprlab/bell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "eprlab/montecarlo.hpp"

namespace eprlab {
namespace {

constexpr std::array<ChshForm, 4> kForms = {ChshForm::MinusABPrime, ChshForm::MinusAB, ChshForm::MinusAPrimeB,
                                            ChshForm::MinusAPrimeBPrime};

std::array<PolarizerSettings, 4> setting_pairs(const ChshSettings& s) {
  return {{{s.a, s.b}, {s.a, s.b_prime}, {s.a_prime, s.b}, {s.a_prime, s.b_prime}}};
}

/// splitmix64 finalizer, used to give each setting pair its own stream key.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct ScanBest {
  double abs_s = -1.0;
  std::array<std::size_t, 4> index{};
  ChshForm form = ChshForm::MinusABPrime;
};

}  // namespace

double correlation(const JointDistribution& d) {
  if (!d.is_normalized()) throw std::invalid_argument("correlation of a non-normalized distribution");
  return d.p_yy + d.p_nn - d.p_yn - d.p_ny;
}

double chsh_statistic(const std::array<double, 4>& e, ChshForm form) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) s += i == static_cast<std::size_t>(form) ? -e[i] : e[i];
  return s;
}

ChshResult chsh(const ExperimentModel& model, const ChshSettings& settings) {
  ChshResult result;
  result.settings = settings;
  const auto pairs = setting_pairs(settings);
  for (std::size_t i = 0; i < 4; ++i) result.correlations[i] = correlation(model.distribution(pairs[i]));
  result.s_value = chsh_statistic(result.correlations);
  return result;
}

ChshResult chsh_empirical(const ExperimentModel& model, const ChshSettings& settings,
                          std::uint64_t trials_per_setting, std::uint64_t seed, unsigned workers) {
  ChshResult result;
  result.settings = settings;
  const auto pairs = setting_pairs(settings);
  double variance = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto tally = run_trials(model, pairs[i], trials_per_setting, mix(seed + i), workers);
    const auto empirical = to_empirical(tally);
    result.correlations[i] = correlation(empirical.estimate);
    // E = 2q - 1 with q the agreement frequency.
    const double agree = empirical.estimate.p_yy + empirical.estimate.p_nn;
    variance += 4.0 * agree * (1.0 - agree) / static_cast<double>(trials_per_setting);
  }
  result.s_value = chsh_statistic(result.correlations);
  result.empirical = EmpiricalProvenance{trials_per_setting, seed, std::sqrt(variance)};
  return result;
}

ChshResult chsh_scan(const ExperimentModel& model, Angle resolution, ScanOptions options) {
  const double step_deg = resolution.to_degrees();
  if (!(step_deg > 0.0) || step_deg > 15.0 + 1e-9) {
    throw std::invalid_argument("scan resolution must lie in (0, 15] degrees");
  }
  const double cells_real = 180.0 / step_deg;
  const auto cells = static_cast<std::size_t>(std::llround(cells_real));
  if (std::abs(cells_real - static_cast<double>(cells)) > 1e-9) {
    throw std::invalid_argument("scan resolution must divide 180 degrees");
  }

  std::vector<Angle> grid(cells);
  for (std::size_t i = 0; i < cells; ++i) grid[i] = Angle::degrees(static_cast<double>(i) * step_deg);

  // E(x, y) for every grid pair; the 4-angle scan only indexes into it.
  std::vector<double> table(cells * cells);
  for (std::size_t i = 0; i < cells; ++i) {
    for (std::size_t j = 0; j < cells; ++j) table[i * cells + j] = correlation(model.distribution({grid[i], grid[j]}));
  }
  const auto e = [&](std::size_t i, std::size_t j) { return table[i * cells + j]; };

  const std::size_t a_count = options.symmetry_reduction ? 1 : cells;
  const auto scan_a = [&](std::size_t a) {
    ScanBest best;
    for (std::size_t ap = 0; ap < cells; ++ap) {
      for (std::size_t b = 0; b < cells; ++b) {
        for (std::size_t bp = 0; bp < cells; ++bp) {
          const std::array<double, 4> corr = {e(a, b), e(a, bp), e(ap, b), e(ap, bp)};
          for (ChshForm form : kForms) {
            const double s = std::abs(chsh_statistic(corr, form));
            if (s > best.abs_s) best = {s, {a, ap, b, bp}, form};
          }
        }
      }
    }
    return best;
  };

  std::vector<ScanBest> per_a(a_count);
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(a_count)));
  {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (std::size_t a = w; a < a_count; a += workers) per_a[a] = scan_a(a);
      });
    }
  }

  ScanBest best;
  for (const auto& candidate : per_a) {
    if (candidate.abs_s > best.abs_s) best = candidate;
  }
  const auto& idx = best.index;
  ChshResult result;
  result.settings = {grid[idx[0]], grid[idx[1]], grid[idx[2]], grid[idx[3]]};
  result.form = best.form;
  result.correlations = {e(idx[0], idx[2]), e(idx[0], idx[3]), e(idx[1], idx[2]), e(idx[1], idx[3])};
  result.s_value = chsh_statistic(result.correlations, best.form);
  return result;
}

}  // namespace eprlab
