#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eprlab/models.hpp"
#include "eprlab/report.hpp"

namespace eprlab::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 2, kStatisticalFailure = 3 };

struct SweepRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

/// Everything a run depends on. Angles are in degrees.
struct RunConfig {
  std::string model = "qm";
  double theta_a = 0.0;
  double theta_b = 0.0;
  double r = 0.5;
  ObserverView view = ObserverView::A;
  std::uint64_t trials = 100000;
  std::optional<std::uint64_t> seed;
  OutputFormat output = OutputFormat::Table;
  std::optional<SweepRange> sweep;
  unsigned workers = 1;

  // chsh
  double a = 0.0;
  double a_prime = 45.0;
  double b = 22.5;
  double b_prime = 67.5;
  std::optional<double> scan;
  bool empirical = false;
};

/// Throws std::invalid_argument for an inconsistent configuration.
void validate(const RunConfig& config);

Report cmd_predict(const RunConfig& config);
/// Sets hard_failure when an impossible-event cell fired.
Report cmd_simulate(const RunConfig& config, bool* hard_failure = nullptr);
/// cmd_simulate for an already constructed model.
Report simulate_model(const ExperimentModel& model, const RunConfig& config, bool* hard_failure = nullptr);
Report cmd_chsh(const RunConfig& config);
Report cmd_sweep(const RunConfig& config);

/// Parses arguments (without the program name), runs the subcommand and
/// writes the rendered report to `out` (or to --out). Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eprlab::cli
