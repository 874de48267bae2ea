#include "eprlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>

#include "CLI11.hpp"
#include "eprlab/bell.hpp"
#include "eprlab/montecarlo.hpp"

namespace eprlab::cli {
namespace {

const std::map<std::string, ObserverView> kViews = {
    {"A", ObserverView::A}, {"B", ObserverView::B}, {"blind", ObserverView::ChargeBlind}};
const std::map<std::string, OutputFormat> kFormats = {
    {"table", OutputFormat::Table}, {"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}};

template <class T>
T lookup(const std::map<std::string, T>& table, const std::string& name) {
  for (const auto& [key, value] : table) {
    if (CLI::detail::to_lower(key) == CLI::detail::to_lower(name)) return value;
  }
  throw std::invalid_argument("unknown value: " + name);
}

std::string_view format_name(OutputFormat format) {
  for (const auto& [name, value] : kFormats) {
    if (value == format) return name;
  }
  return "?";
}

PolarizerSettings settings_of(double theta_a, double theta_b) {
  return {Angle::degrees(theta_a), Angle::degrees(theta_b)};
}

/// The view a model actually reports: charge-free models only have the blind view.
ObserverView effective_view(const RunConfig& config, const ExperimentModel& model) {
  return model.has_charge() ? config.view : ObserverView::ChargeBlind;
}

std::unique_ptr<ExperimentModel> model_for(const RunConfig& config) {
  const ObserverView sampling = config.view == ObserverView::ChargeBlind ? ObserverView::A : config.view;
  return make_model(config.model, config.r, sampling);
}

nlohmann::json config_json(const RunConfig& config, std::string_view command) {
  nlohmann::json j;
  j["command"] = command;
  j["model"] = config.model;
  j["theta_a"] = config.theta_a;
  j["theta_b"] = config.theta_b;
  j["r"] = config.r;
  j["view"] = to_string(config.view);
  j["trials"] = config.trials;
  j["seed"] = config.seed ? nlohmann::json(*config.seed) : nlohmann::json(nullptr);
  j["output"] = format_name(config.output);
  j["sweep"] = config.sweep ? nlohmann::json::array({config.sweep->start, config.sweep->stop, config.sweep->step})
                            : nlohmann::json(nullptr);
  j["a"] = config.a;
  j["a_prime"] = config.a_prime;
  j["b"] = config.b;
  j["b_prime"] = config.b_prime;
  j["scan"] = config.scan ? nlohmann::json(*config.scan) : nlohmann::json(nullptr);
  j["empirical"] = config.empirical;
  return j;
}

void add_cells(Record& record, std::string_view prefix, const std::array<double, 4>& cells) {
  for (std::size_t i = 0; i < 4; ++i) record.add(std::string(prefix) + std::string(kCellNames[i]), cells[i]);
}

void add_missing_cells(Record& record, std::string_view prefix) {
  for (const auto& name : kCellNames) record.add(std::string(prefix) + std::string(name), Value{});
}

std::string_view form_name(ChshForm form) {
  switch (form) {
    case ChshForm::MinusAB: return "ab";
    case ChshForm::MinusABPrime: return "ab'";
    case ChshForm::MinusAPrimeB: return "a'b";
    case ChshForm::MinusAPrimeBPrime: return "a'b'";
  }
  return "?";
}

Record chsh_record(std::string_view row, const ChshResult& result) {
  Record record;
  record.add("row", std::string(row))
      .add("a", result.settings.a.to_degrees())
      .add("a_prime", result.settings.a_prime.to_degrees())
      .add("b", result.settings.b.to_degrees())
      .add("b_prime", result.settings.b_prime.to_degrees())
      .add("negated_term", std::string(form_name(result.form)))
      .add("e_ab", result.correlations[0])
      .add("e_abp", result.correlations[1])
      .add("e_apb", result.correlations[2])
      .add("e_apbp", result.correlations[3])
      .add("s", result.s_value);
  if (result.empirical) {
    record.add("se_s", result.empirical->s_standard_error)
        .add("trials_per_setting", result.empirical->trials_per_setting)
        .add("seed", result.empirical->seed);
  } else {
    record.add("se_s", Value{}).add("trials_per_setting", Value{}).add("seed", Value{});
  }
  return record;
}

/// One simulate row: counts, estimates, standard errors and z-scores.
Record simulate_record(std::string_view row, const CellCounts& counts, std::uint64_t n,
                       const JointDistribution& analytic, bool* hard_failure) {
  Record record;
  record.add("row", std::string(row)).add("n", n);
  for (std::size_t i = 0; i < 4; ++i) record.add("count_" + std::string(kCellNames[i]), counts[i]);
  add_cells(record, "analytic_", analytic.cells());
  if (n == 0) {
    add_missing_cells(record, "p_");
    add_missing_cells(record, "se_");
    add_missing_cells(record, "z_");
    record.add("chi_square", Value{}).add("dof", Value{}).add("p_value", Value{}).add("hard_failure", false);
    return record;
  }
  Tally tally;
  tally.counts = counts;
  tally.n = n;
  const auto empirical = to_empirical(tally);
  const auto report = convergence_report(analytic, empirical);
  add_cells(record, "p_", empirical.estimate.cells());
  add_cells(record, "se_", empirical.standard_errors);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& z = report.cells[i].z;
    record.add("z_" + std::string(kCellNames[i]), z ? Value{*z} : Value{});
  }
  record.add("chi_square", report.chi_square)
      .add("dof", static_cast<std::int64_t>(report.degrees_of_freedom))
      .add("p_value", report.p_value)
      .add("hard_failure", report.hard_failure());
  if (report.hard_failure() && hard_failure) *hard_failure = true;
  return record;
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.model != "qm" && config.model != "balls" && config.model != "aniso" && config.model != "lhv") {
    throw std::invalid_argument("unknown model '" + config.model + "' (expected qm, balls, aniso or lhv)");
  }
  if (config.model == "aniso" && !(config.r > 0.0 && config.r < 1.0)) {
    throw std::invalid_argument("aniso model needs 0 < r < 1");
  }
  for (double angle : {config.theta_a, config.theta_b, config.a, config.a_prime, config.b, config.b_prime}) {
    if (!std::isfinite(angle)) throw std::invalid_argument("angles must be finite");
  }
  if (config.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (config.workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (config.sweep) {
    if (!(config.sweep->step > 0.0)) throw std::invalid_argument("sweep step must be positive");
    if (!(config.sweep->stop >= config.sweep->start)) throw std::invalid_argument("empty sweep range");
  }
}

Report cmd_predict(const RunConfig& config) {
  validate(config);
  const auto model = model_for(config);
  const ObserverView view = effective_view(config, *model);
  const auto settings = settings_of(config.theta_a, config.theta_b);
  const auto prediction = model->predict(settings, view);
  const double overlap = preferred_direction_overlap(settings);

  Report report;
  report.command = "predict";
  report.config = config_json(config, report.command);
  report.config_columns.add("command", report.command)
      .add("model", config.model)
      .add("view", std::string(to_string(view)))
      .add("theta_a", config.theta_a)
      .add("theta_b", config.theta_b)
      .add("r", config.r);

  const auto row = [&](std::string_view name, double weight, const std::array<double, 4>& p) {
    Record record;
    record.add("row", std::string(name)).add("weight", weight);
    add_cells(record, "p_", p);
    record.add("p_a_yes", p[0] + p[1]).add("p_b_yes", p[0] + p[2]).add("p_same", p[0] + p[3]).add("nu_overlap", overlap);
    return record;
  };
  if (prediction.per_charge) {
    for (PhotonCharge charge : {PhotonCharge::Positive, PhotonCharge::Negative}) {
      const auto& weighted = (*prediction.per_charge)[charge];
      std::array<double, 4> p{};
      for (std::size_t i = 0; i < 4; ++i) p[i] = weighted[static_cast<Cell>(i)];
      report.records.push_back(row(to_string(charge), weighted.weight, p));
    }
  }
  const auto m = marginals(prediction.summed);
  auto summed = row("summed", 1.0, prediction.summed.cells());
  for (auto& [key, value] : summed.fields) {
    if (key == "p_a_yes") value = m.p_a_yes;
    if (key == "p_b_yes") value = m.p_b_yes;
  }
  report.records.push_back(std::move(summed));
  return report;
}

Report cmd_simulate(const RunConfig& config, bool* hard_failure) {
  validate(config);
  return simulate_model(*model_for(config), config, hard_failure);
}

Report simulate_model(const ExperimentModel& model, const RunConfig& config, bool* hard_failure) {
  if (!config.seed) throw std::invalid_argument("simulate needs a seed");
  const auto settings = settings_of(config.theta_a, config.theta_b);
  const auto tally = run_trials(model, settings, config.trials, *config.seed, config.workers);
  const ObserverView sampling = model.has_charge() ? model.sampling_view() : ObserverView::ChargeBlind;

  Report report;
  report.command = "simulate";
  report.config = config_json(config, report.command);
  report.config_columns.add("command", report.command)
      .add("model", std::string(model.id()))
      .add("view", std::string(to_string(sampling)))
      .add("theta_a", config.theta_a)
      .add("theta_b", config.theta_b)
      .add("r", config.r)
      .add("trials", config.trials)
      .add("seed", *config.seed);

  if (hard_failure) *hard_failure = false;
  report.records.push_back(
      simulate_record("all", tally.counts, tally.n, model.distribution(settings), hard_failure));
  if (tally.per_charge_counts) {
    const auto prediction = model.predict(settings, sampling);
    for (PhotonCharge charge : {PhotonCharge::Positive, PhotonCharge::Negative}) {
      const auto index = charge == PhotonCharge::Positive ? 0 : 1;
      report.records.push_back(simulate_record(to_string(charge), (*tally.per_charge_counts)[index],
                                               tally.charge_total(charge),
                                               (*prediction.per_charge)[charge].distribution, hard_failure));
    }
  }
  return report;
}

Report cmd_chsh(const RunConfig& config) {
  validate(config);
  if (config.empirical && !config.seed) throw std::invalid_argument("empirical chsh needs a seed");
  const auto model = model_for(config);

  Report report;
  report.command = "chsh";
  report.config = config_json(config, report.command);
  report.config_columns.add("command", report.command)
      .add("model", config.model)
      .add("r", config.r)
      .add("scan", config.scan ? Value{*config.scan} : Value{});

  ChshResult analytic;
  if (config.scan) {
    analytic = chsh_scan(*model, Angle::degrees(*config.scan), {true, config.workers});
  } else {
    analytic = chsh(*model, {Angle::degrees(config.a), Angle::degrees(config.a_prime), Angle::degrees(config.b),
                             Angle::degrees(config.b_prime)});
  }
  report.records.push_back(chsh_record("analytic", analytic));
  if (config.empirical) {
    auto empirical = chsh_empirical(*model, analytic.settings, config.trials, *config.seed, config.workers);
    if (empirical.form != analytic.form) {
      empirical.form = analytic.form;
      empirical.s_value = chsh_statistic(empirical.correlations, analytic.form);
    }
    report.records.push_back(chsh_record("empirical", empirical));
  }
  return report;
}

Report cmd_sweep(const RunConfig& config) {
  validate(config);
  if (!config.sweep) throw std::invalid_argument("sweep needs --sweep START STOP STEP");
  const auto model = model_for(config);
  const ObserverView view = effective_view(config, *model);
  const auto& range = *config.sweep;

  Report report;
  report.command = "sweep";
  report.config = config_json(config, report.command);
  report.config_columns.add("command", report.command)
      .add("model", config.model)
      .add("view", std::string(to_string(view)))
      .add("theta_b", config.theta_b)
      .add("r", config.r)
      .add("sweep_start", range.start)
      .add("sweep_stop", range.stop)
      .add("sweep_step", range.step);

  const auto points = static_cast<std::uint64_t>(std::floor((range.stop - range.start) / range.step + 1e-9)) + 1;
  for (std::uint64_t k = 0; k < points; ++k) {
    const double theta_a = range.start + static_cast<double>(k) * range.step;
    const auto settings = settings_of(theta_a, config.theta_b);
    const auto d = model->predict(settings, view).summed;
    const auto m = marginals(d);
    Record record;
    record.add("theta_a", theta_a).add("theta", relative_angle(settings).to_degrees());
    add_cells(record, "p_", d.cells());
    record.add("p_a_yes", m.p_a_yes)
        .add("p_b_yes", m.p_b_yes)
        .add("correlation", correlation(d))
        .add("p_same", d.p_yy + d.p_nn)
        .add("nu_overlap", preferred_direction_overlap(settings));
    report.records.push_back(std::move(record));
  }
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string out_path;
  std::vector<double> sweep;
  std::uint64_t seed = 0;
  double scan = 0.0;

  CLI::App app{"Simulation lab for two-photon polarizer correlations", "eprlab"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "Flat key = value file with any of the options below; flags override it");
  app.add_option("--model", config.model, "qm | balls | aniso | lhv")->capture_default_str();
  app.add_option("--theta-a", config.theta_a, "Axis of polarizer A in degrees")->capture_default_str();
  app.add_option("--theta-b", config.theta_b, "Axis of polarizer B in degrees")->capture_default_str();
  app.add_option("--r", config.r, "Anisotropy parameter of the aniso model, 0 < r < 1")->capture_default_str();
  std::string view_name = "A";
  app.add_option("--view", view_name, "Observer: A | B | blind")
      ->check(CLI::IsMember(kViews, CLI::ignore_case))
      ->capture_default_str();
  app.add_option("--trials", config.trials, "Trials (per setting pair for chsh)")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "64-bit seed; generated and printed when omitted");
  app.add_option("--workers", config.workers, "Worker threads; results do not depend on it")->capture_default_str();
  std::string output_name = "table";
  app.add_option("--output", output_name, "table | csv | json")
      ->check(CLI::IsMember(kFormats, CLI::ignore_case))
      ->capture_default_str();
  app.add_option("--out", out_path, "Write to this file instead of stdout");
  auto* sweep_opt = app.add_option("--sweep", sweep, "START STOP STEP in degrees, swept over theta-a")->expected(3);
  app.add_option("--a", config.a, "chsh setting a (degrees)")->capture_default_str();
  app.add_option("--a-prime", config.a_prime, "chsh setting a' (degrees)")->capture_default_str();
  app.add_option("--b", config.b, "chsh setting b (degrees)")->capture_default_str();
  app.add_option("--b-prime", config.b_prime, "chsh setting b' (degrees)")->capture_default_str();
  auto* scan_opt = app.add_option("--scan", scan, "chsh: scan all settings on a grid of this resolution (degrees)");
  app.add_flag("--empirical", config.empirical, "chsh: add a Monte-Carlo estimate");

  auto* predict = app.add_subcommand("predict", "Analytic joint distribution");
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo run with convergence report");
  auto* chsh_cmd = app.add_subcommand("chsh", "CHSH statistic");
  auto* sweep_cmd = app.add_subcommand("sweep", "Analytic distribution over a range of theta-a");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    config.view = lookup(kViews, view_name);
    config.output = lookup(kFormats, output_name);
    if (*seed_opt) config.seed = seed;
    if (*scan_opt) config.scan = scan;
    if (*sweep_opt) config.sweep = SweepRange{sweep.at(0), sweep.at(1), sweep.at(2)};
    const bool needs_seed = simulate->parsed() || (chsh_cmd->parsed() && config.empirical);
    if (needs_seed && !config.seed) {
      std::random_device device;
      config.seed = (static_cast<std::uint64_t>(device()) << 32) | device();
    }

    bool hard_failure = false;
    Report report;
    if (predict->parsed()) report = cmd_predict(config);
    if (simulate->parsed()) report = cmd_simulate(config, &hard_failure);
    if (chsh_cmd->parsed()) report = cmd_chsh(config);
    if (sweep_cmd->parsed()) report = cmd_sweep(config);

    if (out_path.empty()) {
      render(report, config.output, out);
    } else {
      std::ofstream file(out_path);
      if (!file) throw std::invalid_argument("cannot open " + out_path);
      render(report, config.output, file);
    }
    return hard_failure ? kStatisticalFailure : kSuccess;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace eprlab::cli
