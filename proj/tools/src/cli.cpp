#include "msvsim/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <optional>
#include <vector>

#include "msvsim/config.hpp"
#include "msvsim/csv.hpp"
#include "msvsim/svg.hpp"

namespace fs = std::filesystem;

namespace msvsim {
namespace {

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::size_t parallelism = 1;
  std::string rule;
  std::optional<double> lr;
  std::string input;
  bool tuned = false;
};

class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SimulationConfig resolve_config(const Options& opt) {
  SimulationConfig config = opt.config_path.empty() ? default_config() : load_config(opt.config_path);
  if (opt.seed) config.experiment.master_seed = *opt.seed;
  return config;
}

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw RuntimeFailure("cannot create output directory '" + dir.string() + "'");
}

std::vector<msv::UpdateRule> selected_rules(const std::string& rule) {
  if (rule == "linear") return {msv::UpdateRule::Linear};
  if (rule == "powerlaw") return {msv::UpdateRule::PowerLaw};
  return {msv::UpdateRule::PowerLaw, msv::UpdateRule::Linear};
}

double configured_lr(const msv::ExperimentConfig& c, msv::UpdateRule rule) {
  return rule == msv::UpdateRule::Linear ? c.lr_linear : c.lr_powerlaw;
}

void print_summary(std::ostream& out, const char* name, const msv::EpochSummary& s) {
  out << std::setw(9) << name << ": " << s.mean << " +/- " << s.stddev << " epochs ("
      << s.converged.size() << " converged, " << s.n_failed << " not converged)\n";
}

void cmd_train(const Options& opt, std::ostream& out) {
  const SimulationConfig config = resolve_config(opt);
  const msv::UpdateRule rule =
      opt.rule.empty() ? config.experiment.actor.update_rule : selected_rules(opt.rule).front();
  const double lr = opt.lr.value_or(configured_lr(config.experiment, rule));
  if (!(lr > 0.0)) throw ConfigError("--lr must be positive");
  const fs::path dir = opt.out_dir;
  ensure_out_dir(dir);

  const auto trials = msv::run_trials(config.experiment, rule, lr, opt.parallelism);
  write_file(dir / "learning_curve.csv",
             [&](std::ostream& os) { write_learning_curve_csv(os, trials); });
  out << "rule " << msv::to_string(rule) << ", lr_hidden " << lr << '\n';
  print_summary(out, msv::to_string(rule), msv::summarize_epochs(trials));
}

void cmd_sweep(const Options& opt, std::ostream& out) {
  const SimulationConfig config = resolve_config(opt);
  const fs::path dir = opt.out_dir;
  ensure_out_dir(dir);
  std::vector<msv::SweepResult> sweeps;
  for (auto rule : selected_rules(opt.rule)) {
    sweeps.push_back(msv::lr_sweep(config.experiment, rule, opt.parallelism));
    out << msv::to_string(rule) << ": best lr_hidden " << sweeps.back().best_lr << '\n';
  }
  write_file(dir / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, sweeps); });
}

void cmd_compare(const Options& opt, std::ostream& out) {
  SimulationConfig config = resolve_config(opt);
  const fs::path dir = opt.out_dir;
  ensure_out_dir(dir);
  if (opt.tuned) {
    config.experiment.lr_powerlaw =
        msv::lr_sweep(config.experiment, msv::UpdateRule::PowerLaw, opt.parallelism).best_lr;
    config.experiment.lr_linear =
        msv::lr_sweep(config.experiment, msv::UpdateRule::Linear, opt.parallelism).best_lr;
  }
  msv::ComparisonReport report;
  try {
    report = msv::compare_rules(config.experiment, opt.parallelism);
  } catch (const msv::StatisticsUnavailable& e) {
    throw RuntimeFailure(e.what());
  }
  write_file(dir / "comparison.csv", [&](std::ostream& os) { write_comparison_csv(os, report); });
  write_file(dir / "stats.csv", [&](std::ostream& os) { write_stats_csv(os, report.welch); });
  print_summary(out, "powerlaw", report.a.epochs);
  print_summary(out, "linear", report.b.epochs);
  out << "Welch t = " << report.welch.t << ", nu = " << report.welch.nu
      << ", p(one-sided) = " << report.welch.p_one_sided
      << ", p(two-sided) = " << report.welch.p_two_sided << '\n';
}

void cmd_device_map(const Options& opt, std::ostream& out) {
  const SimulationConfig config = resolve_config(opt);
  const fs::path dir = opt.out_dir;
  ensure_out_dir(dir);
  const auto& grid = config.pulse_map;
  const msv::PulseMap map =
      msv::pulse_map_sweep(grid.voltages, grid.durations, grid.n_pulses, config.device);
  write_file(dir / "pulse_map.csv", [&](std::ostream& os) { write_pulse_map_csv(os, map); });

  const auto& anchor = config.calibration;
  out << "pulse time constant tau = " << config.device.pulse_time_constant_tau << " V*s"
      << (config.tau_explicit ? " (configured)" : " (calibrated)") << '\n'
      << "potentiation ON/OFF (" << anchor.pulse.voltage << " V, " << anchor.pulse.duration
      << " s, " << anchor.n_pulses << " pulses) = "
      << msv::train_onoff_ratio(anchor.pulse, anchor.n_pulses, config.device) << '\n'
      << "depression OFF/ON (-2.35 V, 0.005 s, 50 pulses) = "
      << 1.0 / msv::train_onoff_ratio({-2.35, 0.005}, 50, config.device) << '\n';
}

void cmd_plot(const Options& opt, std::ostream& out) {
  if (opt.input.empty()) throw ConfigError("plot needs --input <csv>");
  CsvTable table;
  try {
    table = read_csv(opt.input);
  } catch (const std::runtime_error& e) {
    throw RuntimeFailure(e.what());
  }
  const fs::path dir = opt.out_dir;
  ensure_out_dir(dir);
  std::string svg;
  try {
    svg = render_svg(table);
  } catch (const PlotError& e) {
    throw ConfigError(std::string("cannot plot '") + opt.input + "': " + e.what());
  }
  const fs::path target = dir / (fs::path(opt.input).stem().string() + ".svg");
  write_file(target, [&](std::ostream& os) { os << svg; });
  out << "wrote " << target.string() << '\n';
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Molecular spin-valve synapse simulator and actor-critic benchmark", "msvsim"};
  app.require_subcommand(1, 1);
  Options opt;
  std::uint64_t seed = 0;
  double lr = 0.0;

  app.add_option("--config", opt.config_path, "Config file of 'section.key = value' lines");
  app.add_option("--out", opt.out_dir, "Output directory (created if absent)");
  auto* seed_opt = app.add_option("--seed", seed, "Override harness.master_seed");
  app.add_option("--parallelism", opt.parallelism, "Worker threads for independent trials")
      ->check(CLI::PositiveNumber);
  app.add_option("--rule", opt.rule, "Update rule")->check(CLI::IsMember({"linear", "powerlaw"}));
  auto* lr_opt = app.add_option("--lr", lr, "Hidden-layer learning rate (train)");
  app.add_option("--input", opt.input, "CSV file to plot (plot)");
  app.set_config();  // disable CLI11's own --config handling

  auto* train = app.add_subcommand("train", "Run n_trials trials and write learning_curve.csv");
  auto* sweep = app.add_subcommand("sweep", "Learning-rate sweep, writes sweep.csv");
  auto* compare = app.add_subcommand("compare", "Power-law vs linear, writes comparison.csv and stats.csv");
  compare->add_flag("--tuned", opt.tuned, "Use each rule's swept best learning rate");
  auto* device_map = app.add_subcommand("device-map", "Pulse on/off map, writes pulse_map.csv");
  auto* plot = app.add_subcommand("plot", "Render a CSV written by this tool as SVG");
  for (auto* sub : {train, sweep, compare, device_map, plot}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  if (*seed_opt) opt.seed = seed;
  if (*lr_opt) opt.lr = lr;

  try {
    if (*train) cmd_train(opt, out);
    else if (*sweep) cmd_sweep(opt, out);
    else if (*compare) cmd_compare(opt, out);
    else if (*device_map) cmd_device_map(opt, out);
    else if (*plot) cmd_plot(opt, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kSuccess;
}

}  // namespace msvsim
