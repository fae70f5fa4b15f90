#include "msvsim/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

namespace msvsim {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw std::invalid_argument("expected a number, got '" + std::string(text) + "'");
  return value;
}

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw std::invalid_argument("expected a non-negative integer, got '" + std::string(text) +
                                "'");
  return value;
}

std::size_t parse_count(std::string_view text) { return static_cast<std::size_t>(parse_u64(text)); }

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> values;
  while (!text.empty()) {
    const auto comma = text.find(',');
    values.push_back(parse_double(trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (values.empty()) throw std::invalid_argument("expected a comma-separated list of numbers");
  return values;
}

msv::UpdateRule parse_rule(std::string_view text) {
  if (text == "linear") return msv::UpdateRule::Linear;
  if (text == "powerlaw") return msv::UpdateRule::PowerLaw;
  throw std::invalid_argument("expected 'linear' or 'powerlaw', got '" + std::string(text) + "'");
}

msv::Presentation parse_presentation(std::string_view text) {
  if (text == "uniform") return msv::Presentation::Uniform;
  if (text == "cyclic") return msv::Presentation::Cyclic;
  throw std::invalid_argument("expected 'uniform' or 'cyclic', got '" + std::string(text) + "'");
}

using Setter = std::function<void(SimulationConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    auto num = [&t](const char* key, auto member) {
      t[key] = [member](SimulationConfig& c, std::string_view v) { member(c) = parse_double(v); };
    };
    auto count = [&t](const char* key, auto member) {
      t[key] = [member](SimulationConfig& c, std::string_view v) { member(c) = parse_count(v); };
    };

    num("device.g_min", [](SimulationConfig& c) -> double& { return c.device.g_min; });
    num("device.g_max", [](SimulationConfig& c) -> double& { return c.device.g_max; });
    num("device.g_th", [](SimulationConfig& c) -> double& { return c.device.g_th; });
    num("device.mg_max", [](SimulationConfig& c) -> double& { return c.device.mg_max; });
    num("device.mg_exponent", [](SimulationConfig& c) -> double& { return c.device.mg_exponent; });
    num("device.pulse_threshold_v",
        [](SimulationConfig& c) -> double& { return c.device.pulse_threshold_v; });
    t["device.pulse_time_constant_tau"] = [](SimulationConfig& c, std::string_view v) {
      c.device.pulse_time_constant_tau = parse_double(v);
      c.tau_explicit = true;
    };
    num("device.calib_onoff",
        [](SimulationConfig& c) -> double& { return c.calibration.target_onoff; });
    count("device.calib_pulses",
          [](SimulationConfig& c) -> std::size_t& { return c.calibration.n_pulses; });
    num("device.calib_voltage_v",
        [](SimulationConfig& c) -> double& { return c.calibration.pulse.voltage; });
    num("device.calib_duration_s",
        [](SimulationConfig& c) -> double& { return c.calibration.pulse.duration; });
    t["device.map_voltages"] = [](SimulationConfig& c, std::string_view v) {
      c.pulse_map.voltages = parse_list(v);
    };
    t["device.map_durations"] = [](SimulationConfig& c, std::string_view v) {
      c.pulse_map.durations = parse_list(v);
    };
    count("device.map_pulses", [](SimulationConfig& c) -> std::size_t& { return c.pulse_map.n_pulses; });

    count("actor.n_in", [](SimulationConfig& c) -> std::size_t& { return c.experiment.actor.n_in; });
    count("actor.n_hidden",
          [](SimulationConfig& c) -> std::size_t& { return c.experiment.actor.n_hidden; });
    count("actor.n_out", [](SimulationConfig& c) -> std::size_t& { return c.experiment.actor.n_out; });
    num("actor.alpha_flip", [](SimulationConfig& c) -> double& { return c.experiment.actor.alpha_flip; });
    num("actor.lr_hidden", [](SimulationConfig& c) -> double& { return c.experiment.actor.lr_hidden; });
    num("actor.lr_out", [](SimulationConfig& c) -> double& { return c.experiment.actor.lr_out; });
    count("actor.batch_size",
          [](SimulationConfig& c) -> std::size_t& { return c.experiment.actor.batch_size; });
    num("actor.dw_min", [](SimulationConfig& c) -> double& { return c.experiment.actor.dw_min; });
    t["actor.update_rule"] = [](SimulationConfig& c, std::string_view v) {
      c.experiment.actor.update_rule = parse_rule(v);
    };
    num("actor.power_exponent",
        [](SimulationConfig& c) -> double& { return c.experiment.actor.power_exponent; });

    count("critic.n_in", [](SimulationConfig& c) -> std::size_t& { return c.experiment.critic.n_in; });
    count("critic.n_hidden",
          [](SimulationConfig& c) -> std::size_t& { return c.experiment.critic.n_hidden; });
    num("critic.lr", [](SimulationConfig& c) -> double& { return c.experiment.critic.lr; });
    num("critic.l1_coeff", [](SimulationConfig& c) -> double& { return c.experiment.critic.l1_coeff; });
    count("critic.batch_size",
          [](SimulationConfig& c) -> std::size_t& { return c.experiment.critic.batch_size; });

    t["env.presentation"] = [](SimulationConfig& c, std::string_view v) {
      c.experiment.presentation = parse_presentation(v);
    };

    count("harness.n_trials", [](SimulationConfig& c) -> std::size_t& { return c.experiment.n_trials; });
    count("harness.max_epochs",
          [](SimulationConfig& c) -> std::size_t& { return c.experiment.max_epochs; });
    num("harness.goal", [](SimulationConfig& c) -> double& { return c.experiment.goal; });
    num("harness.filter_keep", [](SimulationConfig& c) -> double& { return c.experiment.filter_keep; });
    num("harness.filter_gain", [](SimulationConfig& c) -> double& { return c.experiment.filter_gain; });
    num("harness.filter_init", [](SimulationConfig& c) -> double& { return c.experiment.filter_init; });
    num("harness.lr_sweep_from",
        [](SimulationConfig& c) -> double& { return c.experiment.lr_sweep.from; });
    num("harness.lr_sweep_to", [](SimulationConfig& c) -> double& { return c.experiment.lr_sweep.to; });
    num("harness.lr_sweep_step",
        [](SimulationConfig& c) -> double& { return c.experiment.lr_sweep.step; });
    num("harness.lr_linear", [](SimulationConfig& c) -> double& { return c.experiment.lr_linear; });
    num("harness.lr_powerlaw", [](SimulationConfig& c) -> double& { return c.experiment.lr_powerlaw; });
    t["harness.master_seed"] = [](SimulationConfig& c, std::string_view v) {
      c.experiment.master_seed = parse_u64(v);
    };
    return t;
  }();
  return table;
}

void finalize(SimulationConfig& config, bool lr_out_explicit) {
  if (!lr_out_explicit) config.experiment.actor.lr_out = config.experiment.actor.lr_hidden / 2.0;
  config.experiment.validate();
  if (config.pulse_map.voltages.empty() || config.pulse_map.durations.empty())
    throw std::invalid_argument("device.map axes must be non-empty");
  if (config.pulse_map.n_pulses == 0) throw std::invalid_argument("device.map_pulses must be >= 1");
  for (double t : config.pulse_map.durations)
    if (!(t >= 0.0)) throw std::invalid_argument("device.map_durations must be >= 0");
  if (!config.tau_explicit) {
    config.device.validate();  // everything except tau must already be sound
    try {
      config.device.pulse_time_constant_tau =
          msv::calibrate_pulse_tau(config.calibration.target_onoff, config.calibration.n_pulses,
                                   config.calibration.pulse, config.device);
    } catch (const std::domain_error& e) {
      throw std::invalid_argument(std::string("device calibration: ") + e.what());
    }
  }
  config.device.validate();
}

}  // namespace

PulseMapGrid default_pulse_map_grid() {
  PulseMapGrid grid;
  for (int k = -12; k <= 12; ++k) grid.voltages.push_back(0.25 * k);
  grid.durations = {0.0005, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05};
  grid.n_pulses = 50;
  return grid;
}

SimulationConfig parse_config(std::istream& in) {
  SimulationConfig config;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;

    auto fail = [&](const std::string& what) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + what);
    };
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail("expected 'section.key = value'");
    const std::string_view key = trim(text.substr(0, eq));
    const std::string_view value = trim(text.substr(eq + 1));
    if (key.find('.') == std::string_view::npos) fail("expected 'section.key = value'");
    if (value.empty()) fail("missing value for '" + std::string(key) + "'");

    const auto it = setters().find(key);
    if (it == setters().end()) fail("unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) fail("duplicate key '" + std::string(key) + "'");
    try {
      it->second(config, value);
    } catch (const std::invalid_argument& e) {
      fail(std::string(key) + ": " + e.what());
    }
  }
  try {
    finalize(config, seen.contains("actor.lr_out"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return config;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

SimulationConfig default_config() {
  std::istringstream empty;
  return parse_config(empty);
}

}  // namespace msvsim
