#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msv/device.hpp"
#include "msv/harness.hpp"

namespace msvsim {

/// Usage or configuration problem; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pulse train used to pin the pulse time constant.
struct CalibrationAnchor {
  double target_onoff = 47.0;
  std::size_t n_pulses = 50;
  msv::PulseSpec pulse{2.5, 0.005};
};

struct PulseMapGrid {
  std::vector<double> voltages;
  std::vector<double> durations;
  std::size_t n_pulses = 50;
};

PulseMapGrid default_pulse_map_grid();

struct SimulationConfig {
  msv::ExperimentConfig experiment;
  msv::SpinValveParams device;
  CalibrationAnchor calibration;
  PulseMapGrid pulse_map = default_pulse_map_grid();
  /// False when device.pulse_time_constant_tau came from calibration.
  bool tau_explicit = false;
};

/// Parses `section.key = value` lines. Omitted keys keep their defaults;
/// an omitted pulse time constant is calibrated against the anchor, and an
/// omitted actor.lr_out is half of actor.lr_hidden.
/// Throws ConfigError naming the line for malformed lines, unknown or
/// repeated keys and bad values, and for invariant violations.
SimulationConfig parse_config(std::istream& in);

/// Throws ConfigError if the file cannot be opened.
SimulationConfig load_config(const std::filesystem::path& path);

/// Defaults, with the pulse time constant calibrated.
SimulationConfig default_config();

}  // namespace msvsim
