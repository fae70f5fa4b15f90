#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace msv {

// Constants measured on the LSMO/Alq3/AlOx/Co device. Conductances in
// siemens, voltages in volts, tau in volt-seconds.
struct SpinValveParams {
  double g_min = 6.4e-7;
  double g_max = 8.9e-5;
  double g_th = 1.13e-6;
  double mg_max = 0.25;
  double mg_exponent = 0.75;
  double pulse_threshold_v = 1.2;
  /// Placeholder; callers normally replace it with calibrate_pulse_tau().
  double pulse_time_constant_tau = 0.8;

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

enum class Magnetization { Parallel, Antiparallel };

/// `conductance` is the parallel-configuration value; the antiparallel
/// boost is applied on readout by effective_conductance().
struct DeviceState {
  double conductance = 0.0;
  Magnetization magnetization = Magnetization::Parallel;

  friend bool operator==(const DeviceState&, const DeviceState&) = default;
};

/// Signed voltage (positive potentiates), duration in seconds.
struct PulseSpec {
  double voltage = 0.0;
  double duration = 0.0;
};

/// Fractional conductance boost (G_AP - G_P) / G_P at parallel conductance g.
/// Zero up to g_th, then mg_max * ((g - g_th) / (g_max - g_th))^mg_exponent,
/// so the boost reaches mg_max exactly at g_max.
/// Throws std::domain_error if g is outside [g_min, g_max].
double magnetoconductance(double g, const SpinValveParams& params);

double effective_conductance(const DeviceState& state, const SpinValveParams& params);

/// Fraction of the remaining distance to the bound covered by one pulse.
/// Zero for sub-threshold or zero-length pulses.
double pulse_step_fraction(const PulseSpec& pulse, const SpinValveParams& params);

DeviceState apply_pulse(const DeviceState& state, const PulseSpec& pulse,
                        const SpinValveParams& params);

/// Applies `n_pulses` copies of `pulse`.
DeviceState apply_pulse_train(DeviceState state, const PulseSpec& pulse, std::size_t n_pulses,
                              const SpinValveParams& params);

DeviceState set_magnetization(const DeviceState& state, Magnetization config);

/// Solves for the tau that makes `n_pulses` copies of `pulse`, starting from
/// g_min, end at target_onoff * g_min. Closed form, no iteration.
/// Throws std::domain_error when target_onoff is not in (1, g_max/g_min) or
/// the pulse is sub-threshold / non-positive / zero length.
double calibrate_pulse_tau(double target_onoff, std::size_t n_pulses, const PulseSpec& pulse,
                           const SpinValveParams& params);

/// Final/initial conductance after a pulse train that starts from the reset
/// state for its polarity: g_min for positive voltage, g_max otherwise.
double train_onoff_ratio(const PulseSpec& pulse, std::size_t n_pulses,
                         const SpinValveParams& params);

struct PulseMap {
  std::vector<double> voltages;
  std::vector<double> durations;
  /// Row-major, one row per voltage.
  std::vector<double> ratios;

  double at(std::size_t voltage_index, std::size_t duration_index) const {
    return ratios[voltage_index * durations.size() + duration_index];
  }
};

/// Throws std::invalid_argument on empty axes or n_pulses == 0.
PulseMap pulse_map_sweep(std::span<const double> voltages, std::span<const double> durations,
                         std::size_t n_pulses, const SpinValveParams& params);

}  // namespace msv
