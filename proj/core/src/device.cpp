#include "msv/device.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace msv {

void SpinValveParams::validate() const {
  auto fail = [](const char* what) { throw std::invalid_argument(what); };
  if (!(g_min > 0.0)) fail("device.g_min must be positive");
  if (!(g_min < g_th)) fail("device.g_min must be below device.g_th");
  if (!(g_th < g_max)) fail("device.g_th must be below device.g_max");
  if (!(mg_max >= 0.0)) fail("device.mg_max must be non-negative");
  if (!(mg_exponent > 0.0)) fail("device.mg_exponent must be positive");
  if (!(pulse_threshold_v > 0.0)) fail("device.pulse_threshold_v must be positive");
  if (!(pulse_time_constant_tau > 0.0)) fail("device.pulse_time_constant_tau must be positive");
  if (!std::isfinite(g_max) || !std::isfinite(mg_max) || !std::isfinite(mg_exponent) ||
      !std::isfinite(pulse_threshold_v) || !std::isfinite(pulse_time_constant_tau))
    fail("device parameters must be finite");
}

double magnetoconductance(double g, const SpinValveParams& params) {
  if (!(g >= params.g_min && g <= params.g_max)) {
    std::ostringstream msg;
    msg << "conductance " << g << " S outside [" << params.g_min << ", " << params.g_max << "]";
    throw std::domain_error(msg.str());
  }
  if (g <= params.g_th) return 0.0;
  const double x = (g - params.g_th) / (params.g_max - params.g_th);
  return params.mg_max * std::pow(x, params.mg_exponent);
}

double effective_conductance(const DeviceState& state, const SpinValveParams& params) {
  if (state.magnetization == Magnetization::Parallel) return state.conductance;
  return state.conductance * (1.0 + magnetoconductance(state.conductance, params));
}

double pulse_step_fraction(const PulseSpec& pulse, const SpinValveParams& params) {
  if (!(pulse.duration >= 0.0)) throw std::invalid_argument("pulse duration must be >= 0");
  const double overdrive = std::abs(pulse.voltage) - params.pulse_threshold_v;
  if (overdrive <= 0.0 || pulse.duration == 0.0) return 0.0;
  // -expm1 keeps precision for the small steps typical of 5 ms pulses.
  return -std::expm1(-overdrive * pulse.duration / params.pulse_time_constant_tau);
}

DeviceState apply_pulse(const DeviceState& state, const PulseSpec& pulse,
                        const SpinValveParams& params) {
  const double lambda = pulse_step_fraction(pulse, params);
  if (lambda == 0.0) return state;
  DeviceState next = state;
  const double bound = pulse.voltage > 0.0 ? params.g_max : params.g_min;
  next.conductance = state.conductance + lambda * (bound - state.conductance);
  // lambda <= 1 keeps this inside the bounds already; the clamp only absorbs rounding.
  if (next.conductance > params.g_max) next.conductance = params.g_max;
  if (next.conductance < params.g_min) next.conductance = params.g_min;
  return next;
}

DeviceState apply_pulse_train(DeviceState state, const PulseSpec& pulse, std::size_t n_pulses,
                              const SpinValveParams& params) {
  for (std::size_t i = 0; i < n_pulses; ++i) state = apply_pulse(state, pulse, params);
  return state;
}

DeviceState set_magnetization(const DeviceState& state, Magnetization config) {
  DeviceState next = state;
  next.magnetization = config;
  return next;
}

double calibrate_pulse_tau(double target_onoff, std::size_t n_pulses, const PulseSpec& pulse,
                           const SpinValveParams& params) {
  const double max_onoff = params.g_max / params.g_min;
  if (!(target_onoff > 1.0 && target_onoff < max_onoff)) {
    std::ostringstream msg;
    msg << "ON/OFF target " << target_onoff << " not achievable; must lie in (1, " << max_onoff
        << ")";
    throw std::domain_error(msg.str());
  }
  if (n_pulses == 0) throw std::domain_error("calibration needs at least one pulse");
  const double overdrive = std::abs(pulse.voltage) - params.pulse_threshold_v;
  if (pulse.voltage <= 0.0 || overdrive <= 0.0 || pulse.duration <= 0.0)
    throw std::domain_error("calibration pulse must be a positive super-threshold pulse");

  // (1 - lambda)^n = (g_max - target * g_min) / (g_max - g_min)
  const double remaining =
      (params.g_max - target_onoff * params.g_min) / (params.g_max - params.g_min);
  const double log_keep = std::log(remaining) / static_cast<double>(n_pulses);  // ln(1 - lambda)
  return -overdrive * pulse.duration / log_keep;
}

double train_onoff_ratio(const PulseSpec& pulse, std::size_t n_pulses,
                         const SpinValveParams& params) {
  DeviceState state{pulse.voltage < 0.0 ? params.g_max : params.g_min, Magnetization::Parallel};
  const double initial = state.conductance;
  state = apply_pulse_train(state, pulse, n_pulses, params);
  return state.conductance / initial;
}

PulseMap pulse_map_sweep(std::span<const double> voltages, std::span<const double> durations,
                         std::size_t n_pulses, const SpinValveParams& params) {
  if (voltages.empty() || durations.empty())
    throw std::invalid_argument("pulse map axes must be non-empty");
  if (n_pulses == 0) throw std::invalid_argument("pulse map needs n_pulses >= 1");

  PulseMap map;
  map.voltages.assign(voltages.begin(), voltages.end());
  map.durations.assign(durations.begin(), durations.end());
  map.ratios.reserve(voltages.size() * durations.size());
  for (double v : voltages)
    for (double t : durations) map.ratios.push_back(train_onoff_ratio({v, t}, n_pulses, params));
  return map;
}

}  // namespace msv
