#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "msv/device.hpp"
#include "msv/random.hpp"
#include "oracles.hpp"

using namespace msv;

namespace {

SpinValveParams calibrated() {
  SpinValveParams p;
  p.pulse_time_constant_tau = calibrate_pulse_tau(47.0, 50, {2.5, 0.005}, p);
  return p;
}

}  // namespace

TEST_CASE("default device parameters are valid") {
  SpinValveParams p;
  CHECK_NOTHROW(p.validate());
  p.g_min = p.g_max;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.g_th = p.g_min;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.mg_exponent = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("magnetoconductance reference points") {
  const SpinValveParams p;
  CHECK(magnetoconductance(6.4e-7, p) == 0.0);
  CHECK(magnetoconductance(1.13e-6, p) == 0.0);
  CHECK(magnetoconductance(8.9e-5, p) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(magnetoconductance(1.0e-5, p) == doctest::Approx(oracle::kMgAt1e5).epsilon(1e-13));
}

TEST_CASE("magnetoconductance rejects conductances outside the device range") {
  const SpinValveParams p;
  CHECK_THROWS_AS(magnetoconductance(1e-7, p), std::domain_error);
  CHECK_THROWS_AS(magnetoconductance(1e-4, p), std::domain_error);
  CHECK_THROWS_AS(magnetoconductance(std::nan(""), p), std::domain_error);
}

TEST_CASE("magnetoconductance matches the long-double oracle on a grid") {
  const SpinValveParams p;
  for (int i = 0; i <= 1000; ++i) {
    const double g = p.g_min + (p.g_max - p.g_min) * i / 1000.0;
    const auto expected = oracle::magnetoconductance(g, p.g_th, p.g_max, p.mg_max, p.mg_exponent);
    CHECK(magnetoconductance(g, p) == doctest::Approx(static_cast<double>(expected)).epsilon(1e-13));
  }
}

TEST_CASE("effective conductance") {
  const SpinValveParams p;
  CHECK(effective_conductance({5e-6, Magnetization::Parallel}, p) == 5e-6);
  CHECK(effective_conductance({8e-7, Magnetization::Antiparallel}, p) == 8e-7);
  CHECK(effective_conductance({p.g_max, Magnetization::Antiparallel}, p) ==
        doctest::Approx(1.25 * 8.9e-5).epsilon(1e-12));
}

TEST_CASE("selective potentiation") {
  const SpinValveParams p;
  for (int i = 0; i <= 500; ++i) {
    const double g = p.g_min + (p.g_max - p.g_min) * i / 500.0;
    const double par = effective_conductance({g, Magnetization::Parallel}, p);
    const double anti = effective_conductance({g, Magnetization::Antiparallel}, p);
    if (g <= p.g_th)
      CHECK(anti == par);
    else
      CHECK(anti > par);
  }
}

TEST_CASE("set_magnetization only touches the readout") {
  const SpinValveParams p;
  const DeviceState high{2e-5, Magnetization::Parallel};
  const auto anti = set_magnetization(high, Magnetization::Antiparallel);
  CHECK(anti.conductance == high.conductance);
  CHECK(effective_conductance(anti, p) > effective_conductance(high, p));
  CHECK(set_magnetization(anti, Magnetization::Parallel) == high);
  CHECK(set_magnetization(high, Magnetization::Parallel) == high);

  const DeviceState low{9e-7, Magnetization::Parallel};
  CHECK(effective_conductance(set_magnetization(low, Magnetization::Antiparallel), p) ==
        effective_conductance(low, p));
}

TEST_CASE("sub-threshold and zero-length pulses leave the state unchanged") {
  const SpinValveParams p = calibrated();
  const DeviceState s{3e-6, Magnetization::Antiparallel};
  CHECK(apply_pulse(s, {1.0, 0.005}, p) == s);
  CHECK(apply_pulse(s, {-1.2, 0.005}, p) == s);
  CHECK(apply_pulse(s, {2.5, 0.0}, p) == s);
  CHECK_THROWS_AS(apply_pulse(s, {2.5, -0.001}, p), std::invalid_argument);
}

TEST_CASE("pulse calibration") {
  const SpinValveParams base;
  const double tau = calibrate_pulse_tau(47.0, 50, {2.5, 0.005}, base);
  CHECK(tau == doctest::Approx(oracle::kCalibTau).epsilon(1e-10));
  SpinValveParams p = base;
  p.pulse_time_constant_tau = tau;
  CHECK(pulse_step_fraction({2.5, 0.005}, p) == doctest::Approx(oracle::kCalibLambda).epsilon(1e-10));

  const auto end = apply_pulse_train({p.g_min, Magnetization::Parallel}, {2.5, 0.005}, 50, p);
  CHECK(end.conductance / p.g_min == doctest::Approx(47.0).epsilon(1e-10));

  SUBCASE("achievable range") {
    CHECK_THROWS_AS(calibrate_pulse_tau(base.g_max / base.g_min, 50, {2.5, 0.005}, base),
                    std::domain_error);
    CHECK_THROWS_AS(calibrate_pulse_tau(1.0, 50, {2.5, 0.005}, base), std::domain_error);
    CHECK_THROWS_AS(calibrate_pulse_tau(200.0, 50, {2.5, 0.005}, base), std::domain_error);
    CHECK_THROWS_AS(calibrate_pulse_tau(47.0, 50, {1.0, 0.005}, base), std::domain_error);
    CHECK_THROWS_AS(calibrate_pulse_tau(47.0, 50, {-2.5, 0.005}, base), std::domain_error);
  }
  SUBCASE("tau grows without bound as the target approaches 1") {
    const double t1 = calibrate_pulse_tau(1.01, 50, {2.5, 0.005}, base);
    const double t2 = calibrate_pulse_tau(1.0001, 50, {2.5, 0.005}, base);
    CHECK(t2 > t1);
    CHECK(t2 > 1000.0 * tau);
  }
  SUBCASE("tau shrinks toward 0 near the maximum ON/OFF") {
    const double near_max = 0.999999 * base.g_max / base.g_min;
    CHECK(calibrate_pulse_tau(near_max, 50, {2.5, 0.005}, base) < 0.1 * tau);
  }
}

TEST_CASE("conductance stays bounded under random pulse sequences") {
  const SpinValveParams p = calibrated();
  Rng rng(7);
  for (int seq = 0; seq < 200; ++seq) {
    DeviceState s{rng.uniform(p.g_min, p.g_max), Magnetization::Parallel};
    for (int k = 0; k < 200; ++k) {
      const PulseSpec pulse{rng.uniform(-6.0, 6.0), rng.uniform(0.0, 2.0)};
      const DeviceState next = apply_pulse(s, pulse, p);
      REQUIRE(next.conductance >= p.g_min);
      REQUIRE(next.conductance <= p.g_max);
      if (pulse.voltage > p.pulse_threshold_v) REQUIRE(next.conductance >= s.conductance);
      if (pulse.voltage < -p.pulse_threshold_v) REQUIRE(next.conductance <= s.conductance);
      s = next;
    }
  }
}

TEST_CASE("pulse map") {
  const SpinValveParams p = calibrated();
  const std::vector<double> volts{-3.0, -2.35, -1.2, -0.5, 0.0, 1.0, 1.2, 1.5, 2.0, 2.5, 3.0};
  const std::vector<double> durs{0.0, 0.001, 0.005, 0.02};
  const PulseMap map = pulse_map_sweep(volts, durs, 50, p);
  REQUIRE(map.ratios.size() == volts.size() * durs.size());

  for (std::size_t i = 0; i < volts.size(); ++i) {
    CHECK(map.at(i, 0) == 1.0);
    if (std::abs(volts[i]) <= p.pulse_threshold_v)
      for (std::size_t j = 0; j < durs.size(); ++j) CHECK(map.at(i, j) == 1.0);
  }
  CHECK(map.at(9, 2) == doctest::Approx(47.0).epsilon(1e-9));

  // Monotone along durations, and in |V| within each polarity.
  for (std::size_t i = 0; i < volts.size(); ++i)
    for (std::size_t j = 1; j < durs.size(); ++j) {
      if (volts[i] > 0) CHECK(map.at(i, j) >= map.at(i, j - 1));
      if (volts[i] < 0) CHECK(map.at(i, j) <= map.at(i, j - 1));
    }
  for (std::size_t j = 0; j < durs.size(); ++j) {
    for (std::size_t i = 6; i + 1 < volts.size(); ++i) CHECK(map.at(i + 1, j) >= map.at(i, j));
    for (std::size_t i = 0; i + 1 < 4; ++i) CHECK(map.at(i, j) <= map.at(i + 1, j));
  }

  CHECK_THROWS_AS(pulse_map_sweep({}, durs, 50, p), std::invalid_argument);
  CHECK_THROWS_AS(pulse_map_sweep(volts, durs, 0, p), std::invalid_argument);
}
