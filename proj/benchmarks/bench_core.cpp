#include <benchmark/benchmark.h>

#include <array>
#include <vector>

#include "msv/actor.hpp"
#include "msv/critic.hpp"
#include "msv/device.hpp"
#include "msv/env.hpp"
#include "msv/harness.hpp"
#include "msv/stats.hpp"

namespace {

void BM_PulseTrain(benchmark::State& state) {
  msv::SpinValveParams p;
  p.pulse_time_constant_tau = msv::calibrate_pulse_tau(47.0, 50, {2.5, 0.005}, p);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto s = msv::apply_pulse_train({p.g_min, msv::Magnetization::Parallel}, {2.5, 0.005}, n, p);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PulseTrain)->Arg(50)->Arg(1000);

void BM_ActorForward(benchmark::State& state) {
  msv::ActorConfig cfg;
  msv::Rng rng(1);
  const msv::ActorNetwork net = msv::init_actor(cfg, rng);
  const std::array<int, 2> x{1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(msv::actor_forward(net, cfg, x, 0.5, rng));
}
BENCHMARK(BM_ActorForward);

void BM_CriticStep(benchmark::State& state) {
  msv::CriticConfig cfg;
  msv::Rng rng(2);
  msv::CriticNetwork net = msv::init_critic(cfg, rng);
  const std::array<int, 2> x{0, 1};
  for (auto _ : state) {
    const auto fwd = msv::critic_forward(net, x);
    msv::critic_update(net, cfg, fwd, 1.0);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_CriticStep);

void BM_RunEpoch(benchmark::State& state) {
  msv::ExperimentConfig cfg;
  msv::Rng rng(3);
  msv::ActorNetwork actor = msv::init_actor(cfg.actor, rng);
  msv::CriticNetwork critic = msv::init_critic(cfg.critic, rng);
  msv::XorEnvironment env;
  double filter = cfg.filter_init;
  for (auto _ : state) {
    const auto out = msv::run_epoch(actor, cfg.actor, critic, cfg.critic, env, rng, filter);
    filter = out.filter_state;
    benchmark::DoNotOptimize(filter);
  }
}
BENCHMARK(BM_RunEpoch);

void BM_Trial(benchmark::State& state) {
  msv::ExperimentConfig cfg;
  cfg.max_epochs = 1000;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(msv::run_trial(cfg, msv::UpdateRule::PowerLaw, 1.1, ++seed));
}
BENCHMARK(BM_Trial)->Unit(benchmark::kMillisecond);

void BM_Welch(benchmark::State& state) {
  msv::Rng rng(4);
  std::vector<double> a(50), b(50);
  for (auto& v : a) v = rng.uniform(500.0, 1500.0);
  for (auto& v : b) v = rng.uniform(600.0, 1800.0);
  for (auto _ : state) benchmark::DoNotOptimize(msv::welch_t_test(a, b));
}
BENCHMARK(BM_Welch);

}  // namespace

BENCHMARK_MAIN();
