#include "msv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace msv {

std::vector<double> LrSweepRange::values() const {
  if (!(step > 0.0) || !(from <= to)) throw std::invalid_argument("lr sweep range is empty");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  grid.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    grid.push_back(std::round((from + static_cast<double>(k) * step) * 1e9) / 1e9);
  return grid;
}

void ExperimentConfig::validate() const {
  actor.validate();
  critic.validate();
  if (actor.n_in != critic.n_in) throw std::invalid_argument("actor.n_in must equal critic.n_in");
  if (actor.n_in != 2) throw std::invalid_argument("actor.n_in must be 2 for the XOR task");
  auto fail = [](const std::string& what) { throw std::invalid_argument("harness." + what); };
  if (n_trials == 0) fail("n_trials must be >= 1");
  if (max_epochs == 0) fail("max_epochs must be >= 1");
  if (!(goal > 0.0 && goal < 1.0)) fail("goal must lie in (0, 1)");
  if (!(filter_keep >= 0.0 && filter_gain > 0.0)) fail("filter coefficients must be positive");
  if (std::abs(filter_keep + filter_gain - 1.0) > 1e-12)
    fail("filter_keep + filter_gain must equal 1");
  if (!(filter_init >= 0.0 && filter_init <= 1.0)) fail("filter_init must lie in [0, 1]");
  if (!(lr_sweep.from > 0.0 && lr_sweep.step > 0.0 && lr_sweep.from <= lr_sweep.to))
    fail("lr sweep bounds are inconsistent");
  if (!(lr_linear > 0.0) || !(lr_powerlaw > 0.0)) fail("per-rule learning rates must be positive");
}

double filter_reward(double prev, double reward, const FilterParams& filter) {
  return filter.keep * prev + filter.gain * reward;
}

std::optional<std::size_t> epochs_to_goal(std::span<const double> filtered_curve, double goal) {
  for (std::size_t i = 0; i < filtered_curve.size(); ++i)
    if (filtered_curve[i] >= goal) return i + 1;
  return std::nullopt;
}

EpochOutcome run_epoch(ActorNetwork& actor, const ActorConfig& actor_config,
                       CriticNetwork& critic, const CriticConfig& critic_config,
                       XorEnvironment& env, Rng& rng, double filter_state,
                       const FilterParams& filter) {
  double total = 0.0;
  for (std::size_t n = 0; n < actor_config.batch_size; ++n) {
    const Sample sample = env.next(rng);
    const CriticForward prediction = critic_forward(critic, sample.x);
    const double r_bar = std::clamp(prediction.output, 0.0, 1.0);
    const ActorStep step = actor_forward(actor, actor_config, sample.x, r_bar, rng);
    const double r = reward(step.y, sample.target);
    accumulate_update(actor, actor_config, step.trace, r, r_bar);
    critic_update(critic, critic_config, prediction, r);
    filter_state = filter_reward(filter_state, r, filter);
    total += r;
  }
  apply_batch_update(actor, actor_config);
  return {total / static_cast<double>(actor_config.batch_size), filter_state};
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index, UpdateRule rule,
                         double lr_hidden) {
  // Quantize so 0.4 + k * 0.05 and the literal value hash the same.
  const auto lr_key = static_cast<std::uint64_t>(std::llround(lr_hidden * 1e6));
  return derive_seed(master_seed,
                     {static_cast<std::uint64_t>(trial_index),
                      rule == UpdateRule::Linear ? 1ull : 2ull, lr_key});
}

TrialResult run_trial(const ExperimentConfig& config, UpdateRule rule, double lr_hidden,
                      std::uint64_t seed) {
  ActorConfig actor_config = with_learning_rate(config.actor, lr_hidden);
  actor_config.update_rule = rule;
  const FilterParams filter{config.filter_keep, config.filter_gain};

  Rng rng(seed);
  ActorNetwork actor = init_actor(actor_config, rng);
  CriticNetwork critic = init_critic(config.critic, rng);
  XorEnvironment env(config.presentation);

  TrialResult result;
  result.seed = seed;
  double filter_state = config.filter_init;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const EpochOutcome out =
        run_epoch(actor, actor_config, critic, config.critic, env, rng, filter_state, filter);
    filter_state = out.filter_state;
    result.raw_curve.push_back(out.mean_reward);
    result.filtered_curve.push_back(filter_state);
    if (filter_state >= config.goal) {
      result.epochs_to_goal = epoch;
      break;
    }
  }
  return result;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index is
// handled exactly once; the first exception is rethrown after joining.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<TrialResult> run_trials(const ExperimentConfig& config, UpdateRule rule,
                                    double lr_hidden, std::size_t parallelism) {
  std::vector<TrialResult> results(config.n_trials);
  parallel_for(config.n_trials, parallelism, [&](std::size_t i) {
    results[i] = run_trial(config, rule, lr_hidden, trial_seed(config.master_seed, i, rule, lr_hidden));
  });
  return results;
}

EpochSummary summarize_epochs(std::span<const TrialResult> trials) {
  EpochSummary summary;
  for (const auto& t : trials) {
    if (t.epochs_to_goal)
      summary.converged.push_back(static_cast<double>(*t.epochs_to_goal));
    else
      ++summary.n_failed;
  }
  summary.mean = mean(summary.converged);
  summary.stddev = sample_stddev(summary.converged);
  return summary;
}

SweepResult lr_sweep(const ExperimentConfig& config, UpdateRule rule, std::size_t parallelism) {
  const std::vector<double> grid = config.lr_sweep.values();
  if (grid.empty()) throw std::invalid_argument("lr sweep grid is empty");

  SweepResult sweep;
  sweep.rule = rule;
  for (double lr : grid) {
    const auto trials = run_trials(config, rule, lr, parallelism);
    std::vector<double> censored;
    std::size_t converged = 0;
    for (const auto& t : trials) {
      censored.push_back(static_cast<double>(t.epochs_to_goal.value_or(config.max_epochs)));
      if (t.epochs_to_goal) ++converged;
    }
    sweep.points.push_back({lr, mean(censored), sample_stddev(censored), converged});
  }
  // Strict < keeps the earliest, i.e. smallest, learning rate on ties.
  const SweepPoint* best = &sweep.points.front();
  for (const auto& p : sweep.points)
    if (p.mean_epochs < best->mean_epochs) best = &p;
  sweep.best_lr = best->lr_hidden;
  return sweep;
}

ComparisonReport compare_arms(const ExperimentConfig& config, const ArmSpec& a, const ArmSpec& b,
                              std::size_t parallelism) {
  ComparisonReport report;
  for (auto [arm, spec] : {std::pair{&report.a, &a}, std::pair{&report.b, &b}}) {
    arm->spec = *spec;
    arm->trials = run_trials(config, spec->rule, spec->lr_hidden, parallelism);
    arm->epochs = summarize_epochs(arm->trials);
    if (arm->epochs.converged.size() < 2)
      throw StatisticsUnavailable(std::string("fewer than two converged trials for the ") +
                                  to_string(spec->rule) + " arm");
  }
  report.welch = welch_t_test(report.a.epochs.converged, report.b.epochs.converged);
  return report;
}

ComparisonReport compare_rules(const ExperimentConfig& config, std::size_t parallelism) {
  return compare_arms(config, {UpdateRule::PowerLaw, config.lr_powerlaw},
                      {UpdateRule::Linear, config.lr_linear}, parallelism);
}

std::size_t count_slow_trials(std::span<const TrialResult> trials, double threshold_epochs) {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [&](const auto& t) {
    return !t.epochs_to_goal || static_cast<double>(*t.epochs_to_goal) > threshold_epochs;
  }));
}

const char* to_string(UpdateRule rule) {
  return rule == UpdateRule::Linear ? "linear" : "powerlaw";
}

}  // namespace msv
