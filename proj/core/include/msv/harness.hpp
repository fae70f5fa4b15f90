#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "msv/actor.hpp"
#include "msv/critic.hpp"
#include "msv/env.hpp"
#include "msv/random.hpp"
#include "msv/stats.hpp"

namespace msv {

struct LrSweepRange {
  double from = 0.4;
  double to = 1.25;
  double step = 0.05;

  /// Grid from..to inclusive; values are rounded to 1e-9 so that
  /// accumulated float error cannot drop the last point.
  std::vector<double> values() const;
};

struct ExperimentConfig {
  ActorConfig actor;
  CriticConfig critic;
  std::size_t n_trials = 50;
  std::size_t max_epochs = 10000;
  double goal = 0.975;
  double filter_keep = 0.999;
  double filter_gain = 0.001;
  double filter_init = 0.5;
  LrSweepRange lr_sweep;
  double lr_linear = 0.75;
  double lr_powerlaw = 1.1;
  std::uint64_t master_seed = 20190611;
  Presentation presentation = Presentation::Uniform;

  void validate() const;
};

struct FilterParams {
  double keep = 0.999;
  double gain = 0.001;
};

/// keep * prev + gain * reward
double filter_reward(double prev, double reward, const FilterParams& filter = {});

/// 1-indexed first epoch whose value reaches `goal`.
std::optional<std::size_t> epochs_to_goal(std::span<const double> filtered_curve, double goal);

struct EpochOutcome {
  double mean_reward = 0.0;
  double filter_state = 0.0;
};

/// One epoch: batch_size presentations, then one actor batch update.
/// Per presentation: sample, critic prediction, actor step, reward,
/// actor accumulation, critic update, reward filter.
EpochOutcome run_epoch(ActorNetwork& actor, const ActorConfig& actor_config,
                       CriticNetwork& critic, const CriticConfig& critic_config,
                       XorEnvironment& env, Rng& rng, double filter_state,
                       const FilterParams& filter = {});

struct TrialResult {
  std::vector<double> filtered_curve;
  std::vector<double> raw_curve;
  std::optional<std::size_t> epochs_to_goal;
  std::uint64_t seed = 0;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

/// Stream seed for one trial. Depends only on its arguments, never on the
/// order in which trials are scheduled.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index, UpdateRule rule,
                         double lr_hidden);

/// Trains fresh networks until the filtered reward reaches the goal or
/// max_epochs elapse. The output learning rate is half of `lr_hidden`.
TrialResult run_trial(const ExperimentConfig& config, UpdateRule rule, double lr_hidden,
                      std::uint64_t seed);

/// config.n_trials independent trials, spread across `parallelism` workers.
/// Results are ordered by trial index and identical for any worker count.
std::vector<TrialResult> run_trials(const ExperimentConfig& config, UpdateRule rule,
                                    double lr_hidden, std::size_t parallelism = 1);

struct EpochSummary {
  std::vector<double> converged;  // epochs_to_goal of the converged trials
  std::size_t n_failed = 0;
  double mean = 0.0;    // over converged trials
  double stddev = 0.0;  // n - 1 denominator, over converged trials
};

EpochSummary summarize_epochs(std::span<const TrialResult> trials);

struct SweepPoint {
  double lr_hidden = 0.0;
  /// Non-converged trials counted as max_epochs.
  double mean_epochs = 0.0;
  double std_epochs = 0.0;
  std::size_t n_converged = 0;
};

struct SweepResult {
  UpdateRule rule = UpdateRule::PowerLaw;
  std::vector<SweepPoint> points;
  double best_lr = 0.0;
};

/// Ranks every grid learning rate by mean epochs-to-goal; ties go to the
/// smaller rate. Throws std::invalid_argument on an empty grid.
SweepResult lr_sweep(const ExperimentConfig& config, UpdateRule rule,
                     std::size_t parallelism = 1);

struct ArmSpec {
  UpdateRule rule = UpdateRule::PowerLaw;
  double lr_hidden = 1.1;
};

struct ArmReport {
  ArmSpec spec;
  std::vector<TrialResult> trials;
  EpochSummary epochs;
};

struct ComparisonReport {
  ArmReport a;
  ArmReport b;
  /// a versus b; p_one_sided is the evidence for a converging faster.
  WelchResult welch;
};

class StatisticsUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs config.n_trials per arm and tests arm a against arm b. Throws
/// StatisticsUnavailable if an arm has fewer than two converged trials.
ComparisonReport compare_arms(const ExperimentConfig& config, const ArmSpec& a, const ArmSpec& b,
                              std::size_t parallelism = 1);

/// Power-law arm (config.lr_powerlaw) against linear arm (config.lr_linear).
ComparisonReport compare_rules(const ExperimentConfig& config, std::size_t parallelism = 1);

/// Trials slower than `threshold_epochs`, counting non-converged ones.
std::size_t count_slow_trials(std::span<const TrialResult> trials, double threshold_epochs);

const char* to_string(UpdateRule rule);

}  // namespace msv
