#pragma once

#include <span>

namespace msv {

double mean(std::span<const double> xs);

/// Sample standard deviation (n - 1 denominator). Zero for fewer than two values.
double sample_stddev(std::span<const double> xs);

struct WelchResult {
  double t = 0.0;
  double nu = 0.0;
  double p_two_sided = 1.0;
  /// P(T <= t): evidence for mean(a) < mean(b).
  double p_one_sided = 0.5;
};

struct StudentTTail {
  double p_two_sided;
  double p_lower;  // P(T <= t)
};

/// Student-t tail probabilities for `nu` > 0 degrees of freedom.
StudentTTail student_t_tails(double t, double nu);

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
/// freedom. Throws std::invalid_argument if either sample has fewer than two
/// values and std::domain_error if both sample variances are zero.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace msv
