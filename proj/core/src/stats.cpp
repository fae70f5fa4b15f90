#include "msv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace msv {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

StudentTTail student_t_tails(double t, double nu) {
  if (!(nu > 0.0)) throw std::domain_error("degrees of freedom must be positive");
  const boost::math::students_t_distribution<double> dist(nu);
  const double upper = boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return {std::min(1.0, 2.0 * upper), boost::math::cdf(dist, t)};
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("Welch test needs at least two values per sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double sa = sample_stddev(a);
  const double sb = sample_stddev(b);
  const double va = sa * sa / na;
  const double vb = sb * sb / nb;
  if (va == 0.0 && vb == 0.0)
    throw std::domain_error("Welch statistic undefined: both samples have zero variance");

  WelchResult r;
  r.t = (mean(a) - mean(b)) / std::sqrt(va + vb);
  r.nu = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  const StudentTTail tails = student_t_tails(r.t, r.nu);
  r.p_two_sided = tails.p_two_sided;
  r.p_one_sided = tails.p_lower;
  return r;
}

}  // namespace msv
