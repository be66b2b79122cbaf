#pragma once

#include <cstdint>

#include "s2gd/rng.hpp"

namespace s2gd {

/// Normalizer beta = sum_{t=1..m} (1-q)^(m-t) of the truncated geometric
/// law over inner-loop lengths. Closed form (1-(1-q)^m)/q for q > 0, m for
/// q = 0. Real-valued m is accepted (the planner evaluates the bound at
/// unrounded m). Requires m >= 1 and 0 <= q < 1.
double epoch_law_normalizer(double m, double q);

/// Expected inner-loop length xi = sum_t t (1-q)^(m-t) / beta. Lies in
/// [(m+1)/2, m); the lower bound is attained at q = 0.
double epoch_law_mean(double m, double q);

/// Distribution of the number of inner steps t_j in [1, m]:
/// P(t) = (1-q)^(m-t) / beta with q = nu*h. Sampling inverts the
/// closed-form partial sums, so no probability table is materialized and
/// small-t underflow never occurs. Immutable once constructed.
class EpochLengthLaw {
 public:
  EpochLengthLaw(std::uint64_t m, double q);

  std::uint64_t m() const { return m_; }
  double q() const { return q_; }
  double beta() const { return beta_; }
  double expected_length() const { return mean_; }

  double pmf(std::uint64_t t) const;
  /// P(t_j <= t); cdf(m) = 1.
  double cdf(std::uint64_t t) const;
  double variance() const;

  /// Inverse-CDF draw; consumes exactly one uniform from the generator.
  std::uint64_t sample(Rng& rng) const;

 private:
  std::uint64_t m_;
  double q_;
  double log_keep_;  // log(1 - q)
  double beta_;
  double mean_;
};

}  // namespace s2gd
