#include "s2gd/epoch_law.hpp"

#include <cmath>
#include <stdexcept>

namespace s2gd {

namespace {

void check_args(double m, double q) {
  if (!(m >= 1.0)) throw std::invalid_argument("epoch law: need m >= 1");
  if (!(q >= 0.0) || q >= 1.0) {
    throw std::invalid_argument("epoch law: need q in [0, 1)");
  }
}

}  // namespace

double epoch_law_normalizer(double m, double q) {
  check_args(m, q);
  if (q == 0.0) return m;
  // (1 - (1-q)^m) / q, with (1-q)^m = exp(m log1p(-q)).
  return -std::expm1(m * std::log1p(-q)) / q;
}

double epoch_law_mean(double m, double q) {
  check_args(m, q);
  if (q == 0.0) return 0.5 * (m + 1.0);
  // xi = m - r/(1-r) + m r^m/(1-r^m) with r = 1-q; long double tempers the
  // cancellation between the two 1/q-sized terms when q*m is small.
  const long double r = 1.0L - static_cast<long double>(q);
  const long double u =
      static_cast<long double>(m) * std::log1p(-static_cast<long double>(q));
  const long double rm = std::exp(u);
  const long double xi = static_cast<long double>(m) -
                         r / static_cast<long double>(q) +
                         static_cast<long double>(m) * rm / (-std::expm1(u));
  return static_cast<double>(xi);
}

EpochLengthLaw::EpochLengthLaw(std::uint64_t m, double q)
    : m_(m),
      q_(q),
      log_keep_(std::log1p(-q)),
      beta_(epoch_law_normalizer(static_cast<double>(m), q)),
      mean_(epoch_law_mean(static_cast<double>(m), q)) {}

double EpochLengthLaw::pmf(std::uint64_t t) const {
  if (t < 1 || t > m_) return 0.0;
  return std::exp(static_cast<double>(m_ - t) * log_keep_) / beta_;
}

double EpochLengthLaw::cdf(std::uint64_t t) const {
  if (t < 1) return 0.0;
  if (t >= m_) return 1.0;
  if (q_ == 0.0) {
    return static_cast<double>(t) / static_cast<double>(m_);
  }
  // (r^(m-t) - r^m) / (1 - r^m) = exp((m-t)l) expm1(t l) / expm1(m l).
  const double md = static_cast<double>(m_);
  const double td = static_cast<double>(t);
  return std::exp((md - td) * log_keep_) * std::expm1(td * log_keep_) /
         std::expm1(md * log_keep_);
}

double EpochLengthLaw::variance() const {
  // Direct second moment; only used for test statistics at small m.
  double acc = 0.0;
  for (std::uint64_t t = 1; t <= m_; ++t) {
    const double dev = static_cast<double>(t) - mean_;
    acc += dev * dev * pmf(t);
  }
  return acc;
}

std::uint64_t EpochLengthLaw::sample(Rng& rng) const {
  const double u = rng.next_unit();
  if (q_ == 0.0) {
    const auto t = 1 + static_cast<std::uint64_t>(
                           u * static_cast<double>(m_));
    return t > m_ ? m_ : t;
  }
  // Smallest t with cdf(t) >= u.
  std::uint64_t lo = 1;
  std::uint64_t hi = m_;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (cdf(mid) >= u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace s2gd
