#include "s2gd/epoch_law.hpp"

#include <cmath>
#include <stdexcept>
#include <cstdint>
#include <vector>

#include <doctest.h>

using namespace s2gd;

namespace {

// Term-by-term oracle for the normalizer, high precision.
long double normalizer_by_summation(std::uint64_t m, double q) {
  const long double r = 1.0L - static_cast<long double>(q);
  long double term = 1.0L;  // t = m
  long double acc = 0.0L;
  for (std::uint64_t t = 0; t < m; ++t) {
    acc += term;
    term *= r;
  }
  return acc;
}

long double mean_by_summation(std::uint64_t m, double q) {
  const long double r = 1.0L - static_cast<long double>(q);
  long double weight = 1.0L;  // (1-q)^(m-t) at t = m
  long double acc = 0.0L;
  long double norm = 0.0L;
  for (std::uint64_t t = m; t >= 1; --t) {
    acc += static_cast<long double>(t) * weight;
    norm += weight;
    weight *= r;
  }
  return acc / norm;
}

}  // namespace

TEST_CASE("normalizer closed form") {
  CHECK(epoch_law_normalizer(3, 0.0) == 3.0);
  CHECK(epoch_law_normalizer(2, 0.5) == doctest::Approx(1.5).epsilon(1e-15));

  SUBCASE("matches summation for large m, tiny q") {
    const double beta = epoch_law_normalizer(1e6, 1e-7);
    const long double oracle = normalizer_by_summation(1000000, 1e-7);
    CHECK(std::abs(beta - static_cast<double>(oracle)) <=
          1e-10 * static_cast<double>(oracle));
  }
  SUBCASE("matches summation for m = 1e7") {
    const double beta = epoch_law_normalizer(1e7, 3e-8);
    const long double oracle = normalizer_by_summation(10000000, 3e-8);
    CHECK(std::abs(beta - static_cast<double>(oracle)) <=
          1e-10 * static_cast<double>(oracle));
  }
}

TEST_CASE("normalizer input validation") {
  CHECK_THROWS_AS(epoch_law_normalizer(0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(epoch_law_normalizer(5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(epoch_law_normalizer(5, -0.1), std::invalid_argument);
}

TEST_CASE("expected length") {
  CHECK(epoch_law_mean(5, 0.0) == 3.0);
  CHECK(epoch_law_mean(2, 0.5) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));

  SUBCASE("matches summation oracle") {
    for (const auto& [m, q] : std::vector<std::pair<std::uint64_t, double>>{
             {10, 0.3}, {1000, 1e-3}, {1000000, 1e-7}, {100000, 2e-5}}) {
      const double xi = epoch_law_mean(static_cast<double>(m), q);
      const long double oracle = mean_by_summation(m, q);
      CHECK(std::abs(xi - static_cast<double>(oracle)) <=
            1e-10 * static_cast<double>(oracle));
    }
  }
  SUBCASE("stays in [(m+1)/2, m)") {
    for (double m : {1.0, 2.0, 17.0, 1e3, 1e6}) {
      for (double q : {0.0, 1e-6, 1e-3, 0.1, 0.9}) {
        const double xi = epoch_law_mean(m, q);
        CHECK(xi >= 0.5 * (m + 1.0) - 1e-9 * m);
        if (m > 1.0) CHECK(xi < m);
      }
    }
  }
}

TEST_CASE("law pmf sums to one and favors longer epochs") {
  const EpochLengthLaw law(37, 0.07);
  double total = 0.0;
  double prev = 0.0;
  for (std::uint64_t t = 1; t <= law.m(); ++t) {
    const double p = law.pmf(t);
    CHECK(p >= prev);  // mass nondecreasing in t
    prev = p;
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(law.cdf(law.m()) == 1.0);
  CHECK(law.beta() ==
        doctest::Approx(static_cast<double>(normalizer_by_summation(37, 0.07)))
            .epsilon(1e-13));
}

TEST_CASE("uniform sampling at q = 0") {
  const EpochLengthLaw law(4, 0.0);
  Rng rng(123);
  const int draws = 100000;
  std::vector<int> counts(5, 0);
  for (int k = 0; k < draws; ++k) {
    const std::uint64_t t = law.sample(rng);
    REQUIRE(t >= 1);
    REQUIRE(t <= 4);
    ++counts[t];
  }
  const double expected = draws / 4.0;
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (int t = 1; t <= 4; ++t) {
    CHECK(std::abs(counts[t] - expected) <= 3.0 * sigma);
  }
}

TEST_CASE("mass concentrates at t = m when q is close to 1") {
  const EpochLengthLaw law(10, 0.99);
  Rng rng(7);
  int at_m = 0;
  const int draws = 20000;
  for (int k = 0; k < draws; ++k) {
    if (law.sample(rng) == 10) ++at_m;
  }
  CHECK(at_m > 0.95 * draws);
}

TEST_CASE("chi-square goodness of fit at q = 0.1, m = 8") {
  const EpochLengthLaw law(8, 0.1);
  Rng rng(2024);
  const int draws = 100000;
  std::vector<int> counts(9, 0);
  double sum = 0.0;
  for (int k = 0; k < draws; ++k) {
    const std::uint64_t t = law.sample(rng);
    ++counts[t];
    sum += static_cast<double>(t);
  }
  double stat = 0.0;
  for (std::uint64_t t = 1; t <= 8; ++t) {
    const double expected = draws * law.pmf(t);
    const double diff = counts[t] - expected;
    stat += diff * diff / expected;
  }
  // df = 7, significance 1e-3.
  CHECK(stat < 24.3219);

  const double mean = sum / draws;
  const double sigma_mean = std::sqrt(law.variance() / draws);
  CHECK(std::abs(mean - law.expected_length()) <= 3.0 * sigma_mean);
}

TEST_CASE("sampling is deterministic per seed") {
  const EpochLengthLaw law(100, 0.02);
  Rng a(99), b(99);
  for (int k = 0; k < 200; ++k) CHECK(law.sample(a) == law.sample(b));
}
