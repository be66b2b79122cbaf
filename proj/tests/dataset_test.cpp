#include "s2gd/dataset.hpp"

#include <cmath>
#include <sstream>

#include <doctest.h>

#include "s2gd/objective.hpp"
#include "s2gd/trace.hpp"

using namespace s2gd;

TEST_CASE("parse_libsvm basic line") {
  std::istringstream in("+1 1:0.5 3:2.0\n");
  const SparseDataset data = parse_libsvm(in, /*add_bias=*/false);
  REQUIRE(data.n() == 1);
  CHECK(data.d() == 3);
  REQUIRE(data.row(0).size() == 2);
  CHECK(data.row(0)[0] == Feature{0, 0.5});
  CHECK(data.row(0)[1] == Feature{2, 2.0});
  CHECK(data.label(0) == 1.0);
  CHECK(data.row_sq_norm(0) == doctest::Approx(0.25 + 4.0).epsilon(1e-12));
}

TEST_CASE("parse_libsvm appends bias feature") {
  std::istringstream in("-1 2:1.0\n+1 1:1.0\n");
  const SparseDataset data = parse_libsvm(in, /*add_bias=*/true);
  REQUIRE(data.n() == 2);
  CHECK(data.d() == 3);
  REQUIRE(data.row(0).size() == 2);
  CHECK(data.row(0)[1] == Feature{2, 1.0});
  REQUIRE(data.row(1).size() == 2);
  CHECK(data.row(1)[1] == Feature{2, 1.0});
  CHECK(data.label(0) == -1.0);
  CHECK(data.label(1) == 1.0);
}

TEST_CASE("parse_libsvm remaps {0,1} labels to {-1,+1}") {
  std::istringstream in("0 1:1.0\n1 2:1.0\n");
  const SparseDataset data = parse_libsvm(in, false);
  CHECK(data.label(0) == -1.0);
  CHECK(data.label(1) == 1.0);
}

TEST_CASE("parse_libsvm keeps general regression targets") {
  std::istringstream in("0.25 1:1.0\n-3.5 2:1.0\n");
  const SparseDataset data = parse_libsvm(in, false);
  CHECK(data.label(0) == 0.25);
  CHECK(data.label(1) == -3.5);
}

TEST_CASE("parse_libsvm skips blank lines and dimensions like ijcnn") {
  // 22 features plus the appended bias = 23 columns.
  std::istringstream in("+1 1:0.1 22:0.5\n\n-1 7:1.5\n");
  const SparseDataset data = parse_libsvm(in, true);
  CHECK(data.n() == 2);
  CHECK(data.d() == 23);
}

TEST_CASE("parse_libsvm error reporting") {
  SUBCASE("non-numeric label") {
    std::istringstream in("+1 1:1.0\nabc 1:2.0\n");
    CHECK_THROWS_WITH_AS(parse_libsvm(in, false),
                         doctest::Contains("line 2"), ParseError);
  }
  SUBCASE("non-increasing indices") {
    std::istringstream in("+1 2:1.0 2:3.0\n");
    CHECK_THROWS_WITH_AS(parse_libsvm(in, false),
                         doctest::Contains("strictly increasing"), ParseError);
  }
  SUBCASE("non-numeric value") {
    std::istringstream in("+1 1:x\n");
    CHECK_THROWS_AS(parse_libsvm(in, false), ParseError);
  }
  SUBCASE("zero index (1-based input)") {
    std::istringstream in("+1 0:1.0\n");
    CHECK_THROWS_AS(parse_libsvm(in, false), ParseError);
  }
  SUBCASE("missing colon") {
    std::istringstream in("+1 5\n");
    CHECK_THROWS_WITH_AS(parse_libsvm(in, false), doctest::Contains("line 1"),
                         ParseError);
  }
}

TEST_CASE("write/parse round-trips exactly") {
  const GeneratedProblem p = generate_least_squares(40, 12, 50.0, 0.5, 3);
  std::ostringstream out;
  write_libsvm(p.data, out);
  std::istringstream in(out.str());
  const SparseDataset back = parse_libsvm(in, /*add_bias=*/false);
  CHECK(back == p.data);
}

TEST_CASE("generate_least_squares hits the target condition number") {
  const GeneratedProblem p = generate_least_squares(100, 10, 100.0, 1.0, 7);
  CHECK(p.lambda == 1.0 / 99.0);
  CHECK(p.data.max_row_sq_norm() == doctest::Approx(1.0).epsilon(1e-12));

  const ObjectiveSpec spec(p.data, Loss::least_squares, p.lambda);
  const SmoothnessInfo info = smoothness_constants(spec);
  CHECK(info.L / info.mu == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("generate_least_squares lambda follows 1/(kappa-1)") {
  const GeneratedProblem p = generate_least_squares(200, 50, 1e4, 1.0, 11);
  CHECK(p.lambda == 1.0 / 9999.0);
  const ObjectiveSpec spec(p.data, Loss::least_squares, p.lambda);
  const SmoothnessInfo info = smoothness_constants(spec);
  CHECK(info.L / info.mu == doctest::Approx(1e4).epsilon(1e-9));
}

TEST_CASE("generate_least_squares is deterministic per seed") {
  const GeneratedProblem a = generate_least_squares(60, 20, 10.0, 0.3, 42);
  const GeneratedProblem b = generate_least_squares(60, 20, 10.0, 0.3, 42);
  CHECK(a.data == b.data);
  CHECK(a.lambda == b.lambda);

  const GeneratedProblem c = generate_least_squares(60, 20, 10.0, 0.3, 43);
  CHECK(a.data != c.data);
}

TEST_CASE("generate_least_squares density is binomial") {
  const std::size_t n = 400, d = 50;
  const double density = 0.2;
  const GeneratedProblem p = generate_least_squares(n, d, 30.0, density, 5);
  const double total = static_cast<double>(p.data.nnz());
  const double mean = static_cast<double>(n * d) * density;
  const double sigma = std::sqrt(static_cast<double>(n * d) * density *
                                 (1.0 - density));
  CHECK(std::abs(total - mean) <= 3.0 * sigma);
}

TEST_CASE("generate_least_squares input validation") {
  CHECK_THROWS_AS(generate_least_squares(10, 20, 10.0, 1.0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_least_squares(10, 5, 1.0, 1.0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_least_squares(10, 5, 10.0, 0.0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_least_squares(10, 5, 10.0, 1.5, 0),
                  std::invalid_argument);
}

TEST_CASE("trace csv format") {
  ConvergenceTrace trace;
  trace.record(0, 0, 1.0);
  trace.record(200000, 1, 0.5);

  SUBCASE("without reference the residual column is empty") {
    std::ostringstream out;
    write_trace_csv(trace, out);
    CHECK(out.str() ==
          "work_units,epoch,objective,residual\n"
          "0,0,1,\n"
          "200000,1,0.5,\n");
  }
  SUBCASE("with reference") {
    trace.attach_reference(0.25);
    std::ostringstream out;
    write_trace_csv(trace, out);
    CHECK(out.str() ==
          "work_units,epoch,objective,residual\n"
          "0,0,1,0.75\n"
          "200000,1,0.5,0.25\n");
  }
}

TEST_CASE("trace csv rejects an empty trace") {
  ConvergenceTrace trace;
  std::ostringstream out;
  CHECK_THROWS_AS(write_trace_csv(trace, out), std::invalid_argument);
}

TEST_CASE("trace work units must increase") {
  ConvergenceTrace trace;
  trace.record(5, 0, 1.0);
  CHECK_THROWS_AS(trace.record(5, 1, 0.5), std::logic_error);
}
