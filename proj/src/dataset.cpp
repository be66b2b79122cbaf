#include "s2gd/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "s2gd/rng.hpp"

namespace s2gd {

void SparseDataset::add_row(std::span<const Feature> features, double label) {
  std::int64_t last = -1;
  double sq = 0.0;
  for (const Feature& f : features) {
    if (static_cast<std::int64_t>(f.index) <= last) {
      throw ParseError("feature indices must be strictly increasing");
    }
    last = f.index;
    if (f.value == 0.0) continue;
    entries_.push_back(f);
    sq += f.value * f.value;
  }
  row_start_.push_back(entries_.size());
  labels_.push_back(label);
  row_sq_norms_.push_back(sq);
  if (last >= 0) d_ = std::max(d_, static_cast<std::size_t>(last) + 1);
}

void SparseDataset::set_dimension(std::size_t d) { d_ = std::max(d_, d); }

double SparseDataset::max_row_sq_norm() const {
  double m = 0.0;
  for (double v : row_sq_norms_) m = std::max(m, v);
  return m;
}

double SparseDataset::dot_row(std::size_t i, std::span<const double> x) const {
  double acc = 0.0;
  for (const Feature& f : row(i)) acc += f.value * x[f.index];
  return acc;
}

void SparseDataset::scale_values(double s) {
  for (Feature& f : entries_) f.value *= s;
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    double sq = 0.0;
    for (std::uint64_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      sq += entries_[k].value * entries_[k].value;
    }
    row_sq_norms_[r] = sq;
  }
}

namespace {

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const char* begin, const char** end, std::size_t line_no,
                    const char* what) {
  errno = 0;
  char* out = nullptr;
  const double v = std::strtod(begin, &out);
  if (out == begin || errno == ERANGE) {
    fail_line(line_no, std::string("non-numeric ") + what);
  }
  *end = out;
  return v;
}

// Shortest decimal form that round-trips a double.
void append_double(std::string& out, double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  out += buf;
}

}  // namespace

SparseDataset parse_libsvm(std::istream& in, bool add_bias) {
  SparseDataset data;
  std::string line;
  std::size_t line_no = 0;
  std::vector<Feature> features;
  bool labels_are_01 = true;

  while (std::getline(in, line)) {
    ++line_no;
    const char* p = line.c_str();
    while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
    if (*p == '\0') continue;

    const char* end = nullptr;
    const double label = parse_double(p, &end, line_no, "label");
    p = end;
    if (label != 0.0 && label != 1.0) labels_are_01 = false;

    features.clear();
    std::int64_t prev_index = 0;
    for (;;) {
      while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
      if (*p == '\0') break;

      errno = 0;
      char* idx_end = nullptr;
      const long long raw_index = std::strtoll(p, &idx_end, 10);
      if (idx_end == p || errno == ERANGE || raw_index < 1) {
        fail_line(line_no, "malformed feature index");
      }
      if (*idx_end != ':') fail_line(line_no, "expected ':' after index");
      if (raw_index <= prev_index) {
        fail_line(line_no, "feature indices not strictly increasing");
      }
      prev_index = raw_index;

      const double value = parse_double(idx_end + 1, &end, line_no, "value");
      p = end;
      features.push_back(
          {static_cast<std::uint32_t>(raw_index - 1), value});
    }
    data.add_row(features, label);
  }

  if (labels_are_01 && data.n() > 0) {
    for (std::size_t i = 0; i < data.n(); ++i) {
      data.set_label(i, data.label(i) == 0.0 ? -1.0 : 1.0);
    }
  }
  if (add_bias) {
    SparseDataset with_bias;
    const auto bias_index = static_cast<std::uint32_t>(data.d());
    std::vector<Feature> row;
    for (std::size_t i = 0; i < data.n(); ++i) {
      const auto r = data.row(i);
      row.assign(r.begin(), r.end());
      row.push_back({bias_index, 1.0});
      with_bias.add_row(row, data.label(i));
    }
    with_bias.set_dimension(data.d() + 1);
    return with_bias;
  }
  return data;
}

SparseDataset load_libsvm(const std::string& path, bool add_bias) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_libsvm(in, add_bias);
}

void write_libsvm(const SparseDataset& data, std::ostream& out) {
  std::string line;
  for (std::size_t i = 0; i < data.n(); ++i) {
    line.clear();
    append_double(line, data.label(i));
    for (const Feature& f : data.row(i)) {
      line += ' ';
      line += std::to_string(f.index + 1);
      line += ':';
      append_double(line, f.value);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw ParseError("write failure");
}

void save_libsvm(const SparseDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path);
  write_libsvm(data, out);
}

GeneratedProblem generate_least_squares(std::size_t n, std::size_t d,
                                        double kappa, double density,
                                        std::uint64_t seed) {
  if (n < d || d < 1) {
    throw std::invalid_argument("generate_least_squares: need n >= d >= 1");
  }
  if (!(kappa > 1.0)) {
    throw std::invalid_argument("generate_least_squares: need kappa > 1");
  }
  if (!(density > 0.0) || density > 1.0) {
    throw std::invalid_argument(
        "generate_least_squares: density must be in (0, 1]");
  }

  Rng rng(seed);
  std::vector<double> ground_truth(d);
  for (double& v : ground_truth) v = rng.next_normal();

  SparseDataset data;
  std::vector<Feature> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t s = 0; s < d; ++s) {
      if (density < 1.0 && rng.next_unit() >= density) continue;
      row.push_back({static_cast<std::uint32_t>(s), rng.next_normal()});
    }
    data.add_row(row, 0.0);
  }
  data.set_dimension(d);

  const double max_sq = data.max_row_sq_norm();
  if (max_sq > 0.0) data.scale_values(1.0 / std::sqrt(max_sq));

  for (std::size_t i = 0; i < n; ++i) {
    data.set_label(i, data.dot_row(i, ground_truth) + 0.1 * rng.next_normal());
  }

  return {std::move(data), 1.0 / (kappa - 1.0)};
}

}  // namespace s2gd
