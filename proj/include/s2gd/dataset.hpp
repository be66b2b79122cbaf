#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace s2gd {

struct Feature {
  std::uint32_t index;
  double value;

  friend bool operator==(const Feature&, const Feature&) = default;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-sparse design matrix plus one label per row.
///
/// Invariants: feature indices are 0-based, strictly increasing within a
/// row, in [0, d); no explicit zeros are stored; row_sq_norm(i) is the sum
/// of squares of the stored values of row i.
class SparseDataset {
 public:
  SparseDataset() = default;

  /// Appends a row. Indices must be strictly increasing; zero-valued
  /// features are dropped. Grows the dimension to fit the largest index.
  void add_row(std::span<const Feature> features, double label);

  /// Raises the feature count (never shrinks below the largest stored
  /// index + 1).
  void set_dimension(std::size_t d);

  std::size_t n() const { return labels_.size(); }
  std::size_t d() const { return d_; }
  std::size_t nnz() const { return entries_.size(); }

  std::span<const Feature> row(std::size_t i) const {
    return {entries_.data() + row_start_[i],
            entries_.data() + row_start_[i + 1]};
  }
  double label(std::size_t i) const { return labels_[i]; }
  double row_sq_norm(std::size_t i) const { return row_sq_norms_[i]; }
  const std::vector<double>& labels() const { return labels_; }

  double max_row_sq_norm() const;

  /// a_i^T x for a dense x of dimension d.
  double dot_row(std::size_t i, std::span<const double> x) const;

  /// In-place: scales every stored value (and the norms) by s.
  void scale_values(double s);
  void set_label(std::size_t i, double value) { labels_[i] = value; }

  friend bool operator==(const SparseDataset&, const SparseDataset&) = default;

 private:
  std::size_t d_ = 0;
  std::vector<std::uint64_t> row_start_{0};
  std::vector<Feature> entries_;
  std::vector<double> labels_;
  std::vector<double> row_sq_norms_;
};

/// Parses LIBSVM text: `label idx:val idx:val ...` per nonempty line, with
/// 1-based strictly increasing indices. Indices come out 0-based. When
/// add_bias is set, a constant feature of value 1 is appended to every row
/// at index d-1. Labels in {-1,+1} pass through; a file whose labels are
/// all in {0,1} is remapped to {-1,+1}. Malformed input throws ParseError
/// with the offending line number.
SparseDataset parse_libsvm(std::istream& in, bool add_bias = true);
SparseDataset load_libsvm(const std::string& path, bool add_bias = true);

/// Inverse of parse_libsvm (modulo the bias column, which is written back
/// as an ordinary feature): 1-based indices, round-trip-exact values.
void write_libsvm(const SparseDataset& data, std::ostream& out);
void save_libsvm(const SparseDataset& data, const std::string& path);

struct GeneratedProblem {
  SparseDataset data;
  double lambda;
};

/// Synthetic L2-regularized least-squares instance with an exact condition
/// number: rows are scaled so max_i ||a_i||^2 = 1 and lambda = 1/(kappa-1),
/// which makes (max_i ||a_i||^2 + lambda) / lambda equal kappa. Targets are
/// b_i = a_i^T xbar + 0.1 * noise for a drawn ground truth xbar. Each
/// coordinate of each row is kept with probability `density`. Fully
/// deterministic for a fixed seed.
GeneratedProblem generate_least_squares(std::size_t n, std::size_t d,
                                        double kappa, double density,
                                        std::uint64_t seed);

}  // namespace s2gd
