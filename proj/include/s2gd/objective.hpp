#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "s2gd/dataset.hpp"

namespace s2gd {

enum class Loss { least_squares, logistic };

/// Strong-convexity perturbation: adds (mu/2)||x - center||^2 to the
/// objective, making it mu-strongly convex and (L + mu)-smooth.
struct Perturbation {
  std::vector<double> center;
  double mu;
};

struct SmoothnessInfo {
  double L;                           // max_i L_i
  std::vector<double> per_component;  // L_i
  double mu;                          // strong-convexity lower bound
};

/// An empirical-risk objective f(x) = (1/n) sum_i f_i(x) with
/// f_i(x) = phi_i(a_i^T x) + (lambda/2)||x||^2, optionally perturbed.
/// Immutable after construction; all evaluation entry points are pure and
/// safe to call concurrently.
class ObjectiveSpec {
 public:
  ObjectiveSpec(const SparseDataset& data, Loss loss, double lambda,
                double logistic_curvature = 0.25);

  const SparseDataset& data() const { return *data_; }
  Loss loss() const { return loss_; }
  double lambda() const { return lambda_; }

  /// Curvature bound of the univariate loss (phi'' <= curvature).
  /// 1 for least squares; configurable for logistic (default 1/4, the
  /// standard sigmoid bound).
  double curvature() const { return curvature_; }

  const std::optional<Perturbation>& perturbation() const { return pert_; }

  /// Coefficient of the dense (x - x_ref) part of component-gradient
  /// differences: lambda plus the perturbation strength.
  double quadratic_coeff() const {
    return lambda_ + (pert_ ? pert_->mu : 0.0);
  }

  std::size_t n() const { return data_->n(); }
  std::size_t dim() const { return data_->d(); }

  /// Univariate loss phi_i and its derivative at margin z = a_i^T x.
  /// Logistic is evaluated overflow-safely.
  double phi_value(std::size_t i, double z) const;
  double phi_prime(std::size_t i, double z) const;

 private:
  const SparseDataset* data_;
  Loss loss_;
  double lambda_;
  double curvature_;
  std::optional<Perturbation> pert_;

  friend ObjectiveSpec perturb(const ObjectiveSpec&, std::span<const double>,
                               double);
};

double component_value(const ObjectiveSpec& spec, std::size_t i,
                       std::span<const double> x);
std::vector<double> component_gradient(const ObjectiveSpec& spec,
                                       std::size_t i,
                                       std::span<const double> x);
double objective_value(const ObjectiveSpec& spec, std::span<const double> x);
std::vector<double> full_gradient(const ObjectiveSpec& spec,
                                  std::span<const double> x);

/// Writes the full gradient into `grad` and phi_i'(a_i^T x) for every i
/// into `phi_primes`. Same result as full_gradient; one pass over the data.
void full_gradient_with_primes(const ObjectiveSpec& spec,
                               std::span<const double> x,
                               std::vector<double>& grad,
                               std::vector<double>& phi_primes);

SmoothnessInfo smoothness_constants(const ObjectiveSpec& spec);

/// Returns a copy of `spec` carrying the (mu/2)||x - center||^2 term.
ObjectiveSpec perturb(const ObjectiveSpec& spec, std::span<const double> center,
                      double mu);

}  // namespace s2gd
