#include "s2gd/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace s2gd {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

// 1 / (1 + exp(-z)) without overflow.
double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_dim(const ObjectiveSpec& spec, std::span<const double> x) {
  if (x.size() != spec.dim()) {
    throw std::invalid_argument("vector dimension does not match dataset");
  }
}

// The quadratic part shared by every component:
// (lambda/2)||x||^2 + (mu/2)||x - center||^2.
double quadratic_value(const ObjectiveSpec& spec, std::span<const double> x) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  double total = 0.5 * spec.lambda() * sq;
  if (const auto& p = spec.perturbation()) {
    double psq = 0.0;
    for (std::size_t s = 0; s < x.size(); ++s) {
      const double dlt = x[s] - p->center[s];
      psq += dlt * dlt;
    }
    total += 0.5 * p->mu * psq;
  }
  return total;
}

void add_quadratic_gradient(const ObjectiveSpec& spec,
                            std::span<const double> x,
                            std::vector<double>& grad) {
  const double lambda = spec.lambda();
  for (std::size_t s = 0; s < x.size(); ++s) grad[s] += lambda * x[s];
  if (const auto& p = spec.perturbation()) {
    for (std::size_t s = 0; s < x.size(); ++s) {
      grad[s] += p->mu * (x[s] - p->center[s]);
    }
  }
}

}  // namespace

ObjectiveSpec::ObjectiveSpec(const SparseDataset& data, Loss loss,
                             double lambda, double logistic_curvature)
    : data_(&data),
      loss_(loss),
      lambda_(lambda),
      curvature_(loss == Loss::least_squares ? 1.0 : logistic_curvature) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
}

double ObjectiveSpec::phi_value(std::size_t i, double z) const {
  switch (loss_) {
    case Loss::least_squares: {
      const double r = z - data_->label(i);
      return 0.5 * r * r;
    }
    case Loss::logistic:
      return softplus(-data_->label(i) * z);
  }
  return 0.0;
}

double ObjectiveSpec::phi_prime(std::size_t i, double z) const {
  switch (loss_) {
    case Loss::least_squares:
      return z - data_->label(i);
    case Loss::logistic: {
      const double l = data_->label(i);
      return -l * sigmoid(-l * z);
    }
  }
  return 0.0;
}

double component_value(const ObjectiveSpec& spec, std::size_t i,
                       std::span<const double> x) {
  check_dim(spec, x);
  return spec.phi_value(i, spec.data().dot_row(i, x)) +
         quadratic_value(spec, x);
}

std::vector<double> component_gradient(const ObjectiveSpec& spec,
                                       std::size_t i,
                                       std::span<const double> x) {
  check_dim(spec, x);
  std::vector<double> grad(x.size(), 0.0);
  const double gphi = spec.phi_prime(i, spec.data().dot_row(i, x));
  for (const Feature& f : spec.data().row(i)) {
    grad[f.index] = gphi * f.value;
  }
  add_quadratic_gradient(spec, x, grad);
  return grad;
}

double objective_value(const ObjectiveSpec& spec, std::span<const double> x) {
  check_dim(spec, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < spec.n(); ++i) {
    acc += spec.phi_value(i, spec.data().dot_row(i, x));
  }
  return acc / static_cast<double>(spec.n()) + quadratic_value(spec, x);
}

void full_gradient_with_primes(const ObjectiveSpec& spec,
                               std::span<const double> x,
                               std::vector<double>& grad,
                               std::vector<double>& phi_primes) {
  check_dim(spec, x);
  const std::size_t n = spec.n();
  grad.assign(spec.dim(), 0.0);
  phi_primes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double gphi = spec.phi_prime(i, spec.data().dot_row(i, x));
    phi_primes[i] = gphi;
    for (const Feature& f : spec.data().row(i)) {
      grad[f.index] += gphi * f.value;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& g : grad) g *= inv_n;
  add_quadratic_gradient(spec, x, grad);
}

std::vector<double> full_gradient(const ObjectiveSpec& spec,
                                  std::span<const double> x) {
  std::vector<double> grad;
  std::vector<double> primes;
  full_gradient_with_primes(spec, x, grad, primes);
  return grad;
}

SmoothnessInfo smoothness_constants(const ObjectiveSpec& spec) {
  SmoothnessInfo info;
  const double pert_mu = spec.perturbation() ? spec.perturbation()->mu : 0.0;
  info.per_component.resize(spec.n());
  info.L = 0.0;
  for (std::size_t i = 0; i < spec.n(); ++i) {
    const double li =
        spec.curvature() * spec.data().row_sq_norm(i) + spec.lambda() + pert_mu;
    info.per_component[i] = li;
    info.L = std::max(info.L, li);
  }
  info.mu = spec.lambda() + pert_mu;
  return info;
}

ObjectiveSpec perturb(const ObjectiveSpec& spec, std::span<const double> center,
                      double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("perturbation mu must be > 0");
  if (center.size() != spec.dim()) {
    throw std::invalid_argument("perturbation center dimension mismatch");
  }
  ObjectiveSpec out = spec;
  out.pert_ = Perturbation{{center.begin(), center.end()}, mu};
  return out;
}

}  // namespace s2gd
