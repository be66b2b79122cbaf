#include "s2gd/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "s2gd/epoch_law.hpp"
#include "s2gd/rng.hpp"

namespace s2gd {

namespace {

void check_start(const ObjectiveSpec& spec, std::span<const double> x0) {
  if (x0.size() != spec.dim()) {
    throw std::invalid_argument("x0 dimension does not match objective");
  }
}

double divergence_limit(double f0) {
  return f0 > 0.0 ? 1e3 * f0 : std::numeric_limits<double>::infinity();
}

double checked_objective(const ObjectiveSpec& spec,
                         std::span<const double> x, double limit,
                         const char* solver) {
  const double f = objective_value(spec, x);
  if (!std::isfinite(f) || f > limit) {
    throw DivergenceError(std::string(solver) +
                          ": objective diverged (f = " + std::to_string(f) +
                          ")");
  }
  return f;
}

// State shared by the per-coordinate update forms of one S2GD epoch. On
// coordinates untouched by the sampled row, one inner step acts as the
// affine map y -> decay*y + offset[s] (decay = 1 - h*(lambda + mu_pert),
// offset = h*rho*x_j - h*g_j); the sampled row additionally contributes the
// sparse term -h (phi_i'(a_i^T y) - phi_i'(a_i^T x_j)) a_i.
struct EpochKernel {
  double decay;
  double one_minus_decay;
  std::vector<double> offset;

  // k pending applications of the affine map, grouped.
  void apply_pending(double& y, std::uint64_t k, std::uint32_t s) const {
    if (k == 0) return;
    if (k == 1 || decay == 1.0) {
      if (decay == 1.0) {
        y += static_cast<double>(k) * offset[s];
      } else {
        y = decay * y + offset[s];
      }
      return;
    }
    const double dk = std::pow(decay, static_cast<double>(k));
    y = dk * y + offset[s] * (1.0 - dk) / one_minus_decay;
  }
};

void run_epochs(const ObjectiveSpec& spec, const SolverConfig& cfg, bool lazy,
                Rng& rng, std::vector<double>& x, ConvergenceTrace& trace,
                std::uint64_t& work, std::uint64_t& epochs_done, double limit,
                std::uint64_t epoch_base, const char* solver) {
  const std::uint64_t n = spec.n();
  const std::size_t d = spec.dim();
  const double h = cfg.stepsize;
  const double rho = spec.quadratic_coeff();
  const auto& data = spec.data();

  std::optional<EpochLengthLaw> law;
  if (!cfg.fixed_inner) law.emplace(cfg.max_inner, cfg.nu * h);
  const std::uint64_t worst_inner =
      cfg.fixed_inner ? *cfg.fixed_inner : cfg.max_inner;

  EpochKernel kernel;
  kernel.decay = 1.0 - h * rho;
  kernel.one_minus_decay = 1.0 - kernel.decay;
  kernel.offset.resize(d);

  std::vector<double> grad(d);
  std::vector<double> anchor_primes;
  std::vector<double> y(d);
  std::vector<std::uint64_t> chi;
  if (lazy) chi.assign(d, 0);

  for (std::uint64_t j = 0; j < cfg.epochs; ++j) {
    if (cfg.work_budget != 0 && work + n + 2 * worst_inner > cfg.work_budget) {
      break;
    }
    full_gradient_with_primes(spec, x, grad, anchor_primes);
    work += n;
    const std::uint64_t t_j =
        cfg.fixed_inner ? *cfg.fixed_inner : law->sample(rng);
    for (std::size_t s = 0; s < d; ++s) {
      kernel.offset[s] = h * rho * x[s] - h * grad[s];
    }
    y = x;

    if (!lazy) {
      for (std::uint64_t t = 0; t < t_j; ++t) {
        const std::uint64_t i = rng.next_index(n);
        const double z = data.dot_row(i, y);
        const double step = h * (spec.phi_prime(i, z) - anchor_primes[i]);
        for (std::size_t s = 0; s < d; ++s) {
          y[s] = kernel.decay * y[s] + kernel.offset[s];
        }
        for (const Feature& f : data.row(i)) y[f.index] -= step * f.value;
        work += 2;
      }
    } else {
      std::fill(chi.begin(), chi.end(), 0);
      for (std::uint64_t t = 0; t < t_j; ++t) {
        const std::uint64_t i = rng.next_index(n);
        const auto row = data.row(i);
        for (const Feature& f : row) {
          kernel.apply_pending(y[f.index], t - chi[f.index], f.index);
        }
        double z = 0.0;
        for (const Feature& f : row) z += f.value * y[f.index];
        const double step = h * (spec.phi_prime(i, z) - anchor_primes[i]);
        for (const Feature& f : row) {
          double& ys = y[f.index];
          ys = kernel.decay * ys + kernel.offset[f.index];
          ys -= step * f.value;
          chi[f.index] = t + 1;
        }
        work += 2;
      }
      for (std::size_t s = 0; s < d; ++s) {
        kernel.apply_pending(y[s], t_j - chi[s],
                             static_cast<std::uint32_t>(s));
      }
    }

    x = y;
    const double f = checked_objective(spec, x, limit, solver);
    trace.record(work, epoch_base + j + 1, f);
    ++epochs_done;
    if (cfg.on_epoch) cfg.on_epoch(epochs_done, x);
  }
}

void check_s2gd_config(const SolverConfig& cfg, bool need_epochs) {
  if (!(cfg.stepsize > 0.0)) {
    throw std::invalid_argument("stepsize must be > 0");
  }
  if (!(cfg.nu >= 0.0)) throw std::invalid_argument("nu must be >= 0");
  if (!cfg.fixed_inner && cfg.max_inner < 1) {
    throw std::invalid_argument("max_inner must be >= 1");
  }
  if (cfg.fixed_inner && *cfg.fixed_inner < 1) {
    throw std::invalid_argument("fixed_inner must be >= 1");
  }
  if (need_epochs && cfg.epochs < 1) {
    throw std::invalid_argument("epochs must be >= 1");
  }
}

RunResult s2gd_run(const ObjectiveSpec& spec, std::span<const double> x0,
                   const SolverConfig& cfg, bool lazy, const char* solver) {
  check_start(spec, x0);
  check_s2gd_config(cfg, /*need_epochs=*/true);

  RunResult res;
  res.x_final.assign(x0.begin(), x0.end());
  Rng rng(cfg.seed);
  const double f0 = checked_objective(
      spec, res.x_final, std::numeric_limits<double>::infinity(), solver);
  res.trace.record(0, 0, f0);
  run_epochs(spec, cfg, lazy, rng, res.x_final, res.trace, res.total_work,
             res.epochs_run, divergence_limit(f0), 0, solver);
  return res;
}

// One pass of plain SGD steps on the full component gradient
// phi_i'(a_i^T x) a_i + lambda x + mu_pert (x - center).
void sgd_steps(const ObjectiveSpec& spec, std::vector<double>& x, double h,
               std::uint64_t steps, Rng& rng, std::uint64_t& work,
               ConvergenceTrace& trace, std::uint64_t trace_every,
               double limit, const char* solver) {
  const std::uint64_t n = spec.n();
  const std::size_t d = spec.dim();
  const double lambda = spec.lambda();
  const auto& pert = spec.perturbation();
  const auto& data = spec.data();

  for (std::uint64_t k = 0; k < steps; ++k) {
    const std::uint64_t i = rng.next_index(n);
    const double z = data.dot_row(i, x);
    const double gphi = spec.phi_prime(i, z);
    if (lambda != 0.0 || pert) {
      const double mu_p = pert ? pert->mu : 0.0;
      for (std::size_t s = 0; s < d; ++s) {
        double g = lambda * x[s];
        if (pert) g += mu_p * (x[s] - pert->center[s]);
        x[s] -= h * g;
      }
    }
    for (const Feature& f : data.row(i)) x[f.index] -= h * gphi * f.value;
    ++work;
    if (trace_every != 0 && work % trace_every == 0) {
      trace.record(work, work / n, checked_objective(spec, x, limit, solver));
    }
  }
}

}  // namespace

RunResult s2gd(const ObjectiveSpec& spec, std::span<const double> x0,
               const SolverConfig& config) {
  return s2gd_run(spec, x0, config, /*lazy=*/false, "s2gd");
}

RunResult s2gd_sparse(const ObjectiveSpec& spec, std::span<const double> x0,
                      const SolverConfig& config) {
  return s2gd_run(spec, x0, config, /*lazy=*/true, "s2gd_sparse");
}

RunResult s2gd_plus(const ObjectiveSpec& spec, std::span<const double> x0,
                    const SolverConfig& config) {
  check_start(spec, x0);
  check_s2gd_config(config, /*need_epochs=*/false);
  if (!(config.alpha >= 1.0)) {
    throw std::invalid_argument("s2gd_plus: alpha must be >= 1");
  }

  const std::uint64_t n = spec.n();
  RunResult res;
  res.x_final.assign(x0.begin(), x0.end());
  Rng rng(config.seed);
  const double f0 = checked_objective(
      spec, res.x_final, std::numeric_limits<double>::infinity(), "s2gd_plus");
  res.trace.record(0, 0, f0);
  const double limit = divergence_limit(f0);

  // Stage 1: a single SGD pass.
  sgd_steps(spec, res.x_final, config.stepsize, n, rng, res.total_work,
            res.trace, config.trace_every, limit, "s2gd_plus");
  if (res.trace.back().work < res.total_work) {
    res.trace.record(res.total_work, 0,
                     checked_objective(spec, res.x_final, limit, "s2gd_plus"));
  }

  // Stage 2: S2GD with t_j pinned to ceil(alpha n).
  SolverConfig stage2 = config;
  if (!stage2.fixed_inner) {
    stage2.fixed_inner = static_cast<std::uint64_t>(
        std::ceil(config.alpha * static_cast<double>(n)));
  }
  if (config.epochs > 0) {
    run_epochs(spec, stage2, /*lazy=*/false, rng, res.x_final, res.trace,
               res.total_work, res.epochs_run, limit, 0, "s2gd_plus");
  }
  return res;
}

RunResult gd(const ObjectiveSpec& spec, std::span<const double> x0,
             double stepsize, std::uint64_t iterations,
             std::uint64_t trace_every) {
  check_start(spec, x0);
  if (!(stepsize > 0.0)) throw std::invalid_argument("stepsize must be > 0");
  (void)trace_every;  // gd records every iteration already

  RunResult res;
  res.x_final.assign(x0.begin(), x0.end());
  const double f0 = checked_objective(
      spec, res.x_final, std::numeric_limits<double>::infinity(), "gd");
  res.trace.record(0, 0, f0);
  const double limit = divergence_limit(f0);

  const std::uint64_t n = spec.n();
  for (std::uint64_t k = 0; k < iterations; ++k) {
    const std::vector<double> grad = full_gradient(spec, res.x_final);
    for (std::size_t s = 0; s < res.x_final.size(); ++s) {
      res.x_final[s] -= stepsize * grad[s];
    }
    res.total_work += n;
    res.trace.record(res.total_work, k + 1,
                     checked_objective(spec, res.x_final, limit, "gd"));
  }
  return res;
}

RunResult sgd(const ObjectiveSpec& spec, std::span<const double> x0,
              double stepsize, std::uint64_t iterations, std::uint64_t seed,
              std::uint64_t trace_every) {
  check_start(spec, x0);
  if (!(stepsize > 0.0)) throw std::invalid_argument("stepsize must be > 0");
  if (trace_every == 0) trace_every = spec.n();

  RunResult res;
  res.x_final.assign(x0.begin(), x0.end());
  Rng rng(seed);
  const double f0 = checked_objective(
      spec, res.x_final, std::numeric_limits<double>::infinity(), "sgd");
  res.trace.record(0, 0, f0);
  const double limit = divergence_limit(f0);

  sgd_steps(spec, res.x_final, stepsize, iterations, rng, res.total_work,
            res.trace, trace_every, limit, "sgd");
  if (res.trace.back().work < res.total_work) {
    res.trace.record(res.total_work, res.total_work / spec.n(),
                     checked_objective(spec, res.x_final, limit, "sgd"));
  }
  return res;
}

RunResult sag(const ObjectiveSpec& spec, std::span<const double> x0,
              double stepsize, std::uint64_t iterations, std::uint64_t seed,
              bool plus, std::uint64_t trace_every) {
  check_start(spec, x0);
  if (!(stepsize >= 0.0)) throw std::invalid_argument("stepsize must be >= 0");
  if (trace_every == 0) trace_every = spec.n();

  const std::uint64_t n = spec.n();
  const std::size_t d = spec.dim();
  const double lambda = spec.lambda();
  const auto& pert = spec.perturbation();
  const auto& data = spec.data();

  RunResult res;
  res.x_final.assign(x0.begin(), x0.end());
  Rng rng(seed);
  const double f0 = checked_objective(
      spec, res.x_final, std::numeric_limits<double>::infinity(), "sag");
  res.trace.record(0, 0, f0);
  const double limit = divergence_limit(f0);

  std::vector<double> stored(n, 0.0);       // latest phi_i' per example
  std::vector<char> seen(n, 0);
  std::vector<double> stored_sum(d, 0.0);   // sum_i stored[i] * a_i
  std::uint64_t distinct_seen = 0;
  std::vector<double>& x = res.x_final;

  for (std::uint64_t k = 0; k < iterations; ++k) {
    const std::uint64_t i = rng.next_index(n);
    const double z = data.dot_row(i, x);
    const double snew = spec.phi_prime(i, z);
    const double diff = snew - stored[i];
    for (const Feature& f : data.row(i)) {
      stored_sum[f.index] += diff * f.value;
    }
    stored[i] = snew;
    if (!seen[i]) {
      seen[i] = 1;
      ++distinct_seen;
    }
    const double denom =
        static_cast<double>(plus ? distinct_seen : n);
    const double mu_p = pert ? pert->mu : 0.0;
    for (std::size_t s = 0; s < d; ++s) {
      double g = stored_sum[s] / denom + lambda * x[s];
      if (pert) g += mu_p * (x[s] - pert->center[s]);
      x[s] -= stepsize * g;
    }
    ++res.total_work;
    if (res.total_work % trace_every == 0) {
      res.trace.record(res.total_work, res.total_work / n,
                       checked_objective(spec, x, limit, "sag"));
    }
  }
  if (res.trace.back().work < res.total_work) {
    res.trace.record(res.total_work, res.total_work / n,
                     checked_objective(spec, x, limit, "sag"));
  }
  return res;
}

}  // namespace s2gd
