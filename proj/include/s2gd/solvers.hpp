#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "s2gd/objective.hpp"
#include "s2gd/trace.hpp"

namespace s2gd {

/// Raised when a run's objective becomes non-finite or exceeds 1000x its
/// initial value.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  double stepsize = 0.0;        // h
  std::uint64_t max_inner = 1;  // m, cap on inner steps per epoch
  double nu = 0.0;              // lower bound on mu fed to the epoch law
  std::uint64_t epochs = 1;     // J
  std::uint64_t seed = 0;
  double alpha = 1.0;           // stage-2 inner-step multiple (s2gd_plus)
  std::uint64_t trace_every = 0;
  std::optional<std::uint64_t> fixed_inner;  // deterministic t_j override
  // Stop starting epochs once the next one could push cumulative work past
  // this many stochastic-gradient units (0 = unlimited).
  std::uint64_t work_budget = 0;
  // Called after every completed epoch with the epoch index and iterate.
  std::function<void(std::uint64_t, std::span<const double>)> on_epoch;
};

struct RunResult {
  std::vector<double> x_final;
  ConvergenceTrace trace;
  std::uint64_t total_work = 0;
  std::uint64_t epochs_run = 0;
};

/// Semi-stochastic gradient descent. Each epoch computes a full gradient
/// at the anchor x_j, draws the number of inner steps t_j in [1, m] from
/// the geometric epoch law with q = nu h, and runs t_j variance-reduced
/// steps y <- y - h (g_j + f_i'(y) - f_i'(x_j)). Work: n per epoch for the
/// full gradient plus 2 per inner step. Deterministic given the seed; one
/// generator drives the t_j draw and the index draws, in algorithm order.
RunResult s2gd(const ObjectiveSpec& spec, std::span<const double> x0,
               const SolverConfig& config);

/// Same iterates as s2gd under the same seed, but each inner step costs
/// O(nnz(a_i)): the dense part of the update is deferred per coordinate
/// and applied in grouped form when the coordinate is next touched, with a
/// catch-up pass at the epoch end. Grouping changes the floating-point
/// evaluation order, so agreement with s2gd is to rounding (exact on fully
/// dense data, where no grouping happens).
RunResult s2gd_sparse(const ObjectiveSpec& spec, std::span<const double> x0,
                      const SolverConfig& config);

/// One SGD pass over the data (n iterations), then S2GD epochs with the
/// inner-step count fixed at ceil(alpha n) instead of drawn. config.epochs
/// may be 0, in which case the result is the plain SGD pass.
RunResult s2gd_plus(const ObjectiveSpec& spec, std::span<const double> x0,
                    const SolverConfig& config);

/// Full-gradient descent; work = iterations * n.
RunResult gd(const ObjectiveSpec& spec, std::span<const double> x0,
             double stepsize, std::uint64_t iterations,
             std::uint64_t trace_every = 0);

/// Plain stochastic gradient descent with a constant stepsize; work =
/// iterations.
RunResult sgd(const ObjectiveSpec& spec, std::span<const double> x0,
              double stepsize, std::uint64_t iterations, std::uint64_t seed,
              std::uint64_t trace_every = 0);

/// Stochastic average gradient: keeps the latest loss-derivative scalar
/// per example and steps along the average of the stored gradients plus
/// the exact regularizer gradient. With plus=true the stored sum is
/// divided by the number of distinct examples seen so far instead of n.
RunResult sag(const ObjectiveSpec& spec, std::span<const double> x0,
              double stepsize, std::uint64_t iterations, std::uint64_t seed,
              bool plus = false, std::uint64_t trace_every = 0);

}  // namespace s2gd
