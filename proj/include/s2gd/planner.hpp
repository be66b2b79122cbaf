#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace s2gd {

/// The two analyzed settings of the inner-loop parameter nu: zero (the
/// variance-reduction baseline) or the strong-convexity lower bound mu.
enum class NuMode { zero, mu };

struct WorkPlan {
  std::uint64_t epochs = 0;       // j
  double delta = 0;               // epsilon^(1/j), per-epoch decrease target
  double stepsize = 0;            // h
  std::uint64_t inner_steps = 0;  // m, rounded up to an integer
  double inner_steps_real = 0;    // unrounded bound
  double factor = 0;              // predicted per-epoch factor c at (h, m)
  double work = 0;                // j * (n + 2m)
  double expected_work = 0;       // j * (n + 2 xi(m, nu h))
};

/// Per-epoch contraction factor of the expected residual:
///   c = (1-nu h)^m / (beta mu h (1-2Lh)) + 2(L-mu)h / (1-2Lh).
/// Requires 0 < mu <= L, 0 <= nu <= mu, m >= 1 (real-valued is fine) and
/// 0 < h < 1/(2L). May exceed 1; feasibility is the caller's check.
double convergence_factor(double L, double mu, double nu, double h, double m);

/// Stepsize h(j) = 1 / ((4/Delta)(L-mu) + 2L) with Delta = epsilon^(1/j).
/// The degenerate L = mu case returns (1 - 1e-6)/(2L) to stay inside the
/// admissible open interval.
double stepsize_for_epochs(double L, double mu, std::uint64_t j,
                           double epsilon);

/// The mu-free alternative stepsize Delta/(6L).
double stepsize_mu_free(double L, double delta);

/// Inner-step bound m(j), unrounded:
///   nu = mu:  (4(k-1)/Delta + 2k) log(2/Delta + (2k-1)/(k-1))
///   nu = 0:   8(k-1)/Delta^2 + 8k/Delta + 2k^2/(k-1)
/// Natural logarithm; requires kappa > 1.
double inner_steps_bound(double kappa, std::uint64_t j, double epsilon,
                         NuMode mode);
std::uint64_t inner_steps_for_epochs(double kappa, std::uint64_t j,
                                     double epsilon, NuMode mode);

/// Simpler, slightly larger bound (valid for kappa >= 2):
///   nu = mu: (6k/Delta) log(5/Delta);  nu = 0: 20k/Delta^2.
double simplified_inner_steps(double kappa, std::uint64_t j, double epsilon,
                              NuMode mode);

struct ClosedFormPlan {
  double stepsize;     // Delta / (4(Delta L + L - mu))
  double inner_steps;  // 8(k-1)/Delta^2 + 8k/Delta
};

/// Exact minimizer of the inner-step count over h in the nu = 0 case; the
/// stepsize is the vertex of the quadratic h(Delta - 2(Delta L + L - mu)h).
ClosedFormPlan closed_form_nu0(double L, double mu, std::uint64_t j,
                               double epsilon);

/// Total work j(n + 2m) in stochastic-gradient units, exact integers.
std::uint64_t workload(std::uint64_t j, std::uint64_t n, std::uint64_t m);
double workload_real(std::uint64_t j, double n, double m);
/// Expected-work variant j(n + 2 xi).
double expected_workload(std::uint64_t j, double n, double xi);

/// Smallest j with c^j <= epsilon * rho (failure probability rho).
std::uint64_t epochs_for_confidence(double c, double epsilon, double rho);

/// Smallest inner-step count whose convergence factor at stepsize h stays
/// at or below delta. Throws when no finite count can (the h-dependent
/// tail already exceeds delta).
std::uint64_t inner_steps_for_stepsize(double L, double mu, double nu,
                                       double h, double delta);

/// Scans j = 1..j_max with the theorem stepsize/inner-step rules and
/// returns the workload minimizer (ties toward smaller j). Throws when no
/// j <= j_max yields a contraction factor below 1.
WorkPlan optimal_plan(std::uint64_t n, double L, double mu, double epsilon,
                      NuMode mode, std::uint64_t j_max);

/// Work-minimization by scalar search: for fixed j, finds the h minimizing
/// the expected work j(n + 2 xi(m(h))) where m(h) is the smallest inner-step
/// count with convergence factor <= Delta (exact factor, exact xi).
WorkPlan numeric_plan_for_epochs(std::uint64_t n, double L, double mu,
                                 double epsilon, NuMode mode, std::uint64_t j);
WorkPlan numeric_plan(std::uint64_t n, double L, double mu, double epsilon,
                      NuMode mode, std::uint64_t j_max);

struct ConvexPlanResult {
  double mu_pert;  // perturbation strength (= epsilon)
  double rho;      // failure probability the epoch count covers
  WorkPlan plan;
};

/// Planning for a merely convex objective: perturb with mu = epsilon < L,
/// plan the perturbed (L+eps, eps) problem, and size the epoch count for
/// confidence 1 - rho. The perturbed condition number is (L+eps)/eps.
ConvexPlanResult convex_plan(std::uint64_t n, double L, double epsilon,
                             double rho, std::uint64_t j_max = 100);

/// One row of the reference workload grid: epoch count and both per-pass
/// workloads W/n (nu = mu and nu = 0).
struct WorkGridRow {
  std::uint64_t j;
  double work_mu;    // W_mu(j)/n
  double work_zero;  // W_0(j)/n
};

struct WorkGridBlock {
  double epsilon;
  double kappa;
  std::vector<WorkGridRow> rows;
};

/// The standard workload-comparison lattice at n = 10^9:
/// kappa in {1e3, 1e6, 1e9} x epsilon in {1e-3, 1e-6, 1e-9}, five selected
/// epoch counts per block, computed from the unrounded inner-step bound.
std::vector<WorkGridBlock> reference_work_grid();

/// Decimal form used by the grid display: truncated (not rounded) to three
/// significant digits below 1000, to an integer in [1000, 10000), and to
/// scientific form above.
std::string format_work_cell(double work_over_n);

}  // namespace s2gd
