#include "s2gd/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "s2gd/epoch_law.hpp"

namespace s2gd {

namespace {

constexpr double kInfeasible = 0.0;
constexpr double kMaxInnerSteps = 1e18;

void check_rate_params(double L, double mu) {
  if (!(mu > 0.0) || !(mu <= L)) {
    throw std::invalid_argument("need 0 < mu <= L");
  }
}

double delta_for(std::uint64_t j, double epsilon) {
  if (j < 1) throw std::invalid_argument("need j >= 1");
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("need epsilon in (0, 1)");
  }
  return std::pow(epsilon, 1.0 / static_cast<double>(j));
}

// Smallest integer m (as a double) with convergence factor <= delta at the
// given stepsize, or kInfeasible when even m -> infinity cannot reach it.
double smallest_feasible_inner_steps(double L, double mu, double nu, double h,
                                     double delta) {
  const double denom = 1.0 - 2.0 * L * h;
  const double tail = 2.0 * (L - mu) * h / denom;
  const double target = delta - tail;
  if (!(target > 0.0)) return kInfeasible;
  double m;
  if (nu == 0.0) {
    m = 1.0 / (target * mu * h * denom);
  } else {
    // (1-q)^m q / ((1-(1-q)^m) mu h denom) <= target, q = nu h
    const double q = nu * h;
    const double reach = target * mu * h * denom;
    m = std::log(reach / (q + reach)) / std::log1p(-q);
  }
  if (!(m < kMaxInnerSteps)) return kInfeasible;
  return std::max(1.0, std::ceil(m));
}

}  // namespace

double convergence_factor(double L, double mu, double nu, double h, double m) {
  check_rate_params(L, mu);
  if (!(nu >= 0.0) || nu > mu) {
    throw std::invalid_argument("need 0 <= nu <= mu");
  }
  if (!(m >= 1.0)) throw std::invalid_argument("need m >= 1");
  if (!(h > 0.0) || !(h < 0.5 / L)) {
    throw std::invalid_argument("need h in (0, 1/(2L))");
  }
  const double q = nu * h;
  const double beta = epoch_law_normalizer(m, q);
  const double decay = std::exp(m * std::log1p(-q));  // (1 - nu h)^m
  const double denom = 1.0 - 2.0 * L * h;
  return decay / (beta * mu * h * denom) + 2.0 * (L - mu) * h / denom;
}

double stepsize_for_epochs(double L, double mu, std::uint64_t j,
                           double epsilon) {
  check_rate_params(L, mu);
  const double delta = delta_for(j, epsilon);
  if (L == mu) return (1.0 - 1e-6) / (2.0 * L);
  return 1.0 / ((4.0 / delta) * (L - mu) + 2.0 * L);
}

double stepsize_mu_free(double L, double delta) {
  return delta / (6.0 * L);
}

double inner_steps_bound(double kappa, std::uint64_t j, double epsilon,
                         NuMode mode) {
  if (!(kappa > 1.0)) throw std::invalid_argument("need kappa > 1");
  const double delta = delta_for(j, epsilon);
  if (mode == NuMode::mu) {
    return (4.0 * (kappa - 1.0) / delta + 2.0 * kappa) *
           std::log(2.0 / delta + (2.0 * kappa - 1.0) / (kappa - 1.0));
  }
  return 8.0 * (kappa - 1.0) / (delta * delta) + 8.0 * kappa / delta +
         2.0 * kappa * kappa / (kappa - 1.0);
}

std::uint64_t inner_steps_for_epochs(double kappa, std::uint64_t j,
                                     double epsilon, NuMode mode) {
  return static_cast<std::uint64_t>(
      std::ceil(inner_steps_bound(kappa, j, epsilon, mode)));
}

double simplified_inner_steps(double kappa, std::uint64_t j, double epsilon,
                              NuMode mode) {
  if (!(kappa >= 2.0)) throw std::invalid_argument("need kappa >= 2");
  const double delta = delta_for(j, epsilon);
  if (mode == NuMode::mu) {
    return 6.0 * kappa / delta * std::log(5.0 / delta);
  }
  return 20.0 * kappa / (delta * delta);
}

ClosedFormPlan closed_form_nu0(double L, double mu, std::uint64_t j,
                               double epsilon) {
  check_rate_params(L, mu);
  const double delta = delta_for(j, epsilon);
  const double kappa = L / mu;
  if (!(kappa > 1.0)) throw std::invalid_argument("need kappa > 1");
  return {1.0 / ((4.0 / delta) * (L - mu) + 4.0 * L),
          8.0 * (kappa - 1.0) / (delta * delta) + 8.0 * kappa / delta};
}

std::uint64_t workload(std::uint64_t j, std::uint64_t n, std::uint64_t m) {
  return j * (n + 2 * m);
}

double workload_real(std::uint64_t j, double n, double m) {
  return static_cast<double>(j) * (n + 2.0 * m);
}

double expected_workload(std::uint64_t j, double n, double xi) {
  return static_cast<double>(j) * (n + 2.0 * xi);
}

std::uint64_t epochs_for_confidence(double c, double epsilon, double rho) {
  if (!(c > 0.0) || !(c < 1.0)) throw std::invalid_argument("need c in (0,1)");
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("need epsilon in (0,1)");
  }
  if (!(rho > 0.0) || rho > 1.0) {
    throw std::invalid_argument("need rho in (0,1]");
  }
  const double ratio =
      std::log(1.0 / (epsilon * rho)) / std::log(1.0 / c);
  const double j = std::ceil(ratio - 1e-12);
  return j < 1.0 ? 1 : static_cast<std::uint64_t>(j);
}

std::uint64_t inner_steps_for_stepsize(double L, double mu, double nu,
                                       double h, double delta) {
  check_rate_params(L, mu);
  if (!(h > 0.0) || !(h < 0.5 / L)) {
    throw std::invalid_argument("need h in (0, 1/(2L))");
  }
  const double m = smallest_feasible_inner_steps(L, mu, nu, h, delta);
  if (m == kInfeasible) {
    throw std::runtime_error(
        "inner_steps_for_stepsize: stepsize infeasible for this delta");
  }
  return static_cast<std::uint64_t>(m);
}

WorkPlan optimal_plan(std::uint64_t n, double L, double mu, double epsilon,
                      NuMode mode, std::uint64_t j_max) {
  if (j_max < 1) throw std::invalid_argument("need j_max >= 1");
  const double nu = mode == NuMode::mu ? mu : 0.0;
  WorkPlan best;
  bool found = false;
  for (std::uint64_t j = 1; j <= j_max; ++j) {
    // The bound blows up at small j; such epoch counts cannot minimize the
    // workload, so skip them before the integer cast can overflow.
    const double m_real = inner_steps_bound(L / mu, j, epsilon, mode);
    if (!(m_real < kMaxPlannedInner)) continue;
    WorkPlan p;
    p.epochs = j;
    p.delta = delta_for(j, epsilon);
    p.stepsize = stepsize_for_epochs(L, mu, j, epsilon);
    p.inner_steps_real = m_real;
    p.inner_steps = static_cast<std::uint64_t>(std::ceil(m_real));
    p.factor = convergence_factor(L, mu, nu, p.stepsize,
                                  static_cast<double>(p.inner_steps));
    if (!(p.factor < 1.0)) continue;
    p.work = static_cast<double>(workload(j, n, p.inner_steps));
    p.expected_work = expected_workload(
        j, static_cast<double>(n),
        epoch_law_mean(static_cast<double>(p.inner_steps), nu * p.stepsize));
    if (!found || p.work < best.work) {
      best = p;
      found = true;
    }
  }
  if (!found) {
    throw std::runtime_error(
        "optimal_plan: no feasible epoch count up to j_max");
  }
  return best;
}

WorkPlan numeric_plan_for_epochs(std::uint64_t n, double L, double mu,
                                 double epsilon, NuMode mode,
                                 std::uint64_t j) {
  check_rate_params(L, mu);
  const double nu = mode == NuMode::mu ? mu : 0.0;
  const double delta = delta_for(j, epsilon);

  // Admissible stepsizes: h < 1/(2L) and small enough that the h-dependent
  // tail of the factor stays below delta.
  double h_hi = (1.0 - 1e-9) * 0.5 / L;
  if (L > mu) {
    h_hi = std::min(h_hi,
                    (1.0 - 1e-9) * delta / (2.0 * (L - mu) + 2.0 * L * delta));
  }

  const auto work_at = [&](double h) -> std::pair<double, double> {
    const double m = smallest_feasible_inner_steps(L, mu, nu, h, delta);
    if (m == kInfeasible) {
      return {std::numeric_limits<double>::infinity(), kInfeasible};
    }
    const double xi = epoch_law_mean(m, nu * h);
    return {expected_workload(j, static_cast<double>(n), xi), m};
  };

  // Coarse log-spaced scan, then golden-section refinement around the best
  // bracket.
  constexpr int kGrid = 200;
  double best_h = h_hi;
  double best_w = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kGrid; ++k) {
    const double h = h_hi * std::pow(10.0, -3.0 * k / (kGrid - 1));
    const double w = work_at(h).first;
    if (w < best_w) {
      best_w = w;
      best_h = h;
    }
  }
  const double ratio = std::pow(10.0, 3.0 / (kGrid - 1));
  double lo = best_h / ratio;
  double hi = std::min(h_hi, best_h * ratio);
  constexpr double kGolden = 0.6180339887498949;
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = work_at(x1).first;
  double f2 = work_at(x2).first;
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = work_at(x1).first;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = work_at(x2).first;
    }
  }
  const double h = f1 < f2 ? x1 : x2;
  const auto [w, m] = work_at(h);
  if (m == kInfeasible) {
    throw std::runtime_error("numeric_plan: no feasible stepsize");
  }

  WorkPlan p;
  p.epochs = j;
  p.delta = delta;
  p.stepsize = h;
  p.inner_steps_real = m;
  p.inner_steps = static_cast<std::uint64_t>(m);
  p.factor = convergence_factor(L, mu, nu, h, m);
  p.work = static_cast<double>(workload(j, n, p.inner_steps));
  p.expected_work = w;
  return p;
}

WorkPlan numeric_plan(std::uint64_t n, double L, double mu, double epsilon,
                      NuMode mode, std::uint64_t j_max) {
  if (j_max < 1) throw std::invalid_argument("need j_max >= 1");
  WorkPlan best;
  bool found = false;
  for (std::uint64_t j = 1; j <= j_max; ++j) {
    WorkPlan p;
    try {
      p = numeric_plan_for_epochs(n, L, mu, epsilon, mode, j);
    } catch (const std::runtime_error&) {
      continue;
    }
    if (!(p.factor < 1.0)) continue;
    if (!found || p.expected_work < best.expected_work) {
      best = p;
      found = true;
    }
  }
  if (!found) {
    throw std::runtime_error(
        "numeric_plan: no feasible epoch count up to j_max");
  }
  return best;
}

ConvexPlanResult convex_plan(std::uint64_t n, double L, double epsilon,
                             double rho, std::uint64_t j_max) {
  if (!(epsilon > 0.0) || !(epsilon < L)) {
    throw std::invalid_argument("convex_plan: need 0 < epsilon < L");
  }
  // Perturbed problem: mu = eps, smoothness L + eps, kappa = (L+eps)/eps.
  const WorkPlan base =
      optimal_plan(n, L + epsilon, epsilon, epsilon, NuMode::mu, j_max);
  const std::uint64_t j = epochs_for_confidence(base.factor, epsilon, rho);
  WorkPlan plan = base;
  plan.epochs = j;
  plan.work = static_cast<double>(workload(j, n, plan.inner_steps));
  plan.expected_work =
      expected_workload(j, static_cast<double>(n),
                        epoch_law_mean(static_cast<double>(plan.inner_steps),
                                       epsilon * plan.stepsize));
  return {epsilon, rho, plan};
}

std::vector<WorkGridBlock> reference_work_grid() {
  struct BlockDef {
    double kappa;
    double epsilon;
    std::uint64_t js[5];
  };
  static constexpr BlockDef kBlocks[] = {
      {1e3, 1e-3, {1, 2, 3, 4, 5}},     {1e3, 1e-6, {1, 2, 3, 4, 5}},
      {1e3, 1e-9, {2, 3, 4, 5, 6}},     {1e6, 1e-3, {2, 3, 4, 5, 6}},
      {1e6, 1e-6, {4, 5, 6, 8, 10}},    {1e6, 1e-9, {5, 8, 10, 13, 20}},
      {1e9, 1e-3, {6, 8, 11, 15, 20}},  {1e9, 1e-6, {13, 16, 19, 22, 30}},
      {1e9, 1e-9, {15, 24, 30, 32, 40}},
  };
  const double n = 1e9;
  std::vector<WorkGridBlock> grid;
  grid.reserve(std::size(kBlocks));
  for (const BlockDef& b : kBlocks) {
    WorkGridBlock block;
    block.epsilon = b.epsilon;
    block.kappa = b.kappa;
    for (std::uint64_t j : b.js) {
      const double m_mu = inner_steps_bound(b.kappa, j, b.epsilon, NuMode::mu);
      const double m_0 = inner_steps_bound(b.kappa, j, b.epsilon, NuMode::zero);
      block.rows.push_back({j, workload_real(j, n, m_mu) / n,
                            workload_real(j, n, m_0) / n});
    }
    grid.push_back(std::move(block));
  }
  return grid;
}

std::string format_work_cell(double w) {
  char buf[32];
  if (w < 1.0) {
    std::snprintf(buf, sizeof(buf), "%.3g", w);
  } else if (w < 10.0) {
    std::snprintf(buf, sizeof(buf), "%.2f", std::floor(w * 100 + 1e-9) / 100);
  } else if (w < 100.0) {
    std::snprintf(buf, sizeof(buf), "%.1f", std::floor(w * 10 + 1e-9) / 10);
  } else if (w < 1e4) {
    std::snprintf(buf, sizeof(buf), "%.0f", std::floor(w + 1e-9));
  } else {
    const double exp10 = std::floor(std::log10(w));
    const double mant =
        std::floor(w / std::pow(10.0, exp10) * 100 + 1e-9) / 100;
    std::snprintf(buf, sizeof(buf), "%.2fe%d", mant,
                  static_cast<int>(exp10));
  }
  return buf;
}

}  // namespace s2gd
