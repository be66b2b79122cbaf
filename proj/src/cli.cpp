#include "s2gd/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "s2gd/dataset.hpp"
#include "s2gd/objective.hpp"
#include "s2gd/planner.hpp"
#include "s2gd/solvers.hpp"
#include "s2gd/trace.hpp"

namespace s2gd {

namespace {

using nlohmann::json;

std::uint64_t to_count(double v, const char* what) {
  if (!(v >= 0.0) || v > 9e18 || v != std::floor(v)) {
    throw std::invalid_argument(std::string(what) +
                                " must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

Loss parse_loss(const std::string& name) {
  if (name == "least_squares" || name == "ls") return Loss::least_squares;
  if (name == "logistic") return Loss::logistic;
  throw std::invalid_argument("unknown loss: " + name);
}

const char* loss_name(Loss loss) {
  return loss == Loss::least_squares ? "least_squares" : "logistic";
}

NuMode parse_nu_mode(const std::string& name) {
  if (name == "mu") return NuMode::mu;
  if (name == "zero" || name == "0") return NuMode::zero;
  throw std::invalid_argument("unknown nu mode: " + name);
}

unsigned max_threads() {
  if (const char* env = std::getenv("S2GD_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

json plan_to_json(const WorkPlan& p, double n) {
  return {{"epochs", p.epochs},
          {"delta", p.delta},
          {"stepsize", p.stepsize},
          {"inner_steps", p.inner_steps},
          {"inner_steps_real", p.inner_steps_real},
          {"factor", p.factor},
          {"work", p.work},
          {"work_per_pass", p.work / n},
          {"expected_work", p.expected_work}};
}

void print_plan(std::ostream& out, const WorkPlan& p, double n, double L) {
  out << "epochs (j):       " << p.epochs << "\n"
      << "delta:            " << format_double(p.delta) << "\n"
      << "stepsize (h):     " << format_double(p.stepsize) << "  (= 1/("
      << format_double(1.0 / (p.stepsize * L)) << " L))\n"
      << "inner steps (m):  " << p.inner_steps << "\n"
      << "factor (c):       " << format_double(p.factor) << "\n"
      << "work:             " << format_double(p.work) << "  ("
      << format_work_cell(p.work / n) << " passes)\n"
      << "expected work:    " << format_double(p.expected_work) << "\n";
}

void print_work_grid(std::ostream& out) {
  out << "Workload per pass over the data, n = 1e9, for nu = mu and nu = 0\n";
  for (const WorkGridBlock& block : reference_work_grid()) {
    out << "\nkappa = " << format_double(block.kappa)
        << ", eps = " << format_double(block.epsilon) << "\n";
    out << "   j      W_mu(j)      W_0(j)\n";
    for (const WorkGridRow& row : block.rows) {
      out << std::setw(4) << row.j << "  " << std::setw(10)
          << format_work_cell(row.work_mu) << "n " << std::setw(10)
          << format_work_cell(row.work_zero) << "n\n";
    }
  }
}

// ---------------------------------------------------------------------------
// plan

int cmd_plan(CLI::App& app, std::ostream& out) {
  auto* sub = app.get_subcommand("plan");
  const bool table3 = sub->get_option("--table3")->as<bool>();
  if (table3) {
    print_work_grid(out);
    return 0;
  }

  const double n_real = sub->get_option("--n")->as<double>();
  const double L = sub->get_option("--L")->as<double>();
  const double eps = sub->get_option("--eps")->as<double>();
  const auto j_max = to_count(sub->get_option("--j-max")->as<double>(),
                              "--j-max");
  const bool convex = sub->get_option("--convex")->as<bool>();
  const bool numeric = sub->get_option("--numeric")->as<bool>();
  const bool mu_free = sub->get_option("--mu-free")->as<bool>();
  const bool as_json = sub->get_option("--json")->as<bool>();
  const std::uint64_t n = to_count(n_real, "--n");

  double rho = sub->get_option("--rho")->as<double>();

  double mu = 0.0;
  if (!convex) {
    const bool have_mu = sub->count("--mu") > 0;
    const bool have_kappa = sub->count("--kappa") > 0;
    if (have_mu == have_kappa) {
      throw std::invalid_argument("plan: give exactly one of --mu / --kappa");
    }
    mu = have_mu ? sub->get_option("--mu")->as<double>()
                 : L / sub->get_option("--kappa")->as<double>();
  }

  const NuMode mode =
      parse_nu_mode(sub->get_option("--nu-mode")->as<std::string>());

  json j;
  if (convex) {
    if (rho <= 0.0) rho = 0.05;
    const ConvexPlanResult cp = convex_plan(n, L, eps, rho, j_max);
    if (as_json) {
      j = plan_to_json(cp.plan, n_real);
      j["mu_pert"] = cp.mu_pert;
      j["rho"] = cp.rho;
      j["kappa"] = (L + eps) / eps;
      out << j.dump(2) << "\n";
    } else {
      out << "perturbation mu:  " << format_double(cp.mu_pert) << "\n"
          << "kappa:            " << format_double((L + eps) / eps) << "\n"
          << "confidence:       " << format_double(1.0 - cp.rho) << "\n";
      print_plan(out, cp.plan, n_real, L + eps);
    }
    return 0;
  }

  WorkPlan plan = numeric ? numeric_plan(n, L, mu, eps, mode, j_max)
                          : optimal_plan(n, L, mu, eps, mode, j_max);
  if (mu_free) {
    const double nu = mode == NuMode::mu ? mu : 0.0;
    plan.stepsize = stepsize_mu_free(L, plan.delta);
    plan.inner_steps =
        inner_steps_for_stepsize(L, mu, nu, plan.stepsize, plan.delta);
    plan.inner_steps_real = static_cast<double>(plan.inner_steps);
    plan.factor = convergence_factor(L, mu, nu, plan.stepsize,
                                     static_cast<double>(plan.inner_steps));
    plan.work =
        static_cast<double>(workload(plan.epochs, n, plan.inner_steps));
  }

  if (as_json) {
    j = plan_to_json(plan, n_real);
    if (rho > 0.0) {
      j["epochs_for_confidence"] = epochs_for_confidence(plan.factor, eps, rho);
      j["rho"] = rho;
    }
    out << j.dump(2) << "\n";
  } else {
    print_plan(out, plan, n_real, L);
    if (rho > 0.0) {
      out << "epochs for confidence " << format_double(1.0 - rho) << ": "
          << epochs_for_confidence(plan.factor, eps, rho) << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// gen

int cmd_gen(CLI::App& app, std::ostream& out) {
  auto* sub = app.get_subcommand("gen");
  const auto n = to_count(sub->get_option("--n")->as<double>(), "--n");
  const auto d = to_count(sub->get_option("--d")->as<double>(), "--d");
  const double kappa = sub->get_option("--kappa")->as<double>();
  const double density = sub->get_option("--density")->as<double>();
  const auto seed = to_count(sub->get_option("--seed")->as<double>(), "--seed");
  const std::string path = sub->get_option("--out")->as<std::string>();

  GeneratedProblem problem = generate_least_squares(n, d, kappa, density, seed);
  save_libsvm(problem.data, path);

  json manifest = {{"n", problem.data.n()},   {"d", problem.data.d()},
                   {"kappa", kappa},          {"density", density},
                   {"seed", seed},            {"lambda", problem.lambda},
                   {"nnz", problem.data.nnz()}, {"path", path}};
  std::ofstream mf(path + ".json");
  mf << manifest.dump(2) << "\n";

  out << "wrote " << path << " (n=" << problem.data.n()
      << ", d=" << problem.data.d() << ", nnz=" << problem.data.nnz()
      << ")\n"
      << "lambda: " << format_double(problem.lambda) << "\n"
      << "hint: run with --loss least_squares --lambda "
      << format_double(problem.lambda) << " --no-add-bias\n";
  return 0;
}

// ---------------------------------------------------------------------------
// run / compare shared machinery

struct RunSettings {
  std::string solver;
  double stepsize = 0.0;
  std::uint64_t m = 0;
  std::optional<double> nu;
  std::uint64_t epochs = 0;
  std::uint64_t seed = 0;
  double alpha = 1.0;
  std::uint64_t passes = 0;  // work budget in effective passes
  std::uint64_t iters = 0;   // explicit iteration count (gd/sgd/sag)
  std::uint64_t trace_every = 0;
};

bool is_s2gd_family(const std::string& s) {
  return s == "s2gd" || s == "svrg" || s == "s2gd_sparse" || s == "s2gdcon" ||
         s == "s2gd_plus";
}

RunResult dispatch_run(const ObjectiveSpec& spec, const SmoothnessInfo& info,
                       const RunSettings& rs) {
  const std::uint64_t n = spec.n();
  const std::vector<double> x0(spec.dim(), 0.0);
  const std::uint64_t budget = rs.passes * n;

  if (is_s2gd_family(rs.solver)) {
    SolverConfig cfg;
    cfg.stepsize = rs.stepsize;
    cfg.max_inner = rs.m > 0 ? rs.m : n;
    cfg.nu = rs.nu.value_or(info.mu);
    cfg.seed = rs.seed;
    cfg.alpha = rs.alpha;
    cfg.trace_every = rs.trace_every;
    cfg.work_budget = budget;
    cfg.epochs = rs.epochs > 0 ? rs.epochs
                               : (budget > 0 ? budget : 1);  // budget-capped
    if (rs.solver == "svrg") cfg.nu = 0.0;
    if (rs.solver == "s2gdcon") {
      cfg.max_inner = static_cast<std::uint64_t>(std::ceil(info.L / info.mu));
      cfg.stepsize = 1.0 / (10.0 * info.L);
      cfg.nu = info.mu;
    }
    if (rs.solver == "s2gd_sparse") return s2gd_sparse(spec, x0, cfg);
    if (rs.solver == "s2gd_plus") return s2gd_plus(spec, x0, cfg);
    return s2gd(spec, x0, cfg);
  }
  if (rs.solver == "gd") {
    const std::uint64_t iters = rs.iters > 0 ? rs.iters : rs.passes;
    return gd(spec, x0, rs.stepsize, iters, rs.trace_every);
  }
  if (rs.solver == "sgd") {
    const std::uint64_t iters = rs.iters > 0 ? rs.iters : budget;
    return sgd(spec, x0, rs.stepsize, iters, rs.seed, rs.trace_every);
  }
  if (rs.solver == "sag" || rs.solver == "sag_plus") {
    const std::uint64_t iters = rs.iters > 0 ? rs.iters : budget;
    return sag(spec, x0, rs.stepsize, iters, rs.seed,
               rs.solver == "sag_plus", rs.trace_every);
  }
  throw std::invalid_argument("unknown solver: " + rs.solver);
}

// Hindsight stepsize: h in {2^k / L : k = -7..3}, lowest final objective.
double pick_stepsize(const ObjectiveSpec& spec, const SmoothnessInfo& info,
                     RunSettings rs, std::uint64_t search_seed) {
  rs.seed = search_seed;
  double best_h = 0.0;
  double best_f = std::numeric_limits<double>::infinity();
  for (int k = -7; k <= 3; ++k) {
    rs.stepsize = std::ldexp(1.0, k) / info.L;
    try {
      const RunResult r = dispatch_run(spec, info, rs);
      if (r.trace.back().objective < best_f) {
        best_f = r.trace.back().objective;
        best_h = rs.stepsize;
      }
    } catch (const DivergenceError&) {
      // rejected by the grid search
    }
  }
  if (best_h == 0.0) {
    throw std::runtime_error("stepsize grid search failed for " + rs.solver);
  }
  return best_h;
}

struct LoadedData {
  SparseDataset data;
  Loss loss;
  double lambda;
  bool add_bias;
};

json spec_summary(const ObjectiveSpec& spec, const SmoothnessInfo& info,
                  const LoadedData& ld) {
  return {{"loss", loss_name(ld.loss)}, {"lambda", ld.lambda},
          {"n", spec.n()},              {"d", spec.dim()},
          {"L", info.L},                {"mu", info.mu},
          {"add_bias", ld.add_bias}};
}

std::vector<double> read_reference_point(const std::string& path,
                                         std::size_t d) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference " + path);
  std::vector<double> x;
  double v;
  while (in >> v) x.push_back(v);
  if (x.size() != d) {
    throw std::runtime_error("reference dimension mismatch: expected " +
                             std::to_string(d) + ", got " +
                             std::to_string(x.size()));
  }
  return x;
}

// ---------------------------------------------------------------------------
// run

int cmd_run(CLI::App& app, const std::vector<std::string>& args,
            std::ostream& out) {
  auto* sub = app.get_subcommand("run");
  LoadedData ld;
  ld.loss = parse_loss(sub->get_option("--loss")->as<std::string>());
  ld.lambda = sub->get_option("--lambda")->as<double>();
  ld.add_bias = sub->get_option("--add-bias")->as<bool>();
  const std::string data_path = sub->get_option("--data")->as<std::string>();
  ld.data = load_libsvm(data_path, ld.add_bias);

  ObjectiveSpec spec(ld.data, ld.loss, ld.lambda);
  const SmoothnessInfo info = smoothness_constants(spec);

  RunSettings rs;
  rs.solver = sub->get_option("--solver")->as<std::string>();
  rs.seed = to_count(sub->get_option("--seed")->as<double>(), "--seed");
  rs.alpha = sub->get_option("--alpha")->as<double>();
  rs.trace_every =
      to_count(sub->get_option("--trace-every")->as<double>(), "--trace-every");
  rs.passes = to_count(sub->get_option("--passes")->as<double>(), "--passes");
  rs.iters = to_count(sub->get_option("--iters")->as<double>(), "--iters");
  if (sub->count("--h")) rs.stepsize = sub->get_option("--h")->as<double>();
  if (sub->count("--m")) {
    rs.m = to_count(sub->get_option("--m")->as<double>(), "--m");
  }
  if (sub->count("--nu")) rs.nu = sub->get_option("--nu")->as<double>();
  if (sub->count("--epochs")) {
    rs.epochs = to_count(sub->get_option("--epochs")->as<double>(), "--epochs");
  }

  const bool auto_plan = sub->get_option("--auto")->as<bool>();
  WorkPlan plan;
  if (auto_plan) {
    if (!sub->count("--eps")) {
      throw std::invalid_argument("run: --auto requires --eps");
    }
    const double eps = sub->get_option("--eps")->as<double>();
    const NuMode mode =
        parse_nu_mode(sub->get_option("--nu-mode")->as<std::string>());
    plan = optimal_plan(spec.n(), info.L, info.mu, eps, mode, 200);
    rs.stepsize = plan.stepsize;
    rs.m = plan.inner_steps;
    if (rs.epochs == 0) rs.epochs = plan.epochs;
    if (!rs.nu) rs.nu = mode == NuMode::mu ? info.mu : 0.0;
  }
  if (rs.stepsize <= 0.0 && rs.solver != "s2gdcon") {
    throw std::invalid_argument("run: --h is required (or use --auto)");
  }
  if (is_s2gd_family(rs.solver) && rs.epochs == 0 && rs.passes == 0) {
    throw std::invalid_argument("run: give --epochs or --passes (or --auto)");
  }
  if (!is_s2gd_family(rs.solver) && rs.iters == 0 && rs.passes == 0) {
    throw std::invalid_argument("run: give --iters or --passes");
  }

  const auto t0 = std::chrono::steady_clock::now();
  RunResult result = dispatch_run(spec, info, rs);
  const auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();

  if (sub->count("--ref")) {
    const std::vector<double> xref =
        read_reference_point(sub->get_option("--ref")->as<std::string>(),
                             spec.dim());
    result.trace.attach_reference(objective_value(spec, xref));
  }

  const std::string out_path = sub->get_option("--out")->as<std::string>();
  save_trace_csv(result.trace, out_path);

  json manifest = {
      {"command", args},
      {"solver", rs.solver},
      {"objective", spec_summary(spec, info, ld)},
      {"data", data_path},
      {"config",
       {{"h", rs.stepsize},
        {"m", rs.m},
        {"nu", rs.nu ? json(*rs.nu) : json()},
        {"epochs", rs.epochs},
        {"seed", rs.seed},
        {"alpha", rs.alpha},
        {"trace_every", rs.trace_every},
        {"passes", rs.passes},
        {"iters", rs.iters},
        {"auto", auto_plan}}},
      {"outputs", {{"trace", out_path}}},
      {"total_work", result.total_work},
      {"epochs_run", result.epochs_run},
      {"final_objective", result.trace.back().objective},
      {"wall_ms", wall_ms}};
  if (auto_plan) manifest["plan"] = plan_to_json(plan, spec.n());
  std::ofstream mf(out_path + ".manifest.json");
  mf << manifest.dump(2) << "\n";

  out << "solver: " << rs.solver << "  work: " << result.total_work
      << "  epochs: " << result.epochs_run
      << "  final objective: " << format_double(result.trace.back().objective)
      << "\n"
      << "trace: " << out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// compare

int cmd_compare(CLI::App& app, const std::vector<std::string>& args,
                std::ostream& out) {
  auto* sub = app.get_subcommand("compare");
  LoadedData ld;
  ld.loss = parse_loss(sub->get_option("--loss")->as<std::string>());
  ld.lambda = sub->get_option("--lambda")->as<double>();
  ld.add_bias = sub->get_option("--add-bias")->as<bool>();
  const std::string data_path = sub->get_option("--data")->as<std::string>();
  ld.data = load_libsvm(data_path, ld.add_bias);

  ObjectiveSpec spec(ld.data, ld.loss, ld.lambda);
  const SmoothnessInfo info = smoothness_constants(spec);

  const auto solvers =
      sub->get_option("--solvers")->as<std::vector<std::string>>();
  if (solvers.empty()) {
    throw std::invalid_argument("compare: empty solver list");
  }
  const auto passes =
      to_count(sub->get_option("--passes")->as<double>(), "--passes");
  const auto seeds =
      to_count(sub->get_option("--seeds")->as<double>(), "--seeds");
  const auto seed_base =
      to_count(sub->get_option("--seed-base")->as<double>(), "--seed-base");
  const std::string out_path = sub->get_option("--out")->as<std::string>();
  const double fixed_h =
      sub->count("--h") ? sub->get_option("--h")->as<double>() : 0.0;

  std::optional<double> reference;
  if (sub->count("--ref")) {
    reference = objective_value(
        spec, read_reference_point(sub->get_option("--ref")->as<std::string>(),
                                   spec.dim()));
  }

  // Hindsight stepsize per solver (s2gdcon's is pinned by definition).
  std::vector<RunSettings> base(solvers.size());
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    RunSettings& rs = base[s];
    rs.solver = solvers[s];
    rs.passes = passes;
    if (rs.solver == "s2gdcon") {
      rs.stepsize = 1.0 / (10.0 * info.L);
    } else if (fixed_h > 0.0) {
      rs.stepsize = fixed_h;
    } else {
      rs.stepsize = pick_stepsize(spec, info, rs, seed_base + 10'000);
    }
  }

  struct Cell {
    RunSettings rs;
    RunResult result;
    std::string error;
  };
  std::vector<Cell> cells;
  cells.reserve(solvers.size() * seeds);
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    for (std::uint64_t k = 0; k < seeds; ++k) {
      Cell c;
      c.rs = base[s];
      c.rs.seed = seed_base + k;
      cells.push_back(std::move(c));
    }
  }

  // (solver, seed) cells are independent; results land in their slot, so
  // the merged output is deterministic for any thread count.
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells.size()) break;
      try {
        cells[c].result = dispatch_run(spec, info, cells[c].rs);
      } catch (const std::exception& e) {
        cells[c].error = e.what();
      }
    }
  };
  const unsigned threads = std::min<unsigned>(
      max_threads(), static_cast<unsigned>(cells.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::ofstream csv(out_path);
  if (!csv) throw std::runtime_error("cannot open " + out_path);
  csv << "solver,seed,work_units,epoch,objective,residual\n";
  json cell_log = json::array();
  for (const Cell& c : cells) {
    json entry = {{"solver", c.rs.solver},
                  {"seed", c.rs.seed},
                  {"h", c.rs.stepsize}};
    if (!c.error.empty()) {
      entry["error"] = c.error;
    } else {
      entry["final_objective"] = c.result.trace.back().objective;
      entry["total_work"] = c.result.total_work;
      for (const TracePoint& p : c.result.trace.points()) {
        csv << c.rs.solver << ',' << c.rs.seed << ',' << p.work << ','
            << p.epoch << ',' << format_double(p.objective) << ',';
        if (reference) csv << format_double(p.objective - *reference);
        csv << '\n';
      }
    }
    cell_log.push_back(std::move(entry));
  }

  json manifest = {{"command", args},
                   {"objective", spec_summary(spec, info, ld)},
                   {"data", data_path},
                   {"passes", passes},
                   {"seeds", seeds},
                   {"seed_base", seed_base},
                   {"cells", cell_log},
                   {"outputs", {{"traces", out_path}}}};
  std::ofstream mf(out_path + ".manifest.json");
  mf << manifest.dump(2) << "\n";

  for (std::size_t s = 0; s < solvers.size(); ++s) {
    out << solvers[s] << ": h = " << format_double(base[s].stepsize) << "\n";
  }
  out << "traces: " << out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// solve-ref

int cmd_solve_ref(CLI::App& app, std::ostream& out) {
  auto* sub = app.get_subcommand("solve-ref");
  LoadedData ld;
  ld.loss = parse_loss(sub->get_option("--loss")->as<std::string>());
  ld.lambda = sub->get_option("--lambda")->as<double>();
  ld.add_bias = sub->get_option("--add-bias")->as<bool>();
  ld.data = load_libsvm(sub->get_option("--data")->as<std::string>(),
                        ld.add_bias);

  ObjectiveSpec spec(ld.data, ld.loss, ld.lambda);
  const SmoothnessInfo info = smoothness_constants(spec);
  if (!(info.mu > 0.0)) {
    throw std::invalid_argument(
        "solve-ref: objective is not strongly convex (lambda = 0)");
  }
  const double eps = sub->get_option("--eps")->as<double>();
  const WorkPlan plan =
      optimal_plan(spec.n(), info.L, info.mu, eps, NuMode::mu, 200);

  SolverConfig cfg;
  cfg.stepsize = plan.stepsize;
  cfg.max_inner = plan.inner_steps;
  cfg.nu = info.mu;
  cfg.epochs = plan.epochs;
  cfg.seed = to_count(sub->get_option("--seed")->as<double>(), "--seed");
  const RunResult result =
      s2gd_sparse(spec, std::vector<double>(spec.dim(), 0.0), cfg);

  const std::string out_path = sub->get_option("--out")->as<std::string>();
  std::ofstream ref(out_path);
  if (!ref) throw std::runtime_error("cannot open " + out_path);
  for (double v : result.x_final) ref << format_double(v) << "\n";

  out << "reference objective: "
      << format_double(result.trace.back().objective) << "\n"
      << "work: " << result.total_work << " (" << plan.epochs << " epochs)\n"
      << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"semi-stochastic gradient descent toolkit"};
  app.require_subcommand(1);
  // --h is a solver flag; keep -h free of the help shortcut everywhere.
  app.set_help_flag("--help", "print help");

  auto* plan = app.add_subcommand(
      "plan", "evaluate the convergence-rate parameter planner");
  plan->set_help_flag("--help", "print help");
  plan->add_option("--n", "problem size")->default_val("1e9");
  plan->add_option("--L", "smoothness constant")->default_val("1.0");
  plan->add_option("--mu", "strong convexity constant");
  plan->add_option("--kappa", "condition number L/mu");
  plan->add_option("--eps", "target relative accuracy")->default_val("1e-6");
  plan->add_option("--nu-mode", "nu setting: mu | zero")->default_val("mu");
  plan->add_option("--rho", "failure probability for the epoch count")
      ->default_val("0.0");
  plan->add_option("--j-max", "largest epoch count scanned")
      ->default_val("100");
  plan->add_flag("--convex", "plan the perturbed merely-convex problem");
  plan->add_flag("--numeric", "numerical work minimization (exact factor)");
  plan->add_flag("--mu-free", "use the mu-free stepsize delta/(6L)");
  plan->add_flag("--table3", "print the standard workload grid (n = 1e9)");
  plan->add_flag("--json", "JSON output");

  auto* gen = app.add_subcommand(
      "gen", "generate a synthetic least-squares dataset");
  gen->set_help_flag("--help", "print help");
  gen->add_option("--n", "examples")->required();
  gen->add_option("--d", "features")->required();
  gen->add_option("--kappa", "target condition number")->required();
  gen->add_option("--density", "nonzero fraction per row")->default_val("1.0");
  gen->add_option("--seed", "generator seed")->default_val("0");
  gen->add_option("--out", "output path (LIBSVM format)")->required();

  auto* run = app.add_subcommand("run", "run one solver, write a trace");
  run->set_help_flag("--help", "print help");
  run->add_option("--solver",
                  "s2gd | svrg | s2gd_sparse | s2gd_plus | s2gdcon | gd | "
                  "sgd | sag | sag_plus")
      ->required();
  run->add_option("--data", "LIBSVM dataset path")->required();
  run->add_option("--loss", "least_squares | logistic")
      ->default_val("least_squares");
  run->add_option("--lambda", "L2 regularization")->default_val("0.0");
  run->add_flag("--add-bias,!--no-add-bias", "append a bias feature")
      ->default_val(true);
  run->add_option("--h", "stepsize");
  run->add_option("--m", "max inner steps per epoch");
  run->add_option("--nu", "epoch-law lower bound on mu");
  run->add_option("--epochs", "epoch count");
  run->add_option("--passes", "work budget in effective passes")
      ->default_val("0");
  run->add_option("--iters", "iteration count (gd/sgd/sag)")->default_val("0");
  run->add_option("--alpha", "stage-2 inner multiple (s2gd_plus)")
      ->default_val("1.0");
  run->add_option("--seed", "run seed")->default_val("0");
  run->add_flag("--auto", "fill h, m, epochs from the planner");
  run->add_option("--eps", "target accuracy for --auto");
  run->add_option("--nu-mode", "planner nu mode for --auto: mu | zero")
      ->default_val("mu");
  run->add_option("--trace-every", "record period in work units")
      ->default_val("0");
  run->add_option("--ref", "reference optimum file for residuals");
  run->add_option("--out", "trace CSV path")->required();

  auto* compare = app.add_subcommand(
      "compare", "run several solvers over seeds, common work axis");
  compare->set_help_flag("--help", "print help");
  compare->add_option("--data", "LIBSVM dataset path")->required();
  compare->add_option("--loss", "least_squares | logistic")
      ->default_val("least_squares");
  compare->add_option("--lambda", "L2 regularization")->default_val("0.0");
  compare->add_flag("--add-bias,!--no-add-bias", "append a bias feature")
      ->default_val(true);
  compare->add_option("--solvers", "comma-separated solver list")
      ->required()
      ->delimiter(',');
  compare->add_option("--passes", "work budget in effective passes")
      ->default_val("30");
  compare->add_option("--seeds", "number of seeds per solver")
      ->default_val("10");
  compare->add_option("--seed-base", "first seed")->default_val("0");
  compare->add_option("--h", "fixed stepsize (skips the hindsight grid)");
  compare->add_option("--ref", "reference optimum file for residuals");
  compare->add_option("--out", "multi-trace CSV path")->required();

  auto* solve_ref = app.add_subcommand(
      "solve-ref", "compute a high-accuracy reference optimum");
  solve_ref->set_help_flag("--help", "print help");
  solve_ref->add_option("--data", "LIBSVM dataset path")->required();
  solve_ref->add_option("--loss", "least_squares | logistic")
      ->default_val("least_squares");
  solve_ref->add_option("--lambda", "L2 regularization")->default_val("0.0");
  solve_ref->add_flag("--add-bias,!--no-add-bias", "append a bias feature")
      ->default_val(true);
  solve_ref->add_option("--eps", "accuracy budget")->default_val("1e-14");
  solve_ref->add_option("--seed", "run seed")->default_val("0");
  solve_ref->add_option("--out", "output path for the optimum")->required();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (plan->parsed()) return cmd_plan(app, out);
    if (gen->parsed()) return cmd_gen(app, out);
    if (run->parsed()) return cmd_run(app, args, out);
    if (compare->parsed()) return cmd_compare(app, args, out);
    if (solve_ref->parsed()) return cmd_solve_ref(app, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace s2gd
