// Acceptance suite. Prints one PASS/FAIL line per selected criterion and
// exits non-zero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "memsat/cnf.hpp"
#include "memsat/gen.hpp"
#include "memsat/integrator.hpp"
#include "memsat/sweep.hpp"
#include "memsat/walksat.hpp"
#include "oracles.hpp"
#include "properties.hpp"

namespace fs = std::filesystem;
using namespace memsat;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated] ";
    }
    detail << what << "; ";
  }
};

struct Options {
  std::string out_dir = "acceptance_out";
  unsigned workers = 1;
  bool fresh = false;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

// 1. Correctness against brute force on small formulas.
void correctness_oracle(Outcome& o, const Options&) {
  constexpr int kFormulas = 500;
  constexpr std::uint64_t kSteps = 100'000;
  Rng rng(derive_seed(2024, 1));
  int sat = 0, dmm_solved = 0, bad_models = 0, unsat_claims = 0;
  for (int k = 0; k < kFormulas; ++k) {
    const std::size_t n = 3 + rng.below(10);
    const double ratio = rng.uniform(3.0, 5.0);
    const auto f = generate_uniform(n, ratio, rng());
    const bool satisfiable = testing::brute_force_model(f).has_value();
    sat += satisfiable;

    RunConfig cfg;
    cfg.seed = rng();
    cfg.max_steps = kSteps;
    const auto dmm = solve(f, SolverParams::for_formula(f), cfg);
    const auto ws = walksat_solve(f, {.noise = 0.5, .max_flips = kSteps, .seed = rng()});
    for (const auto* rec : {&dmm, &ws}) {
      if (!rec->solved) continue;
      if (!verify(f, *rec->assignment)) ++bad_models;
      if (!satisfiable) ++unsat_claims;
    }
    if (satisfiable && dmm.solved) ++dmm_solved;
  }
  const double rate = sat ? static_cast<double>(dmm_solved) / sat : 0.0;
  o.detail << kFormulas << " formulas, " << sat << " satisfiable; ";
  o.require(bad_models == 0, "models failing verification = " + std::to_string(bad_models));
  o.require(unsat_claims == 0, "models claimed on unsatisfiable formulas = " + std::to_string(unsat_claims));
  o.require(sat > 0 && rate >= 0.99, "DMM solved " + std::to_string(dmm_solved) + "/" + std::to_string(sat) +
                                         " satisfiable within 1e5 steps (need >= 99%)");
}

// 2. Planted CDC instances at n = 50.
void planted_success(Outcome& o, const Options&) {
  int solved = 0;
  std::uint64_t worst = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto inst = generate_cdc({.n = 50, .ratio = 4.3, .p0 = 0.08, .seed = derive_seed(2, k)});
    RunConfig cfg;
    cfg.seed = derive_seed(3, k);
    cfg.max_steps = 1'000'000;
    const auto rec = solve(inst.formula, SolverParams::for_formula(inst.formula), cfg);
    if (rec.solved && verify(inst.formula, *rec.assignment)) {
      ++solved;
      worst = std::max(worst, rec.steps);
    }
  }
  o.require(solved == 100, "solved " + std::to_string(solved) + "/100 within 1e6 steps (max steps " +
                               std::to_string(worst) + ")");
}

// Sweep shared by criteria 3, 4 and 7. Runs are logged as JSONL under the
// output directory, so later criteria reuse what earlier ones computed.
SweepConfig scaling_config(SolverKind kind, const Options& opt) {
  SweepConfig cfg;
  cfg.solver = kind;
  cfg.n_values = {100, 150, 200, 250, 300, 350, 400};
  cfg.ratio = 4.3;
  cfg.p0 = 0.08;
  cfg.instances_per_n = 50;
  cfg.seed = 2024;
  cfg.budget = 10'000'000;
  cfg.workers = opt.workers;
  cfg.jsonl_path = (fs::path(opt.out_dir) / (std::string(to_string(kind)) + "_runs.jsonl")).string();
  return cfg;
}

SweepResult scaling_sweep(SolverKind kind, const Options& opt) {
  const auto cfg = scaling_config(kind, opt);
  auto result = run_sweep(cfg);
  std::ofstream(fs::path(opt.out_dir) / (std::string(to_string(kind)) + "_summary.csv")) << sweep_csv(result);
  return result;
}

double total_wall_time(const SweepResult& r) {
  double sum = 0.0;
  for (const auto& run : r.runs) sum += run.wall_time;
  return sum;
}

// 3. Scaling shape of the DMM.
void scaling_shape(Outcome& o, const Options& opt) {
  const auto r = scaling_sweep(SolverKind::Dmm, opt);
  for (const auto& row : r.rows) {
    const double frac = static_cast<double>(row.solved) / static_cast<double>(row.instances);
    o.require(frac >= 0.9, "n=" + std::to_string(row.n) + " solved " + std::to_string(row.solved) + "/" +
                               std::to_string(row.instances) +
                               (row.median_steps ? " median " + fmt(*row.median_steps, 6) : std::string{}));
  }
  if (!r.power_fit || !r.exponential_fit) {
    o.require(false, "scaling fits undefined (fewer than 3 sizes with a median)");
    return;
  }
  o.require(r.power_fit->slope >= 2.0 && r.power_fit->slope <= 4.5,
            "power-law exponent " + fmt(r.power_fit->slope) + " +- " + fmt(r.power_fit->slope_stderr, 2) +
                " in [2.0, 4.5]");
  o.require(r.power_fit->ssr < r.exponential_fit->ssr,
            "power-law ssr " + fmt(r.power_fit->ssr) + " < exponential ssr " + fmt(r.exponential_fit->ssr));
  const double wall = total_wall_time(r);
  o.require(wall <= 7200.0, "sweep compute time " + fmt(wall, 5) + " s <= 7200 s");
}

// 4. WalkSAT on the same instances.
void baseline_divergence(Outcome& o, const Options& opt) {
  const auto ws = scaling_sweep(SolverKind::WalkSat, opt);
  const auto dmm = scaling_sweep(SolverKind::Dmm, opt);
  for (const auto& row : ws.rows) {
    o.detail << "n=" << row.n << " solved " << row.solved << "/" << row.instances;
    if (row.median_steps) o.detail << " median flips " << fmt(*row.median_steps, 6);
    o.detail << "; ";
  }
  if (!ws.power_fit || !ws.exponential_fit) {
    o.require(false, "WalkSAT scaling fits undefined (fewer than 3 sizes with a median)");
  } else {
    o.require(ws.exponential_fit->ssr < ws.power_fit->ssr, "exponential ssr " + fmt(ws.exponential_fit->ssr) +
                                                               " < power-law ssr " + fmt(ws.power_fit->ssr) +
                                                               " (rate " + fmt(ws.exponential_fit->slope) + ")");
  }
  // An undefined median (half or more runs censored) is larger than any finite one.
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double ws400 = ws.rows.back().median_steps.value_or(inf);
  const double dmm400 = dmm.rows.back().median_steps.value_or(inf);
  o.require(ws400 > dmm400, "n=400 median WalkSAT flips " + fmt(ws400, 6) + " > DMM median steps " + fmt(dmm400, 6));
}

// 5. Property checks of the flow and the integrator.
void invariant_suite(Outcome& o, const Options&) {
  // Hypercube containment after every accepted step.
  std::uint64_t steps = 0, violations = 0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto inst = generate_cdc({.n = 100, .ratio = 4.3, .p0 = 0.08, .seed = derive_seed(50, k)});
    const auto r = testing::check_containment(inst.formula, SolverParams::for_formula(inst.formula),
                                              derive_seed(51, k), 1'000'000);
    steps += r.steps;
    violations += r.violations;
  }
  o.require(violations == 0, "containment violations " + std::to_string(violations) + " over " +
                                 std::to_string(steps) + " accepted steps");

  // Gauge invariance, bitwise.
  Rng rng(derive_seed(52, 0));
  std::uint64_t mismatched = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto f = generate_uniform(100, 4.3, derive_seed(53, k));
    const auto p = SolverParams::for_formula(f);
    RunConfig cfg;
    cfg.seed = derive_seed(54, k);
    const auto g = testing::random_assignment(rng, f.num_vars());
    mismatched += testing::gauge_mismatches(f, g, p, init_state(f, p, cfg), 1000) > 0;
  }
  o.require(mismatched == 0, "gauge-invariance mismatches in " + std::to_string(mismatched) + "/100 trajectories");

  // Divergence and gradient Jacobian diagonal at random non-degenerate states.
  double worst_div = 0.0, worst_diag = 0.0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto f = generate_uniform(30, 4.3, derive_seed(55, k / 10));
    const auto p = SolverParams::for_formula(f);
    const auto s = testing::random_nondegenerate_state(f, p, rng);
    const double exact = testing::divergence_formula(f, p, s);
    worst_div = std::max(worst_div, std::abs(testing::divergence_numeric(f, p, s, 1e-5) - exact) / std::abs(exact));
    worst_diag = std::max(worst_diag, testing::gradient_diagonal_max(f, p, s, 1e-5));
  }
  o.require(worst_div <= 1e-4, "max relative divergence error " + fmt(worst_div, 3) + " <= 1e-4 (1000 states)");
  o.require(worst_diag <= 1e-6, "max |gradient Jacobian diagonal| " + fmt(worst_diag, 3) + " <= 1e-6");

  // Basin of attraction from the restricted solution orthant.
  int basin_solved = 0;
  double worst_c = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto inst = generate_cdc({.n = 100, .ratio = 4.3, .p0 = 0.08, .seed = derive_seed(56, k)});
    const auto f = gauge(inst.formula, inst.planted);
    const auto p = SolverParams::for_formula(f);
    const auto run = solve_from_orthant(f, p, derive_seed(57, k));
    basin_solved += run.record.solved;
    worst_c = std::max(worst_c, run.max_constraint);
  }
  o.require(basin_solved == 50 && worst_c <= 0.25, "orthant runs solved " + std::to_string(basin_solved) +
                                                       "/50, max C " + fmt(worst_c) + " <= gamma 0.25");
}

// 6. Generator audit.
void generator_audit(Outcome& o, const Options&) {
  for (double p0 : {0.08, 0.1, 0.15, 0.2, 0.25}) {
    const auto probs = cdc_probabilities(p0);
    std::array<double, 3> counts{};
    double total = 0.0;
    for (std::uint64_t k = 0; total < 1e5; ++k) {
      const auto inst = generate_cdc({.n = 1000, .ratio = 4.3, .p0 = p0, .seed = derive_seed(60, k)});
      for (const auto& c : inst.formula.clauses()) {
        if (total >= 1e5) break;
        int false_count = 0;
        for (const auto& lit : c) false_count += inst.planted[lit.var] != lit.sign;
        counts[false_count] += 1.0;
        total += 1.0;
      }
    }
    const std::array<double, 3> expect{probs.p0, 3 * probs.p1, 3 * probs.p2};
    double worst_z = 0.0;
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
      const double mean = total * expect[k];
      const double sigma = std::sqrt(total * expect[k] * (1 - expect[k]));
      const double dev = std::abs(counts[k] - mean);
      ok &= dev <= 3 * sigma;
      if (sigma > 0) worst_z = std::max(worst_z, dev / sigma);
    }
    o.require(ok, "p0=" + fmt(p0) + " max deviation " + fmt(worst_z, 3) + " sigma");
  }
  const double p0s[] = {0.08, 0.1, 0.15, 0.2, 0.25};
  int verified = 0;
  for (std::uint64_t k = 0; k < 10'000; ++k) {
    const auto inst = generate_cdc({.n = 100, .ratio = 4.3, .p0 = p0s[k % 5], .seed = derive_seed(61, k)});
    verified += verify(inst.formula, inst.planted);
  }
  o.require(verified == 10'000, "planted assignment verified on " + std::to_string(verified) + "/10000 instances");
}

// 7. Resource trends over the criterion-3 sweep.
void resource_trends(Outcome& o, const Options& opt) {
  const auto r = scaling_sweep(SolverKind::Dmm, opt);
  std::optional<double> prev_xl, prev_dt;
  int xl_drops = 0, dt_rises = 0;
  bool below_cap = true, complete = true;
  std::ostringstream xl_list, dt_list;
  for (const auto& row : r.rows) {
    if (!row.median_max_xl || !row.mean_dt) {
      complete = false;
      continue;
    }
    const double cap = 1e4 * std::round(4.3 * static_cast<double>(row.n));
    below_cap &= *row.median_max_xl < cap;
    if (prev_xl && *row.median_max_xl < *prev_xl) ++xl_drops;
    if (prev_dt && *row.mean_dt > *prev_dt) ++dt_rises;
    prev_xl = row.median_max_xl;
    prev_dt = row.mean_dt;
    xl_list << " " << fmt(*row.median_max_xl, 5);
    dt_list << " " << fmt(*row.mean_dt, 6);
  }
  o.require(complete, "every size has solved runs");
  o.require(below_cap, "median max_xl below 1e4*m at every n");
  o.require(xl_drops == 0, "median max_xl non-decreasing in n:" + xl_list.str());
  o.require(dt_rises <= 1, "mean dt non-increasing with " + std::to_string(dt_rises) +
                               " inversion(s) (at most 1):" + dt_list.str());
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&, const Options&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memsat acceptance suite"};
  std::vector<int> selected;
  Options opt;
  opt.workers = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--criterion,-c", selected, "Criteria to run (default: all)")->check(CLI::Range(1, 7));
  app.add_option("--out", opt.out_dir, "Directory for sweep logs and summaries");
  app.add_option("--workers", opt.workers, "Parallel sweep workers")->check(CLI::PositiveNumber);
  app.add_flag("--fresh", opt.fresh, "Discard logged sweep runs before starting");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {1, "correctness oracle", correctness_oracle}, {2, "planted-instance success", planted_success},
      {3, "scaling shape", scaling_shape},           {4, "baseline divergence", baseline_divergence},
      {5, "invariant suite", invariant_suite},       {6, "generator audit", generator_audit},
      {7, "resource trends", resource_trends},
  };
  if (selected.empty())
    for (const auto& c : all) selected.push_back(c.id);

  fs::create_directories(opt.out_dir);
  if (opt.fresh) {
    for (auto kind : {SolverKind::Dmm, SolverKind::WalkSat}) fs::remove(scaling_config(kind, opt).jsonl_path);
  }

  bool all_pass = true;
  for (const auto& c : all) {
    if (std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    Stopwatch clock;
    try {
      c.run(o, opt);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::string detail = o.detail.str();
    while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ", "
              << fmt(clock.seconds(), 4) << " s): " << detail << std::endl;
    all_pass &= o.pass;
  }
  return all_pass ? 0 : 1;
}
