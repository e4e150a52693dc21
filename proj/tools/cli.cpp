#include "cli.hpp"

#include <CLI11.hpp>
#include <deque>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "memsat/analysis.hpp"
#include "memsat/cnf.hpp"
#include "memsat/error.hpp"
#include "memsat/gen.hpp"
#include "memsat/integrator.hpp"
#include "memsat/io.hpp"
#include "memsat/sweep.hpp"
#include "memsat/walksat.hpp"

namespace memsat::cli {
namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string params_file;
  std::string out;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorCode::Io, "write failed for " + path);
}

SolverParams load_params(const GlobalOptions& g, const Formula& f) {
  std::map<std::string, double> overrides;
  if (!g.params_file.empty()) overrides = parse_params_json(read_text_file(g.params_file));
  return resolve_params(f, overrides);
}

// Prints the solver outcome in SAT-competition style and returns the exit code.
int report(const Formula& f, const RunRecord& rec, const GlobalOptions& g, std::ostream& out) {
  out << "c steps " << rec.steps << "\n";
  out << "c wall_time " << rec.wall_time << "\n";
  if (!rec.failure.empty()) out << "c failure " << rec.failure << "\n";
  if (!g.out.empty()) write_file(g.out, run_record_json(rec) + "\n");
  if (rec.solved && rec.assignment && verify(f, *rec.assignment)) {
    out << "s SATISFIABLE\n" << model_line(*rec.assignment) << "\n";
    return kExitSat;
  }
  out << "s UNKNOWN\n";
  return kExitUnknown;
}

struct SolveOptions {
  std::string file;
  std::uint64_t max_steps = 100'000'000;
  bool competition = false;
  std::string trajectory;
  std::uint64_t stride = 1;
};

int cmd_solve(const GlobalOptions& g, const SolveOptions& o, std::ostream& out) {
  const Formula f = read_dimacs_file(o.file);
  const SolverParams p = load_params(g, f);
  RunConfig cfg;
  cfg.seed = g.seed;
  cfg.max_steps = o.max_steps;
  cfg.record_trajectory = !o.trajectory.empty();
  cfg.snapshot_stride = o.stride;
  if (o.competition) cfg.competition = CompetitionSchedule{};
  const RunRecord rec = solve(f, p, cfg);
  out << "c integrated_time " << rec.integrated_time << "\n";
  out << "c mean_dt " << rec.mean_dt << "\n";
  out << "c max_xl " << rec.max_xl_seen << "\n";
  if (!o.trajectory.empty()) {
    std::ofstream csv(o.trajectory);
    if (!csv) throw Error(ErrorCode::Io, "cannot write " + o.trajectory);
    write_trajectory_csv(csv, rec.trajectory);
  }
  return report(f, rec, g, out);
}

struct WalkSatOptions {
  std::string file;
  double noise = 0.5;
  std::uint64_t max_flips = 10'000'000;
};

int cmd_walksat(const GlobalOptions& g, const WalkSatOptions& o, std::ostream& out) {
  const Formula f = read_dimacs_file(o.file);
  const RunRecord rec = walksat_solve(f, {o.noise, o.max_flips, g.seed});
  return report(f, rec, g, out);
}

struct GenOptions {
  std::size_t n = 100;
  double ratio = 4.3;
  double p0 = 0.08;
  bool uniform = false;
  bool withhold = false;
  std::string meta;
};

int cmd_gen(const GlobalOptions& g, const GenOptions& o, std::ostream& out, std::ostream& err) {
  std::string dimacs, metadata;
  if (o.uniform) {
    const Formula f = generate_uniform(o.n, o.ratio, g.seed);
    dimacs = serialize_dimacs(f);
    metadata = uniform_metadata_json(o.n, o.ratio, g.seed, f.num_clauses());
  } else {
    if (auto w = hard_regime_warning(o.ratio, o.p0)) err << "warning: " << *w << "\n";
    const auto inst = generate_cdc({o.n, o.ratio, o.p0, g.seed});
    dimacs = serialize_dimacs(inst.formula);
    metadata = instance_metadata_json(inst, !o.withhold);
  }
  std::string meta_path = o.meta;
  if (g.out.empty()) {
    out << dimacs;
  } else {
    write_file(g.out, dimacs);
    if (meta_path.empty()) meta_path = g.out + ".json";
  }
  if (!meta_path.empty()) write_file(meta_path, metadata);
  return kExitSuccess;
}

struct BenchOptions {
  std::string config;
  unsigned workers = 0;
};

int cmd_bench(const GlobalOptions& g, const BenchOptions& o, std::ostream& out, std::ostream& err) {
  SweepConfig cfg = SweepConfig::from_json(read_text_file(o.config));
  if (o.workers > 0) cfg.workers = o.workers;
  const std::filesystem::path dir = g.out.empty() ? std::filesystem::path(".") : std::filesystem::path(g.out);
  std::filesystem::create_directories(dir);
  if (cfg.jsonl_path.empty()) cfg.jsonl_path = (dir / "runs.jsonl").string();

  const SweepResult r = run_sweep(cfg);
  const std::string csv = sweep_csv(r);
  write_file((dir / "summary.csv").string(), csv);
  out << csv;
  if (r.power_fit && r.exponential_fit) {
    err << "power-law exponent " << r.power_fit->slope << " +- " << r.power_fit->slope_stderr
        << " (ssr " << r.power_fit->ssr << ")\n";
    err << "exponential rate " << r.exponential_fit->slope << " +- " << r.exponential_fit->slope_stderr
        << " (ssr " << r.exponential_fit->ssr << ")\n";
  } else {
    err << "fewer than 3 sizes with a defined median; no scaling fit\n";
  }
  return kExitSuccess;
}

struct AnalyzeOptions {
  std::string file;
  std::uint64_t max_steps = 10'000'000;
  std::size_t last = 0;
};

int cmd_analyze(const GlobalOptions& g, const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
  const Formula f = read_dimacs_file(o.file);
  const SolverParams p = load_params(g, f);
  RunConfig cfg;
  cfg.seed = g.seed;
  cfg.max_steps = o.max_steps;

  std::deque<std::string> rows;
  SolverState prev = init_state(f, p, cfg);
  std::size_t best_event = 0;
  std::uint64_t best_step = 0;
  cfg.on_step = [&](const SolverState& s) {
    const auto a = analyze_transition(f, prev, s);
    if (a.newly_unsatisfied == 0 && a.newly_satisfied > best_event) {
      best_event = a.newly_satisfied;
      best_step = s.steps;
    }
    const auto& snap = a.after;
    rows.push_back(std::to_string(s.steps) + "," + std::to_string(snap.unsat.size()) + "," +
                   std::to_string(a.newly_satisfied) + "," + std::to_string(a.newly_unsatisfied) + "," +
                   std::to_string(snap.unsat.size() + snap.recently_unsat.size()) + "," +
                   std::to_string(snap.variables.size()) + "," + std::to_string(snap.component_sizes.size()) + "," +
                   std::to_string(snap.component_sizes.empty() ? 0 : snap.component_sizes.front()));
    if (o.last > 0 && rows.size() > o.last) rows.pop_front();
    prev = s;
  };
  const RunRecord rec = solve(f, p, cfg);

  std::ofstream file;
  std::ostream* sink = &out;
  if (!g.out.empty()) {
    file.open(g.out);
    if (!file) throw Error(ErrorCode::Io, "cannot write " + g.out);
    sink = &file;
  }
  *sink << "step,num_unsat,newly_satisfied,newly_unsatisfied,graph_clauses,graph_variables,components,"
           "largest_component\n";
  for (const auto& row : rows) *sink << row << "\n";
  err << (rec.solved ? "solved" : "not solved") << " after " << rec.steps << " steps; largest collective event: "
      << best_event << " clauses satisfied at step " << best_step << " with none broken\n";
  return kExitSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"memsat: memcomputing 3-SAT solver, CDC instance generator and scaling benchmarks"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--params-file", g.params_file, "JSON object overriding solver parameters")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output path (file, or directory for bench)");

  SolveOptions so;
  auto* solve_cmd = app.add_subcommand("solve", "Integrate the memcomputing dynamics on a DIMACS 3-SAT file");
  solve_cmd->add_option("file", so.file, "DIMACS CNF input")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--max-steps", so.max_steps, "Accepted-step budget");
  solve_cmd->add_flag("--competition", so.competition, "Enable per-clause alpha adaptation");
  solve_cmd->add_option("--trajectory", so.trajectory, "Write (step,t,dt,num_unsat,max_xl) CSV here");
  solve_cmd->add_option("--stride", so.stride, "Trajectory snapshot stride")->check(CLI::PositiveNumber);

  WalkSatOptions wo;
  auto* walk_cmd = app.add_subcommand("walksat", "Run the WalkSAT baseline on a DIMACS 3-SAT file");
  walk_cmd->add_option("file", wo.file, "DIMACS CNF input")->required()->check(CLI::ExistingFile);
  walk_cmd->add_option("--noise", wo.noise, "Random-walk probability")->check(CLI::Range(0.0, 1.0));
  walk_cmd->add_option("--max-flips", wo.max_flips, "Flip budget");

  GenOptions go;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a planted CDC (or uniform random) 3-SAT instance");
  gen_cmd->add_option("--n", go.n, "Number of variables");
  gen_cmd->add_option("--ratio", go.ratio, "Clauses per variable");
  gen_cmd->add_option("--p0", go.p0, "Probability of a clause with no false literal under the planted solution");
  gen_cmd->add_flag("--uniform", go.uniform, "Uniform random 3-SAT without a planted solution");
  gen_cmd->add_flag("--withhold-planted", go.withhold, "Omit the planted assignment from the metadata");
  gen_cmd->add_option("--meta", go.meta, "Metadata JSON path (default: <out>.json)");

  BenchOptions bo;
  auto* bench_cmd = app.add_subcommand("bench", "Run a scaling sweep described by a JSON config");
  bench_cmd->add_option("--config", bo.config, "Sweep config JSON")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--workers", bo.workers, "Parallel workers (overrides config)");

  AnalyzeOptions ao;
  auto* analyze_cmd = app.add_subcommand("analyze", "Per-step unsatisfied factor-graph analysis of one solve");
  analyze_cmd->add_option("file", ao.file, "DIMACS CNF input")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--max-steps", ao.max_steps, "Accepted-step budget");
  analyze_cmd->add_option("--last", ao.last, "Keep only the final N rows (0 = all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitError;
  }

  try {
    if (*solve_cmd) return cmd_solve(g, so, out);
    if (*walk_cmd) return cmd_walksat(g, wo, out);
    if (*gen_cmd) return cmd_gen(g, go, out, err);
    if (*bench_cmd) return cmd_bench(g, bo, out, err);
    if (*analyze_cmd) return cmd_analyze(g, ao, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace memsat::cli
