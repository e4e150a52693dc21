#include "memsat/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <thread>

#include "memsat/error.hpp"
#include "memsat/gen.hpp"
#include "memsat/integrator.hpp"
#include "memsat/rng.hpp"
#include "memsat/walksat.hpp"

namespace memsat {

using nlohmann::json;

std::string_view to_string(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::Dmm: return "dmm";
    case SolverKind::DmmCompetition: return "dmm_competition";
    case SolverKind::WalkSat: return "walksat";
  }
  return "dmm";
}

SolverKind solver_kind_from_string(std::string_view name) {
  if (name == "dmm") return SolverKind::Dmm;
  if (name == "dmm_competition") return SolverKind::DmmCompetition;
  if (name == "walksat") return SolverKind::WalkSat;
  throw Error(ErrorCode::InvalidConfig, "unknown solver '" + std::string(name) + "'");
}

void SweepConfig::validate() const {
  if (n_values.empty()) throw Error(ErrorCode::InvalidConfig, "n_values is empty");
  for (std::size_t i = 1; i < n_values.size(); ++i)
    if (n_values[i] <= n_values[i - 1]) throw Error(ErrorCode::InvalidConfig, "n_values must be strictly increasing");
  if (instances_per_n < 1) throw Error(ErrorCode::InvalidConfig, "instances_per_n must be >= 1");
  if (budget < 1) throw Error(ErrorCode::InvalidConfig, "budget must be >= 1");
  if (workers < 1) throw Error(ErrorCode::InvalidConfig, "workers must be >= 1");
  CdcParams probe{n_values.front(), ratio, p0, seed};
  probe.validate();
  SolverParams p;
  apply_param_overrides(p, param_overrides);
}

SweepConfig SweepConfig::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Syntax, std::string("sweep config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "sweep config must be a JSON object");
  static const std::set<std::string> known = {"solver", "n_values", "ratio", "p0", "instances_per_n", "seed",
                                              "budget", "workers", "noise", "params", "jsonl"};
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw Error(ErrorCode::InvalidConfig, "unknown sweep config key '" + key + "'");

  SweepConfig cfg;
  try {
    if (j.contains("solver")) cfg.solver = solver_kind_from_string(j["solver"].get<std::string>());
    cfg.n_values = j.at("n_values").get<std::vector<std::size_t>>();
    cfg.ratio = j.value("ratio", cfg.ratio);
    cfg.p0 = j.value("p0", cfg.p0);
    cfg.instances_per_n = j.value("instances_per_n", cfg.instances_per_n);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.budget = static_cast<std::uint64_t>(j.value("budget", static_cast<double>(cfg.budget)));
    cfg.workers = j.value("workers", cfg.workers);
    cfg.noise = j.value("noise", cfg.noise);
    if (j.contains("params")) cfg.param_overrides = j["params"].get<std::map<std::string, double>>();
    cfg.jsonl_path = j.value("jsonl", std::string{});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("sweep config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::uint64_t instance_seed(std::uint64_t base, std::size_t n, std::size_t index) {
  return derive_seed(derive_seed(base, n), index);
}

void apply_param_overrides(SolverParams& p, const std::map<std::string, double>& overrides) {
  const std::map<std::string, double SolverParams::*> fields = {
      {"alpha", &SolverParams::alpha},         {"beta", &SolverParams::beta},
      {"gamma", &SolverParams::gamma},         {"delta", &SolverParams::delta},
      {"epsilon", &SolverParams::epsilon},     {"zeta", &SolverParams::zeta},
      {"xl_max", &SolverParams::xl_max},       {"dt_min", &SolverParams::dt_min},
      {"dt_max", &SolverParams::dt_max},       {"max_change", &SolverParams::max_change},
      {"dt_grow", &SolverParams::dt_grow},     {"dt_shrink", &SolverParams::dt_shrink},
  };
  for (const auto& [key, value] : overrides) {
    auto it = fields.find(key);
    if (it == fields.end()) throw Error(ErrorCode::InvalidConfig, "unknown solver parameter '" + key + "'");
    p.*(it->second) = value;
  }
}

SolverParams resolve_params(const Formula& f, const std::map<std::string, double>& overrides) {
  SolverParams p = SolverParams::for_formula(f);
  apply_param_overrides(p, overrides);
  p.validate();
  return p;
}

RunSummary run_instance(const SweepConfig& cfg, std::size_t n, std::size_t index) {
  RunSummary out;
  out.n = n;
  out.instance = index;
  out.instance_seed = instance_seed(cfg.seed, n, index);
  try {
    const auto inst = generate_cdc({n, cfg.ratio, cfg.p0, out.instance_seed});
    const std::uint64_t solver_seed = derive_seed(out.instance_seed, 0x5eed);
    RunRecord rec;
    if (cfg.solver == SolverKind::WalkSat) {
      rec = walksat_solve(inst.formula, {cfg.noise, cfg.budget, solver_seed});
    } else {
      RunConfig rc;
      rc.max_steps = cfg.budget;
      rc.seed = solver_seed;
      if (cfg.solver == SolverKind::DmmCompetition) rc.competition = CompetitionSchedule{};
      rec = solve(inst.formula, resolve_params(inst.formula, cfg.param_overrides), rc);
    }
    out.solved = rec.solved;
    out.steps = rec.steps;
    out.integrated_time = rec.integrated_time;
    out.max_xl = rec.max_xl_seen;
    out.mean_dt = rec.mean_dt;
    out.wall_time = rec.wall_time;
    out.failure = rec.failure;
  } catch (const std::exception& e) {
    out.solved = false;
    out.failure = e.what();
  }
  return out;
}

namespace {

json config_key(const SweepConfig& cfg) {
  return json{{"solver", to_string(cfg.solver)}, {"ratio", cfg.ratio}, {"p0", cfg.p0},
              {"seed", cfg.seed},                {"budget", cfg.budget}, {"noise", cfg.noise},
              {"params", cfg.param_overrides}};
}

std::optional<RunSummary> parse_run_line(const SweepConfig& cfg, const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("config")) return std::nullopt;
  if (j["config"] != config_key(cfg)) return std::nullopt;
  RunSummary r;
  r.n = j.at("n").get<std::size_t>();
  r.instance = j.at("instance").get<std::size_t>();
  r.instance_seed = j.at("instance_seed").get<std::uint64_t>();
  r.solved = j.at("solved").get<bool>();
  r.steps = j.at("steps").get<std::uint64_t>();
  r.integrated_time = j.at("integrated_time").get<double>();
  r.max_xl = j.at("max_xl").get<double>();
  r.mean_dt = j.at("mean_dt").get<double>();
  r.wall_time = j.at("wall_time").get<double>();
  r.failure = j.value("failure", std::string{});
  return r;
}

std::optional<double> finite_or_empty(double v) {
  return std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
}

}  // namespace

std::string run_json_line(const SweepConfig& cfg, const RunSummary& run) {
  json j{{"config", config_key(cfg)},
         {"n", run.n},
         {"instance", run.instance},
         {"instance_seed", run.instance_seed},
         {"solved", run.solved},
         {"steps", run.steps},
         {"integrated_time", run.integrated_time},
         {"max_xl", run.max_xl},
         {"mean_dt", run.mean_dt},
         {"wall_time", run.wall_time}};
  if (!run.failure.empty()) j["failure"] = run.failure;
  return j.dump();
}

SweepResult aggregate(const SweepConfig& cfg, std::vector<RunSummary> runs) {
  std::sort(runs.begin(), runs.end(), [](const RunSummary& a, const RunSummary& b) {
    return std::tie(a.n, a.instance) < std::tie(b.n, b.instance);
  });
  SweepResult out;
  out.solver = cfg.solver;
  out.ratio = cfg.ratio;
  out.p0 = cfg.p0;
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<ScalingPoint> points;
  for (std::size_t n : cfg.n_values) {
    SweepRow row;
    row.n = n;
    std::vector<double> steps, times, xl, dt;
    for (const auto& r : runs) {
      if (r.n != n) continue;
      ++row.instances;
      steps.push_back(r.solved ? static_cast<double>(r.steps) : inf);
      times.push_back(r.solved ? r.integrated_time : inf);
      if (r.solved) {
        ++row.solved;
        xl.push_back(r.max_xl);
        dt.push_back(r.mean_dt);
      }
    }
    row.median_steps = majority_median(steps);
    if (row.median_steps) {
      row.p10 = finite_or_empty(percentile(steps, 0.1));
      row.p90 = finite_or_empty(percentile(steps, 0.9));
      row.median_t = majority_median(times);
      row.median_max_xl = percentile(xl, 0.5);
      row.mean_dt = percentile(dt, 0.5);
      points.push_back({static_cast<double>(n), *row.median_steps});
    }
    out.rows.push_back(row);
  }
  if (points.size() >= 3 && std::all_of(points.begin(), points.end(), [](auto p) { return p.value > 0.0; })) {
    out.power_fit = fit_power_law(points);
    out.exponential_fit = fit_exponential(points);
  }
  out.runs = std::move(runs);
  return out;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();

  struct Task {
    std::size_t n;
    std::size_t index;
  };
  std::vector<RunSummary> done;
  if (!cfg.jsonl_path.empty()) {
    std::ifstream in(cfg.jsonl_path);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::string line; std::getline(in, line);) {
      auto r = parse_run_line(cfg, line);
      if (!r || r->instance >= cfg.instances_per_n) continue;
      if (!std::binary_search(cfg.n_values.begin(), cfg.n_values.end(), r->n)) continue;
      if (seen.insert({r->n, r->instance}).second) done.push_back(*r);
    }
  }

  std::vector<Task> tasks;
  for (std::size_t n : cfg.n_values) {
    for (std::size_t i = 0; i < cfg.instances_per_n; ++i) {
      const bool have = std::any_of(done.begin(), done.end(), [&](const auto& r) { return r.n == n && r.instance == i; });
      if (!have) tasks.push_back({n, i});
    }
  }

  std::ofstream log;
  if (!cfg.jsonl_path.empty()) {
    log.open(cfg.jsonl_path, std::ios::app);
    if (!log) throw Error(ErrorCode::Io, "cannot append to " + cfg.jsonl_path);
  }

  std::vector<RunSummary> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&]() {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      results[k] = run_instance(cfg, tasks[k].n, tasks[k].index);
      if (log.is_open()) {
        std::lock_guard lock(log_mutex);
        log << run_json_line(cfg, results[k]) << '\n';
        log.flush();
      }
    }
  };
  const unsigned count = std::min<unsigned>(cfg.workers, static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
  }

  done.insert(done.end(), results.begin(), results.end());
  return aggregate(cfg, std::move(done));
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream out;
  out.precision(10);
  auto opt = [&](const std::optional<double>& v) {
    if (v) out << *v;
  };
  out << "solver,n,ratio,p0,solved,median_steps,p10,p90,median_t,median_max_xl,mean_dt\n";
  for (const auto& row : r.rows) {
    out << to_string(r.solver) << ',' << row.n << ',' << r.ratio << ',' << r.p0 << ',' << row.solved << ',';
    opt(row.median_steps);
    out << ',';
    opt(row.p10);
    out << ',';
    opt(row.p90);
    out << ',';
    opt(row.median_t);
    out << ',';
    opt(row.median_max_xl);
    out << ',';
    opt(row.mean_dt);
    out << '\n';
  }
  return out.str();
}

}  // namespace memsat
