// frontier: run / fit / steady / propcheck / sweep.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "frontier/analysis.hpp"
#include "frontier/config.hpp"
#include "frontier/errors.hpp"
#include "frontier/evolution.hpp"
#include "frontier/outputs.hpp"
#include "frontier/propcheck.hpp"
#include "frontier/steadystate.hpp"

namespace fs = std::filesystem;
using namespace frontier;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kNumerical = 3, kProperty = 4 };

RunConfig load_config(const std::string& path) {
  return path.empty() ? default_config() : parse_config(path);
}

std::vector<RateLaw> default_candidates(const ModelParams& p) {
  std::vector<RateLaw> c{p.k1.predicted_rate()};
  auto add = [&](const RateLaw& law) {
    if (std::find(c.begin(), c.end(), law) == c.end()) c.push_back(law);
  };
  add(p.k2.predicted_rate());
  add(RateLaw::linear());
  add(RateLaw::linear_log_pow(1.0));
  return c;
}

std::vector<RateLaw> parse_candidates(const std::string& list) {
  std::vector<RateLaw> out;
  std::string item;
  int depth = 0;
  for (char ch : list) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ';' || (ch == ',' && depth == 0)) {
      if (!item.empty()) out.push_back(RateLaw::parse(item));
      item.clear();
    } else if (ch != ' ') {
      item += ch;
    }
  }
  if (!item.empty()) out.push_back(RateLaw::parse(item));
  return out;
}

// Steady profile long enough for the gap extent at the final front.
SteadyProfile steady_for_gap(const RunConfig& cfg, double h_end) {
  SteadyOptions o = cfg.steady;
  // Twice the extent keeps the far-field closure away from [0, s].
  o.L = std::max(o.L, 2.0 * std::ceil(default_gap_extent(h_end)));
  return solve_steady(cfg.model, o);
}

FitReport make_fit(const RunConfig& cfg, const Trajectory& traj, bool with_gap,
                   fs::path* steady_out) {
  FitReport r;
  r.source = "run";
  r.predicted = cfg.model.k1.predicted_rate();
  r.fit = fit_rate(traj.h_series, default_candidates(cfg.model));
  if (cfg.model.k1.first_moment_finite() && cfg.model.k2.first_moment_finite()) {
    r.speed = speed_estimate(traj.h_series);
  }
  if (with_gap && reproduction_number(cfg.model.reactions) > 1.0 && !traj.snapshots.empty()) {
    const SteadyProfile s = steady_for_gap(cfg, traj.snapshots.back().h);
    r.profile_gap = profile_gap(traj.snapshots, s);
    if (steady_out) write_steady_profile(*steady_out, s);
  }
  return r;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool fit, bool gap) {
  const RunConfig cfg = load_config(config_path);
  const auto started = std::chrono::system_clock::now();
  const Trajectory traj = run(cfg.model, cfg.run);
  std::optional<FitReport> report;
  fs::create_directories(out_dir);
  fs::path steady_path = fs::path(out_dir) / "steady_profile.csv";
  if (fit || gap) report = make_fit(cfg, traj, gap, &steady_path);
  RunManifest m = write_outputs(traj, cfg, out_dir, started, report);
  if (gap && fs::exists(steady_path)) {
    m.files.push_back("steady_profile.csv");
    m.finished = std::chrono::system_clock::now();
    write_manifest(out_dir, m);
  }
  std::cout << "t_end=" << cfg.run.t_end << " h=" << format_double(*m.final_h)
            << " steps=" << traj.h_series.size() - 1 << " dt=" << format_double(traj.dt) << "\n";
  if (report) std::cout << "selected law: " << report->fit.law.name() << "\n";
  return kOk;
}

int cmd_fit(const std::string& series_path, const std::string& config_path,
            const std::string& candidates, const std::vector<double>& window,
            const std::string& out_path) {
  const auto series = read_h_series(series_path);
  FitReport r;
  r.source = series_path;
  std::vector<RateLaw> cands;
  if (!candidates.empty()) {
    cands = parse_candidates(candidates);
  } else {
    const RunConfig cfg = load_config(config_path);
    cands = default_candidates(cfg.model);
    r.predicted = cfg.model.k1.predicted_rate();
  }
  std::optional<std::pair<double, double>> w;
  if (window.size() == 2) w = std::make_pair(window[0], window[1]);
  r.fit = fit_rate(series, cands, w);
  write_fit_report(out_path, r);
  std::cout << "selected law: " << r.fit.law.name() << " C_hat=" << r.fit.C_hat
            << " flatness=" << r.fit.flatness << "\n";
  for (const auto& c : r.fit.candidates) {
    std::cout << "  " << c.law.name() << " trend=" << c.stats.trend_slope
              << " maxmin=" << c.stats.maxmin_ratio << "\n";
  }
  return kOk;
}

int cmd_steady(const std::string& config_path, const std::string& out_dir) {
  const RunConfig cfg = load_config(config_path);
  const auto started = std::chrono::system_clock::now();
  const SteadyProfile s = solve_steady(cfg.model, cfg.steady);
  fs::create_directories(out_dir);
  write_steady_profile(fs::path(out_dir) / "steady_profile.csv", s);
  RunManifest m;
  m.config_echo = config_echo(cfg);
  m.started = started;
  m.finished = std::chrono::system_clock::now();
  m.files = {"steady_profile.csv"};
  write_manifest(out_dir, m);
  std::cout << "iterations=" << s.iterations << " residual=" << s.residual
            << " U(L)=" << s.U.back() << " u*=" << s.u_star << " closure_tail=" << s.closure_tail
            << "\n";
  return kOk;
}

std::vector<ComparisonEntry> comparison_sweep(std::uint64_t seed, int pairs, double t_end) {
  std::mt19937_64 rng(seed);
  std::vector<ComparisonEntry> out;
  ComparisonSettings s;
  s.t_end = t_end;
  for (int i = 0; i < pairs; ++i) {
    const auto [lo, hi] = random_ordered_pair(rng);
    out.push_back({"pair_" + std::to_string(i), comparison_harness(lo, hi, s)});
  }
  return out;
}

int cmd_propcheck(bool prop21, bool comparison, const std::string& config_path, int pairs,
                  double t_end, const std::string& out_dir) {
  if (!prop21 && !comparison) prop21 = comparison = true;
  const RunConfig cfg = load_config(config_path);
  std::vector<Prop21Entry> p;
  std::vector<ComparisonEntry> c;
  if (prop21) p = prop21_grid_sweep();
  if (comparison) c = comparison_sweep(cfg.seed, pairs, t_end);
  fs::create_directories(out_dir);
  write_propcheck_report(fs::path(out_dir) / "propcheck_report.json", p, c);
  bool ok = true;
  for (const auto& e : p) {
    std::cout << "prop21 " << e.kernel << " rho=" << e.geometry.rho << " eps=" << e.geometry.eps
              << " min_margin=" << e.result.min_margin << (e.result.pass ? " ok" : " FAIL") << "\n";
    ok = ok && e.result.pass;
  }
  for (const auto& e : c) {
    std::cout << "comparison " << e.label << " max_excess=" << e.report.max_excess
              << (e.report.holds ? " ok" : " FAIL") << "\n";
    ok = ok && e.report.holds;
  }
  return ok ? kOk : kProperty;
}

std::vector<json> cartesian(const json& grid) {
  std::vector<json> combos{json::object()};
  for (auto it = grid.begin(); it != grid.end(); ++it) {
    const json values = it->is_array() ? *it : json::array({*it});
    if (values.empty()) throw ConfigError("sweep grid key '" + it.key() + "' has no values");
    std::vector<json> next;
    for (const json& base : combos) {
      for (const json& v : values) {
        json c = base;
        c[it.key()] = v;
        next.push_back(c);
      }
    }
    combos = std::move(next);
  }
  return combos;
}

unsigned sweep_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FRONTIER_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

int exit_code_for(const std::exception_ptr& ep);

int cmd_sweep(const std::string& base_path, const std::string& grid_path, const std::string& out_dir,
              bool fit) {
  const RunConfig base = load_config(base_path);
  std::ifstream gin(grid_path);
  if (!gin) throw ConfigError("cannot open sweep grid '" + grid_path + "'");
  json grid;
  try {
    grid = json::parse(gin);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed sweep grid: ") + e.what());
  }
  if (!grid.is_object()) throw ConfigError("sweep grid must be a JSON object of key -> values");

  // Validate every point before any computation starts.
  std::vector<RunConfig> configs;
  for (const json& combo : cartesian(grid)) configs.push_back(with_overrides(base, combo.dump()));

  fs::create_directories(out_dir);
  std::vector<int> codes(configs.size(), kOk);
  std::vector<std::string> messages(configs.size());
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      char name[32];
      std::snprintf(name, sizeof name, "run_%03zu", i);
      const fs::path dir = fs::path(out_dir) / name;
      try {
        fs::create_directories(dir);
        {
          std::ofstream cfg_out(dir / "config.json");
          cfg_out << config_echo(configs[i]) << "\n";
        }
        const auto started = std::chrono::system_clock::now();
        const Trajectory traj = run(configs[i].model, configs[i].run);
        std::optional<FitReport> report;
        if (fit) report = make_fit(configs[i], traj, false, nullptr);
        write_outputs(traj, configs[i], dir, started, report);
      } catch (...) {
        codes[i] = exit_code_for(std::current_exception());
        try {
          throw;
        } catch (const std::exception& e) {
          messages[i] = e.what();
        }
      }
      std::lock_guard lock(io);
      std::cout << name << (codes[i] == kOk ? " ok" : " failed: " + messages[i]) << "\n";
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<std::size_t>(sweep_threads(), configs.size());
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  json summary = json::array();
  int worst = kOk;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu", i);
    summary.push_back({{"run", name}, {"exit_code", codes[i]}, {"error", messages[i]}});
    worst = std::max(worst, codes[i]);
  }
  std::ofstream(fs::path(out_dir) / "sweep_summary.json") << summary.dump(2) << "\n";
  return worst;
}

int exit_code_for(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError&) {
    return kConfig;
  } catch (const std::invalid_argument&) {
    return kConfig;
  } catch (const NumericalError&) {
    return kNumerical;
  } catch (const PropertyViolation&) {
    return kProperty;
  } catch (...) {
    return kOther;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal free-boundary epidemic model laboratory"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  std::string config;
  std::string out = "out";

  auto* run_cmd = app.add_subcommand("run", "simulate and write h_series.csv, snapshots.jsonl, manifest.json");
  bool run_fit = false;
  bool run_gap = false;
  run_cmd->add_option("-c,--config", config, "JSON config (defaults if omitted)");
  run_cmd->add_option("-o,--out", out, "output directory");
  run_cmd->add_flag("--fit", run_fit, "also write fit_report.json");
  run_cmd->add_flag("--gap", run_gap, "add profile_gap to the fit report (solves the steady state)");

  auto* fit_cmd = app.add_subcommand("fit", "fit rate laws to an h_series.csv");
  std::string series;
  std::string candidates;
  std::vector<double> window;
  std::string fit_out = "fit_report.json";
  fit_cmd->add_option("series", series, "h_series.csv")->required();
  fit_cmd->add_option("-c,--config", config, "config whose kernels give the predicted law");
  fit_cmd->add_option("--candidates", candidates, "e.g. \"Linear;PowerLog(2,0)\"");
  fit_cmd->add_option("--window", window, "t_lo t_hi")->expected(2);
  fit_cmd->add_option("-o,--out", fit_out, "report path");

  auto* steady_cmd = app.add_subcommand("steady", "solve the half-line steady state");
  steady_cmd->add_option("-c,--config", config, "JSON config");
  steady_cmd->add_option("-o,--out", out, "output directory");

  auto* prop_cmd = app.add_subcommand("propcheck", "ramp inequality sweep and paired-run comparison");
  bool prop21 = false;
  bool comparison = false;
  int pairs = 20;
  double cmp_t_end = 30.0;
  prop_cmd->add_flag("--prop21", prop21, "ramp inequality sweep");
  prop_cmd->add_flag("--comparison", comparison, "randomized ordered pairs");
  prop_cmd->add_option("--pairs", pairs, "number of random pairs")->check(CLI::PositiveNumber);
  prop_cmd->add_option("--t-end", cmp_t_end, "horizon of each paired run")->check(CLI::PositiveNumber);
  prop_cmd->add_option("-c,--config", config, "config supplying seed");
  prop_cmd->add_option("-o,--out", out, "output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "cartesian parameter sweep");
  std::string grid;
  bool sweep_fit = false;
  sweep_cmd->add_option("base", config, "base config")->required();
  sweep_cmd->add_option("grid", grid, "JSON object: key -> list of values")->required();
  sweep_cmd->add_option("-o,--out", out, "output directory");
  sweep_cmd->add_flag("--fit", sweep_fit, "write fit_report.json per run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(config, out, run_fit, run_gap);
    if (*fit_cmd) return cmd_fit(series, config, candidates, window, fit_out);
    if (*steady_cmd) return cmd_steady(config, out);
    if (*prop_cmd) return cmd_propcheck(prop21, comparison, config, pairs, cmp_t_end, out);
    if (*sweep_cmd) return cmd_sweep(config, grid, out, sweep_fit);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(std::current_exception());
  }
  return kOther;
}
