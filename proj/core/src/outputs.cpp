#include "frontier/outputs.hpp"

#include <charconv>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#ifndef FRONTIER_VERSION
#define FRONTIER_VERSION "unknown"
#endif

namespace frontier {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Writes through <path>.tmp and renames, so readers never see a torn file.
void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

double parse_double(std::string_view s, const fs::path& path, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::string iso_time(std::chrono::system_clock::time_point tp) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json flatness_json(const Flatness& f) {
  return {{"C_hat", f.C_hat},
          {"maxmin_ratio", f.maxmin_ratio},
          {"trend_slope", f.trend_slope},
          {"rms_resid", f.rms_resid},
          {"points", f.points}};
}

}  // namespace

std::string version_string() { return FRONTIER_VERSION; }

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_h_series(const fs::path& path, std::span<const Sample> series) {
  auto out = open_out(path);
  out << "t,h\n";
  for (const auto& [t, h] : series) out << format_double(t) << ',' << format_double(h) << '\n';
  close_out(out, path);
}

std::vector<Sample> read_h_series(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "t,h") {
    throw IoError(path.string() + ": expected header 't,h'");
  }
  std::vector<Sample> out;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(path.string() + ":" + std::to_string(n) + ": expected 't,h'");
    const std::string_view sv(line);
    out.emplace_back(parse_double(sv.substr(0, comma), path, n), parse_double(sv.substr(comma + 1), path, n));
  }
  return out;
}

void write_snapshots(const fs::path& path, std::span<const SimState> snapshots) {
  auto out = open_out(path);
  for (const SimState& s : snapshots) {
    json j = {{"t", s.t}, {"h", s.h}, {"dx", s.grid.dx}, {"u", s.u}, {"v", s.v}};
    out << j.dump() << '\n';
  }
  close_out(out, path);
}

std::vector<SimState> read_snapshots(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<SimState> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      SimState s;
      s.t = j.at("t").get<double>();
      s.h = j.at("h").get<double>();
      s.grid.dx = j.at("dx").get<double>();
      s.u = j.at("u").get<std::vector<double>>();
      s.v = j.at("v").get<std::vector<double>>();
      s.grid.n = s.u.size();
      s.grid.capacity = s.u.size();
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void write_steady_profile(const fs::path& path, const SteadyProfile& s) {
  auto out = open_out(path);
  out << "x,U,V\n";
  for (std::size_t j = 0; j < s.U.size(); ++j) {
    out << format_double(s.x(j)) << ',' << format_double(s.U[j]) << ',' << format_double(s.V[j]) << '\n';
  }
  close_out(out, path);
}

void write_fit_report(const fs::path& path, const FitReport& r) {
  json cands = json::array();
  for (const CandidateFit& c : r.fit.candidates) {
    json e = flatness_json(c.stats);
    e["law"] = c.law.name();
    cands.push_back(e);
  }
  json slope = json::array();
  for (const SlopePoint& p : r.fit.slope_diag) slope.push_back({p.t, p.slope});
  json j = {{"source", r.source},
            {"law", r.fit.law.name()},
            {"C_hat", r.fit.C_hat},
            {"flatness", r.fit.flatness},
            {"window", {r.fit.t_lo, r.fit.t_hi}},
            {"rms_resid", r.fit.rms_resid},
            {"candidates", cands},
            {"slope_diag", slope}};
  j["predicted"] = r.predicted ? json(r.predicted->name()) : json(nullptr);
  if (r.speed) {
    j["speed"] = {{"c0_hat", r.speed->c0_hat},
                  {"slope_early", r.speed->slope_early},
                  {"slope_late", r.speed->slope_late},
                  {"relative_gap", r.speed->relative_gap}};
  }
  if (!r.profile_gap.empty()) {
    json g = json::array();
    for (const GapPoint& p : r.profile_gap) g.push_back({{"t", p.t}, {"s", p.s}, {"gap", p.gap}});
    j["profile_gap"] = g;
  }
  write_atomic(path, j.dump(2) + "\n");
}

void write_propcheck_report(const fs::path& path, std::span<const Prop21Entry> prop21,
                            std::span<const ComparisonEntry> comparison) {
  json p = json::array();
  bool all = true;
  for (const Prop21Entry& e : prop21) {
    all = all && e.result.pass;
    p.push_back({{"kernel", e.kernel},
                 {"rho", e.geometry.rho},
                 {"eps", e.geometry.eps},
                 {"l", e.geometry.l},
                 {"l0", e.geometry.l0},
                 {"k0", e.geometry.k0},
                 {"k1", e.geometry.k1},
                 {"k2", e.geometry.k2},
                 {"samples", e.result.samples},
                 {"min_margin", e.result.min_margin},
                 {"argmin", e.result.argmin},
                 {"pass", e.result.pass}});
  }
  json c = json::array();
  for (const ComparisonEntry& e : comparison) {
    const ComparisonReport& r = e.report;
    all = all && r.holds;
    json item = {{"label", e.label},
                 {"holds", r.holds},
                 {"steps", r.steps},
                 {"snapshots", r.snapshots},
                 {"max_excess", r.max_excess},
                 {"h_lo", r.h_lo},
                 {"h_hi", r.h_hi}};
    if (r.first_violation) {
      item["first_violation"] = {{"t", r.first_violation->t},
                                 {"quantity", r.first_violation->quantity},
                                 {"node", r.first_violation->node},
                                 {"excess", r.first_violation->excess}};
    } else {
      item["first_violation"] = nullptr;
    }
    c.push_back(item);
  }
  const json j = {{"prop21", p}, {"comparison", c}, {"all_passed", all}};
  write_atomic(path, j.dump(2) + "\n");
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
  for (const std::string& f : m.files) {
    std::error_code ec;
    const auto size = fs::file_size(dir / f, ec);
    if (ec || size == 0) throw IoError("manifest entry '" + (dir / f).string() + "' is missing or empty");
  }
  json j;
  j["config"] = json::parse(m.config_echo.empty() ? "{}" : m.config_echo);
  j["version"] = m.version;
  j["started"] = iso_time(m.started);
  j["finished"] = iso_time(m.finished);
  j["wall_seconds"] = std::chrono::duration<double>(m.finished - m.started).count();
  j["dt"] = m.dt ? json(*m.dt) : json(nullptr);
  j["final_h"] = m.final_h ? json(*m.final_h) : json(nullptr);
  j["termination"] = m.termination;
  j["files"] = m.files;
  write_atomic(dir / "manifest.json", j.dump(2) + "\n");
}

RunManifest write_outputs(const Trajectory& traj, const RunConfig& config, const fs::path& dir,
                          std::chrono::system_clock::time_point started,
                          const std::optional<FitReport>& fit) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  RunManifest m;
  m.config_echo = config_echo(config);
  m.started = started;
  m.dt = traj.dt;
  if (!traj.h_series.empty()) m.final_h = traj.h_series.back().second;
  m.termination = traj.termination;

  write_h_series(dir / "h_series.csv", traj.h_series);
  m.files.push_back("h_series.csv");
  write_snapshots(dir / "snapshots.jsonl", traj.snapshots);
  if (!traj.snapshots.empty()) m.files.push_back("snapshots.jsonl");
  if (fit) {
    write_fit_report(dir / "fit_report.json", *fit);
    m.files.push_back("fit_report.json");
  }
  m.finished = std::chrono::system_clock::now();
  write_manifest(dir, m);
  return m;
}

}  // namespace frontier
