#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frontier/analysis.hpp"
#include "frontier/config.hpp"
#include "frontier/evolution.hpp"
#include "frontier/propcheck.hpp"
#include "frontier/steadystate.hpp"

namespace frontier {

// Disk failures, with the offending path in the message.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string version_string();

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

// "t,h" header, one row per sample.
void write_h_series(const std::filesystem::path& path, std::span<const Sample> series);
std::vector<Sample> read_h_series(const std::filesystem::path& path);

// One JSON object per line: t, h, dx, u, v.
void write_snapshots(const std::filesystem::path& path, std::span<const SimState> snapshots);
std::vector<SimState> read_snapshots(const std::filesystem::path& path);

// Columns x,U,V.
void write_steady_profile(const std::filesystem::path& path, const SteadyProfile& s);

struct FitReport {
  RateFit fit;
  std::optional<RateLaw> predicted;
  std::optional<SpeedEstimate> speed;
  std::vector<GapPoint> profile_gap;
  std::string source;  // input series path or run directory
};
void write_fit_report(const std::filesystem::path& path, const FitReport& report);

struct ComparisonEntry {
  std::string label;
  ComparisonReport report;
};
void write_propcheck_report(const std::filesystem::path& path, std::span<const Prop21Entry> prop21,
                            std::span<const ComparisonEntry> comparison);

struct RunManifest {
  std::string config_echo;
  std::string version = version_string();
  std::chrono::system_clock::time_point started{};
  std::chrono::system_clock::time_point finished{};
  std::optional<double> dt;
  std::optional<double> final_h;
  std::string termination = "completed";
  std::vector<std::string> files;  // relative to the run directory
};

// Verifies every listed file exists and is non-empty, then writes
// manifest.json through a temporary file and a rename.
void write_manifest(const std::filesystem::path& dir, const RunManifest& m);

// h_series.csv, snapshots.jsonl (when there are snapshots), fit_report.json
// (when given) and finally manifest.json.
RunManifest write_outputs(const Trajectory& traj, const RunConfig& config,
                          const std::filesystem::path& dir,
                          std::chrono::system_clock::time_point started,
                          const std::optional<FitReport>& fit = std::nullopt);

}  // namespace frontier
