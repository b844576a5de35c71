#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "frontier/evolution.hpp"
#include "frontier/steadystate.hpp"

namespace frontier {

// Fully validated run configuration. Keys (flat or nested JSON):
//   kernel1.{family,gamma,beta,alpha,R}, kernel2.*,
//   reaction.{a,b,p,q,r,s}        H(v) = p v/(1+q v), G(u) = r u/(1+s u)
//   grid.{dx,initial_capacity}
//   run.{t_end,cfl,output_times,snapshot_base,snapshot_factor,max_seconds}
//   init.{shape,amp_u,amp_v}, model.{d1,d2,mu1,mu2,h0},
//   steady.{L,tol}, seed
struct RunConfig {
  ModelParams model;
  RunSettings run;            // output_times resolved from the snapshot rule when not given
  bool explicit_output_times = false;
  double snapshot_base = 1.0;
  double snapshot_factor = 2.0;
  SteadyOptions steady;       // dx mirrors grid.dx
  std::uint64_t seed = 0;
};

RunConfig default_config();

// Empty text or {} yields the defaults. Unknown keys, wrong types and
// out-of-range values throw ConfigError naming the key.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);

// Effective configuration as a flat JSON object with sorted keys. Parsing
// the echo reproduces the same echo byte for byte.
std::string config_echo(const RunConfig& c);

// Applies flat or nested overrides (a JSON object) on top of `base`.
RunConfig with_overrides(const RunConfig& base, const std::string& overrides_json);

}  // namespace frontier
