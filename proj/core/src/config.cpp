#include "frontier/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "frontier/errors.hpp"
#include "frontier/kernels.hpp"
#include "frontier/reactions.hpp"

namespace frontier {

namespace {

using nlohmann::json;

void flatten(const json& node, const std::string& prefix, json& out) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else {
      if (out.contains(key)) throw ConfigError("duplicate config key '" + key + "'");
      out[key] = *it;
    }
  }
}

json parse_flat(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config document: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  json flat = json::object();
  flatten(doc, "", flat);
  return flat;
}

class Reader {
 public:
  explicit Reader(const json& flat) : flat_(flat) {}

  double number(const std::string& key, double fallback) {
    used_.insert(key);
    if (!flat_.contains(key)) return fallback;
    const json& v = flat_.at(key);
    if (!v.is_number()) throw ConfigError(key + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key + ": must be finite");
    return d;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
    used_.insert(key);
    if (!flat_.contains(key)) return fallback;
    const json& v = flat_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    throw ConfigError(key + ": expected a non-negative integer");
  }

  std::string string(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    if (!flat_.contains(key)) return fallback;
    const json& v = flat_.at(key);
    if (!v.is_string()) throw ConfigError(key + ": expected a string");
    return v.get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    used_.insert(key);
    if (!flat_.contains(key)) return std::nullopt;
    const json& v = flat_.at(key);
    if (!v.is_array()) throw ConfigError(key + ": expected an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        throw ConfigError(key + ": expected an array of finite numbers");
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  void reject_unknown() const {
    for (auto it = flat_.begin(); it != flat_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
    }
  }

 private:
  const json& flat_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& key, const std::string& range, double got) {
  if (!ok) {
    std::ostringstream msg;
    msg << key << " must be " << range << ", got " << got;
    throw ConfigError(msg.str());
  }
}

KernelParams read_kernel(Reader& r, const std::string& prefix, const KernelParams& d) {
  KernelParams k;
  const std::string family = r.string(prefix + ".family", to_string(d.family));
  try {
    k.family = parse_kernel_family(family);
  } catch (const std::exception& e) {
    throw ConfigError(prefix + ".family: " + e.what());
  }
  k.gamma = r.number(prefix + ".gamma", d.gamma);
  k.beta = r.number(prefix + ".beta", d.beta);
  k.alpha = r.number(prefix + ".alpha", d.alpha);
  k.R = r.number(prefix + ".R", d.R);
  return k;
}

Kernel build_kernel(const KernelParams& k, const std::string& prefix) {
  try {
    return Kernel::make(k);
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + ": " + e.what());
  }
}

RunConfig from_flat(const json& flat) {
  const RunConfig d = default_config();
  Reader r(flat);
  RunConfig c = d;

  const KernelParams kp1 = read_kernel(r, "kernel1", d.model.k1.params());
  const KernelParams kp2 = read_kernel(r, "kernel2", d.model.k2.params());

  ReactionSpec& rx = c.model.reactions;
  rx.a = r.number("reaction.a", d.model.reactions.a);
  rx.b = r.number("reaction.b", d.model.reactions.b);
  rx.H.rate = r.number("reaction.p", d.model.reactions.H.rate);
  rx.H.saturation = r.number("reaction.q", d.model.reactions.H.saturation);
  rx.G.rate = r.number("reaction.r", d.model.reactions.G.rate);
  rx.G.saturation = r.number("reaction.s", d.model.reactions.G.saturation);

  c.run.dx = r.number("grid.dx", d.run.dx);
  c.run.initial_capacity = r.integer("grid.initial_capacity", d.run.initial_capacity);

  c.run.t_end = r.number("run.t_end", d.run.t_end);
  c.run.cfl = r.number("run.cfl", d.run.cfl);
  c.run.max_seconds = r.number("run.max_seconds", d.run.max_seconds);
  c.snapshot_base = r.number("run.snapshot_base", d.snapshot_base);
  c.snapshot_factor = r.number("run.snapshot_factor", d.snapshot_factor);
  const auto outputs = r.numbers("run.output_times");

  const std::string shape = r.string("init.shape", to_string(d.model.init.shape));
  try {
    c.model.init.shape = parse_init_shape(shape);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("init.shape: ") + e.what());
  }
  c.model.init.amp_u = r.number("init.amp_u", d.model.init.amp_u);
  c.model.init.amp_v = r.number("init.amp_v", d.model.init.amp_v);

  c.model.d1 = r.number("model.d1", d.model.d1);
  c.model.d2 = r.number("model.d2", d.model.d2);
  c.model.mu1 = r.number("model.mu1", d.model.mu1);
  c.model.mu2 = r.number("model.mu2", d.model.mu2);
  c.model.h0 = r.number("model.h0", d.model.h0);

  c.steady.L = r.number("steady.L", d.steady.L);
  c.steady.tol = r.number("steady.tol", d.steady.tol);
  c.seed = r.integer("seed", d.seed);

  r.reject_unknown();

  for (const char* key : {"reaction.a", "reaction.b", "reaction.p", "reaction.q", "reaction.r",
                          "reaction.s"}) {
    const double v = r.number(key, 1.0);
    require(v > 0.0, key, "> 0", v);
  }
  require(c.model.d1 > 0.0, "model.d1", "> 0", c.model.d1);
  require(c.model.d2 > 0.0, "model.d2", "> 0", c.model.d2);
  require(c.model.mu1 > 0.0, "model.mu1", "> 0", c.model.mu1);
  require(c.model.mu2 > 0.0, "model.mu2", "> 0", c.model.mu2);
  require(c.model.h0 > 0.0, "model.h0", "> 0", c.model.h0);
  require(c.model.init.amp_u >= 0.0, "init.amp_u", ">= 0", c.model.init.amp_u);
  require(c.model.init.amp_v >= 0.0, "init.amp_v", ">= 0", c.model.init.amp_v);
  require(c.run.dx > 0.0 && c.run.dx <= c.model.h0, "grid.dx", "in (0, model.h0]", c.run.dx);
  require(c.run.t_end >= 0.0, "run.t_end", ">= 0", c.run.t_end);
  require(c.run.cfl > 0.0 && c.run.cfl <= 1.0, "run.cfl", "in (0, 1]", c.run.cfl);
  require(c.run.max_seconds > 0.0, "run.max_seconds", "> 0", c.run.max_seconds);
  require(c.snapshot_base > 0.0, "run.snapshot_base", "> 0", c.snapshot_base);
  require(c.snapshot_factor > 1.0, "run.snapshot_factor", "> 1", c.snapshot_factor);
  require(c.steady.L >= 2.0 * c.run.dx, "steady.L", ">= 2 grid.dx", c.steady.L);
  require(c.steady.tol > 0.0, "steady.tol", "> 0", c.steady.tol);

  c.model.k1 = build_kernel(kp1, "kernel1");
  c.model.k2 = build_kernel(kp2, "kernel2");

  const HypothesisReport hyp = validate_reactions(rx);
  if (!hyp.all_passed()) {
    std::string failed;
    for (const auto& chk : hyp.checks) {
      if (!chk.passed) failed += (failed.empty() ? "" : "; ") + chk.name + " (" + chk.detail + ")";
    }
    throw ConfigError("reaction: hypothesis check failed: " + failed);
  }

  if (outputs) {
    for (double t : *outputs) require(t >= 0.0, "run.output_times", "entries >= 0", t);
    c.run.output_times = *outputs;
    std::sort(c.run.output_times.begin(), c.run.output_times.end());
    c.explicit_output_times = true;
  } else {
    c.run.output_times = geometric_output_times(c.snapshot_base, c.snapshot_factor, c.run.t_end);
  }
  c.steady.dx = c.run.dx;
  return c;
}

json kernel_echo(const KernelParams& k, const std::string& prefix, json& out) {
  out[prefix + ".family"] = to_string(k.family);
  out[prefix + ".gamma"] = k.gamma;
  out[prefix + ".beta"] = k.beta;
  out[prefix + ".alpha"] = k.alpha;
  out[prefix + ".R"] = k.R;
  return out;
}

json echo_object(const RunConfig& c) {
  json o = json::object();
  kernel_echo(c.model.k1.params(), "kernel1", o);
  kernel_echo(c.model.k2.params(), "kernel2", o);
  o["reaction.a"] = c.model.reactions.a;
  o["reaction.b"] = c.model.reactions.b;
  o["reaction.p"] = c.model.reactions.H.rate;
  o["reaction.q"] = c.model.reactions.H.saturation;
  o["reaction.r"] = c.model.reactions.G.rate;
  o["reaction.s"] = c.model.reactions.G.saturation;
  o["grid.dx"] = c.run.dx;
  o["grid.initial_capacity"] = c.run.initial_capacity;
  o["run.t_end"] = c.run.t_end;
  o["run.cfl"] = c.run.cfl;
  o["run.max_seconds"] = c.run.max_seconds;
  o["run.snapshot_base"] = c.snapshot_base;
  o["run.snapshot_factor"] = c.snapshot_factor;
  if (c.explicit_output_times) o["run.output_times"] = c.run.output_times;
  o["init.shape"] = to_string(c.model.init.shape);
  o["init.amp_u"] = c.model.init.amp_u;
  o["init.amp_v"] = c.model.init.amp_v;
  o["model.d1"] = c.model.d1;
  o["model.d2"] = c.model.d2;
  o["model.mu1"] = c.model.mu1;
  o["model.mu2"] = c.model.mu2;
  o["model.h0"] = c.model.h0;
  o["steady.L"] = c.steady.L;
  o["steady.tol"] = c.steady.tol;
  o["seed"] = c.seed;
  return o;
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.run.output_times = geometric_output_times(c.snapshot_base, c.snapshot_factor, c.run.t_end);
  c.steady.dx = c.run.dx;
  return c;
}

RunConfig parse_config_text(const std::string& text) { return from_flat(parse_flat(text)); }

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_echo(const RunConfig& c) { return echo_object(c).dump(); }

RunConfig with_overrides(const RunConfig& base, const std::string& overrides_json) {
  json flat = echo_object(base);
  const json extra = parse_flat(overrides_json);
  for (auto it = extra.begin(); it != extra.end(); ++it) flat[it.key()] = *it;
  return from_flat(flat);
}

}  // namespace frontier
