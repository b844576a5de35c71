#include "frontier/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "frontier/errors.hpp"

namespace frontier {

namespace {

constexpr double kNegativityTol = 1e-12;

}  // namespace

std::string to_string(InitShape shape) {
  return shape == InitShape::CosineBump ? "COSINE_BUMP" : "CONSTANT_PLATEAU";
}

InitShape parse_init_shape(const std::string& name) {
  if (name == "COSINE_BUMP") return InitShape::CosineBump;
  if (name == "CONSTANT_PLATEAU") return InitShape::ConstantPlateau;
  throw ConfigError("unknown init.shape '" + name +
                    "' (expected COSINE_BUMP or CONSTANT_PLATEAU)");
}

double InitialData::profile(double x, double h0) const {
  if (x < 0.0 || x >= h0) return 0.0;
  if (shape == InitShape::CosineBump) {
    return std::cos(std::numbers::pi * x / (2.0 * h0));
  }
  return std::min(1.0, 4.0 * (h0 - x) / h0);
}

void ModelParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be a positive finite number");
    }
  };
  positive(d1, "d1");
  positive(d2, "d2");
  positive(mu1, "mu1");
  positive(mu2, "mu2");
  positive(h0, "h0");
  positive(reactions.a, "a");
  positive(reactions.b, "b");
  if (init.amp_u < 0.0 || init.amp_v < 0.0) {
    throw std::invalid_argument("initial amplitudes must be non-negative");
  }
}

double stable_dt(const ModelParams& p, double cfl) {
  if (!(cfl > 0.0)) throw std::invalid_argument("cfl must be positive");
  const auto& r = p.reactions;
  return cfl / (2.0 * (p.d1 + p.d2) + r.a + r.b + r.H.derivative(0.0) +
                r.G.derivative(0.0));
}

SimState initial_state(const ModelParams& p, double dx, std::size_t initial_capacity) {
  SimState s;
  s.h = p.h0;
  s.grid.dx = dx;
  const std::size_t n = nodes_covering(p.h0, dx);
  s.u.reserve(std::max(n, initial_capacity));
  s.v.reserve(std::max(n, initial_capacity));
  s.u.resize(n);
  s.v.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double phi = p.init.profile(s.grid.x(j), p.h0);
    s.u[j] = p.init.amp_u * phi;
    s.v[j] = p.init.amp_v * phi;
  }
  s.grid.n = n;
  s.grid.capacity = s.u.capacity();
  return s;
}

Stepper::Stepper(const ModelParams& p, double dx)
    : params_(p),
      conv_u_(p.k1, dx),
      conv_v_(p.k2, dx),
      flux_u_(p.k1, dx),
      flux_v_(p.k2, dx) {
  params_.validate();
}

double Stepper::flux(const SimState& state) {
  return params_.mu1 * flux_u_.weighted_tail_sum(state.u, state.h) +
         params_.mu2 * flux_v_.weighted_tail_sum(state.v, state.h);
}

void Stepper::step(SimState& state, double dt) {
  const std::size_t n = state.u.size();
  nu_.resize(n);
  nv_.resize(n);
  conv_u_.apply(state.u, state.h, nu_);
  conv_v_.apply(state.v, state.h, nv_);
  const double front_flux = flux(state);

  const auto& p = params_;
  const auto& r = p.reactions;
  const double h = state.h;
  for (std::size_t j = 0; j < n && state.grid.x(j) < h; ++j) {
    const double u = state.u[j];
    const double v = state.v[j];
    double un = u + dt * (p.d1 * (nu_[j] - u) - r.a * u + r.H(v));
    double vn = v + dt * (p.d2 * (nv_[j] - v) - r.b * v + r.G(u));
    if (!std::isfinite(un) || !std::isfinite(vn)) {
      std::ostringstream msg;
      msg << "non-finite field at t=" << state.t << ", x=" << state.grid.x(j);
      throw NumericalError(msg.str());
    }
    if (un < 0.0 || vn < 0.0) {
      if (un < -kNegativityTol || vn < -kNegativityTol) {
        std::ostringstream msg;
        msg << "negative field " << std::min(un, vn) << " at t=" << state.t
            << ", x=" << state.grid.x(j) << " (dt too large?)";
        throw NumericalError(msg.str());
      }
      un = std::max(un, 0.0);
      vn = std::max(vn, 0.0);
    }
    state.u[j] = un;
    state.v[j] = vn;
  }
  if (!std::isfinite(front_flux)) throw NumericalError("non-finite boundary flux");
  state.h = h + dt * front_flux;
  state.t += dt;
  extend_domain(state);
}

std::vector<double> geometric_output_times(double base, double factor, double t_end) {
  if (!(base > 0.0) || !(factor > 1.0)) {
    throw std::invalid_argument("snapshot base must be > 0 and factor > 1");
  }
  std::vector<double> times;
  for (double t = base; t < t_end; t *= factor) times.push_back(t);
  times.push_back(t_end);
  return times;
}

Trajectory run(const ModelParams& p, const RunSettings& settings) {
  if (!(settings.t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
  const auto started = std::chrono::steady_clock::now();
  const double dt = stable_dt(p, settings.cfl);

  Trajectory traj;
  traj.dt = dt;
  Stepper stepper(p, settings.dx);
  SimState state = initial_state(p, settings.dx, settings.initial_capacity);
  traj.h_series.emplace_back(state.t, state.h);

  std::vector<double> outputs;
  for (double t : settings.output_times) {
    if (t >= 0.0 && t <= settings.t_end) outputs.push_back(t);
  }
  std::sort(outputs.begin(), outputs.end());
  std::size_t next_output = 0;

  std::size_t k = 0;
  for (;;) {
    const bool at_end = state.t >= settings.t_end;
    while (next_output < outputs.size() &&
           (at_end || outputs[next_output] <= state.t + 0.5 * dt)) {
      traj.snapshots.push_back(state);
      ++next_output;
    }
    if (at_end) break;

    const double remaining = settings.t_end - state.t;
    const bool last = remaining <= dt * (1.0 + 1e-12);
    stepper.step(state, last ? remaining : dt);
    ++k;
    state.t = last ? settings.t_end : static_cast<double>(k) * dt;
    traj.h_series.emplace_back(state.t, state.h);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (elapsed > settings.max_seconds) {
      std::ostringstream msg;
      msg << "wall-clock budget of " << settings.max_seconds << " s exceeded at t=" << state.t;
      throw BudgetExceeded(msg.str());
    }
  }
  return traj;
}

}  // namespace frontier
