#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontier/discretization.hpp"
#include "frontier/errors.hpp"
#include "frontier/kernels.hpp"
#include "frontier/reactions.hpp"

namespace frontier {

enum class InitShape { CosineBump, ConstantPlateau };

std::string to_string(InitShape shape);
InitShape parse_init_shape(const std::string& name);

// u0(x) = amp_u * phi(x), v0(x) = amp_v * phi(x) on [0, h0] where phi is
// cos(pi x / (2 h0)) for the bump, and for the plateau 1 on [0, 3h0/4]
// falling linearly to 0 at h0.
struct InitialData {
  InitShape shape = InitShape::CosineBump;
  double amp_u = 0.5;
  double amp_v = 0.5;

  double profile(double x, double h0) const;
};

struct ModelParams {
  double d1 = 1.0;
  double d2 = 1.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double h0 = 5.0;
  Kernel k1 = Kernel::make(KernelParams{});
  Kernel k2 = Kernel::make(KernelParams{});
  ReactionSpec reactions;
  InitialData init;

  // Throws std::invalid_argument when a rate is non-positive.
  void validate() const;
};

// cfl / (2(d1 + d2) + a + b + H'(0) + G'(0)).
double stable_dt(const ModelParams& p, double cfl);

SimState initial_state(const ModelParams& p, double dx,
                       std::size_t initial_capacity = 0);

// Forward Euler for the coupled system. Holds the per-run convolution and
// flux caches; one Stepper per trajectory.
class Stepper {
 public:
  Stepper(const ModelParams& p, double dx);

  // Fields at nodes x_j < h advance with the pre-step nonlocal terms; h
  // advances by dt times the pre-step boundary flux; new nodes enter as
  // zeros. Throws NumericalError on NaN/Inf or negativity below -1e-12.
  void step(SimState& state, double dt);

  // Boundary flux of the given state through the cached accumulators.
  double flux(const SimState& state);

  const ModelParams& params() const { return params_; }

 private:
  ModelParams params_;
  ConvolutionEngine conv_u_;
  ConvolutionEngine conv_v_;
  FluxAccumulator flux_u_;
  FluxAccumulator flux_v_;
  std::vector<double> nu_;
  std::vector<double> nv_;
};

struct RunSettings {
  double t_end = 100.0;
  double dx = 0.25;
  double cfl = 0.5;
  std::vector<double> output_times;  // sorted; times beyond t_end ignored
  double max_seconds = 3600.0;
  std::size_t initial_capacity = 0;
};

// Thrown by run() when settings.max_seconds is exhausted.
class BudgetExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct Trajectory {
  std::vector<std::pair<double, double>> h_series;  // (t, h) per step
  std::vector<SimState> snapshots;
  double dt = 0.0;
  std::string termination = "completed";
};

// Geometric output times base * factor^k <= t_end, plus t_end itself.
std::vector<double> geometric_output_times(double base, double factor, double t_end);

// Steps to t_end with dt = stable_dt (the last step is shortened to land on
// t_end). Snapshots are taken at the step nearest each output time.
Trajectory run(const ModelParams& p, const RunSettings& settings);

}  // namespace frontier
