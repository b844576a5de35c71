#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "frontier/evolution.hpp"
#include "frontier/kernels.hpp"

namespace frontier {

// Geometry of the ramp xi(x) = min{1, ((k2 - x)/k1)^rho}, zero for x >= k2,
// together with the kernel whose convolution against it is checked on
// [k0, k2].
struct Prop21Case {
  Kernel kernel = Kernel::make(KernelParams{});
  double l = 1.0;
  double rho = 1.0;
  double eps = 0.1;
  double k0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double l0 = 0.0;

  // Throws std::invalid_argument unless rho >= 1, eps in (0,1), l0 > 0,
  // k2 > k1 > l, k1 > k0 and k2 - k1 > 2 k0.
  void validate() const;
};

// l0 = half_width(1 - eps/2) unless given, k0 = 2^(rho+1) rho l0 / eps.
double prop21_k0(double rho, double eps, double l0);

// Explicit geometry; l0 defaults to the kernel's half-width.
Prop21Case make_prop21_case(const Kernel& kernel, double l, double rho, double eps,
                            double k1, double k2, std::optional<double> l0 = std::nullopt);

// Standard geometry: l = 1, k1 = 1.5 k0, k2 = 5 k0 + k1.
Prop21Case standard_prop21_case(const Kernel& kernel, double rho, double eps);

double ramp_profile(const Prop21Case& c, double x);

// int_l^{k2} J(x - y) xi(y) dy by adaptive quadrature.
double ramp_convolution(const Prop21Case& c, double x);

struct Prop21Result {
  bool pass = false;
  double min_margin = 0.0;
  double argmin = 0.0;
  std::size_t samples = 0;
};

// Samples x over [k0, k2]: half uniformly, half clustered geometrically
// around k2-k1 +- l0, k2-k1, k2-l0 and k2. margin = LHS - (1-eps) xi(x);
// pass iff min margin >= -1e-10.
Prop21Result check_prop21(const Prop21Case& c, std::size_t n_samples);

struct Prop21Entry {
  std::string kernel;
  Prop21Case geometry;
  Prop21Result result;
};

// {COMPACT(R=1), POWERLAW(1.5), CRITLOG(0)} x rho {1,2,5} x eps {0.05,0.1,0.2}
// in the standard geometry.
std::vector<Prop21Entry> prop21_grid_sweep(std::size_t n_samples = 200);

struct ComparisonViolation {
  double t = 0.0;
  std::string quantity;  // "h", "u" or "v"
  std::size_t node = 0;
  double excess = 0.0;   // lo - hi
};

struct ComparisonReport {
  bool holds = true;
  std::size_t steps = 0;
  std::size_t snapshots = 0;
  double max_excess = 0.0;  // max over checks of lo - hi (<= 0 when ordered)
  double h_lo = 0.0;
  double h_hi = 0.0;
  std::optional<ComparisonViolation> first_violation;
};

struct ComparisonSettings {
  double t_end = 50.0;
  double dx = 0.25;
  double cfl = 0.5;
  std::vector<double> output_times;  // empty: every 10% of t_end
  double tol = 1e-10;
};

// Steps both models in lockstep with a shared dt. h is compared after every
// step and (u, v) nodewise at each output time. The models must agree in
// everything except the initial amplitudes, with lo <= hi
// (std::invalid_argument otherwise).
ComparisonReport comparison_harness(const ModelParams& p_lo, const ModelParams& p_hi,
                                    const ComparisonSettings& settings);

// Random supercritical parameters with ordered random amplitudes.
std::pair<ModelParams, ModelParams> random_ordered_pair(std::mt19937_64& rng);

}  // namespace frontier
