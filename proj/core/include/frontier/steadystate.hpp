#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "frontier/evolution.hpp"

namespace frontier {

// Discretized half-line profile (U, V) on nodes x_j = j dx, j = 0..N,
// x_N = L, closed at the far field by the equilibrium (u*, v*).
struct SteadyProfile {
  double L = 0.0;
  double dx = 0.0;
  std::vector<double> U;
  std::vector<double> V;
  double u_star = 0.0;
  double v_star = 0.0;
  double residual = 0.0;      // sup-norm defect from direct back-substitution
  std::size_t iterations = 0;
  double closure_tail = 0.0;  // max over kernels of tail(L/2)

  double x(std::size_t j) const { return static_cast<double>(j) * dx; }
};

struct SteadyOptions {
  double L = 400.0;
  double tol = 1e-10;
  double dx = 0.25;
  std::size_t max_iterations = 100000;
};

// Called after every sweep with (iteration, U, V).
using SteadyObserver =
    std::function<void(std::size_t, std::span<const double>, std::span<const double>)>;

// Monotone iteration from the constant upper solution
//   U <- [d1 (int_0^L J1(x-y) U dy + u* tail1(L-x)) + H(V)] / (d1 + a)
// and symmetrically for V, until the sup-norm change is <= tol.
// Requires R0 > 1 (std::invalid_argument otherwise). Throws NumericalError
// on a non-monotone iterate or when max_iterations is exceeded.
SteadyProfile solve_steady(const ModelParams& p, const SteadyOptions& opts,
                           const SteadyObserver& observer = {});

// Sup-norm defect of the discrete half-line system evaluated with direct
// O(N^2) sums, independent of the FFT path used by the solver.
double steady_defect(const ModelParams& p, const SteadyProfile& s);

}  // namespace frontier
