#pragma once

#include <functional>

namespace frontier::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

using Integrand = std::function<double(double)>;

// Adaptive 15-point Gauss-Kronrod on [a, b]; b may be +infinity.
// Throws NumericalError if the error estimate exceeds
// rel_tol * max(|value|, abs_floor).
Result integrate(const Integrand& f, double a, double b,
                 double rel_tol = 1e-12, double abs_floor = 1e-300);

// Same as integrate() but sums over the pieces delimited by `breaks`
// (sorted, deduplicated and clipped to [a, b] internally).
Result integrate_pieces(const Integrand& f, double a, double b,
                        std::initializer_list<double> breaks,
                        double rel_tol = 1e-12, double abs_floor = 1e-300);

}  // namespace frontier::quad
