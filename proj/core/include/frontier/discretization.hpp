#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "frontier/kernels.hpp"

namespace frontier {

// Uniform nodes x_j = j * dx, j = 0..n-1. During a run the last node
// satisfies x_{n-1} <= h < x_{n-1} + dx.
struct Grid {
  double dx = 0.25;
  std::size_t n = 0;
  std::size_t capacity = 0;

  double x(std::size_t j) const { return static_cast<double>(j) * dx; }
};

// Number of nodes needed so that x_{n-1} <= h < x_{n-1} + dx.
std::size_t nodes_covering(double h, double dx);

struct SimState {
  double t = 0.0;
  double h = 0.0;
  Grid grid;
  std::vector<double> u;  // bacteria
  std::vector<double> v;  // infective humans
};

// Quadrature weights on [0, h]: trapezoid at node 0, and at the last node
// the half cell plus the partial cell [x_{n-1}, h] over which the field
// falls linearly to its Dirichlet zero at h. Interior weights are 1.
struct EndpointWeights {
  double first = 0.5;
  double last = 0.5;
};
EndpointWeights endpoint_weights(std::size_t n, double dx, double h);

// Evaluates dx * sum_j K_{i-j} w_j omega_j with K_m = J(m dx) for one
// (kernel, dx) pair. Kernel samples and their transforms are cached and
// extended as the domain grows. Not thread-safe; one engine per run.
class ConvolutionEngine {
 public:
  ConvolutionEngine(Kernel kernel, double dx);
  ~ConvolutionEngine();
  ConvolutionEngine(ConvolutionEngine&&) noexcept;
  ConvolutionEngine& operator=(ConvolutionEngine&&) noexcept;
  ConvolutionEngine(const ConvolutionEngine&) = delete;
  ConvolutionEngine& operator=(const ConvolutionEngine&) = delete;

  const Kernel& kernel() const;
  double dx() const;

  // FFT path on a zero-padded buffer of length >= 2n - 1.
  void apply(std::span<const double> w, double h, std::span<double> out);

  // O(n^2) direct sum with identical weights; the oracle for apply().
  void apply_direct(std::span<const double> w, double h, std::span<double> out);

  // Current transform length (0 before the first apply()).
  std::size_t fft_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<double> nonlocal_apply(const Kernel& k, std::span<const double> w,
                                   const Grid& grid, double h);
std::vector<double> nonlocal_apply_direct(const Kernel& k,
                                          std::span<const double> w,
                                          const Grid& grid, double h);

// dx * sum_j omega_j w_j tail(h - x_j): the inner integral over [h, inf)
// collapsed through int_h^inf J(x - y) dy = tail(h - x).
// Node tails tail(m dx) are cached; nodes within kNearNodes of the front
// use the kernel's tail directly, farther ones interpolate linearly
// between cached node values.
class FluxAccumulator {
 public:
  static constexpr std::size_t kNearNodes = 64;

  FluxAccumulator(Kernel kernel, double dx);

  double weighted_tail_sum(std::span<const double> w, double h);

 private:
  double node_tail(std::size_t m);

  Kernel kernel_;
  double dx_;
  std::vector<double> node_tails_;
};

// h'(t) for the current state, evaluated node by node with the kernels'
// tail_mass. Reference path for the cached accumulator.
double boundary_flux(const SimState& state, const Kernel& k1, const Kernel& k2,
                     double mu1, double mu2);

// Appends zero nodes until x_{n-1} <= h < x_{n-1} + dx and zeroes any
// node at or beyond h.
void extend_domain(SimState& state);

}  // namespace frontier
