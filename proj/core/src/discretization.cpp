#include "frontier/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace frontier {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_smooth(std::size_t n) {
  for (std::size_t p : {2u, 3u, 5u, 7u}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

std::size_t smooth_size_at_least(std::size_t n) {
  std::size_t m = std::max<std::size_t>(n, 2);
  while (!is_smooth(m)) ++m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

std::size_t nodes_covering(double h, double dx) {
  if (!(h >= 0.0) || !(dx > 0.0)) throw std::invalid_argument("nodes_covering: need h >= 0, dx > 0");
  auto n = static_cast<std::size_t>(std::floor(h / dx)) + 1;
  while (static_cast<double>(n) * dx <= h) ++n;
  while (n > 1 && static_cast<double>(n - 1) * dx > h) --n;
  return n;
}

EndpointWeights endpoint_weights(std::size_t n, double dx, double h) {
  if (n == 0) return {0.0, 0.0};
  const double last_x = static_cast<double>(n - 1) * dx;
  const double delta = std::clamp((h - last_x) / dx, 0.0, 1.0);
  if (n == 1) return {0.5 * delta, 0.5 * delta};
  return {0.5, 0.5 + 0.5 * delta};
}

// ---------------------------------------------------------------------------

struct ConvolutionEngine::Impl {
  Kernel kernel;
  double dx;
  std::vector<double> samples;  // K_m = J(m dx)

  std::size_t size = 0;  // transform length N
  std::unique_ptr<double[], FftwFree> real_buf;
  std::unique_ptr<fftw_complex[], FftwFree> spec_buf;
  std::vector<std::complex<double>> kernel_hat;  // scaled by dx / N
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Impl(Kernel k, double step) : kernel(std::move(k)), dx(step) {}

  ~Impl() { destroy_plans(); }

  void destroy_plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    forward = backward = nullptr;
  }

  void ensure_samples(std::size_t count) {
    const std::size_t old = samples.size();
    if (count <= old) return;
    samples.resize(count);
    for (std::size_t m = old; m < count; ++m) {
      samples[m] = kernel(static_cast<double>(m) * dx);
    }
  }

  void ensure_size(std::size_t n) {
    if (size >= 2 * n - 1 && size > 0) return;
    // Grow geometrically so transforms are rebuilt O(log n) times.
    const std::size_t target = std::max(2 * n - 1, size + size / 4);
    const std::size_t N = smooth_size_at_least(target);
    destroy_plans();
    size = N;
    real_buf.reset(fftw_alloc_real(N));
    spec_buf.reset(fftw_alloc_complex(N / 2 + 1));
    {
      std::lock_guard lock(planner_mutex());
      forward = fftw_plan_dft_r2c_1d(static_cast<int>(N), real_buf.get(),
                                     spec_buf.get(), FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_1d(static_cast<int>(N), spec_buf.get(),
                                      real_buf.get(), FFTW_ESTIMATE);
    }
    ensure_samples(N / 2 + 1);
    for (std::size_t m = 0; m < N; ++m) {
      real_buf[m] = samples[std::min(m, N - m)];
    }
    fftw_execute(forward);
    kernel_hat.resize(N / 2 + 1);
    const double scale = dx / static_cast<double>(N);
    for (std::size_t k = 0; k < N / 2 + 1; ++k) {
      kernel_hat[k] = {spec_buf[k][0] * scale, spec_buf[k][1] * scale};
    }
  }
};

ConvolutionEngine::ConvolutionEngine(Kernel kernel, double dx)
    : impl_(std::make_unique<Impl>(std::move(kernel), dx)) {
  if (!(dx > 0.0)) throw std::invalid_argument("ConvolutionEngine: dx must be positive");
}
ConvolutionEngine::~ConvolutionEngine() = default;
ConvolutionEngine::ConvolutionEngine(ConvolutionEngine&&) noexcept = default;
ConvolutionEngine& ConvolutionEngine::operator=(ConvolutionEngine&&) noexcept = default;

const Kernel& ConvolutionEngine::kernel() const { return impl_->kernel; }
double ConvolutionEngine::dx() const { return impl_->dx; }
std::size_t ConvolutionEngine::fft_size() const { return impl_->size; }

void ConvolutionEngine::apply(std::span<const double> w, double h, std::span<double> out) {
  const std::size_t n = w.size();
  if (out.size() < n) throw std::invalid_argument("ConvolutionEngine::apply: output too short");
  if (n == 0) return;
  auto& s = *impl_;
  s.ensure_size(n);
  const EndpointWeights ew = endpoint_weights(n, s.dx, h);

  double* buf = s.real_buf.get();
  std::copy(w.begin(), w.end(), buf);
  buf[0] *= ew.first;
  if (n > 1) buf[n - 1] *= ew.last;
  std::fill(buf + n, buf + s.size, 0.0);

  fftw_execute(s.forward);
  auto* spec = reinterpret_cast<std::complex<double>*>(s.spec_buf.get());
  const std::size_t bins = s.size / 2 + 1;
  for (std::size_t k = 0; k < bins; ++k) spec[k] *= s.kernel_hat[k];
  fftw_execute(s.backward);
  std::copy(buf, buf + n, out.begin());
}

void ConvolutionEngine::apply_direct(std::span<const double> w, double h,
                                     std::span<double> out) {
  const std::size_t n = w.size();
  if (out.size() < n) throw std::invalid_argument("ConvolutionEngine::apply_direct: output too short");
  if (n == 0) return;
  auto& s = *impl_;
  s.ensure_samples(n);
  const EndpointWeights ew = endpoint_weights(n, s.dx, h);
  std::vector<double> weighted(w.begin(), w.end());
  weighted[0] *= ew.first;
  if (n > 1) weighted[n - 1] *= ew.last;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += s.samples[i > j ? i - j : j - i] * weighted[j];
    }
    out[i] = s.dx * acc;
  }
}

std::vector<double> nonlocal_apply(const Kernel& k, std::span<const double> w,
                                   const Grid& grid, double h) {
  ConvolutionEngine engine(k, grid.dx);
  std::vector<double> out(w.size());
  engine.apply(w, h, out);
  return out;
}

std::vector<double> nonlocal_apply_direct(const Kernel& k, std::span<const double> w,
                                          const Grid& grid, double h) {
  ConvolutionEngine engine(k, grid.dx);
  std::vector<double> out(w.size());
  engine.apply_direct(w, h, out);
  return out;
}

// ---------------------------------------------------------------------------

FluxAccumulator::FluxAccumulator(Kernel kernel, double dx)
    : kernel_(std::move(kernel)), dx_(dx) {}

double FluxAccumulator::node_tail(std::size_t m) {
  while (node_tails_.size() <= m) {
    node_tails_.push_back(kernel_.tail_mass(static_cast<double>(node_tails_.size()) * dx_));
  }
  return node_tails_[m];
}

double FluxAccumulator::weighted_tail_sum(std::span<const double> w, double h) {
  const std::size_t n = w.size();
  if (n == 0) return 0.0;
  const EndpointWeights ew = endpoint_weights(n, dx_, h);
  const double last_x = static_cast<double>(n - 1) * dx_;
  const double delta = std::clamp((h - last_x) / dx_, 0.0, 1.0);
  node_tail(n + 1);

  // m counts nodes back from the last one: z_j = (m + delta) dx.
  double acc = 0.0;
  const std::size_t near = std::min(n, kNearNodes);
  for (std::size_t m = 0; m < near; ++m) {
    const std::size_t j = n - 1 - m;
    const double wj = w[j];
    if (wj == 0.0 || (m == 0 && delta == 0.0)) continue;  // node on the front
    double weight = 1.0;
    if (j == n - 1) weight = ew.last;
    if (j == 0) weight = ew.first;
    acc += weight * wj * kernel_.tail_mass((static_cast<double>(m) + delta) * dx_);
  }
  const double* t = node_tails_.data();
  const double a = 1.0 - delta;
  double far = 0.0;
  for (std::size_t m = near; m < n; ++m) {
    const std::size_t j = n - 1 - m;
    far += w[j] * (a * t[m] + delta * t[m + 1]);
  }
  if (n > near) {
    // Node 0 carries the trapezoid half weight.
    const std::size_t m0 = n - 1;
    far -= (1.0 - ew.first) * w[0] * (a * t[m0] + delta * t[m0 + 1]);
  }
  return dx_ * (acc + far);
}

double boundary_flux(const SimState& state, const Kernel& k1, const Kernel& k2,
                     double mu1, double mu2) {
  const std::size_t n = state.u.size();
  if (n == 0) return 0.0;
  const double dx = state.grid.dx;
  const EndpointWeights ew = endpoint_weights(n, dx, state.h);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double z = state.h - state.grid.x(j);
    if (z <= 0.0) continue;
    double weight = 1.0;
    if (j == n - 1) weight = ew.last;
    if (j == 0) weight = ew.first;
    const double uj = state.u[j];
    const double vj = state.v[j];
    double term = 0.0;
    if (uj != 0.0) term += mu1 * uj * k1.tail_mass(z);
    if (vj != 0.0) term += mu2 * vj * k2.tail_mass(z);
    acc += weight * term;
  }
  return dx * acc;
}

void extend_domain(SimState& state) {
  const double dx = state.grid.dx;
  const std::size_t target = nodes_covering(state.h, dx);
  if (target > state.u.size()) {
    state.u.resize(target, 0.0);
    state.v.resize(target, 0.0);
  }
  state.grid.n = state.u.size();
  state.grid.capacity = state.u.capacity();
  for (std::size_t j = state.grid.n; j-- > 0;) {
    if (state.grid.x(j) < state.h) break;
    state.u[j] = 0.0;
    state.v[j] = 0.0;
  }
}

}  // namespace frontier
