#include "frontier/propcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "frontier/quadrature.hpp"

namespace frontier {

void Prop21Case::validate() const {
  std::ostringstream why;
  if (!(rho >= 1.0) || !std::isfinite(rho)) why << "rho must be >= 1; ";
  if (!(eps > 0.0 && eps < 1.0)) why << "eps must lie in (0, 1); ";
  if (!(l0 > 0.0) || !std::isfinite(l0)) why << "l0 must be positive; ";
  if (!(k2 > k1 && k1 > l)) why << "need k2 > k1 > l; ";
  if (!(k1 > k0)) why << "need k1 > k0; ";
  if (!(k2 - k1 > 2.0 * k0)) why << "need k2 - k1 > 2 k0; ";
  const std::string msg = why.str();
  if (!msg.empty()) throw std::invalid_argument("Prop21Case: " + msg.substr(0, msg.size() - 2));
}

double prop21_k0(double rho, double eps, double l0) {
  return std::pow(2.0, rho + 1.0) * rho * l0 / eps;
}

Prop21Case make_prop21_case(const Kernel& kernel, double l, double rho, double eps, double k1,
                            double k2, std::optional<double> l0) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("Prop21Case: eps must lie in (0, 1)");
  Prop21Case c;
  c.kernel = kernel;
  c.l = l;
  c.rho = rho;
  c.eps = eps;
  c.l0 = l0 ? *l0 : kernel.half_width(1.0 - 0.5 * eps);
  c.k0 = prop21_k0(rho, eps, c.l0);
  c.k1 = k1;
  c.k2 = k2;
  c.validate();
  return c;
}

Prop21Case standard_prop21_case(const Kernel& kernel, double rho, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("Prop21Case: eps must lie in (0, 1)");
  const double l0 = kernel.half_width(1.0 - 0.5 * eps);
  const double k0 = prop21_k0(rho, eps, l0);
  const double k1 = 1.5 * k0;
  return make_prop21_case(kernel, 1.0, rho, eps, k1, 5.0 * k0 + k1, l0);
}

double ramp_profile(const Prop21Case& c, double x) {
  if (x >= c.k2) return 0.0;
  return std::min(1.0, std::pow((c.k2 - x) / c.k1, c.rho));
}

double ramp_convolution(const Prop21Case& c, double x) {
  std::vector<double> cuts{c.l, c.k2, c.k2 - c.k1, x};
  const double R = c.kernel.support_radius();
  if (std::isfinite(R)) {
    cuts.push_back(x - R);
    cuts.push_back(x + R);
  } else {
    // Heavy tails: split the cusp neighbourhood geometrically.
    for (double d = 1.0; d < c.k2; d *= 10.0) {
      cuts.push_back(x - d);
      cuts.push_back(x + d);
    }
  }
  std::vector<double> pts;
  for (double v : cuts) {
    if (v >= c.l && v <= c.k2) pts.push_back(v);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const auto f = [&](double y) { return c.kernel(x - y) * ramp_profile(c, y); };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (std::isfinite(R) && (pts[i + 1] <= x - R || pts[i] >= x + R)) continue;
    sum += quad::integrate(f, pts[i], pts[i + 1], 1e-12, 1e-15).value;
  }
  return sum;
}

Prop21Result check_prop21(const Prop21Case& c, std::size_t n_samples) {
  c.validate();
  if (n_samples < 16) throw std::invalid_argument("check_prop21: need at least 16 samples");

  std::vector<double> xs;
  const std::size_t n_uniform = n_samples / 2;
  for (std::size_t i = 0; i < n_uniform; ++i) {
    xs.push_back(c.k0 + (c.k2 - c.k0) * static_cast<double>(i) / static_cast<double>(n_uniform - 1));
  }
  const double b = c.k2 - c.k1;
  const std::vector<double> anchors{b - c.l0, b, b + c.l0, c.k2 - c.l0, c.k2};
  const std::size_t per_side = std::max<std::size_t>(1, (n_samples - n_uniform) / (2 * anchors.size()));
  for (double a : anchors) {
    xs.push_back(a);
    for (std::size_t j = 0; j < per_side; ++j) {
      const double off = c.l0 * std::pow(10.0, -3.0 * static_cast<double>(j) / static_cast<double>(per_side));
      xs.push_back(a - off);
      xs.push_back(a + off);
    }
  }

  Prop21Result r;
  r.min_margin = std::numeric_limits<double>::infinity();
  for (double x : xs) {
    if (x < c.k0 || x > c.k2) continue;
    const double margin = ramp_convolution(c, x) - (1.0 - c.eps) * ramp_profile(c, x);
    ++r.samples;
    if (margin < r.min_margin) {
      r.min_margin = margin;
      r.argmin = x;
    }
  }
  r.pass = r.min_margin >= -1e-10;
  return r;
}

namespace {

void require_same_model(const ModelParams& a, const ModelParams& b) {
  const bool same = a.d1 == b.d1 && a.d2 == b.d2 && a.mu1 == b.mu1 && a.mu2 == b.mu2 &&
                    a.h0 == b.h0 && a.k1.params() == b.k1.params() &&
                    a.k2.params() == b.k2.params() && a.reactions.a == b.reactions.a &&
                    a.reactions.b == b.reactions.b && a.reactions.H.rate == b.reactions.H.rate &&
                    a.reactions.H.saturation == b.reactions.H.saturation &&
                    a.reactions.G.rate == b.reactions.G.rate &&
                    a.reactions.G.saturation == b.reactions.G.saturation &&
                    a.init.shape == b.init.shape;
  if (!same) {
    throw std::invalid_argument("comparison_harness: models may differ only in initial amplitudes");
  }
  if (!(a.init.amp_u <= b.init.amp_u && a.init.amp_v <= b.init.amp_v)) {
    throw std::invalid_argument("comparison_harness: initial amplitudes must be ordered lo <= hi");
  }
}

}  // namespace

ComparisonReport comparison_harness(const ModelParams& p_lo, const ModelParams& p_hi,
                                    const ComparisonSettings& settings) {
  require_same_model(p_lo, p_hi);
  if (!(settings.t_end > 0.0)) throw std::invalid_argument("comparison_harness: t_end must be positive");

  std::vector<double> outputs = settings.output_times;
  if (outputs.empty()) {
    for (int i = 1; i <= 10; ++i) outputs.push_back(settings.t_end * i / 10.0);
  }
  std::sort(outputs.begin(), outputs.end());

  const double dt = stable_dt(p_lo, settings.cfl);
  Stepper s_lo(p_lo, settings.dx);
  Stepper s_hi(p_hi, settings.dx);
  SimState lo = initial_state(p_lo, settings.dx);
  SimState hi = initial_state(p_hi, settings.dx);

  ComparisonReport rep;
  rep.max_excess = -std::numeric_limits<double>::infinity();
  auto record = [&](double excess, const char* what, std::size_t node) {
    rep.max_excess = std::max(rep.max_excess, excess);
    if (excess > settings.tol && !rep.first_violation) {
      rep.holds = false;
      rep.first_violation = ComparisonViolation{lo.t, what, node, excess};
    }
  };
  auto compare_fields = [&] {
    const std::size_t n = std::max(lo.u.size(), hi.u.size());
    for (std::size_t j = 0; j < n; ++j) {
      const double ul = j < lo.u.size() ? lo.u[j] : 0.0;
      const double uh = j < hi.u.size() ? hi.u[j] : 0.0;
      const double vl = j < lo.v.size() ? lo.v[j] : 0.0;
      const double vh = j < hi.v.size() ? hi.v[j] : 0.0;
      record(ul - uh, "u", j);
      record(vl - vh, "v", j);
    }
    ++rep.snapshots;
  };

  record(lo.h - hi.h, "h", 0);
  std::size_t next = 0;
  std::size_t k = 0;
  for (;;) {
    const bool at_end = lo.t >= settings.t_end;
    while (next < outputs.size() && (at_end || outputs[next] <= lo.t + 0.5 * dt)) {
      compare_fields();
      ++next;
    }
    if (at_end) break;
    const double remaining = settings.t_end - lo.t;
    const bool last = remaining <= dt * (1.0 + 1e-12);
    const double step = last ? remaining : dt;
    s_lo.step(lo, step);
    s_hi.step(hi, step);
    ++k;
    lo.t = hi.t = last ? settings.t_end : static_cast<double>(k) * dt;
    ++rep.steps;
    record(lo.h - hi.h, "h", 0);
  }
  rep.h_lo = lo.h;
  rep.h_hi = hi.h;
  return rep;
}

std::pair<ModelParams, ModelParams> random_ordered_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto in = [&](double a, double b) { return a + (b - a) * U(rng); };

  ModelParams p;
  p.d1 = in(0.5, 1.5);
  p.d2 = in(0.5, 1.5);
  p.mu1 = in(0.5, 2.0);
  p.mu2 = in(0.5, 2.0);
  p.h0 = in(2.0, 8.0);
  p.reactions.a = in(0.5, 1.5);
  p.reactions.b = in(0.5, 1.5);
  p.reactions.H = {p.reactions.a * in(1.2, 2.5), in(0.5, 2.0)};
  p.reactions.G = {p.reactions.b * in(1.2, 2.5), in(0.5, 2.0)};
  p.init.shape = U(rng) < 0.5 ? InitShape::CosineBump : InitShape::ConstantPlateau;

  auto random_kernel = [&] {
    KernelParams kp;
    switch (static_cast<int>(3.0 * U(rng))) {
      case 0:
        kp.family = KernelFamily::Compact;
        kp.R = in(0.5, 3.0);
        break;
      case 1:
        kp.family = KernelFamily::AlgLog;
        kp.gamma = in(1.4, 1.9);
        kp.beta = in(-0.5, 0.5);
        break;
      default:
        kp.family = KernelFamily::PowerLaw;
        kp.gamma = in(2.2, 3.5);
        break;
    }
    return Kernel::make(kp);
  };
  p.k1 = random_kernel();
  p.k2 = random_kernel();

  ModelParams lo = p;
  ModelParams hi = p;
  lo.init.amp_u = in(0.0, 0.6);
  lo.init.amp_v = in(0.0, 0.6);
  hi.init.amp_u = lo.init.amp_u + in(0.0, 0.6);
  hi.init.amp_v = lo.init.amp_v + in(0.0, 0.6);
  return {lo, hi};
}

std::vector<Prop21Entry> prop21_grid_sweep(std::size_t n_samples) {
  KernelParams compact;
  compact.family = KernelFamily::Compact;
  compact.R = 1.0;
  KernelParams power;
  power.family = KernelFamily::PowerLaw;
  power.gamma = 1.5;
  KernelParams crit;
  crit.family = KernelFamily::CritLog;
  crit.beta = 0.0;
  const std::pair<const char*, KernelParams> kernels[] = {
      {"COMPACT(R=1)", compact}, {"POWERLAW(1.5)", power}, {"CRITLOG(0)", crit}};
  std::vector<Prop21Entry> out;
  for (const auto& [name, kp] : kernels) {
    const Kernel k = Kernel::make(kp);
    for (double rho : {1.0, 2.0, 5.0}) {
      for (double eps : {0.05, 0.1, 0.2}) {
        Prop21Entry e{name, standard_prop21_case(k, rho, eps), {}};
        e.result = check_prop21(e.geometry, n_samples);
        out.push_back(std::move(e));
      }
    }
  }
  return out;
}

}  // namespace frontier
