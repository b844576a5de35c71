#include "frontier/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

// Boost 1.74's pchip calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>

#include "frontier/errors.hpp"
#include "frontier/quadrature.hpp"

namespace frontier {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kTableZMax = 1e8;
constexpr std::size_t kTablePoints = 10000;
constexpr double kQuadTol = 1e-13;

// ln(e + y) written in terms of lambda = ln(1 + y); stable for huge y.
double log_e_plus(double lambda) {
  return lambda + std::log1p((kE - 1.0) * std::exp(-lambda));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

std::string fmt(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::LogLog:
      return "LOGLOG";
    case KernelFamily::AlgLog:
      return "ALGLOG";
    case KernelFamily::CritLog:
      return "CRITLOG";
    case KernelFamily::Compact:
      return "COMPACT";
    case KernelFamily::PowerLaw:
      return "POWERLAW";
  }
  return "?";
}

KernelFamily parse_kernel_family(const std::string& name) {
  for (auto f : {KernelFamily::LogLog, KernelFamily::AlgLog,
                 KernelFamily::CritLog, KernelFamily::Compact,
                 KernelFamily::PowerLaw}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("unknown kernel family '" + name +
                    "' (expected LOGLOG, ALGLOG, CRITLOG, COMPACT or POWERLAW)");
}

struct Kernel::Impl {
  KernelParams p;
  double c = 1.0;
  double shift = 1.0;
  std::optional<Envelope> envelope;
  bool closed_tail = false;
  // Interpolant of ln(tail) against ln(1 + z).
  std::unique_ptr<boost::math::interpolators::pchip<std::vector<double>>> table;

  // Algebraic families share (1+x)^-gamma ln^beta(e+x).
  double alg_gamma() const {
    return p.family == KernelFamily::CritLog ? 2.0 : p.gamma;
  }
  double alg_beta() const {
    return p.family == KernelFamily::PowerLaw ? 0.0 : p.beta;
  }

  // Unnormalized shape at x >= 0.
  double raw(double x) const {
    switch (p.family) {
      case KernelFamily::LogLog: {
        const double y = shift + x;
        const double l = std::log(y);
        return std::pow(std::log(l), p.alpha) / (y * std::pow(l, p.beta));
      }
      case KernelFamily::Compact: {
        if (x >= p.R) return 0.0;
        const double t = x / p.R;
        const double w = 1.0 - t * t;
        return w * w;
      }
      default: {
        const double b = alg_beta();
        const double logs = b == 0.0 ? 1.0 : std::pow(std::log(kE + x), b);
        return logs * std::pow(1.0 + x, -alg_gamma());
      }
    }
  }

  // Integral of raw over [z, inf) by a substitution that turns the
  // heavy tail into an exponentially damped integrand.
  double raw_tail_quad(double z) const {
    if (p.family == KernelFamily::Compact) {
      return quad::integrate([this](double y) { return raw(y); }, z,
                             std::max(z, p.R), kQuadTol)
          .value;
    }
    if (p.family == KernelFamily::LogLog) {
      // ln(shift + y) = L0 e^w.
      const double lnl0 = std::log(std::log(shift + z));
      const double a = p.alpha;
      const double b = p.beta;
      auto f = [=](double w) {
        const double lnl = lnl0 + w;
        return std::pow(lnl, a) * std::exp((1.0 - b) * lnl);
      };
      return quad::integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                             kQuadTol)
          .value;
    }
    // 1 + y = (1 + z) e^s.
    const double lambda0 = std::log1p(z);
    const double g = alg_gamma();
    const double b = alg_beta();
    auto f = [=](double s) {
      const double lambda = lambda0 + s;
      const double logs = b == 0.0 ? 1.0 : std::pow(log_e_plus(lambda), b);
      return logs * std::exp((1.0 - g) * lambda);
    };
    return quad::integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                           kQuadTol)
        .value;
  }

  // Normalized closed-form tail where one exists.
  double closed_form_tail(double z) const {
    switch (p.family) {
      case KernelFamily::Compact: {
        if (z >= p.R) return 0.0;
        const double t = z / p.R;
        const double t3 = t * t * t;
        // int_0^t (1 - u^2)^2 du = t - 2t^3/3 + t^5/5; full half-mass 8/15.
        return 0.5 - (15.0 / 16.0) * (t - 2.0 * t3 / 3.0 + t3 * t * t / 5.0);
      }
      default:
        // beta = 0 algebraic tails: (1/2)(1+z)^(1-gamma).
        return 0.5 * std::pow(1.0 + z, 1.0 - alg_gamma());
    }
  }

  void build_table() {
    std::vector<double> xi(kTablePoints);
    std::vector<double> tail(kTablePoints);
    const double xi_max = std::log1p(kTableZMax);
    for (std::size_t i = 0; i < kTablePoints; ++i) {
      xi[i] = xi_max * static_cast<double>(i) / (kTablePoints - 1);
    }
    xi.back() = xi_max;
    tail.back() = raw_tail_quad(std::expm1(xi_max));
    auto in_xi = [this](double s) { return raw(std::expm1(s)) * std::exp(s); };
    for (std::size_t i = kTablePoints - 1; i-- > 0;) {
      tail[i] = tail[i + 1] + quad::integrate(in_xi, xi[i], xi[i + 1], 1e-14).value;
    }
    for (double& t : tail) t = std::log(c * t);
    table = std::make_unique<boost::math::interpolators::pchip<std::vector<double>>>(
        std::move(xi), std::move(tail));
  }

  double nominal_shape(double x) const {
    const double lx = std::log(x);
    switch (p.family) {
      case KernelFamily::LogLog:
        return std::pow(std::log(lx), p.alpha) / (x * std::pow(lx, p.beta));
      case KernelFamily::AlgLog:
        return std::pow(lx, p.beta) / std::pow(x, p.gamma);
      case KernelFamily::CritLog:
        return std::pow(lx, p.beta) / (x * x);
      case KernelFamily::PowerLaw:
        return std::pow(x, -p.gamma);
      case KernelFamily::Compact:
        return 0.0;
    }
    return 0.0;
  }
};

Kernel::Kernel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Kernel Kernel::make(const KernelParams& params) {
  auto impl = std::make_shared<Impl>();
  impl->p = params;
  const auto& p = params;
  const std::string name = to_string(p.family);
  switch (p.family) {
    case KernelFamily::LogLog:
      require(p.beta > 1.0 && std::isfinite(p.beta),
              "LOGLOG requires beta in (1, inf), got " + fmt(p.beta));
      require(std::isfinite(p.alpha), "LOGLOG requires a finite alpha");
      impl->shift = std::exp(kE);
      break;
    case KernelFamily::AlgLog:
      require(p.gamma > 1.0 && p.gamma < 2.0,
              "ALGLOG requires gamma in (1, 2), got " + fmt(p.gamma));
      require(std::isfinite(p.beta), "ALGLOG requires a finite beta");
      impl->closed_tail = p.beta == 0.0;
      break;
    case KernelFamily::CritLog:
      require(p.beta >= -1.0 && std::isfinite(p.beta),
              "CRITLOG requires beta in [-1, inf), got " + fmt(p.beta));
      impl->closed_tail = p.beta == 0.0;
      break;
    case KernelFamily::Compact:
      require(p.R > 0.0 && std::isfinite(p.R),
              "COMPACT requires R in (0, inf), got " + fmt(p.R));
      impl->closed_tail = true;
      impl->shift = p.R;
      break;
    case KernelFamily::PowerLaw:
      require(p.gamma > 1.0 && std::isfinite(p.gamma),
              "POWERLAW requires gamma in (1, inf), got " + fmt(p.gamma));
      impl->closed_tail = true;
      break;
  }

  if (p.family == KernelFamily::Compact) {
    impl->c = 15.0 / (16.0 * p.R);
  } else if (impl->closed_tail) {
    impl->c = 0.5 * (impl->alg_gamma() - 1.0);
  } else {
    const double half = impl->raw_tail_quad(0.0);
    if (!(half > 0.0) || !std::isfinite(half)) {
      throw NumericalError("kernel normalization failed for " + name);
    }
    impl->c = 0.5 / half;
    impl->build_table();
  }

  if (p.family != KernelFamily::Compact) {
    constexpr double x_min = 10.0;
    constexpr double x_max = 1e6;
    constexpr int samples = 2001;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double x =
          x_min * std::pow(x_max / x_min, static_cast<double>(i) / (samples - 1));
      const double r = impl->c * impl->raw(x) / impl->nominal_shape(x);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    impl->envelope = Envelope{0.95 * lo, 1.05 * hi, x_min};
  }
  return Kernel(std::move(impl));
}

const KernelParams& Kernel::params() const { return impl_->p; }

std::string Kernel::describe() const {
  const auto& p = impl_->p;
  std::ostringstream s;
  s << to_string(p.family) << "(";
  switch (p.family) {
    case KernelFamily::LogLog:
      s << "alpha=" << p.alpha << ",beta=" << p.beta;
      break;
    case KernelFamily::AlgLog:
      s << "gamma=" << p.gamma << ",beta=" << p.beta;
      break;
    case KernelFamily::CritLog:
      s << "beta=" << p.beta;
      break;
    case KernelFamily::Compact:
      s << "R=" << p.R;
      break;
    case KernelFamily::PowerLaw:
      s << "gamma=" << p.gamma;
      break;
  }
  s << ")";
  return s.str();
}

double Kernel::norm_const() const { return impl_->c; }
double Kernel::shift() const { return impl_->shift; }
const std::optional<Envelope>& Kernel::envelope() const { return impl_->envelope; }

double Kernel::operator()(double x) const { return impl_->c * impl_->raw(std::abs(x)); }

double Kernel::tail_mass(double z) const {
  if (z < 0.0) return 1.0 - tail_mass(-z);
  if (impl_->closed_tail) return impl_->closed_form_tail(z);
  if (z >= kTableZMax) return tail_mass_direct(z);
  return std::exp((*impl_->table)(std::log1p(z)));
}

double Kernel::tail_mass_direct(double z) const {
  if (z < 0.0) return 1.0 - tail_mass_direct(-z);
  return impl_->c * impl_->raw_tail_quad(z);
}

double Kernel::first_moment_to(double h) const {
  if (h <= 0.0) return 0.0;
  const auto& p = impl_->p;
  if (p.family == KernelFamily::Compact) {
    const double t = std::min(h / p.R, 1.0);
    const double w = 1.0 - t * t;
    return impl_->c * p.R * p.R * (1.0 - w * w * w) / 6.0;
  }
  auto near = [this](double y) { return y * (*this)(y); };
  double total = quad::integrate(near, 0.0, std::min(h, 1.0), kQuadTol).value;
  if (h > 1.0) {
    auto far = [this](double s) {
      const double y = std::exp(s);
      return y * y * (*this)(y);
    };
    total += quad::integrate(far, 0.0, std::log(h), kQuadTol).value;
  }
  return total;
}

bool Kernel::first_moment_finite() const {
  switch (impl_->p.family) {
    case KernelFamily::Compact:
      return true;
    case KernelFamily::PowerLaw:
      return impl_->p.gamma > 2.0;
    default:
      return false;
  }
}

double Kernel::flux_functional(double h) const {
  if (!(h > 1.0)) throw std::invalid_argument("flux_functional requires h > 1");
  return first_moment_to(h) + h * tail_mass(h);
}

double Kernel::nominal_flux_shape(double h) const {
  const auto& p = impl_->p;
  const double lh = std::log(h);
  switch (p.family) {
    case KernelFamily::LogLog:
      return h * std::pow(std::log(lh), p.alpha) / std::pow(lh, p.beta - 1.0);
    case KernelFamily::AlgLog:
      return std::pow(h, 2.0 - p.gamma) * std::pow(lh, p.beta);
    case KernelFamily::CritLog:
      return p.beta > -1.0 ? std::pow(lh, p.beta + 1.0) : std::log(lh);
    case KernelFamily::PowerLaw:
      if (p.gamma < 2.0) return std::pow(h, 2.0 - p.gamma);
      if (p.gamma == 2.0) return lh;
      return 1.0;
    case KernelFamily::Compact:
      return 1.0;
  }
  return 1.0;
}

double Kernel::nominal_shape(double x) const { return impl_->nominal_shape(std::abs(x)); }

RateLaw Kernel::predicted_rate() const {
  const auto& p = impl_->p;
  switch (p.family) {
    case KernelFamily::LogLog:
      return RateLaw::exp_power(1.0 / p.beta, p.alpha / p.beta);
    case KernelFamily::AlgLog:
      return RateLaw::power_log(1.0 / (p.gamma - 1.0), p.beta / (p.gamma - 1.0));
    case KernelFamily::CritLog:
      return p.beta > -1.0 ? RateLaw::linear_log_pow(p.beta + 1.0)
                           : RateLaw::linear_log_log();
    case KernelFamily::PowerLaw:
      if (p.gamma < 2.0) return RateLaw::power_log(1.0 / (p.gamma - 1.0), 0.0);
      if (p.gamma == 2.0) return RateLaw::linear_log_pow(1.0);
      return RateLaw::linear();
    case KernelFamily::Compact:
      return RateLaw::linear();
  }
  return RateLaw::linear();
}

double Kernel::half_width(double mass) const {
  if (!(mass > 0.0 && mass < 1.0)) {
    throw std::invalid_argument("half_width requires mass in (0, 1)");
  }
  const double target = 0.5 * (1.0 - mass);
  double lo = 0.0;
  double hi = 1.0;
  while (tail_mass(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericalError("half_width: no bracket for " + describe());
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail_mass(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

double Kernel::support_radius() const {
  return impl_->p.family == KernelFamily::Compact
             ? impl_->p.R
             : std::numeric_limits<double>::infinity();
}

}  // namespace frontier
