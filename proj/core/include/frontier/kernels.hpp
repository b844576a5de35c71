#pragma once

#include <memory>
#include <optional>
#include <string>

#include "frontier/rate_law.hpp"

namespace frontier {

enum class KernelFamily { LogLog, AlgLog, CritLog, Compact, PowerLaw };

std::string to_string(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

// Unused fields are ignored by families that do not read them:
//   LOGLOG(alpha, beta>1)   J ~ ln^alpha(ln|x|) / (|x| ln^beta|x|)
//   ALGLOG(gamma in (1,2), beta)   J ~ ln^beta|x| / |x|^gamma
//   CRITLOG(beta >= -1)     J ~ ln^beta|x| / |x|^2
//   COMPACT(R > 0)          quartic bump on [-R, R]
//   POWERLAW(gamma > 1)     J ~ |x|^-gamma
struct KernelParams {
  KernelFamily family = KernelFamily::AlgLog;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.5;
  double R = 1.0;

  bool operator==(const KernelParams&) const = default;
};

// Two-sided comparability with the family's nominal tail shape g:
// lower * g(|x|) <= J(x) <= upper * g(|x|) for |x| >= x_min.
struct Envelope {
  double lower = 0.0;
  double upper = 0.0;
  double x_min = 0.0;
};

// A normalized, even dispersal kernel. Immutable after construction and
// cheap to copy; all queries are safe to call concurrently.
class Kernel {
 public:
  // Validates the family parameters (throws ConfigError naming the
  // admissible range) and normalizes so that the integral over R is 1.
  static Kernel make(const KernelParams& params);

  const KernelParams& params() const;
  std::string describe() const;

  double norm_const() const;
  double shift() const;
  // Empty for COMPACT, whose tail vanishes identically.
  const std::optional<Envelope>& envelope() const;

  double operator()(double x) const;

  // Integral of J over [z, inf). Closed form for COMPACT, POWERLAW and
  // beta = 0 log families; otherwise interpolated from a log-spaced table
  // over [0, 1e8] with direct quadrature beyond.
  double tail_mass(double z) const;

  // Direct quadrature of the tail; the oracle for tail_mass().
  double tail_mass_direct(double z) const;

  // Integral of y J(y) over [0, h].
  double first_moment_to(double h) const;

  bool first_moment_finite() const;

  // I(h) = int_0^1 yJ + int_1^h yJ + h * tail(h) for h > 1.
  double flux_functional(double h) const;

  // Nominal growth shape of I(h) for this family, up to constants.
  double nominal_flux_shape(double h) const;

  // Nominal tail shape g(|x|) used by the envelope.
  double nominal_shape(double x) const;

  RateLaw predicted_rate() const;

  // Smallest l >= 0 with int_{-l}^{l} J >= mass.
  double half_width(double mass) const;

  // R for COMPACT, +inf otherwise.
  double support_radius() const;

 private:
  struct Impl;
  explicit Kernel(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace frontier
