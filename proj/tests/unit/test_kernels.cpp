#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "frontier/errors.hpp"
#include "frontier/kernels.hpp"
#include "frontier/quadrature.hpp"

using namespace frontier;

namespace {

KernelParams make(KernelFamily f, double gamma = 1.5, double beta = 0.0, double alpha = 0.0,
                  double R = 1.0) {
  KernelParams p;
  p.family = f;
  p.gamma = gamma;
  p.beta = beta;
  p.alpha = alpha;
  p.R = R;
  return p;
}

// Test matrix covering every family, including non-closed-form tails.
std::vector<KernelParams> matrix() {
  return {make(KernelFamily::Compact, 0, 0, 0, 1.0),
          make(KernelFamily::Compact, 0, 0, 0, 2.5),
          make(KernelFamily::PowerLaw, 1.5),
          make(KernelFamily::PowerLaw, 3.0),
          make(KernelFamily::CritLog, 0, 0.0),
          make(KernelFamily::CritLog, 0, 1.0),
          make(KernelFamily::CritLog, 0, -1.0),
          make(KernelFamily::AlgLog, 1.5, 0.0),
          make(KernelFamily::AlgLog, 1.5, 0.5),
          make(KernelFamily::AlgLog, 1.2, -1.0),
          make(KernelFamily::LogLog, 0, 2.0, 1.0),
          make(KernelFamily::LogLog, 0, 3.0, 0.0)};
}

double integral_over_line(const Kernel& k) {
  const double inf = std::numeric_limits<double>::infinity();
  const double R = k.support_radius();
  if (std::isfinite(R)) {
    return 2.0 * quad::integrate([&](double x) { return k(x); }, 0.0, R).value;
  }
  double s = quad::integrate([&](double x) { return k(x); }, 0.0, 1.0).value;
  double lo = 1.0;
  for (double hi = 10.0; hi <= 1e12; hi *= 10.0) {
    s += quad::integrate([&](double x) { return k(x); }, lo, hi).value;
    lo = hi;
  }
  if (k.params().family == KernelFamily::LogLog) {
    // ln ln decay defeats any substitution in double range; the tail routine
    // is itself checked against high-precision values below.
    s += k.tail_mass_direct(lo);
  } else {
    // Remaining tail through y = e^w; beyond w = 700 the mass is below 1e-60.
    s += quad::integrate(
             [&](double w) { return w > 700.0 ? 0.0 : k(std::exp(w)) * std::exp(w); },
             std::log(lo), inf, 1e-12, 1e-300)
             .value;
  }
  return 2.0 * s;
}

}  // namespace

TEST_CASE("closed-form normalization constants") {
  CHECK(Kernel::make(make(KernelFamily::Compact)).norm_const() == doctest::Approx(15.0 / 16.0).epsilon(1e-15));
  CHECK(Kernel::make(make(KernelFamily::PowerLaw, 1.5)).norm_const() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(Kernel::make(make(KernelFamily::CritLog, 0, 0.0)).norm_const() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("normalization constants against an independent high-precision quadrature") {
  struct Row {
    KernelParams p;
    double c;
  };
  // 30-digit reference values.
  const Row rows[] = {{make(KernelFamily::AlgLog, 1.5, 0.5), 0.16930941474855422288},
                      {make(KernelFamily::AlgLog, 1.2, -1.0), 0.26976550944693135315},
                      {make(KernelFamily::CritLog, 0, 1.0), 0.3160602794142788392},
                      {make(KernelFamily::CritLog, 0, -1.0), 0.69477108255126554501},
                      {make(KernelFamily::LogLog, 0, 2.0, 1.0), 0.67957045711476130884},
                      {make(KernelFamily::LogLog, 0, 3.0, 0.0), 7.3890560989306502272}};
  for (const Row& r : rows) {
    const Kernel k = Kernel::make(r.p);
    INFO(k.describe());
    CHECK(std::abs(k.norm_const() / r.c - 1.0) < 1e-10);
  }
}

TEST_CASE("every family integrates to one") {
  for (const KernelParams& p : matrix()) {
    const Kernel k = Kernel::make(p);
    INFO(k.describe());
    CHECK(std::abs(integral_over_line(k) - 1.0) < 1e-10);
  }
}

TEST_CASE("evaluate examples") {
  const Kernel compact = Kernel::make(make(KernelFamily::Compact));
  CHECK(compact(1.5) == 0.0);
  CHECK(compact(0.0) == doctest::Approx(15.0 / 16.0));
  CHECK(Kernel::make(make(KernelFamily::PowerLaw, 1.5))(0.0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("evenness and positivity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const KernelParams& p : matrix()) {
    const Kernel k = Kernel::make(p);
    CHECK(k(0.0) > 0.0);
    for (int i = 0; i < 1000; ++i) {
      const double x = std::pow(10.0, 6.0 * U(rng) - 2.0);
      CHECK(k(x) == k(-x));
      CHECK(k(x) >= 0.0);
    }
  }
}

TEST_CASE("closed-form tails") {
  CHECK(std::abs(Kernel::make(make(KernelFamily::PowerLaw, 1.5)).tail_mass(3.0) - 0.25) < 1e-12);
  CHECK(std::abs(Kernel::make(make(KernelFamily::CritLog, 0, 0.0)).tail_mass(9.0) - 0.05) < 1e-12);
  const Kernel compact = Kernel::make(make(KernelFamily::Compact));
  CHECK(compact.tail_mass(1.0) == 0.0);
  CHECK(compact.tail_mass(2.0) == 0.0);
  // 1/2 - (15/16)(t - 2t^3/3 + t^5/5) at t = 1/2
  CHECK(compact.tail_mass(0.5) == doctest::Approx(0.5 - (15.0 / 16.0) * (0.5 - 2.0 / 24.0 + 1.0 / 160.0)).epsilon(1e-14));
}

TEST_CASE("tabulated tails against an independent high-precision quadrature") {
  struct Row {
    KernelParams p;
    double t10, t1e3, t1e6;
  };
  const Row rows[] = {
      {make(KernelFamily::AlgLog, 1.5, 0.5), 0.21112110360642907984, 0.031772925926106759136, 0.0013442048050413225972},
      {make(KernelFamily::AlgLog, 1.2, -1.0), 0.15569778759768054313, 0.032231165722050114488, 0.0047686607353121095653},
      {make(KernelFamily::CritLog, 0, 1.0), 0.099766520394573431618, 0.0024974169423914241813, 4.6825903116250867611e-6},
      {make(KernelFamily::CritLog, 0, -1.0), 0.019242706322902948159, 0.000088926939211815159681, 4.7086275213876543686e-8},
      {make(KernelFamily::LogLog, 0, 2.0, 1.0), 0.45745585980345123015, 0.28809411897938963634, 0.17834875526883156698},
      {make(KernelFamily::LogLog, 0, 3.0, 0.0), 0.35521570819137745475, 0.077089622195116596658, 0.019356379899154649073}};
  for (const Row& r : rows) {
    const Kernel k = Kernel::make(r.p);
    INFO(k.describe());
    CHECK(std::abs(k.tail_mass(10.0) / r.t10 - 1.0) < 1e-8);
    CHECK(std::abs(k.tail_mass(1e3) / r.t1e3 - 1.0) < 1e-8);
    CHECK(std::abs(k.tail_mass(1e6) / r.t1e6 - 1.0) < 1e-8);
    CHECK(std::abs(k.tail_mass_direct(1e3) / r.t1e3 - 1.0) < 1e-10);
  }
}

TEST_CASE("tail at zero, symmetry and monotonicity") {
  for (const KernelParams& p : matrix()) {
    const Kernel k = Kernel::make(p);
    INFO(k.describe());
    CHECK(std::abs(k.tail_mass(0.0) - 0.5) < 1e-10);
    CHECK(std::abs(k.tail_mass(-2.0) - (1.0 - k.tail_mass(2.0))) < 1e-14);
    double prev = k.tail_mass(0.0);
    for (double z = 0.01; z < 1e9; z *= 1.37) {
      const double t = k.tail_mass(z);
      CHECK(t <= prev);
      CHECK(t >= 0.0);
      prev = t;
    }
  }
}

TEST_CASE("table matches direct quadrature across the range") {
  for (const KernelParams& p : matrix()) {
    const Kernel k = Kernel::make(p);
    INFO(k.describe());
    for (double z : {0.3, 7.0, 55.5, 1234.0, 9.9e4, 3e7, 2e8}) {
      const double direct = k.tail_mass_direct(z);
      if (direct == 0.0) {
        CHECK(k.tail_mass(z) == 0.0);
      } else {
        CHECK(std::abs(k.tail_mass(z) / direct - 1.0) < 1e-8);
      }
    }
  }
}

TEST_CASE("first moment finiteness is decided by family") {
  CHECK(Kernel::make(make(KernelFamily::Compact)).first_moment_finite());
  CHECK(Kernel::make(make(KernelFamily::PowerLaw, 3.0)).first_moment_finite());
  CHECK_FALSE(Kernel::make(make(KernelFamily::PowerLaw, 1.5)).first_moment_finite());
  CHECK_FALSE(Kernel::make(make(KernelFamily::PowerLaw, 2.0)).first_moment_finite());
  CHECK_FALSE(Kernel::make(make(KernelFamily::CritLog, 0, -1.0)).first_moment_finite());
  CHECK_FALSE(Kernel::make(make(KernelFamily::AlgLog, 1.5)).first_moment_finite());
  CHECK_FALSE(Kernel::make(make(KernelFamily::LogLog, 0, 2.0)).first_moment_finite());
  CHECK(Kernel::make(make(KernelFamily::Compact)).first_moment_to(5.0) ==
        doctest::Approx(5.0 / 32.0).epsilon(1e-13));
}

TEST_CASE("first moment against independent quadrature") {
  const Kernel k = Kernel::make(make(KernelFamily::AlgLog, 1.5, 0.5));
  CHECK(std::abs(k.first_moment_to(1000.0) / 22.841019307343878363 - 1.0) < 1e-10);
  const Kernel ll = Kernel::make(make(KernelFamily::LogLog, 0, 2.0, 1.0));
  CHECK(std::abs(ll.first_moment_to(1000.0) / 32.152046675849106252 - 1.0) < 1e-10);
}

TEST_CASE("flux functional") {
  const Kernel compact = Kernel::make(make(KernelFamily::Compact));
  CHECK(compact.flux_functional(10.0) == doctest::Approx(5.0 / 32.0).epsilon(1e-13));
  CHECK(compact.flux_functional(1e4) == doctest::Approx(5.0 / 32.0).epsilon(1e-13));
  CHECK_THROWS_AS(compact.flux_functional(1.0), std::invalid_argument);

  const Kernel alg = Kernel::make(make(KernelFamily::AlgLog, 1.5, 0.0));
  CHECK(std::abs(alg.flux_functional(100.0) / 9.0498756211208902689 - 1.0) < 1e-10);
  CHECK(std::abs(alg.flux_functional(1e4) / 99.004999875006249454 - 1.0) < 1e-10);
  const Kernel alg5 = Kernel::make(make(KernelFamily::AlgLog, 1.5, 0.5));
  CHECK(std::abs(alg5.flux_functional(1e4) / 202.34264579273684161 - 1.0) < 1e-8);

  const Kernel crit = Kernel::make(make(KernelFamily::CritLog, 0, 0.0));
  CHECK(std::abs(crit.flux_functional(1e4) / 4.6052201834882580222 - 1.0) < 1e-10);
  for (double h : {1e2, 1e3, 1e4}) {
    CHECK(crit.flux_functional(h) / std::log(h) == doctest::Approx(0.5).epsilon(0.1));
  }
  const Kernel pl = Kernel::make(make(KernelFamily::PowerLaw, 1.5));
  for (double h : {1e3, 1e4}) {
    CHECK(pl.flux_functional(2 * h) / pl.flux_functional(h) == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));
  }
}

TEST_CASE("flux functional tracks its nominal shape") {
  for (const KernelParams& p : matrix()) {
    const Kernel k = Kernel::make(p);
    INFO(k.describe());
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double h = 1e2; h <= 1e5; h *= 1.5) {
      const double r = k.flux_functional(h) / k.nominal_flux_shape(h);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi / lo <= 3.0);
  }
}

TEST_CASE("envelope holds on log-spaced samples") {
  for (const KernelParams& p : matrix()) {
    const Kernel k = Kernel::make(p);
    INFO(k.describe());
    if (p.family == KernelFamily::Compact) {
      CHECK_FALSE(k.envelope().has_value());
      continue;
    }
    REQUIRE(k.envelope().has_value());
    const Envelope e = *k.envelope();
    CHECK(e.lower > 0.0);
    for (double x = e.x_min; x <= 1e6; x *= 1.01) {
      const double g = k.nominal_shape(x);
      CHECK(e.lower * g <= k(x));
      CHECK(k(x) <= e.upper * g);
    }
  }
}

TEST_CASE("predicted rates") {
  CHECK(Kernel::make(make(KernelFamily::AlgLog, 1.5, 0.0)).predicted_rate() == RateLaw::power_log(2.0, 0.0));
  CHECK(Kernel::make(make(KernelFamily::AlgLog, 1.5, 1.0)).predicted_rate() == RateLaw::power_log(2.0, 2.0));
  CHECK(Kernel::make(make(KernelFamily::CritLog, 0, 0.0)).predicted_rate() == RateLaw::linear_log_pow(1.0));
  CHECK(Kernel::make(make(KernelFamily::CritLog, 0, -1.0)).predicted_rate() == RateLaw::linear_log_log());
  CHECK(Kernel::make(make(KernelFamily::Compact)).predicted_rate() == RateLaw::linear());
  CHECK(Kernel::make(make(KernelFamily::PowerLaw, 3.0)).predicted_rate() == RateLaw::linear());
  CHECK(Kernel::make(make(KernelFamily::LogLog, 0, 2.0, 1.0)).predicted_rate() == RateLaw::exp_power(0.5, 0.5));
}

TEST_CASE("parameter ranges") {
  CHECK_THROWS_AS(Kernel::make(make(KernelFamily::AlgLog, 2.5)), ConfigError);
  CHECK_THROWS_AS(Kernel::make(make(KernelFamily::AlgLog, 1.0)), ConfigError);
  CHECK_THROWS_AS(Kernel::make(make(KernelFamily::LogLog, 0, 1.0)), ConfigError);
  CHECK_THROWS_AS(Kernel::make(make(KernelFamily::CritLog, 0, -1.5)), ConfigError);
  CHECK_THROWS_AS(Kernel::make(make(KernelFamily::Compact, 0, 0, 0, 0.0)), ConfigError);
  CHECK_THROWS_AS(Kernel::make(make(KernelFamily::PowerLaw, 1.0)), ConfigError);
  try {
    Kernel::make(make(KernelFamily::AlgLog, 2.5));
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("(1, 2)") != std::string::npos);
  }
}

TEST_CASE("half width") {
  const Kernel pl = Kernel::make(make(KernelFamily::PowerLaw, 1.5));
  // 2 tail(l) = 1 - m  =>  (1 + l)^-1/2 = 1 - m
  CHECK(pl.half_width(0.9) == doctest::Approx(99.0).epsilon(1e-9));
  const Kernel compact = Kernel::make(make(KernelFamily::Compact));
  CHECK(compact.half_width(1.0 - 1e-12) <= 1.0);
  CHECK(2.0 * compact.tail_mass(compact.half_width(0.95)) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("family names round-trip") {
  for (auto f : {KernelFamily::LogLog, KernelFamily::AlgLog, KernelFamily::CritLog,
                 KernelFamily::Compact, KernelFamily::PowerLaw}) {
    CHECK(parse_kernel_family(to_string(f)) == f);
  }
}
