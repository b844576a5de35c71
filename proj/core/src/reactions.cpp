#include "frontier/reactions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frontier/errors.hpp"

namespace frontier {

namespace {

constexpr int kMaxBisections = 200;
constexpr double kBisectionTol = 1e-14;

}  // namespace

double Saturating::supremum() const {
  return saturation > 0.0 ? rate / saturation
                          : std::numeric_limits<double>::infinity();
}

bool HypothesisReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.passed; });
}

double reproduction_number(const ReactionSpec& r) {
  return r.H.derivative(0.0) * r.G.derivative(0.0) / (r.a * r.b);
}

std::optional<EquilibriumResult> equilibrium(const ReactionSpec& r) {
  if (reproduction_number(r) <= 1.0) return std::nullopt;

  // F(u) = H(G(u)/b)/a - u: zero at 0, positive just above it, negative
  // beyond the bound on H.
  auto F = [&](double u) { return r.H(r.G(u) / r.b) / r.a - u; };
  if (!(r.G.saturation > 0.0) && !(r.H.saturation > 0.0)) {
    throw NumericalError("equilibrium: unbounded H and G leave no bracket");
  }
  const double u_hi = r.G.saturation > 0.0
                          ? r.H(r.G.rate / (r.b * r.G.saturation)) / r.a + 1.0
                          : r.H.supremum() / r.a + 1.0;
  double hi = u_hi;
  if (!(F(hi) < 0.0)) throw NumericalError("equilibrium: F(u_hi) is not negative");
  double lo = 0.5 * hi;
  for (int i = 0; i < 1100 && !(F(lo) > 0.0); ++i) lo *= 0.5;
  if (!(F(lo) > 0.0)) throw NumericalError("equilibrium: no positive lower bracket");

  for (int i = 0; i < kMaxBisections && hi - lo > kBisectionTol * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) > 0.0 ? lo : hi) = mid;
  }
  EquilibriumResult e;
  e.u_star = 0.5 * (lo + hi);
  e.v_star = r.G(e.u_star) / r.b;
  e.residual = std::max(std::abs(r.a * e.u_star - r.H(e.v_star)),
                        std::abs(r.b * e.v_star - r.G(e.u_star)));
  return e;
}

HypothesisReport validate_reactions(const ReactionSpec& r) {
  HypothesisReport report;
  auto add = [&](std::string name, bool ok, std::string detail) {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  add("H(0)=0", r.H(0.0) == 0.0, "");
  add("G(0)=0", r.G(0.0) == 0.0, "");

  constexpr int n = 10000;
  constexpr double z_max = 100.0;
  const double step = z_max / n;
  for (const auto& [label, f] : {std::pair{"H", r.H}, std::pair{"G", r.G}}) {
    bool increasing = true;
    bool concave = true;
    double worst_second = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
      const double z = i * step;
      if (i > 0 && !(f(z) > f(z - step))) increasing = false;
      if (i > 0 && i < n) {
        const double d2 = f(z + step) - 2.0 * f(z) + f(z - step);
        worst_second = std::max(worst_second, d2);
        if (!(d2 < 0.0)) concave = false;
      }
    }
    add(std::string(label) + "'>0", increasing && f.derivative(0.0) > 0.0, "");
    std::ostringstream d;
    d << "max second difference " << worst_second;
    add(std::string(label) + "''<0", concave, d.str());
  }

  // Scan z-hat over (0, 1e6] on a log grid.
  bool found = false;
  double z_hat = 0.0;
  for (int i = 0; i <= 1200 && !found; ++i) {
    const double z = std::pow(10.0, -6.0 + 12.0 * i / 1200.0);
    if (r.G(r.H(z) / r.a) < r.b * z) {
      found = true;
      z_hat = z;
    }
  }
  std::ostringstream d;
  if (found) d << "z_hat = " << z_hat;
  else d << "no z_hat in (0, 1e6]";
  add("G(H(z)/a)<bz", found, d.str());
  return report;
}

}  // namespace frontier
