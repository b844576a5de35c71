#pragma once

#include <optional>
#include <string>
#include <vector>

namespace frontier {

// f(z) = rate * z / (1 + saturation * z). saturation = 0 gives the linear
// map, which fails strict concavity.
struct Saturating {
  double rate = 1.0;
  double saturation = 1.0;

  double operator()(double z) const { return rate * z / (1.0 + saturation * z); }
  double derivative(double z) const {
    const double d = 1.0 + saturation * z;
    return rate / (d * d);
  }
  // +inf when saturation == 0.
  double supremum() const;
};

// Linear decay rates a, b and the cross-infection terms H(v), G(u).
struct ReactionSpec {
  double a = 1.0;
  double b = 1.0;
  Saturating H{2.0, 1.0};
  Saturating G{2.0, 1.0};
};

struct EquilibriumResult {
  double u_star = 0.0;
  double v_star = 0.0;
  double residual = 0.0;
};

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  bool all_passed() const;
};

// H'(0) G'(0) / (a b).
double reproduction_number(const ReactionSpec& r);

// The unique positive solution of a u = H(v), b v = G(u); empty when
// R0 <= 1. Throws NumericalError if the bisection bracket cannot be formed.
std::optional<EquilibriumResult> equilibrium(const ReactionSpec& r);

// Sampled check of every clause of the structural hypothesis on (H, G).
HypothesisReport validate_reactions(const ReactionSpec& r);

}  // namespace frontier
