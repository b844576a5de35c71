#include <doctest.h>

#include <cmath>

#include "frontier/reactions.hpp"

using namespace frontier;

namespace {
ReactionSpec spec(double p, double q, double r, double s, double a = 1.0, double b = 1.0) {
  ReactionSpec x;
  x.a = a;
  x.b = b;
  x.H = {p, q};
  x.G = {r, s};
  return x;
}
}  // namespace

TEST_CASE("reproduction number") {
  CHECK(reproduction_number(spec(2, 1, 2, 1)) == doctest::Approx(4.0));
  CHECK(reproduction_number(spec(0.5, 1, 0.5, 1)) == doctest::Approx(0.25));
  CHECK(reproduction_number(spec(1.7, 3, 0.4, 9, 1.7, 0.4)) == doctest::Approx(1.0));
}

TEST_CASE("symmetric defaults give (1, 1)") {
  const auto eq = equilibrium(ReactionSpec{});
  REQUIRE(eq);
  CHECK(std::abs(eq->u_star - 1.0) <= 1e-12);
  CHECK(std::abs(eq->v_star - 1.0) <= 1e-12);
  CHECK(eq->residual <= 1e-12);
}

TEST_CASE("no equilibrium at or below threshold") {
  CHECK_FALSE(equilibrium(spec(0.5, 1, 0.5, 1)).has_value());
  CHECK_FALSE(equilibrium(spec(1, 1, 1, 1)).has_value());
}

TEST_CASE("bisection agrees with a fixed-point iteration") {
  const ReactionSpec r = spec(4, 1, 2, 1);
  const auto eq = equilibrium(r);
  REQUIRE(eq);
  // The map u -> H(G(u)/b)/a is increasing and concave, so iterating from
  // below converges monotonically to the positive root.
  double u = 1e-6;
  for (int i = 0; i < 100000; ++i) {
    const double next = r.H(r.G(u) / r.b) / r.a;
    if (std::abs(next - u) < 1e-15) break;
    u = next;
  }
  CHECK(std::abs(eq->u_star - u) <= 1e-9);
  CHECK(std::abs(r.a * eq->u_star - r.H(eq->v_star)) <= 1e-12);
  CHECK(std::abs(r.b * eq->v_star - r.G(eq->u_star)) <= 1e-12);
}

TEST_CASE("equilibrium residual across a threshold sweep") {
  for (int i = 0; i < 100; ++i) {
    const double p = 0.2 + 0.05 * i;  // R0 = 2p from 0.4 to 5.35
    const ReactionSpec r = spec(p, 0.7, 2.0, 1.3);
    const auto eq = equilibrium(r);
    CHECK(eq.has_value() == (reproduction_number(r) > 1.0));
    if (eq) {
      CHECK(eq->u_star > 0.0);
      CHECK(eq->residual <= 1e-12);
    }
  }
}

TEST_CASE("hypothesis validation") {
  CHECK(validate_reactions(ReactionSpec{}).all_passed());
  CHECK(validate_reactions(spec(0.5, 1, 0.5, 1)).all_passed());
  const HypothesisReport linear = validate_reactions(spec(2, 0, 2, 1));
  CHECK_FALSE(linear.all_passed());
  bool concavity_failed = false;
  for (const auto& c : linear.checks) {
    if (!c.passed && c.name == "H''<0") concavity_failed = true;
  }
  CHECK(concavity_failed);
}

TEST_CASE("saturating form") {
  const Saturating H{2.0, 1.0};
  CHECK(H(0.0) == 0.0);
  CHECK(H(10.0) == doctest::Approx(20.0 / 11.0));
  CHECK(H.derivative(0.0) == 2.0);
  CHECK(H.supremum() == 2.0);
  // G(H(10)) < 10 for the defaults
  CHECK(H(H(10.0)) < 10.0);
}
