#include "frontier/steadystate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "frontier/errors.hpp"

namespace frontier {

namespace {

// Rounding slack for the monotonicity check, relative to the equilibrium.
constexpr double kMonotoneSlack = 1e-12;

// Trapezoid mass of J beyond m dx: dx (J(m dx)/2 + sum_{i>m} J(i dx)).
// Paired with the trapezoid row over [0, L], every interior row plus its
// far-field part adds up to the same discrete total, so the closure adds no
// cut error of its own. Far out the sum is started from the exact tail.
std::vector<double> discrete_tails(const Kernel& k, std::size_t count, double dx) {
  const std::size_t start = 2 * count + 256;
  std::vector<double> t(count);
  double acc = k.tail_mass(static_cast<double>(start) * dx);
  double right = k(static_cast<double>(start) * dx);
  for (std::size_t m = start; m-- > 0;) {
    const double left = k(static_cast<double>(m) * dx);
    acc += 0.5 * dx * (left + right);
    right = left;
    if (m < count) t[m] = acc;
  }
  return t;
}

// Far-field weight of node j: tails(last - j).
std::vector<double> far_field(const Kernel& k, std::size_t nodes, double dx) {
  std::vector<double> tails = discrete_tails(k, nodes, dx);
  std::reverse(tails.begin(), tails.end());
  return tails;
}

}  // namespace

SteadyProfile solve_steady(const ModelParams& p, const SteadyOptions& opts,
                           const SteadyObserver& observer) {
  p.validate();
  const auto eq = equilibrium(p.reactions);
  if (!eq) throw std::invalid_argument("solve_steady requires R0 > 1");
  if (!(opts.L > 0.0) || !(opts.dx > 0.0) || !(opts.tol > 0.0)) {
    throw std::invalid_argument("solve_steady requires positive L, dx and tol");
  }

  SteadyProfile s;
  s.dx = opts.dx;
  const auto last = static_cast<std::size_t>(std::llround(opts.L / opts.dx));
  if (last < 1) throw std::invalid_argument("solve_steady: L must span at least one cell");
  const std::size_t nodes = last + 1;
  s.L = static_cast<double>(last) * opts.dx;
  s.u_star = eq->u_star;
  s.v_star = eq->v_star;
  s.closure_tail = std::max(p.k1.tail_mass(0.5 * s.L), p.k2.tail_mass(0.5 * s.L));

  const auto& r = p.reactions;
  const std::vector<double> far1 = far_field(p.k1, nodes, s.dx);
  const std::vector<double> far2 = far_field(p.k2, nodes, s.dx);
  ConvolutionEngine conv1(p.k1, s.dx);
  ConvolutionEngine conv2(p.k2, s.dx);

  // Discrete row sums can exceed 1 by the quadrature error; start from an
  // upper solution that accounts for it.
  std::vector<double> ones(nodes, 1.0);
  std::vector<double> row1(nodes);
  std::vector<double> row2(nodes);
  conv1.apply(ones, s.L, row1);
  conv2.apply(ones, s.L, row2);
  double excess1 = 0.0;
  double excess2 = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    excess1 = std::max(excess1, row1[j] + far1[j] - 1.0);
    excess2 = std::max(excess2, row2[j] + far2[j] - 1.0);
  }
  double u_top = s.u_star;
  double v_top = s.v_star;
  if (excess1 > 0.0 || excess2 > 0.0) {
    ReactionSpec shifted = r;
    shifted.a -= p.d1 * excess1;
    shifted.b -= p.d2 * excess2;
    if (!(shifted.a > 0.0) || !(shifted.b > 0.0)) {
      throw NumericalError("solve_steady: quadrature row sums too large for dx");
    }
    const auto top = equilibrium(shifted);
    if (!top) throw NumericalError("solve_steady: no discrete upper solution");
    u_top = std::max(u_top, top->u_star);
    v_top = std::max(v_top, top->v_star);
  }

  std::vector<double> U(nodes, u_top);
  std::vector<double> V(nodes, v_top);
  std::vector<double> cu(nodes);
  std::vector<double> cv(nodes);
  const double slack_u = kMonotoneSlack * s.u_star;
  const double slack_v = kMonotoneSlack * s.v_star;

  for (std::size_t it = 1;; ++it) {
    if (it > opts.max_iterations) {
      std::ostringstream msg;
      msg << "solve_steady: no convergence within " << opts.max_iterations << " iterations";
      throw NumericalError(msg.str());
    }
    conv1.apply(U, s.L, cu);
    conv2.apply(V, s.L, cv);
    double change = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
      const double un =
          (p.d1 * (cu[j] + s.u_star * far1[j]) + r.H(V[j])) / (p.d1 + r.a);
      const double vn =
          (p.d2 * (cv[j] + s.v_star * far2[j]) + r.G(U[j])) / (p.d2 + r.b);
      if (un > U[j] + slack_u || vn > V[j] + slack_v || un < 0.0 || vn < 0.0) {
        std::ostringstream msg;
        msg << "solve_steady: non-monotone iterate at x=" << s.x(j) << ", iteration " << it;
        throw NumericalError(msg.str());
      }
      change = std::max({change, std::abs(un - U[j]), std::abs(vn - V[j])});
      cu[j] = un;
      cv[j] = vn;
    }
    U.swap(cu);
    V.swap(cv);
    if (observer) observer(it, U, V);
    if (change <= opts.tol) {
      s.iterations = it;
      break;
    }
  }
  s.U = std::move(U);
  s.V = std::move(V);
  s.residual = steady_defect(p, s);
  return s;
}

double steady_defect(const ModelParams& p, const SteadyProfile& s) {
  const std::size_t nodes = s.U.size();
  if (nodes == 0 || s.V.size() != nodes) throw std::invalid_argument("steady_defect: bad profile");
  const auto& r = p.reactions;
  std::vector<double> cu(nodes);
  std::vector<double> cv(nodes);
  ConvolutionEngine conv1(p.k1, s.dx);
  ConvolutionEngine conv2(p.k2, s.dx);
  conv1.apply_direct(s.U, s.L, cu);
  conv2.apply_direct(s.V, s.L, cv);
  const std::vector<double> far1 = far_field(p.k1, nodes, s.dx);
  const std::vector<double> far2 = far_field(p.k2, nodes, s.dx);
  double defect = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    const double du = p.d1 * (cu[j] + s.u_star * far1[j]) -
                      (p.d1 + r.a) * s.U[j] + r.H(s.V[j]);
    const double dv = p.d2 * (cv[j] + s.v_star * far2[j]) -
                      (p.d2 + r.b) * s.V[j] + r.G(s.U[j]);
    defect = std::max({defect, std::abs(du), std::abs(dv)});
  }
  return defect;
}

}  // namespace frontier
