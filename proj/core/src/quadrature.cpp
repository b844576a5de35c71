#include "frontier/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "frontier/errors.hpp"

namespace frontier::quad {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

constexpr std::size_t kMaxSegments = 4000;

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool at_noise;  // error estimate is the roundoff floor
  bool operator<(const Segment& other) const { return error < other.error; }
};

// One G7-K15 pass on [a, b].
Segment rule(const Integrand& f, double a, double b) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(mid);
  double kronrod = fc * wk[0];
  double gauss = fc * wg[0];
  double l1 = std::abs(fc) * wk[0];
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double dx = half * xk[i];
    const double fp = f(mid + dx);
    const double fm = f(mid - dx);
    kronrod += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    // Gauss nodes are the odd-indexed Kronrod nodes.
    if (i % 2 == 0) gauss += (fp + fm) * wg[i / 2];
  }
  const double noise = 50.0 * std::numeric_limits<double>::epsilon() * l1;
  const double diff = std::abs(kronrod - gauss);
  return {a, b, kronrod * half, std::max(diff, noise) * std::abs(half), diff <= noise};
}

Result adaptive(const Integrand& f, double a, double b, double rel_tol,
                double abs_floor) {
  std::priority_queue<Segment> heap;
  Segment first = rule(f, a, b);
  double total = first.value;
  double total_err = first.error;
  // Segments whose error is above roundoff; once none are left, further
  // bisection cannot help.
  std::size_t resolvable = first.at_noise ? 0 : 1;
  heap.push(first);

  auto converged = [&] {
    return resolvable == 0 || total_err <= std::max(rel_tol * std::abs(total), abs_floor);
  };
  while (!converged()) {
    if (heap.size() >= kMaxSegments) {
      std::ostringstream msg;
      msg << "quadrature failed to converge on [" << a << ", " << b
          << "]: error estimate " << total_err << " for value " << total;
      throw NumericalError(msg.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = rule(f, worst.a, mid);
    const Segment right = rule(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    resolvable += (left.at_noise ? 0 : 1) + (right.at_noise ? 0 : 1) - (worst.at_noise ? 0 : 1);
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the incremental updates.
  double sum = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(sum)) {
    std::ostringstream msg;
    msg << "quadrature produced a non-finite value on [" << a << ", " << b
        << "]";
    throw NumericalError(msg.str());
  }
  return {sum, err};
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, double rel_tol,
                 double abs_floor) {
  if (a == b) return {};
  if (b < a) {
    Result r = integrate(f, b, a, rel_tol, abs_floor);
    r.value = -r.value;
    return r;
  }
  if (std::isinf(b)) {
    // [a, a+1] directly, then x = a + e^u with u = s / (1 - s). Algebraic
    // decay becomes exponential in u, so no endpoint singularity is left.
    const Result head = adaptive(f, a, a + 1.0, rel_tol, abs_floor);
    auto mapped = [&](double s) {
      if (s >= 1.0) return 0.0;
      const double one_minus = 1.0 - s;
      const double u = s / one_minus;
      if (u > 700.0) return 0.0;
      const double e = std::exp(u);
      const double v = f(a + e);
      return v == 0.0 ? 0.0 : v * e / (one_minus * one_minus);
    };
    const Result tail = adaptive(mapped, 0.0, 1.0, rel_tol, abs_floor);
    return {head.value + tail.value, head.error + tail.error};
  }
  return adaptive(f, a, b, rel_tol, abs_floor);
}

Result integrate_pieces(const Integrand& f, double a, double b,
                        std::initializer_list<double> breaks, double rel_tol,
                        double abs_floor) {
  std::vector<double> pts{a};
  for (double p : breaks) {
    if (p > a && p < b) pts.push_back(p);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Result total;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Result piece = integrate(f, pts[i], pts[i + 1], rel_tol, abs_floor);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

}  // namespace frontier::quad
