#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "frontier/discretization.hpp"
#include "frontier/rate_law.hpp"
#include "frontier/steadystate.hpp"

namespace frontier {

using Sample = std::pair<double, double>;  // (t, h)

struct SlopePoint {
  double t = 0.0;
  double slope = 0.0;
};

// Least-squares slope of ln h against ln t over [t_lo, t_hi].
double window_log_slope(std::span<const Sample> series, double t_lo, double t_hi);

// p(t): windowed log-log slope over [t / 10^(w/2), t * 10^(w/2)], reported
// at every sample whose window lies inside the data. Needs >= 50 positive
// samples spanning >= 1.5 decades (std::invalid_argument otherwise).
std::vector<SlopePoint> local_log_slope(std::span<const Sample> series,
                                        double window_decades);

struct Flatness {
  double C_hat = 0.0;         // geometric mean of r(t) = h / g(t)
  double maxmin_ratio = 0.0;  // max r / min r
  double trend_slope = 0.0;   // d ln r / d ln t by least squares
  double rms_resid = 0.0;     // rms of ln r about ln C_hat
  std::size_t points = 0;
};

// r(t) = h(t) / g(t) (or ln h / g for ExpPower) on [t_lo, t_hi].
Flatness ratio_flatness(std::span<const Sample> series, const RateLaw& law,
                        double t_lo, double t_hi);

struct CandidateFit {
  RateLaw law;
  Flatness stats;
};

struct RateFit {
  RateLaw law;
  double C_hat = 0.0;
  std::vector<SlopePoint> slope_diag;
  double flatness = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double rms_resid = 0.0;
  std::vector<CandidateFit> candidates;
};

// Scores every candidate on the window (default: last decade of t) and
// selects the one with the smallest |trend_slope|.
RateFit fit_rate(std::span<const Sample> series, std::span<const RateLaw> candidates,
                 std::optional<std::pair<double, double>> window = std::nullopt);

struct SpeedEstimate {
  double c0_hat = 0.0;       // slope of h over [T/2, T]
  double slope_early = 0.0;  // over [T/2, 3T/4]
  double slope_late = 0.0;   // over [3T/4, T]
  double relative_gap = 0.0; // |early - late| / max(|early|, |late|)
};

SpeedEstimate speed_estimate(std::span<const Sample> series);

struct GapPoint {
  double t = 0.0;
  double s = 0.0;
  double gap = 0.0;
};

// h / ln(e + h): o(h) and unbounded for every growth law considered.
double default_gap_extent(double h);

// For each snapshot, sup over x_j <= s(h) of |u - U| + |v - V|.
std::vector<GapPoint> profile_gap(std::span<const SimState> snapshots,
                                  const SteadyProfile& steady,
                                  const std::function<double(double)>& extent = default_gap_extent);

}  // namespace frontier
