#include "frontier/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace frontier {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t n = 0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.n = n;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

std::pair<std::size_t, std::size_t> window_range(std::span<const Sample> s, double lo, double hi) {
  auto first = std::lower_bound(s.begin(), s.end(), lo,
                                [](const Sample& a, double t) { return a.first < t; });
  auto last = std::upper_bound(s.begin(), s.end(), hi,
                               [](double t, const Sample& a) { return t < a.first; });
  return {static_cast<std::size_t>(first - s.begin()), static_cast<std::size_t>(last - s.begin())};
}

void require_window(std::span<const Sample> s, double lo, double hi, const char* who) {
  if (s.empty()) throw std::invalid_argument(std::string(who) + ": empty series");
  const double eps = 1e-9 * std::max(1.0, std::abs(s.back().first));
  if (!(lo < hi) || lo < s.front().first - eps || hi > s.back().first + eps) {
    std::ostringstream msg;
    msg << who << ": window [" << lo << ", " << hi << "] outside data ["
        << s.front().first << ", " << s.back().first << "]";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double window_log_slope(std::span<const Sample> series, double t_lo, double t_hi) {
  require_window(series, t_lo, t_hi, "window_log_slope");
  const auto [b, e] = window_range(series, t_lo, t_hi);
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = b; i < e; ++i) {
    if (series[i].first <= 0.0 || series[i].second <= 0.0) continue;
    x.push_back(std::log(series[i].first));
    y.push_back(std::log(series[i].second));
  }
  if (x.size() < 3) throw std::invalid_argument("window_log_slope: fewer than 3 samples in window");
  return least_squares(x, y).slope;
}

std::vector<SlopePoint> local_log_slope(std::span<const Sample> series, double window_decades) {
  if (!(window_decades > 0.0)) throw std::invalid_argument("local_log_slope: window must be positive");
  std::vector<double> lt;
  std::vector<double> lh;
  for (const auto& [t, h] : series) {
    if (t <= 0.0) continue;
    if (!(h > 0.0)) throw std::invalid_argument("local_log_slope: h must be positive");
    lt.push_back(std::log(t));
    lh.push_back(std::log(h));
  }
  if (lt.size() < 50 || (lt.back() - lt.front()) < 1.5 * std::numbers::ln10) {
    throw std::invalid_argument(
        "local_log_slope: insufficient data (need >= 50 samples spanning >= 1.5 decades)");
  }
  const std::size_t n = lt.size();
  // Centered prefix sums keep the normal equations well conditioned.
  const double cx = lt[n / 2];
  const double cy = lh[n / 2];
  std::vector<double> sx(n + 1, 0.0), sy(n + 1, 0.0), sxx(n + 1, 0.0), sxy(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lt[i] - cx;
    const double y = lh[i] - cy;
    sx[i + 1] = sx[i] + x;
    sy[i + 1] = sy[i] + y;
    sxx[i + 1] = sxx[i] + x * x;
    sxy[i + 1] = sxy[i] + x * y;
  }
  const double half = 0.5 * window_decades * std::numbers::ln10;
  std::vector<SlopePoint> out;
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = lt[i] - half;
    const double b = lt[i] + half;
    if (a < lt.front() - 1e-12 || b > lt.back() + 1e-12) continue;
    while (lo < n && lt[lo] < a) ++lo;
    if (hi < lo) hi = lo;
    while (hi < n && lt[hi] <= b) ++hi;
    const auto m = static_cast<double>(hi - lo);
    if (hi - lo < 3) continue;
    const double Sx = sx[hi] - sx[lo];
    const double Sy = sy[hi] - sy[lo];
    const double Sxx = sxx[hi] - sxx[lo] - Sx * Sx / m;
    const double Sxy = sxy[hi] - sxy[lo] - Sx * Sy / m;
    if (Sxx <= 0.0) continue;
    out.push_back({std::exp(lt[i]), Sxy / Sxx});
  }
  return out;
}

Flatness ratio_flatness(std::span<const Sample> series, const RateLaw& law, double t_lo,
                        double t_hi) {
  require_window(series, t_lo, t_hi, "ratio_flatness");
  const auto [b, e] = window_range(series, t_lo, t_hi);
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = b; i < e; ++i) {
    const auto [t, h] = series[i];
    const double g = law.shape(t);
    const double value = law.on_log_scale() ? std::log(h) : h;
    if (!(g > 0.0) || !(value > 0.0)) {
      throw std::invalid_argument("ratio_flatness: law or data not positive on window");
    }
    x.push_back(std::log(t));
    y.push_back(std::log(value / g));
  }
  if (x.size() < 3) throw std::invalid_argument("ratio_flatness: fewer than 3 samples in window");
  Flatness f;
  f.points = x.size();
  double mean = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : y) {
    mean += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  mean /= static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  f.C_hat = std::exp(mean);
  f.maxmin_ratio = std::exp(hi - lo);
  f.trend_slope = least_squares(x, y).slope;
  f.rms_resid = std::sqrt(ss / static_cast<double>(y.size()));
  return f;
}

RateFit fit_rate(std::span<const Sample> series, std::span<const RateLaw> candidates,
                 std::optional<std::pair<double, double>> window) {
  if (candidates.size() < 2) throw std::invalid_argument("fit_rate: need at least two candidates");
  if (series.empty()) throw std::invalid_argument("fit_rate: empty series");
  const double t_hi = window ? window->second : series.back().first;
  const double t_lo = window ? window->first : t_hi / 10.0;

  RateFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  double best = std::numeric_limits<double>::infinity();
  for (const RateLaw& law : candidates) {
    CandidateFit c{law, ratio_flatness(series, law, t_lo, t_hi)};
    if (std::abs(c.stats.trend_slope) < best) {
      best = std::abs(c.stats.trend_slope);
      fit.law = law;
      fit.C_hat = c.stats.C_hat;
      fit.flatness = c.stats.maxmin_ratio;
      fit.rms_resid = c.stats.rms_resid;
    }
    fit.candidates.push_back(c);
  }
  try {
    fit.slope_diag = local_log_slope(series, 1.0 / 3.0);
  } catch (const std::invalid_argument&) {
    // Too little data for the slope diagnostic; the selection stands.
  }
  return fit;
}

SpeedEstimate speed_estimate(std::span<const Sample> series) {
  if (series.size() < 12) throw std::invalid_argument("speed_estimate: insufficient data");
  const double T = series.back().first;
  auto slope = [&](double lo, double hi) {
    const auto [b, e] = window_range(series, lo, hi);
    if (e - b < 4) throw std::invalid_argument("speed_estimate: insufficient data in window");
    std::vector<double> x, y;
    for (std::size_t i = b; i < e; ++i) {
      x.push_back(series[i].first);
      y.push_back(series[i].second);
    }
    return least_squares(x, y).slope;
  };
  SpeedEstimate s;
  s.c0_hat = slope(0.5 * T, T);
  s.slope_early = slope(0.5 * T, 0.75 * T);
  s.slope_late = slope(0.75 * T, T);
  const double scale = std::max(std::abs(s.slope_early), std::abs(s.slope_late));
  s.relative_gap = scale > 0.0 ? std::abs(s.slope_early - s.slope_late) / scale : 0.0;
  return s;
}

double default_gap_extent(double h) { return h / std::log(std::numbers::e + h); }

std::vector<GapPoint> profile_gap(std::span<const SimState> snapshots, const SteadyProfile& steady,
                                  const std::function<double(double)>& extent) {
  std::vector<GapPoint> out;
  for (const SimState& snap : snapshots) {
    if (std::abs(snap.grid.dx - steady.dx) > 1e-12 * steady.dx) {
      throw std::invalid_argument("profile_gap: snapshot and steady profile use different dx");
    }
    const double s = extent(snap.h);
    if (s > steady.L) {
      std::ostringstream msg;
      msg << "profile_gap: s(t) = " << s << " exceeds the steady profile length " << steady.L;
      throw std::invalid_argument(msg.str());
    }
    const std::size_t n = std::min(snap.u.size(), steady.U.size());
    double gap = 0.0;
    for (std::size_t j = 0; j < n && snap.grid.x(j) <= s; ++j) {
      gap = std::max(gap, std::abs(snap.u[j] - steady.U[j]) + std::abs(snap.v[j] - steady.V[j]));
    }
    out.push_back({snap.t, s, gap});
  }
  return out;
}

}  // namespace frontier
