#include "frontier/rate_law.hpp"

#include <charconv>
#include <cmath>
#include <regex>
#include <sstream>

#include "frontier/errors.hpp"

namespace frontier {

namespace {

std::string num(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

}  // namespace

double RateLaw::shape(double t) const {
  const double lt = std::log(t);
  switch (form) {
    case Form::Linear:
      return t;
    case Form::PowerLog:
    case Form::ExpPower:
      return std::pow(t, p) * (q == 0.0 ? 1.0 : std::pow(lt, q));
    case Form::LinearLogPow:
      return t * std::pow(lt, m);
    case Form::LinearLogLog:
      return t * std::log(lt);
  }
  return t;
}

std::string RateLaw::name() const {
  switch (form) {
    case Form::Linear:
      return "Linear";
    case Form::PowerLog:
      return "PowerLog(" + num(p) + "," + num(q) + ")";
    case Form::LinearLogPow:
      return "LinearLogPow(" + num(m) + ")";
    case Form::LinearLogLog:
      return "LinearLogLog";
    case Form::ExpPower:
      return "ExpPower(" + num(p) + "," + num(q) + ")";
  }
  return "?";
}

RateLaw RateLaw::parse(const std::string& label) {
  static const std::regex two(R"(^(PowerLog|ExpPower)\(([^,]+),([^)]+)\)$)");
  static const std::regex one(R"(^LinearLogPow\(([^)]+)\)$)");
  std::smatch m;
  if (label == "Linear") return linear();
  if (label == "LinearLogLog") return linear_log_log();
  try {
    if (std::regex_match(label, m, two)) {
      const double a = std::stod(m[2]);
      const double b = std::stod(m[3]);
      return m[1] == "PowerLog" ? power_log(a, b) : exp_power(a, b);
    }
    if (std::regex_match(label, m, one)) return linear_log_pow(std::stod(m[1]));
  } catch (const std::exception&) {
  }
  throw ConfigError("unrecognized rate law '" + label + "'");
}

}  // namespace frontier
