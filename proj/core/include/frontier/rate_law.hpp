#pragma once

#include <string>

namespace frontier {

// Candidate asymptotic growth law for the front h(t).
//
//   Linear        h ~ C t
//   PowerLog      h ~ C t^p ln^q t
//   LinearLogPow  h ~ C t ln^m t
//   LinearLogLog  h ~ C t ln ln t
//   ExpPower      ln h ~ C t^p ln^q t
struct RateLaw {
  enum class Form { Linear, PowerLog, LinearLogPow, LinearLogLog, ExpPower };

  Form form = Form::Linear;
  double p = 1.0;
  double q = 0.0;
  double m = 0.0;

  static RateLaw linear() { return {Form::Linear, 1.0, 0.0, 0.0}; }
  static RateLaw power_log(double p, double q) { return {Form::PowerLog, p, q, 0.0}; }
  static RateLaw linear_log_pow(double m) { return {Form::LinearLogPow, 1.0, 0.0, m}; }
  static RateLaw linear_log_log() { return {Form::LinearLogLog, 1.0, 0.0, 0.0}; }
  static RateLaw exp_power(double p, double q) { return {Form::ExpPower, p, q, 0.0}; }

  // g(t); requires t > e for the log-log form, t > 1 otherwise.
  double shape(double t) const;

  // True when the law describes ln h rather than h.
  bool on_log_scale() const { return form == Form::ExpPower; }

  // "PowerLog(2,0)" style label, also used as the JSON tag.
  std::string name() const;

  static RateLaw parse(const std::string& label);

  bool operator==(const RateLaw&) const = default;
};

}  // namespace frontier
