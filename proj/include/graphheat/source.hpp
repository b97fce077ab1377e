#pragma once

#include <string>
#include <vector>

namespace graphheat {

/// Time factor h(t) >= 0 of the source term h(t) u^q.
///
///   constant     h = a
///   exponential  h = a e^{alpha t}
///   power        h = a t^beta        (beta >= 0)
///   table        piecewise linear through (t_i, h_i), t_0 = 0, constant after the last node
///
/// Every family has an exact cumulative integral H(t) = int_0^t h.
struct SourceSpec {
  enum class Kind { Constant, Exponential, Power, Table };

  Kind kind = Kind::Constant;
  double amplitude = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> nodes_t;
  std::vector<double> nodes_h;

  static SourceSpec constant(double h0);
  static SourceSpec exponential(double alpha, double amplitude = 1.0);
  static SourceSpec power(double beta, double amplitude = 1.0);
  static SourceSpec table(std::vector<double> t, std::vector<double> h);

  /// Throws InvalidParameter unless the family is well defined and h >= 0.
  void validate() const;

  double value(double t) const;
  double H(double t) const { return integral(0.0, t); }
  /// int_a^b h, computed without cancellation for short intervals far from 0.
  double integral(double a, double b) const;
  /// Smallest b >= a with integral(a, b) >= budget (b <= cap, returns cap if not reached).
  double advance(double a, double budget, double cap) const;

  std::string describe() const;
};

}  // namespace graphheat
