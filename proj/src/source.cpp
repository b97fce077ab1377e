#include "graphheat/source.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "graphheat/errors.hpp"

namespace graphheat {

SourceSpec SourceSpec::constant(double h0) {
  SourceSpec s;
  s.kind = Kind::Constant;
  s.amplitude = h0;
  s.validate();
  return s;
}

SourceSpec SourceSpec::exponential(double alpha, double amplitude) {
  SourceSpec s;
  s.kind = Kind::Exponential;
  s.alpha = alpha;
  s.amplitude = amplitude;
  s.validate();
  return s;
}

SourceSpec SourceSpec::power(double beta, double amplitude) {
  SourceSpec s;
  s.kind = Kind::Power;
  s.beta = beta;
  s.amplitude = amplitude;
  s.validate();
  return s;
}

SourceSpec SourceSpec::table(std::vector<double> t, std::vector<double> h) {
  SourceSpec s;
  s.kind = Kind::Table;
  s.nodes_t = std::move(t);
  s.nodes_h = std::move(h);
  s.validate();
  return s;
}

void SourceSpec::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw Error(Errc::InvalidParameter, "source amplitude must be finite and nonnegative");
  switch (kind) {
    case Kind::Constant:
      break;
    case Kind::Exponential:
      if (!std::isfinite(alpha)) throw Error(Errc::InvalidParameter, "exponential rate must be finite");
      break;
    case Kind::Power:
      if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error(Errc::InvalidParameter, "power exponent must be >= 0");
      break;
    case Kind::Table:
      if (nodes_t.size() < 2 || nodes_t.size() != nodes_h.size())
        throw Error(Errc::InvalidParameter, "table needs at least two (t, h) nodes");
      if (nodes_t.front() != 0.0) throw Error(Errc::InvalidParameter, "table must start at t = 0");
      for (std::size_t i = 0; i < nodes_t.size(); ++i) {
        if (i > 0 && !(nodes_t[i] > nodes_t[i - 1]))
          throw Error(Errc::InvalidParameter, "table times must be increasing");
        if (!(nodes_h[i] >= 0.0) || !std::isfinite(nodes_h[i]))
          throw Error(Errc::InvalidParameter, "table values must be finite and nonnegative");
      }
      break;
  }
}

double SourceSpec::value(double t) const {
  switch (kind) {
    case Kind::Constant:
      return amplitude;
    case Kind::Exponential:
      return amplitude * std::exp(alpha * t);
    case Kind::Power:
      return beta == 0.0 ? amplitude : amplitude * std::pow(t, beta);
    case Kind::Table: {
      if (t >= nodes_t.back()) return nodes_h.back();
      const auto it = std::upper_bound(nodes_t.begin(), nodes_t.end(), t);
      const auto i = static_cast<std::size_t>(it - nodes_t.begin()) - 1;
      const double w = (t - nodes_t[i]) / (nodes_t[i + 1] - nodes_t[i]);
      return (1.0 - w) * nodes_h[i] + w * nodes_h[i + 1];
    }
  }
  return 0.0;
}

double SourceSpec::integral(double a, double b) const {
  if (b <= a) return 0.0;
  switch (kind) {
    case Kind::Constant:
      return amplitude * (b - a);
    case Kind::Exponential:
      if (alpha == 0.0) return amplitude * (b - a);
      return amplitude / alpha * std::exp(alpha * a) * std::expm1(alpha * (b - a));
    case Kind::Power: {
      const double p = beta + 1.0;
      if (a == 0.0) return amplitude * std::pow(b, p) / p;
      return amplitude * std::pow(a, p) * std::expm1(p * std::log1p((b - a) / a)) / p;
    }
    case Kind::Table: {
      double sum = 0.0;
      double lo = a;
      while (lo < b) {
        if (lo >= nodes_t.back()) {
          sum += nodes_h.back() * (b - lo);
          break;
        }
        const auto i = static_cast<std::size_t>(std::upper_bound(nodes_t.begin(), nodes_t.end(), lo) -
                                                nodes_t.begin());
        const double hi = std::min(b, nodes_t[i]);
        sum += 0.5 * (value(lo) + value(hi)) * (hi - lo);
        lo = hi;
      }
      return sum;
    }
  }
  return 0.0;
}

double SourceSpec::advance(double a, double budget, double cap) const {
  if (!(budget > 0.0) || cap <= a) return a;
  if (integral(a, cap) <= budget) return cap;
  double lo = a, hi = cap;
  for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (integral(a, mid) < budget ? lo : hi) = mid;
  }
  return lo;
}

std::string SourceSpec::describe() const {
  switch (kind) {
    case Kind::Constant:
      return fmt::format("constant:h0={}", amplitude);
    case Kind::Exponential:
      return fmt::format("exponential:alpha={},a={}", alpha, amplitude);
    case Kind::Power:
      return fmt::format("power:beta={},a={}", beta, amplitude);
    case Kind::Table:
      return fmt::format("table:nodes={}", nodes_t.size());
  }
  return {};
}

}  // namespace graphheat
