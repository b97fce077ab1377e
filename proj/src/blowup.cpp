#include "graphheat/blowup.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "graphheat/heat_kernel.hpp"

namespace graphheat {

double cumulative_H(const SourceSpec& h, double t) {
  if (!(t >= 0.0)) throw Error(Errc::InvalidParameter, "H(t) needs t >= 0");
  return h.H(t);
}

double H_tilde(const SourceSpec& h, double lambda1, double q) {
  if (!(lambda1 > 0.0) || !(q > 1.0)) throw Error(Errc::InvalidParameter, "H~ needs lambda1 > 0 and q > 1");
  const double c = lambda1 * (q - 1.0);
  const double inf = std::numeric_limits<double>::infinity();
  switch (h.kind) {
    case SourceSpec::Kind::Constant:
      return h.amplitude / c;
    case SourceSpec::Kind::Exponential:
      if (h.amplitude == 0.0) return 0.0;
      return h.alpha >= c ? inf : h.amplitude / (c - h.alpha);
    case SourceSpec::Kind::Power:
      return h.amplitude * std::tgamma(h.beta + 1.0) / std::pow(c, h.beta + 1.0);
    case SourceSpec::Kind::Table: {
      // Linear pieces h0 + s (t - t0) on [t0, t1] against e^{-c t}, then the constant tail.
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < h.nodes_t.size(); ++i) {
        const double t0 = h.nodes_t[i], L = h.nodes_t[i + 1] - t0;
        const double s = (h.nodes_h[i + 1] - h.nodes_h[i]) / L;
        const double e0 = std::exp(-c * t0), eL = std::exp(-c * L);
        const double flat = h.nodes_h[i] * e0 * -std::expm1(-c * L) / c;
        const double ramp = s * e0 * (1.0 / (c * c) - eL * (L / c + 1.0 / (c * c)));
        sum += flat + ramp;
      }
      return sum + h.nodes_h.back() * std::exp(-c * h.nodes_t.back()) / c;
    }
  }
  return inf;
}

PhiSeries phi_series(const Trajectory& trajectory, const TruncatedDomain& domain, Index x, double T,
                     const SourceSpec& h, double tol) {
  if (trajectory.times.empty() || trajectory.times.front() != 0.0)
    throw Error(Errc::GridMismatch, "trajectory grid must start at t = 0");
  if (!(T > 0.0) || T > trajectory.times.back())
    throw Error(Errc::GridMismatch, fmt::format("T = {} outside the trajectory [0, {}]", T, trajectory.times.back()));
  if (x < 0 || x >= domain.size()) throw Error(Errc::InvalidParameter, fmt::format("probe {} out of range", x));

  PhiSeries s;
  s.x = x;
  s.T = T;
  std::size_t n = 0;
  while (n < trajectory.times.size() && trajectory.times[n] <= T) ++n;

  // p(x, z, T - t) = p(z, x, T - t): one kernel column at x, evaluated at the lags in increasing order.
  std::vector<double> lags;
  std::vector<std::size_t> slot(n);
  for (std::size_t k = n; k-- > 0;) {
    if (T - trajectory.times[k] > 0.0) {
      slot[k] = lags.size();
      lags.push_back(T - trajectory.times[k]);
    }
  }
  KernelColumn col;
  if (!lags.empty()) col = heat_kernel_column(domain, x, lags, tol);

  const VertexField& mu = domain.graph.mu();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = trajectory.times[k];
    const VertexField& u = trajectory.fields[k];
    s.times.push_back(t);
    s.values.push_back(T - t > 0.0 ? col.at(slot[k]).dot(u.cwiseProduct(mu)) : u(x));
    s.H_values.push_back(h.H(t));
  }
  const double direct = heat_apply(domain, trajectory.fields.front(), T, tol)(x);
  const double scale = std::max(std::abs(direct), std::abs(s.values.front()));
  s.endpoint_residual = scale > 0.0 ? std::abs(direct - s.values.front()) / scale : 0.0;
  return s;
}

PhiCheck phi_ode_check(const PhiSeries& series, const SourceSpec& h, double q) {
  PhiCheck out;
  const auto& t = series.times;
  if (t.size() < 2) return out;
  const double dt = t[1] - t[0];
  for (std::size_t k = 1; k + 1 < t.size(); ++k)
    if (std::abs((t[k + 1] - t[k]) - dt) > 1e-9 * std::max(1.0, t.back()))
      throw Error(Errc::GridMismatch, "Phi check needs a uniform grid");

  // Phi' >= h Phi^q integrates exactly to G(Phi_k) - G(Phi_{k+1}) >= H(t_{k+1}) - H(t_k)
  // with G(s) = s^{1-q}/(q-1), so the only error left is that of Phi itself.
  out.violation = -std::numeric_limits<double>::infinity();
  out.relative_violation = -std::numeric_limits<double>::infinity();
  auto G = [q](double s) { return std::pow(s, 1.0 - q) / (q - 1.0); };
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double a = series.values[k], b = series.values[k + 1];
    const double step = t[k + 1] - t[k];
    const double dH = h.integral(t[k], t[k + 1]);
    const double fd = (b - a) / step;
    const double trap = 0.5 * (h.value(t[k]) * std::pow(std::max(0.0, a), q) +
                               h.value(t[k + 1]) * std::pow(std::max(0.0, b), q));
    out.max_defect = std::max(out.max_defect, std::abs(trap - fd));
    if (!(a > 0.0) || !(b > 0.0)) {
      // Phi vanishes only for the zero solution; then Phi must stay put.
      out.violation = std::max(out.violation, a - b);
      continue;
    }
    const double gap = dH - (G(a) - G(b));
    out.violation = std::max(out.violation, gap);
    if (dH > 0.0) out.relative_violation = std::max(out.relative_violation, gap / dH);
  }
  if (!std::isfinite(out.relative_violation)) out.relative_violation = std::max(0.0, out.violation);
  return out;
}

TimeBound lemma2_blowup_time_bound(const VertexField& u0, const TruncatedDomain& domain,
                                   const std::vector<Index>& probes, double q, const SourceSpec& h,
                                   const TimeBoundOptions& options) {
  if (!(q > 1.0)) throw Error(Errc::InvalidParameter, "q must exceed 1");
  if (probes.empty()) throw Error(Errc::InvalidParameter, "no probe vertices");
  if (u0.size() != domain.size()) throw Error(Errc::DimensionMismatch, "datum length does not match the vertex count");
  if ((u0.array() < 0.0).any()) throw Error(Errc::InvalidParameter, "datum must be nonnegative");
  for (Index p : probes)
    if (p < 0 || p >= domain.size()) throw Error(Errc::InvalidParameter, fmt::format("probe {} out of range", p));

  TimeBound out;
  out.probes = probes;
  out.per_probe.assign(probes.size(), std::numeric_limits<double>::infinity());
  if (u0.maxCoeff() == 0.0) throw Error(Errc::NoBoundInHorizon, "zero datum never blows up");

  const HeatPropagator prop(domain, options.tol);
  const double t0 = options.t0;
  auto g = [&](double T, double w) { return (q - 1.0) * h.integral(t0, t0 + T) * std::pow(w, q - 1.0); };

  // Scan 20 points per decade from a tiny time up to 0.05, then in steps of 0.05.
  std::vector<double> grid;
  const double first = 1e-14 * std::max(1.0, std::abs(t0));
  for (int k = 0;; ++k) {
    const double T = first * std::pow(10.0, k / 20.0);
    if (T >= 0.05 || T >= options.cap) break;
    grid.push_back(T);
  }
  for (double T = 0.05; T < options.cap; T += 0.05) grid.push_back(T);
  grid.push_back(options.cap);

  VertexField w = u0;
  double T_prev = 0.0;
  std::size_t open = probes.size();
  for (double T : grid) {
    const VertexField next = prop.apply(w, T - T_prev);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      if (std::isfinite(out.per_probe[i]) || g(T, next(probes[i])) < 1.0) continue;
      double lo = T_prev, hi = T;
      while (hi - lo > options.rel * hi) {
        const double mid = 0.5 * (lo + hi);
        const double wm = prop.apply(w, mid - T_prev)(probes[i]);
        (g(mid, wm) >= 1.0 ? hi : lo) = mid;
      }
      out.per_probe[i] = hi;
      --open;
    }
    w = next;
    T_prev = T;
    if (open == 0) break;
  }

  const auto best = std::min_element(out.per_probe.begin(), out.per_probe.end());
  if (!std::isfinite(*best))
    throw Error(Errc::NoBoundInHorizon, fmt::format("no probe reaches the threshold before T = {}", options.cap));
  out.T_upper = *best;
  out.probe = probes[static_cast<std::size_t>(best - out.per_probe.begin())];
  return out;
}

std::vector<Index> default_probes(const TruncatedDomain& domain) {
  const auto dist = hop_distances(domain.graph, domain.origin);
  int target = domain.radius / 2;
  if (target < 1) target = 1;
  const int far = *std::max_element(dist.begin(), dist.end());
  target = std::min(target, far);
  for (std::size_t x = 0; x < dist.size(); ++x)
    if (dist[x] == target) return {domain.origin, static_cast<Index>(x)};
  return {domain.origin};
}

LowerBoundCheck lemma1_lower_bound_check(const TruncatedDomain& domain, const VertexField& u0, Index x0,
                                         double lambda1, double eps, const std::vector<double>& t_grid, double tol) {
  if (x0 < 0 || x0 >= domain.size()) throw Error(Errc::InvalidParameter, fmt::format("vertex {} out of range", x0));
  if (u0.size() != domain.size()) throw Error(Errc::DimensionMismatch, "datum length does not match the vertex count");
  if (!(u0(x0) > 0.0)) throw Error(Errc::InvalidParameter, fmt::format("u0({}) must be positive", x0));
  if (!(eps > 0.0) || (lambda1 > 0.0 && !(eps < lambda1)))
    throw Error(Errc::InvalidParameter, "eps must lie in (0, lambda1)");
  if (t_grid.size() < 2) throw Error(Errc::WindowTooShort, "lower-bound check needs at least two grid times");
  for (std::size_t k = 0; k < t_grid.size(); ++k)
    if (!(t_grid[k] >= 0.0) || (k > 0 && !(t_grid[k] > t_grid[k - 1])))
      throw Error(Errc::InvalidParameter, "grid must be nonnegative and increasing");

  LowerBoundCheck out;
  out.C1 = u0(x0) * domain.graph.mu(x0);
  const HeatPropagator prop(domain, tol);
  VertexField w = u0;
  double now = 0.0;
  std::size_t first_good = t_grid.size();
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    w = prop.apply(w, t_grid[k] - now);
    now = t_grid[k];
    const bool ok = w(x0) >= out.C1 * std::exp(-(lambda1 + eps) * now);
    if (!ok)
      first_good = t_grid.size();
    else if (first_good == t_grid.size())
      first_good = k;
  }
  if (first_good < t_grid.size()) {
    out.holds = true;
    out.t0 = t_grid[first_good];
  }
  return out;
}

std::string to_string(CriterionVerdict v) {
  switch (v) {
    case CriterionVerdict::Diverges:
      return "Diverges";
    case CriterionVerdict::Converges:
      return "Converges";
    case CriterionVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

CriterionResult theorem1_criterion(const SourceSpec& h, double q, double lambda1, std::vector<double> eps_grid) {
  if (!(lambda1 > 0.0) || !(q > 1.0)) throw Error(Errc::InvalidParameter, "criterion needs lambda1 > 0 and q > 1");
  if (eps_grid.empty()) eps_grid = {lambda1 / 8, lambda1 / 4, lambda1 / 2, 3 * lambda1 / 4};
  std::sort(eps_grid.begin(), eps_grid.end());

  CriterionResult out;
  switch (h.kind) {
    case SourceSpec::Kind::Exponential:
      out.slope = h.amplitude > 0.0 ? std::max(0.0, h.alpha) / (q - 1.0) : 0.0;
      break;
    case SourceSpec::Kind::Constant:
    case SourceSpec::Kind::Power:
      out.slope = 0.0;
      break;
    case SourceSpec::Kind::Table: {
      const double t1 = h.nodes_t.back(), tm = 0.5 * t1;
      const double H1 = h.H(t1), Hm = h.H(tm);
      out.slope = (H1 > 0.0 && Hm > 0.0) ? (std::log(H1) - std::log(Hm)) / ((q - 1.0) * (t1 - tm)) : 0.0;
      break;
    }
  }

  if (std::abs(out.slope - lambda1) <= 1e-3) {
    out.verdict = CriterionVerdict::Inconclusive;
    return out;
  }
  if (out.slope < lambda1) {
    out.verdict = CriterionVerdict::Converges;
    return out;
  }
  for (double e : eps_grid) {
    if (out.slope > lambda1 + e) {
      out.verdict = CriterionVerdict::Diverges;
      out.eps = e;
      return out;
    }
  }
  // The gap is narrower than every grid point: keep halving below the smallest one.
  for (double e = eps_grid.front() / 2; e > 0.0; e /= 2) {
    if (out.slope > lambda1 + e) {
      out.verdict = CriterionVerdict::Diverges;
      out.eps = e;
      return out;
    }
  }
  out.verdict = CriterionVerdict::Inconclusive;
  return out;
}

Certificate theorem2_certificate(const TruncatedDomain& domain, const VertexField& u0, double q, const SourceSpec& h,
                                 double gamma, Index y0, double lambda1, const CertificateOptions& options) {
  if (!(lambda1 > 0.0)) throw Error(Errc::InvalidParameter, "certificate needs lambda1 > 0");
  if (!(gamma > 0.0)) throw Error(Errc::InvalidParameter, "gamma must be positive");
  if (u0.size() != domain.size()) throw Error(Errc::DimensionMismatch, "datum length does not match the vertex count");
  if ((u0.array() < 0.0).any()) throw Error(Errc::InvalidParameter, "datum must be nonnegative");

  Certificate c;
  c.gamma = gamma;
  c.y0 = y0;
  c.lambda1 = lambda1;
  c.Htilde = H_tilde(h, lambda1, q);
  c.C_under = envelope_constant(domain, y0, lambda1, options.tol, options.window_from, options.window_to);
  const VertexField p = heat_kernel_column(domain, y0, {gamma}, options.tol).at(0);

  const double U0 = u0.maxCoeff();
  const double inf = std::numeric_limits<double>::infinity();
  const double delta_max = std::isfinite(c.Htilde) && c.Htilde > 0.0 ? std::pow(1.0 / (q * c.Htilde), 1.0 / (q - 1.0))
                           : c.Htilde == 0.0                          ? inf
                                                                      : 0.0;
  auto shrink = [&](double d) { return 1.0 - std::pow(d, q - 1.0) * c.Htilde; };

  if (U0 == 0.0) {
    // Zero datum: the zero solution is global; every condition holds vacuously.
    c.delta = std::isfinite(delta_max) && delta_max > 0.0 ? 0.5 * delta_max : 1.0;
    c.M = c.delta / c.C_under;
    c.epsilon = 0.0;
    for (const char* name : {"datum-below-delta", "M-bound", "delta-Htilde", "epsilon-window",
                             "contraction-q-delta-Htilde", "datum-below-eps-kernel"})
      c.checks.emplace_back(name, true);
    c.granted = true;
    return c;
  }

  if (!std::isfinite(c.Htilde) || delta_max == inf) {
    c.delta = 2.0 * U0;
  } else if (delta_max > U0) {
    // Log grid strictly inside (U0, delta_max); keep the delta with the widest epsilon window.
    double best = -inf;
    for (int k = 1; k <= options.delta_grid; ++k) {
      const double d = U0 * std::pow(delta_max / U0, static_cast<double>(k) / (options.delta_grid + 1));
      const double width = d * shrink(d);
      if (width > best) {
        best = width;
        c.delta = d;
      }
    }
  } else {
    c.delta = delta_max;
  }
  c.M = c.delta / c.C_under;

  double ratio = 0.0;
  for (Index x = 0; x < domain.size(); ++x) ratio = std::max(ratio, u0(x) / p(x));
  c.epsilon = ratio * (1.0 + 8 * std::numeric_limits<double>::epsilon());

  const double dq = std::pow(c.delta, q - 1.0) * c.Htilde;
  bool datum_ok = true;
  for (Index x = 0; x < domain.size(); ++x) datum_ok = datum_ok && u0(x) <= c.epsilon * p(x);
  c.checks = {
      {"datum-below-delta", U0 < c.delta},
      {"M-bound", c.M <= c.delta / c.C_under},
      {"delta-Htilde", dq < 1.0},
      {"epsilon-window", c.epsilon > 0.0 && c.epsilon < c.M * (1.0 - dq)},
      {"contraction-q-delta-Htilde", q * dq < 1.0},
      {"datum-below-eps-kernel", datum_ok},
  };
  c.granted = true;
  for (const auto& [name, ok] : c.checks) {
    if (!ok) {
      c.granted = false;
      c.failed_check = name;
      break;
    }
  }
  return c;
}

}  // namespace graphheat
