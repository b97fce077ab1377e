#include "graphheat/mild_solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "graphheat/blowup.hpp"

namespace graphheat {

void Problem::validate() const {
  if (!(q > 1.0) || !std::isfinite(q)) throw Error(Errc::InvalidParameter, fmt::format("q = {} must exceed 1", q));
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error(Errc::InvalidParameter, "horizon must be positive");
  if (!(tol > 0.0) || !(kernel_tol > 0.0)) throw Error(Errc::InvalidParameter, "tolerances must be positive");
  if (!(blowup_threshold > 0.0) || !(dt_min > 0.0) || !(max_slab > 0.0))
    throw Error(Errc::InvalidParameter, "blow-up threshold, dt_min and max_slab must be positive");
  if (nodes < 2 || nodes % 2 != 0) throw Error(Errc::InvalidParameter, "nodes per slab must be even and >= 2");
  if (max_iterations < 1) throw Error(Errc::InvalidParameter, "max_iterations must be positive");
  if (u0.size() != domain.size()) throw Error(Errc::DimensionMismatch, "datum length does not match the vertex count");
  if (!u0.allFinite() || (u0.array() < 0.0).any()) throw Error(Errc::InvalidParameter, "datum must be finite and >= 0");
  h.validate();
  for (std::size_t k = 0; k < output_times.size(); ++k) {
    if (!(output_times[k] > 0.0) || output_times[k] > horizon)
      throw Error(Errc::InvalidParameter, "output times must lie in (0, horizon]");
    if (k > 0 && !(output_times[k] > output_times[k - 1]))
      throw Error(Errc::InvalidParameter, "output times must be increasing");
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CompletedHorizon:
      return "CompletedHorizon";
    case Verdict::BlowupDetected:
      return "BlowupDetected";
    case Verdict::SolverFailure:
      return "SolverFailure";
  }
  return "?";
}

double Trajectory::max_contraction() const {
  double c = 0.0;
  for (const auto& s : picard_stats) c = std::max(c, s.contraction);
  return c;
}

std::vector<double> uniform_grid(double t_end, double step) {
  if (!(t_end > 0.0) || !(step > 0.0)) throw Error(Errc::InvalidParameter, "grid needs positive end and step");
  const auto n = static_cast<long>(std::llround(t_end / step));
  std::vector<double> out;
  for (long i = 1; i <= std::max(1L, n); ++i) out.push_back(t_end * static_cast<double>(i) / static_cast<double>(std::max(1L, n)));
  return out;
}

namespace {

SlabSolution picard_nodes(const VertexField& u_a, double t_a, double t_b, const Problem& problem,
                          const HeatPropagator& prop, int N) {
  const double dt = (t_b - t_a) / N;
  const double half = 0.5 * dt;

  std::vector<VertexField> lin(static_cast<std::size_t>(N + 1));
  std::vector<double> hv(static_cast<std::size_t>(N + 1));
  lin[0] = u_a;
  for (int i = 0; i <= N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (i > 0) lin[k] = prop.apply(lin[k - 1], dt);
    hv[k] = problem.h.value(i == N ? t_b : t_a + i * dt);
  }

  SlabSolution sol;
  sol.nodes = lin;
  std::vector<VertexField> f(lin.size()), next(lin.size());
  double prev = -1.0;
  for (int it = 1; it <= problem.max_iterations; ++it) {
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = hv[k] * sol.nodes[k].cwiseMax(0.0).array().pow(problem.q).matrix();
    // J_i = e^{dt Delta}(J_{i-1} + dt/2 f_{i-1}) + dt/2 f_i, J_0 = 0.
    VertexField J = VertexField::Zero(u_a.size());
    next[0] = u_a;
    double dist = 0.0, scale = u_a.cwiseAbs().maxCoeff();
    for (std::size_t k = 1; k < f.size(); ++k) {
      J = prop.apply(J + half * f[k - 1], dt) + half * f[k];
      next[k] = lin[k] + J;
      dist = std::max(dist, (next[k] - sol.nodes[k]).cwiseAbs().maxCoeff());
      scale = std::max(scale, next[k].cwiseAbs().maxCoeff());
    }
    sol.nodes.swap(next);
    sol.iterations = it;
    if (dist <= problem.tol * scale) return sol;
    if (prev > 64 * std::numeric_limits<double>::epsilon() * scale)
      sol.contraction = std::max(sol.contraction, dist / prev);
    if (sol.contraction > problem.contraction_limit)
      throw Error(Errc::ContractionViolated,
                  fmt::format("contraction factor {:.3f} on [{}, {}]", sol.contraction, t_a, t_b));
    prev = dist;
  }
  throw Error(Errc::ContractionViolated,
              fmt::format("no fixed point after {} iterations on [{}, {}]", problem.max_iterations, t_a, t_b));
}

}  // namespace

SlabSolution picard_slab(const VertexField& u_a, double t_a, double t_b, const Problem& problem,
                         const HeatPropagator& prop) {
  return picard_nodes(u_a, t_a, t_b, problem, prop, problem.nodes);
}

namespace {

// Slab end value, Richardson-extrapolated from N and N/2 nodes when enabled:
// the trapezoid error expands in even powers of the node spacing.
SlabSolution advance_slab(const VertexField& u_a, double t_a, double t_b, const Problem& problem,
                          const HeatPropagator& prop) {
  SlabSolution fine = picard_nodes(u_a, t_a, t_b, problem, prop, problem.nodes);
  if (!problem.extrapolate) return fine;
  const SlabSolution coarse = picard_nodes(u_a, t_a, t_b, problem, prop, problem.nodes / 2);
  VertexField& end = fine.nodes.back();
  const VertexField mixed = (4.0 * end - coarse.nodes.back()) / 3.0;
  end = (mixed.array() > 0.0).select(mixed, end);
  fine.contraction = std::max(fine.contraction, coarse.contraction);
  return fine;
}

// Remaining-time bound from the state u at time t; +inf if none within the cap.
double remaining_time(const Problem& problem, const VertexField& u, double t) {
  Index arg = 0;
  u.maxCoeff(&arg);
  std::vector<Index> probes{arg};
  if (problem.domain.origin != arg) probes.push_back(problem.domain.origin);
  TimeBoundOptions opt;
  opt.t0 = t;
  opt.cap = std::max(1.0, 2.0 * (problem.horizon - t));
  opt.tol = problem.kernel_tol;
  try {
    return lemma2_blowup_time_bound(u, problem.domain, probes, problem.q, problem.h, opt).T_upper;
  } catch (const Error& e) {
    if (e.code() == Errc::NoBoundInHorizon) return std::numeric_limits<double>::infinity();
    throw;
  }
}

void record(Trajectory& traj, double t, const VertexField& u) {
  traj.times.push_back(t);
  traj.fields.push_back(u);
  traj.supnorm.push_back(u.cwiseAbs().maxCoeff());
}

std::vector<double> targets(const Problem& problem) {
  auto out = problem.output_times;
  if (out.empty() || out.back() < problem.horizon) out.push_back(problem.horizon);
  return out;
}

}  // namespace

Trajectory solve(const Problem& problem) {
  problem.validate();
  const HeatPropagator prop(problem.domain, problem.kernel_tol);
  const double q = problem.q;

  Trajectory traj;
  record(traj, 0.0, problem.u0);
  VertexField u = problem.u0;
  double t = 0.0;

  auto blowup = [&](const char* why) {
    const double rest = remaining_time(problem, u, t);
    if (!std::isfinite(rest)) {
      traj.verdict = Verdict::SolverFailure;
      traj.message = fmt::format("{} at t = {} without a finite remaining-time bound", why, t);
      return;
    }
    traj.verdict = Verdict::BlowupDetected;
    traj.t_detect = t;
    traj.sup_detect = u.maxCoeff();
    if (traj.times.back() != t) record(traj, t, u);
    double margin = 0.0;
    if (problem.richardson_margin && problem.nodes % 4 == 0) {
      Problem coarse = problem;
      coarse.nodes = problem.nodes / 2;
      coarse.richardson_margin = false;
      const Trajectory c = solve(coarse);
      const double est = t + 0.5 * rest;
      margin = c.verdict == Verdict::BlowupDetected ? std::abs(est - (c.t_detect + 0.5 * (c.t_hi - c.t_detect)))
                                                    : problem.horizon;
    }
    traj.t_lo = std::max(0.0, t - margin);
    traj.t_hi = t + rest + margin;
    traj.message = fmt::format("{}; sup = {:.6e}", why, traj.sup_detect);
  };

  for (double target : targets(problem)) {
    while (t < target) {
      const double U = u.maxCoeff();
      if (U > problem.blowup_threshold) {
        blowup("sup-norm above threshold");
        return traj;
      }
      const double cap = std::min(target, t + problem.max_slab);
      double b = cap;
      if (U > 0.0) {
        const double M = 2.0 * U;
        const double budget = std::min(U / std::pow(M, q), 1.0 / (2.0 * q * std::pow(M, q - 1.0)));
        b = problem.h.advance(t, budget, cap);
      }
      SlabSolution slab;
      for (;;) {
        if (b - t < problem.dt_min && b < cap) {
          blowup("slab collapsed below dt_min");
          return traj;
        }
        try {
          slab = advance_slab(u, t, b, problem, prop);
          break;
        } catch (const Error& e) {
          if (e.code() != Errc::ContractionViolated) throw;
          b = t + 0.5 * (b - t);
        }
      }
      traj.picard_stats.push_back({t, b, slab.iterations, slab.contraction});
      u = std::move(slab.nodes.back());
      t = b;
    }
    record(traj, t, u);
  }
  traj.verdict = Verdict::CompletedHorizon;
  return traj;
}

BoundMonitor global_bound_monitor(const Trajectory& trajectory, const TruncatedDomain& domain, Index y0, double gamma,
                                  double M, double tol) {
  if (!(gamma > 0.0)) throw Error(Errc::InvalidParameter, "gamma must be positive");
  BoundMonitor mon;
  if (trajectory.times.empty()) return mon;
  std::vector<double> shifted;
  for (double t : trajectory.times) shifted.push_back(t + gamma);
  const auto col = heat_kernel_column(domain, y0, shifted, tol);
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    const double r = (trajectory.fields[k].array() / col.at(k).array()).maxCoeff();
    mon.ratio.push_back(r);
    if (!(r <= M)) mon.holds = false;
  }
  return mon;
}

}  // namespace graphheat
