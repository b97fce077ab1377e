#pragma once

#include <limits>
#include <string>
#include <vector>

#include "graphheat/graph.hpp"
#include "graphheat/heat_kernel.hpp"
#include "graphheat/source.hpp"

namespace graphheat {

/// u_t = Delta u + h(t) u^q on a truncated domain, u(0) = u0 >= 0.
struct Problem {
  TruncatedDomain domain;
  double q = 2.0;
  SourceSpec h;
  VertexField u0;
  double horizon = 1.0;
  /// Relative sup-distance at which Picard iteration stops.
  double tol = 1e-10;
  double blowup_threshold = 1e12;
  double dt_min = 1e-10;

  /// Entrywise relative accuracy of the heat propagator.
  double kernel_tol = 1e-13;
  /// Trapezoid nodes per slab (even).
  int nodes = 16;
  double max_slab = 0.5;
  int max_iterations = 60;
  double contraction_limit = 0.75;
  /// Fields are stored at these times (plus 0); empty means only 0 and the horizon.
  std::vector<double> output_times;
  /// Combine slab end values from nodes and nodes/2 (Richardson, fourth order).
  bool extrapolate = true;
  /// Widen a blow-up bracket by the change seen with half the nodes per slab.
  bool richardson_margin = true;

  void validate() const;
};

enum class Verdict { CompletedHorizon, BlowupDetected, SolverFailure };

std::string to_string(Verdict v);

struct SlabStat {
  double t_a = 0.0;
  double t_b = 0.0;
  int iterations = 0;
  double contraction = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<VertexField> fields;
  std::vector<double> supnorm;
  Verdict verdict = Verdict::SolverFailure;
  /// Blow-up bracket; NaN unless verdict is BlowupDetected.
  double t_lo = std::numeric_limits<double>::quiet_NaN();
  double t_hi = std::numeric_limits<double>::quiet_NaN();
  /// Time at which blow-up was certified and the sup-norm there.
  double t_detect = std::numeric_limits<double>::quiet_NaN();
  double sup_detect = std::numeric_limits<double>::quiet_NaN();
  std::vector<SlabStat> picard_stats;
  std::string message;

  double max_contraction() const;
};

/// Fixed point of the Duhamel map on one slab, sampled at nodes+1 equispaced times.
struct SlabSolution {
  std::vector<VertexField> nodes;
  int iterations = 0;
  double contraction = 0.0;
};

/// Picard iteration of
///   (Psi u)(t) = e^{(t-t_a) Delta} u_a + int_{t_a}^t e^{(t-s) Delta} h(s) u(s)^q ds
/// with the integral taken by the composite trapezoid rule on the slab nodes.
/// Throws ContractionViolated when the measured ratio of successive distances
/// exceeds problem.contraction_limit or the iteration cap is hit.
SlabSolution picard_slab(const VertexField& u_a, double t_a, double t_b, const Problem& problem,
                         const HeatPropagator& prop);

/// Slab-by-slab mild solution. Each slab obeys
///   invariance   ||u_k|| + M^q int h <= M
///   contraction  q M^{q-1} int h <= 1/2
/// with M = 2 ||u(t_k)||_inf, and is halved on ContractionViolated. Blow-up is
/// reported when the sup-norm passes blowup_threshold, or when slabs shrink
/// below dt_min and a finite remaining-time bound is certified from the
/// current state; shrinking without such a bound is a SolverFailure.
Trajectory solve(const Problem& problem);

/// Method-of-lines oracle: Dormand-Prince 5(4) on u' = Delta u + h u^q with
/// purely relative error control. Same verdict semantics as solve().
Trajectory mol_reference_solve(const Problem& problem, double rtol = 1e-10);

struct BoundMonitor {
  std::vector<double> ratio;
  bool holds = true;
};

/// ratio(t) = max_x u(x,t) / p(x, y0, t + gamma); holds iff ratio <= M at every stored time.
BoundMonitor global_bound_monitor(const Trajectory& trajectory, const TruncatedDomain& domain, Index y0, double gamma,
                                  double M, double tol = 1e-13);

/// round(t_end / step) equal steps ending exactly at t_end; 0 is not included.
std::vector<double> uniform_grid(double t_end, double step);

}  // namespace graphheat
