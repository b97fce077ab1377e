#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphheat/graph.hpp"
#include "graphheat/mild_solver.hpp"
#include "graphheat/source.hpp"

namespace graphheat {

/// H(t) = int_0^t h.
double cumulative_H(const SourceSpec& h, double t);

/// int_0^inf h(t) e^{-lambda1 (q-1) t} dt, +inf when it diverges.
double H_tilde(const SourceSpec& h, double lambda1, double q);

/// Phi(t) = sum_z p(x, z, T - t) u(z, t) mu(z) on the trajectory times <= T.
struct PhiSeries {
  Index x = 0;
  double T = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> H_values;
  /// |Phi(0) - (e^{T Delta} u0)(x)| relative to the larger of the two.
  double endpoint_residual = 0.0;
};

/// Throws GridMismatch if T lies beyond the trajectory or the grid does not start at 0.
PhiSeries phi_series(const Trajectory& trajectory, const TruncatedDomain& domain, Index x, double T,
                     const SourceSpec& h, double tol = 1e-13);

struct PhiCheck {
  /// max over intervals of (H(t_{k+1}) - H(t_k)) - (G(Phi_k) - G(Phi_{k+1})), G(s) = s^{1-q}/(q-1);
  /// <= 0 when Phi' >= h Phi^q holds on every interval.
  double violation = 0.0;
  /// The same gap divided by H(t_{k+1}) - H(t_k), maximized over intervals with h > 0.
  double relative_violation = 0.0;
  /// max |difference quotient - trapezoid mean of h Phi^q|, zero for exact equality.
  double max_defect = 0.0;
};

/// Tests Phi' >= h Phi^q interval by interval on a uniform grid, in the integrated
/// form obtained by separating variables.
PhiCheck phi_ode_check(const PhiSeries& series, const SourceSpec& h, double q);

struct TimeBoundOptions {
  /// Largest T searched.
  double cap = 1e3;
  /// Time at which u0 is given; H is shifted to int_{t0}^{t0+T} h.
  double t0 = 0.0;
  double tol = 1e-13;
  double rel = 1e-6;
};

struct TimeBound {
  double T_upper = std::numeric_limits<double>::infinity();
  Index probe = 0;
  std::vector<Index> probes;
  /// +inf where the probe never reaches the threshold before the cap.
  std::vector<double> per_probe;
};

/// Smallest T with (q-1) H(T) [(e^{T Delta} u0)(x)]^{q-1} >= 1, minimized over probes.
/// No solution from u0 survives past T_upper. Throws NoBoundInHorizon if no probe
/// reaches 1 before the cap.
TimeBound lemma2_blowup_time_bound(const VertexField& u0, const TruncatedDomain& domain,
                                   const std::vector<Index>& probes, double q, const SourceSpec& h,
                                   const TimeBoundOptions& options = {});

/// Origin plus one vertex at half the radius (or a neighbor of the origin).
std::vector<Index> default_probes(const TruncatedDomain& domain);

struct LowerBoundCheck {
  double t0 = std::numeric_limits<double>::quiet_NaN();
  double C1 = 0.0;
  bool holds = false;
};

/// C1 = u0(x0) mu(x0); t0 is the first grid time from which
/// (e^{t Delta} u0)(x0) >= C1 e^{-(lambda1 + eps) t} holds at every later grid time.
LowerBoundCheck lemma1_lower_bound_check(const TruncatedDomain& domain, const VertexField& u0, Index x0,
                                         double lambda1, double eps, const std::vector<double>& t_grid,
                                         double tol = 1e-13);

enum class CriterionVerdict { Diverges, Converges, Inconclusive };

std::string to_string(CriterionVerdict v);

struct CriterionResult {
  CriterionVerdict verdict = CriterionVerdict::Inconclusive;
  /// Smallest grid eps with H^{1/(q-1)} e^{-(lambda1+eps) t} -> inf; NaN otherwise.
  double eps = std::numeric_limits<double>::quiet_NaN();
  /// Asymptotic exponential growth rate of H^{1/(q-1)}.
  double slope = 0.0;
};

/// Growth test lim H(t)^{1/(q-1)} e^{-(lambda1 + eps) t} = +inf for eps in the grid
/// (default lambda1 * {1/8, 1/4, 1/2, 3/4}, halved further below lambda1/8 if needed).
/// Slopes within 1e-3 of lambda1 are Inconclusive.
CriterionResult theorem1_criterion(const SourceSpec& h, double q, double lambda1, std::vector<double> eps_grid = {});

struct Certificate {
  double delta = 0.0;
  double M = 0.0;
  double epsilon = 0.0;
  double gamma = 1.0;
  Index y0 = 0;
  double Htilde = 0.0;
  double C_under = 0.0;
  double lambda1 = 0.0;
  std::vector<std::pair<std::string, bool>> checks;
  bool granted = false;
  std::string failed_check;
};

struct CertificateOptions {
  double tol = 1e-13;
  double window_from = 1.0;
  double window_to = 40.0;
  int delta_grid = 400;
};

/// Searches (delta, M, epsilon) witnessing the global-existence hypotheses:
///   ||u0|| < delta, M <= delta / C, delta^{q-1} H~ < 1, 0 < eps < M (1 - delta^{q-1} H~),
///   q delta^{q-1} H~ < 1, u0 <= eps p(., y0, gamma),
/// where C bounds p(x, y0, t) e^{lambda1 t} for t >= 1.
Certificate theorem2_certificate(const TruncatedDomain& domain, const VertexField& u0, double q, const SourceSpec& h,
                                 double gamma, Index y0, double lambda1, const CertificateOptions& options = {});

}  // namespace graphheat
