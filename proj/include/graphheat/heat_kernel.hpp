#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "graphheat/graph.hpp"
#include "graphheat/spectral.hpp"

namespace graphheat {

/// Action of e^{t Delta} on vertex fields.
///
/// Uses uniformization: with sigma = max_x (deg(x) + kill(x)) / mu(x) the matrix
/// P = Delta + sigma I has no negative entries, and e^{t Delta} = e^{-sigma t} e^{t P}.
/// Each substep (sigma tau <= 1) sums the Taylor series of e^{tau P} until every
/// entry has converged to relative accuracy tol. All terms are nonnegative for
/// nonnegative input, so positivity holds exactly and small entries keep full
/// relative precision. Signed input is split into positive and negative parts.
class HeatPropagator {
 public:
  HeatPropagator(const TruncatedDomain& domain, double tol);

  VertexField apply(const VertexField& u, double t) const;
  double sigma() const noexcept { return sigma_; }
  double tol() const noexcept { return tol_; }
  Index size() const noexcept { return P_.rows(); }

 private:
  VertexField apply_nonnegative(VertexField v, double t) const;

  SparseMatrix P_;
  double sigma_ = 0.0;
  double tol_ = 0.0;
};

/// e^{t Delta} u0; t = 0 returns u0 unchanged.
VertexField heat_apply(const TruncatedDomain& domain, const VertexField& u0, double t, double tol);

/// p(., y0, t) on an increasing grid of positive times, one column per time.
struct KernelColumn {
  Index source = 0;
  std::vector<double> times;
  Eigen::MatrixXd values;
  /// sum_x p(x, y0, t) mu(x) per time.
  std::vector<double> mass;
  double tol = 0.0;

  double operator()(Index x, std::size_t k) const { return values(x, static_cast<Index>(k)); }
  auto at(std::size_t k) const { return values.col(static_cast<Index>(k)); }
};

KernelColumn heat_kernel_column(const TruncatedDomain& domain, Index y0, const std::vector<double>& times,
                                double tol);

struct KernelReport {
  double symmetry_residual = 0.0;
  double mass_max = 0.0;
  double mass_min = 0.0;
  double semigroup_residual = 0.0;
  double positivity_min = 0.0;
  double decay_slope = 0.0;
  double decay_slope_target = 0.0;
};

struct ValidationOptions {
  std::vector<std::pair<double, double>> semigroup_pairs{{0.5, 0.5}, {1.0, 2.0}};
  bool decay = true;
  double decay_from = 20.0;
  double decay_to = 40.0;
  double lambda_tol = 1e-10;
};

/// Symmetry over all ordered pairs of sample vertices, mass range, the
/// Chapman-Kolmogorov residual max_x |p(x,y,t+s) - sum_z p(x,z,t) p(z,y,s) mu(z)|,
/// the smallest kernel value, and the root-to-root decay slope against -lambda1.
KernelReport validate_kernel(const TruncatedDomain& domain, const std::vector<Index>& sample_vertices,
                             const std::vector<double>& sample_times, double tol,
                             const ValidationOptions& options = {});

struct DecayEstimate {
  double slope = 0.0;
  /// max over the window of p(x, y, t) e^{lambda1 t}.
  double envelope = 0.0;
  double lambda1 = 0.0;
};

/// Least-squares slope of log p(x, y, t) over `samples` equispaced times in
/// [t_a, t_b], with t_b > t_a >= 1. Throws UnderflowWindow if p is not a
/// positive normal number somewhere in the window.
DecayEstimate kernel_decay_rate(const TruncatedDomain& domain, Index x, Index y, double t_a, double t_b,
                                double lambda1, double tol, int samples = 41);

/// max over all x and `samples` times in [t_a, t_b] of p(x, y0, t) e^{lambda1 t}.
double envelope_constant(const TruncatedDomain& domain, Index y0, double lambda1, double tol, double t_a = 1.0,
                         double t_b = 40.0, int samples = 79);

/// Write-once store of kernel columns keyed by (domain hash, y0, tol, times).
class KernelCache {
 public:
  std::shared_ptr<const KernelColumn> column(const TruncatedDomain& domain, Index y0,
                                             const std::vector<double>& times, double tol);
  std::size_t size() const;

 private:
  using Key = std::tuple<std::uint64_t, Index, double, std::vector<double>>;
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const KernelColumn>> columns_;
};

}  // namespace graphheat
