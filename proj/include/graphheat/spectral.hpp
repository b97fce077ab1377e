#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "graphheat/graph.hpp"

namespace graphheat {

/// (Delta f)(x) = (1/mu(x)) [ sum_y omega(x,y) (f(y) - f(x)) - kill(x) f(x) ].
///
/// Works for any scalar type and any dense Eigen expression of matching length.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> apply_laplacian(const TruncatedDomain& domain,
                                                                           const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  if (f.cols() != 1 || f.rows() != domain.size())
    throw Error(Errc::DimensionMismatch, "field length does not match the vertex count");
  const auto& g = domain.graph;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(domain.size());
  for (Index x = 0; x < domain.size(); ++x) {
    Scalar acc(0);
    for (const auto& nb : g.neighbors(x)) acc += Scalar(nb.omega) * (f(nb.vertex) - f(x));
    acc -= Scalar(domain.kill(x)) * f(x);
    out(x) = acc / Scalar(g.mu(x));
  }
  return out;
}

/// ⟨f, g⟩_μ = Σ f g μ.
template <typename A, typename B>
typename A::Scalar mu_inner(const TruncatedDomain& domain, const Eigen::MatrixBase<A>& f, const Eigen::MatrixBase<B>& g) {
  return (f.array() * g.array() * domain.graph.mu().array().template cast<typename A::Scalar>()).sum();
}

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Sparse matrix of the Laplacian with killing (rows indexed like apply_laplacian).
SparseMatrix laplacian_matrix(const TruncatedDomain& domain);

/// D^{1/2} (-Delta) D^{-1/2} with D = diag(mu); symmetric positive semidefinite.
SparseMatrix symmetrized_operator(const TruncatedDomain& domain);

struct SpectralEstimate {
  double lambda1 = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int radius = 0;
};

struct LanczosOptions {
  int krylov_dim = 200;
  int max_restarts = 50;
  /// Below this value lambda1 is certified with the absolute tolerance instead.
  double near_zero = 1e-8;
  double absolute_tol = 1e-10;
};

/// Bottom of the spectrum of -Delta on the domain by restarted Lanczos with full
/// reorthogonalization. Certified by ||A v - lambda v|| <= tol * lambda, or by the
/// absolute tolerance when lambda is near zero. Throws NoConvergence.
SpectralEstimate lambda1(const TruncatedDomain& domain, double tol, const LanczosOptions& options = {});

struct ExhaustionResult {
  std::vector<SpectralEstimate> estimates;
  /// Extrapolated limit of lambda1 as the radius grows.
  double limit = 0.0;
  /// Change between the two highest-order extrapolants; NaN with fewer than 3 radii.
  double fit_residual = 0.0;
};

/// Rational (Wynn rho) extrapolation of values[k] sampled at abscissas[k] -> infinity.
/// Returns {limit, residual}.
std::pair<double, double> extrapolate_rho(const std::vector<double>& abscissas, const std::vector<double>& values);

/// lambda1 over an exhaustion by balls of the given radii, with monotone
/// non-increase checked up to 2*tol relative slack (MonotonicityViolation).
ExhaustionResult lambda1_exhaustion(const std::function<TruncatedDomain(int)>& family, const std::vector<int>& radii,
                                    double tol, const LanczosOptions& options = {});

ExhaustionResult lambda1_exhaustion(const GeneratorSpec& family, const std::vector<int>& radii, double tol,
                                    const LanczosOptions& options = {});

}  // namespace graphheat
