#include "graphheat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace graphheat {

SparseMatrix laplacian_matrix(const TruncatedDomain& domain) {
  const auto& g = domain.graph;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(domain.size() + 2 * static_cast<Index>(g.edges().size())));
  for (Index x = 0; x < domain.size(); ++x) {
    const double inv_mu = 1.0 / g.mu(x);
    entries.emplace_back(x, x, -(g.degree(x) + domain.kill(x)) * inv_mu);
    for (const auto& nb : g.neighbors(x)) entries.emplace_back(x, nb.vertex, nb.omega * inv_mu);
  }
  SparseMatrix L(domain.size(), domain.size());
  L.setFromTriplets(entries.begin(), entries.end());
  return L;
}

SparseMatrix symmetrized_operator(const TruncatedDomain& domain) {
  const auto& g = domain.graph;
  std::vector<Eigen::Triplet<double>> entries;
  for (Index x = 0; x < domain.size(); ++x) {
    entries.emplace_back(x, x, (g.degree(x) + domain.kill(x)) / g.mu(x));
    for (const auto& nb : g.neighbors(x))
      entries.emplace_back(x, nb.vertex, -nb.omega / std::sqrt(g.mu(x) * g.mu(nb.vertex)));
  }
  SparseMatrix A(domain.size(), domain.size());
  A.setFromTriplets(entries.begin(), entries.end());
  return A;
}

SpectralEstimate lambda1(const TruncatedDomain& domain, double tol, const LanczosOptions& options) {
  if (!(tol > 0.0)) throw Error(Errc::InvalidParameter, "lambda1 tolerance must be positive");
  const SparseMatrix A = symmetrized_operator(domain);
  const Index n = A.rows();
  const Index m = std::min<Index>(options.krylov_dim, n);

  // sqrt(mu) is the symmetrized image of the constant function; it is positive,
  // so it overlaps the (positive) ground state.
  Eigen::VectorXd v = domain.graph.mu().cwiseSqrt();
  v.normalize();

  SpectralEstimate est;
  est.radius = domain.radius;
  Eigen::MatrixXd V(n, m + 1);
  Eigen::VectorXd alpha(m), beta(m);

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    V.col(0) = v;
    Index k = 0;
    for (Index j = 0; j < m; ++j) {
      Eigen::VectorXd w = A * V.col(j);
      ++est.iterations;
      alpha(j) = V.col(j).dot(w);
      k = j + 1;
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(k) * (V.leftCols(k).transpose() * w);
      beta(j) = w.norm();
      if (j + 1 == m || beta(j) <= 1e-13 * std::abs(alpha(j)) + std::numeric_limits<double>::min()) break;
      V.col(j + 1) = w / beta(j);
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    T.diagonal() = alpha.head(k);
    if (k > 1) {
      T.diagonal(1) = beta.head(k - 1);
      T.diagonal(-1) = beta.head(k - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
    const double theta = eig.eigenvalues()(0);
    Eigen::VectorXd y = V.leftCols(k) * eig.eigenvectors().col(0);
    y.normalize();

    const Eigen::VectorXd r = A * y - theta * y;
    ++est.iterations;
    est.residual = r.norm();
    est.lambda1 = std::max(0.0, theta);
    const double target = est.lambda1 > options.near_zero ? tol * est.lambda1 : options.absolute_tol;
    if (est.residual <= target) return est;
    v = y;
  }
  throw Error(Errc::NoConvergence,
              fmt::format("lambda1 residual {:.3e} after {} matvecs (radius {})", est.residual, est.iterations,
                          domain.radius));
}

std::pair<double, double> extrapolate_rho(const std::vector<double>& x, const std::vector<double>& s) {
  if (s.empty() || x.size() != s.size()) throw Error(Errc::InvalidParameter, "extrapolation needs matching samples");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (s.size() < 3) return {s.back(), nan};

  // rho_{k+1}^{(i)} = rho_{k-1}^{(i+1)} + (x_{i+k+1} - x_i) / (rho_k^{(i+1)} - rho_k^{(i)}).
  std::vector<double> prev(s.size() + 1, 0.0);
  std::vector<double> cur = s;
  std::vector<std::vector<double>> even{cur};
  for (std::size_t k = 0; cur.size() > 1; ++k) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const double diff = cur[i + 1] - cur[i];
      if (diff == 0.0) {
        // Converged exactly; nothing left to extrapolate.
        const double lim = k % 2 == 0 ? cur.back() : even.back().back();
        return {lim, 0.0};
      }
      next[i] = prev[i + 1] + (x[i + k + 1] - x[i]) / diff;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 1) even.push_back(cur);
  }
  const double limit = even.back().back();
  const double residual = std::abs(limit - even[even.size() - 2].back());
  return {limit, residual};
}

ExhaustionResult lambda1_exhaustion(const std::function<TruncatedDomain(int)>& family, const std::vector<int>& radii,
                                    double tol, const LanczosOptions& options) {
  if (radii.empty()) throw Error(Errc::InvalidParameter, "exhaustion needs at least one radius");
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (radii[k] <= radii[k - 1]) throw Error(Errc::InvalidParameter, "radii must be strictly increasing");

  ExhaustionResult result;
  std::vector<double> xs, ys;
  for (int R : radii) {
    auto est = lambda1(family(R), tol, options);
    est.radius = R;
    if (!result.estimates.empty()) {
      const double prev = result.estimates.back().lambda1;
      const double slack = std::max(2.0 * tol * prev, options.absolute_tol);
      if (est.lambda1 > prev + slack)
        throw Error(Errc::MonotonicityViolation,
                    fmt::format("lambda1 rose from {:.12g} to {:.12g} at radius {}", prev, est.lambda1, R));
    }
    result.estimates.push_back(est);
    xs.push_back(R);
    ys.push_back(est.lambda1);
  }
  std::tie(result.limit, result.fit_residual) = extrapolate_rho(xs, ys);
  return result;
}

ExhaustionResult lambda1_exhaustion(const GeneratorSpec& family, const std::vector<int>& radii, double tol,
                                    const LanczosOptions& options) {
  return lambda1_exhaustion([&](int R) { return family.generate(R); }, radii, tol, options);
}

}  // namespace graphheat
