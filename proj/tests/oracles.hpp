#pragma once

// Reference computations that share no code with the library: dense matrices
// assembled straight from the edge list, closed forms, and Boost quadrature.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>

#include "graphheat/graph.hpp"

namespace oracle {

using graphheat::Index;
using graphheat::TruncatedDomain;

// Delta as a dense n x n matrix, acting on column vectors of values.
inline Eigen::MatrixXd dense_laplacian(const TruncatedDomain& d) {
  const Index n = d.size();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : d.graph.edges()) {
    L(e.i, e.j) += e.omega;
    L(e.j, e.i) += e.omega;
    L(e.i, e.i) -= e.omega;
    L(e.j, e.j) -= e.omega;
  }
  for (Index x = 0; x < n; ++x) L(x, x) -= d.kill(x);
  for (Index x = 0; x < n; ++x) L.row(x) /= d.graph.mu(x);
  return L;
}

struct DenseSpectrum {
  Eigen::VectorXd values;   // eigenvalues of -Delta, ascending
  Eigen::MatrixXd vectors;  // orthonormal in l^2 after the D^{1/2} similarity
  Eigen::VectorXd sqrt_mu;
};

inline DenseSpectrum dense_spectrum(const TruncatedDomain& d) {
  if (d.size() > 2000) throw std::invalid_argument("dense oracle limited to 2000 vertices");
  const Eigen::VectorXd s = d.graph.mu().array().sqrt();
  const Eigen::MatrixXd A = -(s.asDiagonal() * dense_laplacian(d) * s.cwiseInverse().asDiagonal());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
  return {es.eigenvalues(), es.eigenvectors(), s};
}

inline double dense_lambda1(const TruncatedDomain& d) { return dense_spectrum(d).values(0); }

// p(x, y, t) = (e^{t Delta} delta_y)(x) / mu(y), all x and y.
inline Eigen::MatrixXd dense_kernel(const DenseSpectrum& sp, double t) {
  const Eigen::VectorXd e = (-t * sp.values.array()).exp();
  const Eigen::MatrixXd S = sp.vectors * e.asDiagonal() * sp.vectors.transpose();
  return sp.sqrt_mu.cwiseInverse().asDiagonal() * S * sp.sqrt_mu.cwiseInverse().asDiagonal();
}

inline Eigen::VectorXd dense_heat(const DenseSpectrum& sp, const Eigen::VectorXd& u, double t) {
  const Eigen::VectorXd e = (-t * sp.values.array()).exp();
  const Eigen::VectorXd w = sp.sqrt_mu.cwiseProduct(u);
  return sp.sqrt_mu.cwiseInverse().cwiseProduct(sp.vectors * e.cwiseProduct(sp.vectors.transpose() * w));
}

// Smallest eigenvalue of -Delta on the radius-R ball of the d-regular tree with
// unit measure, from the level quotient (the ground state is radial). The
// quotient is tridiagonal; symmetrized off-diagonals are sqrt(d) at the root
// and sqrt(d-1) further out, the diagonal is d everywhere.
inline double tree_radial_lambda1(int d, int R) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(R + 1, R + 1);
  for (int r = 0; r <= R; ++r) T(r, r) = d;
  for (int r = 0; r < R; ++r) {
    const double off = r == 0 ? std::sqrt(double(d)) : std::sqrt(double(d - 1));
    T(r, r + 1) = T(r + 1, r) = -off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  return es.eigenvalues()(0);
}

// Value at h = 0 of the diagonal rational interpolant through (h_i, y_i),
// by the Bulirsch-Stoer tableau. With h = 1/R this extrapolates R -> infinity.
inline double rational_limit(const std::vector<double>& h, const std::vector<double>& y) {
  const std::size_t n = h.size();
  if (n < 3) throw std::invalid_argument("need three samples");
  std::vector<double> c(y), d(y);
  std::size_t ns = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(h[i]) < std::abs(h[ns])) ns = i;
  for (auto& v : d) v += 1e-300;
  double est = y[ns];
  long k = static_cast<long>(ns) - 1;
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      const double w = c[i + 1] - d[i];
      const double t = h[i] * d[i] / h[i + m];
      const double den = t - c[i + 1];
      if (den == 0.0) throw std::runtime_error("rational tableau breakdown");
      d[i] = c[i + 1] * w / den;
      c[i] = t * w / den;
    }
    if (2 * (k + 1) < static_cast<long>(n - m)) est += c[static_cast<std::size_t>(k + 1)];
    else est += d[static_cast<std::size_t>(k--)];
  }
  return est;
}

// Two-vertex graph, unit weight and measure: p(x,x,t) and p(x,y,t), x != y.
inline double k2_diag(double t) { return 0.5 * (1 + std::exp(-2 * t)); }
inline double k2_off(double t) { return 0.5 * (1 - std::exp(-2 * t)); }

// Spatially constant solution u' = h u^q: u = (u0^{1-q} - (q-1) H)^{-1/(q-1)}.
inline double scalar_ode(double u0, double q, double H) {
  const double base = std::pow(u0, 1 - q) - (q - 1) * H;
  return base > 0 ? std::pow(base, -1 / (q - 1)) : std::numeric_limits<double>::infinity();
}

// int_0^inf a t^beta e^{-c t} dt by double-exponential quadrature.
inline double power_Htilde(double a, double beta, double c) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double t) { return a * std::pow(t, beta) * std::exp(-c * t); }, 0.0,
                              std::numeric_limits<double>::infinity());
}

}  // namespace oracle
