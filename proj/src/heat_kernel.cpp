#include "graphheat/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace graphheat {

namespace {

constexpr int kMaxTerms = 2000;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw Error(Errc::InvalidParameter, "time grid is empty");
  if (!(times.front() > 0.0)) throw Error(Errc::InvalidParameter, "kernel times must be positive");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw Error(Errc::InvalidParameter, "kernel times must be increasing");
}

}  // namespace

HeatPropagator::HeatPropagator(const TruncatedDomain& domain, double tol) : tol_(tol) {
  if (!(tol > 0.0)) throw Error(Errc::InvalidParameter, "propagator tolerance must be positive");
  const auto& g = domain.graph;
  for (Index x = 0; x < domain.size(); ++x) sigma_ = std::max(sigma_, (g.degree(x) + domain.kill(x)) / g.mu(x));
  P_ = laplacian_matrix(domain);
  for (Index x = 0; x < domain.size(); ++x) P_.coeffRef(x, x) += sigma_;
  P_.prune(0.0);
}

VertexField HeatPropagator::apply_nonnegative(VertexField v, double t) const {
  const double steps = std::max(1.0, std::ceil(sigma_ * t));
  const double tau = t / steps;
  const double damping = std::exp(-sigma_ * tau);
  VertexField term(v.size());
  for (double s = 0; s < steps; ++s) {
    VertexField sum = v;
    term = v;
    int k = 1;
    for (;; ++k) {
      if (k > kMaxTerms)
        throw Error(Errc::IntegrationFailure, fmt::format("series did not settle within {} terms", kMaxTerms));
      term = (P_ * term) * (tau / k);
      sum += term;
      if (term.isZero(0.0)) break;
      if ((term.array() <= tol_ * sum.array()).all() && (sum.array() > 0.0).all()) break;
    }
    v = sum * damping;
  }
  return v;
}

VertexField HeatPropagator::apply(const VertexField& u, double t) const {
  if (u.size() != P_.rows()) throw Error(Errc::DimensionMismatch, "field length does not match the vertex count");
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(Errc::InvalidParameter, "propagation time must be finite and >= 0");
  if (!u.allFinite()) throw Error(Errc::InvalidParameter, "field has non-finite entries");
  if (t == 0.0) return u;
  if ((u.array() >= 0.0).all()) return apply_nonnegative(u, t);
  const VertexField pos = u.cwiseMax(0.0);
  const VertexField neg = (-u).cwiseMax(0.0);
  return apply_nonnegative(pos, t) - apply_nonnegative(neg, t);
}

VertexField heat_apply(const TruncatedDomain& domain, const VertexField& u0, double t, double tol) {
  if (t == 0.0) {
    if (u0.size() != domain.size()) throw Error(Errc::DimensionMismatch, "field length does not match the vertex count");
    return u0;
  }
  return HeatPropagator(domain, tol).apply(u0, t);
}

KernelColumn heat_kernel_column(const TruncatedDomain& domain, Index y0, const std::vector<double>& times,
                                double tol) {
  if (y0 < 0 || y0 >= domain.size()) throw Error(Errc::InvalidParameter, fmt::format("source vertex {} out of range", y0));
  check_times(times);
  const HeatPropagator prop(domain, tol);

  KernelColumn col;
  col.source = y0;
  col.times = times;
  col.tol = tol;
  col.values.resize(domain.size(), static_cast<Index>(times.size()));
  VertexField w = VertexField::Zero(domain.size());
  w(y0) = 1.0 / domain.graph.mu(y0);
  double now = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    w = prop.apply(w, times[k] - now);
    now = times[k];
    col.values.col(static_cast<Index>(k)) = w;
    col.mass.push_back(w.dot(domain.graph.mu()));
  }
  return col;
}

KernelReport validate_kernel(const TruncatedDomain& domain, const std::vector<Index>& sample_vertices,
                             const std::vector<double>& sample_times, double tol, const ValidationOptions& options) {
  if (sample_vertices.empty()) throw Error(Errc::InvalidParameter, "no sample vertices");
  check_times(sample_times);

  std::vector<KernelColumn> cols;
  cols.reserve(sample_vertices.size());
  for (Index y : sample_vertices) cols.push_back(heat_kernel_column(domain, y, sample_times, tol));

  KernelReport rep;
  rep.mass_max = -std::numeric_limits<double>::infinity();
  rep.mass_min = std::numeric_limits<double>::infinity();
  rep.positivity_min = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < cols.size(); ++a) {
    for (double m : cols[a].mass) {
      rep.mass_max = std::max(rep.mass_max, m);
      rep.mass_min = std::min(rep.mass_min, m);
    }
    rep.positivity_min = std::min(rep.positivity_min, cols[a].values.minCoeff());
    for (std::size_t b = 0; b < cols.size(); ++b)
      for (std::size_t k = 0; k < sample_times.size(); ++k)
        rep.symmetry_residual = std::max(
            rep.symmetry_residual, std::abs(cols[a](sample_vertices[b], k) - cols[b](sample_vertices[a], k)));
  }

  // sum_z p(x,z,t) g(z) mu(z) = (e^{t Delta} g)(x), so the right-hand side is the
  // propagator applied to the column at time s.
  const HeatPropagator prop(domain, tol);
  for (const auto& [t, s] : options.semigroup_pairs) {
    for (Index y : sample_vertices) {
      const auto col = heat_kernel_column(domain, y, {s, t + s}, tol);
      const VertexField composed = prop.apply(col.at(0), t);
      rep.semigroup_residual = std::max(rep.semigroup_residual, (col.at(1) - composed).cwiseAbs().maxCoeff());
    }
  }

  if (options.decay) {
    const double lam = lambda1(domain, options.lambda_tol).lambda1;
    const auto est = kernel_decay_rate(domain, domain.origin, domain.origin, options.decay_from, options.decay_to,
                                       lam, tol);
    rep.decay_slope = est.slope;
    rep.decay_slope_target = -lam;
  }
  return rep;
}

DecayEstimate kernel_decay_rate(const TruncatedDomain& domain, Index x, Index y, double t_a, double t_b,
                                double lambda1, double tol, int samples) {
  if (!(t_a >= 1.0) || !(t_b > t_a)) throw Error(Errc::InvalidParameter, "decay window needs t_b > t_a >= 1");
  if (samples < 2) throw Error(Errc::InvalidParameter, "decay window needs at least two samples");
  if (x < 0 || x >= domain.size()) throw Error(Errc::InvalidParameter, fmt::format("vertex {} out of range", x));
  const auto times = linspace(t_a, t_b, samples);
  const auto col = heat_kernel_column(domain, y, times, tol);

  DecayEstimate est;
  est.lambda1 = lambda1;
  double st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double p = col(x, k);
    if (!(p > 0.0) || !std::isnormal(p))
      throw Error(Errc::UnderflowWindow, fmt::format("p({}, {}, {}) = {} underflows", x, y, times[k], p));
    const double l = std::log(p);
    st += times[k];
    sl += l;
    stt += times[k] * times[k];
    stl += times[k] * l;
    est.envelope = std::max(est.envelope, p * std::exp(lambda1 * times[k]));
  }
  const double n = static_cast<double>(times.size());
  est.slope = (n * stl - st * sl) / (n * stt - st * st);
  return est;
}

double envelope_constant(const TruncatedDomain& domain, Index y0, double lambda1, double tol, double t_a, double t_b,
                         int samples) {
  if (!(t_a > 0.0) || !(t_b > t_a) || samples < 2) throw Error(Errc::InvalidParameter, "bad envelope window");
  const auto times = linspace(t_a, t_b, samples);
  const auto col = heat_kernel_column(domain, y0, times, tol);
  double c = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) c = std::max(c, col.at(k).maxCoeff() * std::exp(lambda1 * times[k]));
  return c;
}

std::shared_ptr<const KernelColumn> KernelCache::column(const TruncatedDomain& domain, Index y0,
                                                        const std::vector<double>& times, double tol) {
  Key key{domain_hash(domain), y0, tol, times};
  {
    std::lock_guard lock(mutex_);
    if (auto it = columns_.find(key); it != columns_.end()) return it->second;
  }
  auto col = std::make_shared<const KernelColumn>(heat_kernel_column(domain, y0, times, tol));
  std::lock_guard lock(mutex_);
  return columns_.emplace(std::move(key), std::move(col)).first->second;
}

std::size_t KernelCache::size() const {
  std::lock_guard lock(mutex_);
  return columns_.size();
}

}  // namespace graphheat
