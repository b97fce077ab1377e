#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "graphheat/heat_kernel.hpp"
#include "oracles.hpp"

using namespace graphheat;

TEST_CASE("K2 kernel closed form") {
  const auto k2 = GeneratorSpec::parse("k2").generate();
  const auto col = heat_kernel_column(k2, 0, {0.1, 0.5, 2.0}, 1e-14);
  for (std::size_t k = 0; k < col.times.size(); ++k) {
    const double t = col.times[k];
    CHECK(std::abs(col(0, k) - oracle::k2_diag(t)) < 1e-12);
    CHECK(std::abs(col(1, k) - oracle::k2_off(t)) < 1e-12);
    CHECK(col.mass[k] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("heat propagation agrees with the dense matrix exponential") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (const auto& d : {gen_tree_ball(3, 4), gen_tree_ball(3, 4, MuMode::Degree), gen_lattice_box(2, 4), gen_cycle(8)}) {
    const auto sp = oracle::dense_spectrum(d);
    VertexField u(d.size());
    for (Index x = 0; x < d.size(); ++x) u(x) = U(rng);
    for (double t : {0.05, 1.0, 7.5}) {
      const VertexField ref = oracle::dense_heat(sp, u, t);
      const VertexField got = heat_apply(d, u, t, 1e-13);
      CHECK((got - ref).lpNorm<Eigen::Infinity>() <= 1e-11 * ref.lpNorm<Eigen::Infinity>());
    }
  }
}

TEST_CASE("t = 0 returns the datum and signed data are handled") {
  const auto d = gen_tree_ball(3, 3);
  VertexField u = VertexField::LinSpaced(d.size(), -1, 1);
  CHECK(heat_apply(d, u, 0.0, 1e-13) == u);
  const auto sp = oracle::dense_spectrum(d);
  CHECK((heat_apply(d, u, 2.0, 1e-13) - oracle::dense_heat(sp, u, 2.0)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("small kernel values keep relative accuracy") {
  // Far corner of a tree ball at large time: the value is tiny but resolved entrywise.
  const auto d = gen_tree_ball(3, 5);
  const auto sp = oracle::dense_spectrum(d);
  const Index leaf = d.size() - 1;
  const auto col = heat_kernel_column(d, 0, {0.01, 60.0}, 1e-13);
  const Eigen::MatrixXd P0 = oracle::dense_kernel(sp, 0.01);
  const Eigen::MatrixXd P1 = oracle::dense_kernel(sp, 60.0);
  CHECK(col(leaf, 0) > 0.0);
  CHECK(col(leaf, 0) == doctest::Approx(P0(leaf, 0)).epsilon(1e-8));
  CHECK(col(leaf, 1) == doctest::Approx(P1(leaf, 0)).epsilon(1e-8));
}

TEST_CASE("validation suite on the reference domains") {
  struct Case {
    TruncatedDomain domain;
    std::vector<Index> samples;
  };
  const auto tree = gen_tree_ball(3, 6);
  const auto line = gen_lattice_box(1, 50);
  std::vector<Case> cases{{GeneratorSpec::parse("k2").generate(), {0, 1}},
                          {gen_cycle(8), {0, 3, 5}},
                          {line, {0, 1, 2, 50, 100}},
                          {tree, {0, 1, 10, tree.size() - 1}}};
  ValidationOptions opts;
  opts.decay = false;
  for (const auto& c : cases) {
    const auto rep = validate_kernel(c.domain, c.samples, {0.1, 1.0, 3.0}, 1e-13, opts);
    CHECK(rep.symmetry_residual <= 1e-8);
    CHECK(rep.mass_max <= 1 + 1e-10);
    if (c.domain.kill_free()) CHECK(rep.mass_min >= 1 - 1e-10);
    CHECK(rep.semigroup_residual <= 1e-6);
    CHECK(rep.positivity_min > 0.0);
  }
}

TEST_CASE("kernel symmetry p(x,y,t) = p(y,x,t) with non-uniform measure") {
  const auto d = gen_tree_ball(3, 4, MuMode::Degree);
  const Index a = 0, b = d.size() - 1;
  const auto ca = heat_kernel_column(d, a, {0.3, 2.0}, 1e-13);
  const auto cb = heat_kernel_column(d, b, {0.3, 2.0}, 1e-13);
  for (std::size_t k = 0; k < 2; ++k) CHECK(ca(b, k) == doctest::Approx(cb(a, k)).epsilon(1e-10));
}

TEST_CASE("decay rate on the radius-8 tree ball") {
  const auto d = gen_tree_ball(3, 8);
  const double lam = lambda1(d, 1e-11).lambda1;
  const auto est = kernel_decay_rate(d, 0, 0, 20.0, 40.0, lam, 1e-13);
  CHECK(std::abs(est.slope + lam) <= 0.02 * lam);
  CHECK(std::isfinite(est.envelope));
  const double C = envelope_constant(d, 0, lam, 1e-13);
  CHECK(std::isfinite(C));
  CHECK(C >= est.envelope);
}

TEST_CASE("decay window must lie beyond t = 1") {
  const auto d = gen_tree_ball(3, 3);
  try {
    kernel_decay_rate(d, 0, 0, 0.5, 4.0, 0.5, 1e-13);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidParameter);
  }
}

TEST_CASE("kernel cache hands out one column per key") {
  KernelCache cache;
  const auto d = gen_tree_ball(3, 3);
  const auto a = cache.column(d, 0, {1.0, 2.0}, 1e-13);
  const auto b = cache.column(d, 0, {1.0, 2.0}, 1e-13);
  const auto c = cache.column(d, 1, {1.0, 2.0}, 1e-13);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(cache.size() == 2);
}
