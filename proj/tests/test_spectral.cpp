#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "graphheat/spectral.hpp"
#include "oracles.hpp"

using namespace graphheat;

TEST_CASE("lambda1 matches the dense eigensolve") {
  for (const auto& d : {gen_tree_ball(3, 4), gen_tree_ball(3, 6), gen_tree_ball(3, 5, MuMode::Degree),
                        gen_lattice_box(1, 50), gen_lattice_box(2, 10)}) {
    const auto est = lambda1(d, 1e-10);
    const double ref = oracle::dense_lambda1(d);
    CHECK(est.lambda1 == doctest::Approx(ref).epsilon(1e-9));
    CHECK(est.residual <= 1e-10 * est.lambda1);
  }
}

TEST_CASE("kill-free domains have lambda1 = 0") {
  for (const auto& d : {gen_cycle(8), GeneratorSpec::parse("k2").generate()}) {
    const auto est = lambda1(d, 1e-10);
    CHECK(std::abs(est.lambda1) <= 1e-10);
  }
}

TEST_CASE("tree lambda1 agrees with the radial quotient") {
  for (int R : {2, 6, 8, 10}) {
    const double ref = oracle::tree_radial_lambda1(3, R);
    CHECK(lambda1(gen_tree_ball(3, R), 1e-11).lambda1 == doctest::Approx(ref).epsilon(1e-9));
  }
  CHECK(oracle::tree_radial_lambda1(3, 6) == doctest::Approx(oracle::dense_lambda1(gen_tree_ball(3, 6))).epsilon(1e-12));
}

TEST_CASE("one-dimensional box against the sine formula") {
  // Path of 2R+1 vertices with Dirichlet ends: 2 - 2 cos(pi / (2R+2)).
  const int R = 50;
  const double ref = 2 - 2 * std::cos(M_PI / (2 * R + 2));
  CHECK(lambda1(gen_lattice_box(1, R), 1e-12).lambda1 == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("Wynn rho recovers a rational tail") {
  std::vector<double> x, y;
  for (int k = 4; k <= 12; ++k) {
    x.push_back(k);
    y.push_back(0.5 + 2.0 / (k + 1.5) - 1.0 / ((k + 1.5) * (k + 1.5)));
  }
  const auto [limit, residual] = extrapolate_rho(x, y);
  CHECK(limit == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(residual < 1e-6);
  const auto [l2, r2] = extrapolate_rho({1, 2}, {1, 0.5});
  (void)l2;
  CHECK(std::isnan(r2));
}

TEST_CASE("tree exhaustion converges toward the infinite-tree bottom") {
  const std::vector<int> radii{4, 5, 6, 7, 8, 9, 10, 11, 12};
  const auto ex = lambda1_exhaustion(GeneratorSpec::parse("tree:d=3,R=4,mu=unit"), radii, 1e-10);
  REQUIRE(ex.estimates.size() == radii.size());
  for (std::size_t i = 1; i < ex.estimates.size(); ++i)
    CHECK(ex.estimates[i].lambda1 <= ex.estimates[i - 1].lambda1 * (1 + 2e-10));

  std::vector<double> h, ref;
  for (int R : radii) {
    h.push_back(1.0 / R);
    ref.push_back(oracle::tree_radial_lambda1(3, R));
  }
  const double ref_limit = oracle::rational_limit(h, ref);
  CHECK(std::abs(ref_limit - (3 - 2 * std::sqrt(2.0))) < 1e-3);
  CHECK(std::abs(ex.limit - ref_limit) < 1e-3);
}

TEST_CASE("exhaustion input errors") {
  const auto spec = GeneratorSpec::parse("tree:d=3,R=4,mu=unit");
  try {
    lambda1_exhaustion(spec, {6, 5}, 1e-10);
    FAIL("expected InvalidParameter");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidParameter);
  }
  // A family whose "balls" get smaller breaks monotonicity.
  auto shrinking = [](int R) { return gen_tree_ball(3, 10 - R); };
  try {
    lambda1_exhaustion(shrinking, {2, 3, 4}, 1e-10);
    FAIL("expected MonotonicityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MonotonicityViolation);
  }
}
