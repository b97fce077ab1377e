#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "graphheat/heat_kernel.hpp"
#include "graphheat/mild_solver.hpp"
#include "oracles.hpp"

using namespace graphheat;

namespace {

Problem cycle_problem(double u0, const SourceSpec& h, double horizon) {
  Problem p;
  p.domain = gen_cycle(8);
  p.q = 2.0;
  p.h = h;
  p.u0 = VertexField::Constant(8, u0);
  p.horizon = horizon;
  return p;
}

double max_distance(const Trajectory& a, const Trajectory& b) {
  REQUIRE(a.times.size() == b.times.size());
  double d = 0.0;
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    REQUIRE(a.times[k] == b.times[k]);
    d = std::max(d, (a.fields[k] - b.fields[k]).lpNorm<Eigen::Infinity>());
  }
  return d;
}

}  // namespace

TEST_CASE("constant datum on the cycle follows the scalar ODE") {
  auto p = cycle_problem(0.5, SourceSpec::constant(1.0), 1.5);
  p.output_times = uniform_grid(1.5, 0.25);
  auto worst_error = [&](int nodes, bool extrapolate) {
    p.nodes = nodes;
    p.extrapolate = extrapolate;
    const auto tr = solve(p);
    REQUIRE(tr.verdict == Verdict::CompletedHorizon);
    REQUIRE(tr.times.size() == 7);
    CHECK(tr.max_contraction() <= 0.75);
    double err = 0.0;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      const double ref = oracle::scalar_ode(0.5, 2.0, tr.times[k]);
      err = std::max(err, std::abs(tr.fields[k].maxCoeff() - ref) / ref);
      CHECK(tr.fields[k].maxCoeff() - tr.fields[k].minCoeff() <= 1e-9 * ref);
    }
    return err;
  };
  const double e16 = worst_error(16, false);
  const double e32 = worst_error(32, false);
  CHECK(e16 <= 2e-4);
  // Trapezoid quadrature: halving the node spacing cuts the error about fourfold.
  CHECK(e16 / e32 == doctest::Approx(4.0).epsilon(0.1));
  // Extrapolated slab ends remove the leading term.
  CHECK(worst_error(16, true) <= 1e-7);
}

TEST_CASE("blow-up bracket for h = 1 contains the exact time") {
  const auto tr = solve(cycle_problem(1.0, SourceSpec::constant(1.0), 2.0));
  REQUIRE(tr.verdict == Verdict::BlowupDetected);
  CHECK(tr.t_lo <= 1.0);
  CHECK(tr.t_hi >= 1.0);
  CHECK(tr.t_hi - tr.t_lo <= 0.01);
  CHECK(tr.t_lo <= tr.t_detect);
  CHECK(tr.t_detect <= tr.t_hi);
  for (const auto& f : tr.fields) CHECK(f.maxCoeff() - f.minCoeff() <= 1e-9 * f.maxCoeff());
}

TEST_CASE("blow-up bracket for h = exp(t/2) contains 2 ln 1.5") {
  const auto p = cycle_problem(1.0, SourceSpec::exponential(0.5), 2.0);
  const double exact = 2 * std::log(1.5);
  const auto tr = solve(p);
  REQUIRE(tr.verdict == Verdict::BlowupDetected);
  CHECK(tr.t_lo <= exact);
  CHECK(tr.t_hi >= exact);
  CHECK(tr.t_hi - tr.t_lo <= 0.01 * exact);
  const auto mol = mol_reference_solve(p);
  REQUIRE(mol.verdict == Verdict::BlowupDetected);
  CHECK(mol.t_lo <= exact);
  CHECK(mol.t_hi >= exact * (1 - 1e-9));
  // Both brackets overlap.
  CHECK(std::max(tr.t_lo, mol.t_lo) <= std::min(tr.t_hi, mol.t_hi) + 1e-9);
}

TEST_CASE("linear limit reproduces the heat semigroup") {
  Problem p;
  p.domain = gen_tree_ball(3, 4);
  p.h = SourceSpec::constant(0.0);
  p.u0 = VertexField::Zero(p.domain.size());
  p.u0(0) = 1.0;
  p.horizon = 3.0;
  const auto tr = solve(p);
  REQUIRE(tr.verdict == Verdict::CompletedHorizon);
  const auto sp = oracle::dense_spectrum(p.domain);
  CHECK((tr.fields.back() - oracle::dense_heat(sp, p.u0, 3.0)).lpNorm<Eigen::Infinity>() < 1e-11);
}

TEST_CASE("zero datum stays zero") {
  Problem p;
  p.domain = gen_tree_ball(3, 3);
  p.h = SourceSpec::exponential(0.5);
  p.u0 = VertexField::Zero(p.domain.size());
  p.horizon = 5.0;
  const auto tr = solve(p);
  CHECK(tr.verdict == Verdict::CompletedHorizon);
  CHECK(tr.fields.back().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Picard solver agrees with the method-of-lines oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0, 0.3);
  for (const auto& domain : {gen_tree_ball(3, 4), gen_lattice_box(2, 4), gen_tree_ball(3, 3, MuMode::Degree)}) {
    Problem p;
    p.domain = domain;
    p.h = SourceSpec::exponential(0.1);
    p.u0 = VertexField(domain.size());
    for (Index x = 0; x < domain.size(); ++x) p.u0(x) = U(rng);
    p.horizon = 4.0;
    p.output_times = uniform_grid(4.0, 0.5);
    const auto a = solve(p);
    const auto b = mol_reference_solve(p);
    REQUIRE(a.verdict == Verdict::CompletedHorizon);
    REQUIRE(b.verdict == Verdict::CompletedHorizon);
    CHECK(max_distance(a, b) <= 1e-4);
    CHECK(a.max_contraction() <= 0.75);
  }
}

TEST_CASE("comparison principle in the datum") {
  Problem p;
  p.domain = gen_tree_ball(3, 3);
  p.h = SourceSpec::constant(1.0);
  p.u0 = VertexField::LinSpaced(p.domain.size(), 0.0, 0.2);
  p.horizon = 2.0;
  p.output_times = uniform_grid(2.0, 0.5);
  Problem bigger = p;
  bigger.u0 = p.u0.array() + 0.05;
  const auto lo = solve(p);
  const auto hi = solve(bigger);
  REQUIRE(lo.verdict == Verdict::CompletedHorizon);
  REQUIRE(hi.verdict == Verdict::CompletedHorizon);
  for (std::size_t k = 0; k < lo.times.size(); ++k) CHECK((hi.fields[k] - lo.fields[k]).minCoeff() >= 0.0);
}

TEST_CASE("larger datum blows up no later") {
  Problem a = cycle_problem(1.0, SourceSpec::constant(1.0), 3.0);
  Problem b = cycle_problem(2.0, SourceSpec::constant(1.0), 3.0);
  const auto ta = solve(a);
  const auto tb = solve(b);
  REQUIRE(ta.verdict == Verdict::BlowupDetected);
  REQUIRE(tb.verdict == Verdict::BlowupDetected);
  CHECK(tb.t_lo <= ta.t_lo);
  CHECK(tb.t_hi <= ta.t_hi);
  CHECK(tb.t_lo <= 0.5);
  CHECK(tb.t_hi >= 0.5);
}

TEST_CASE("scaling law u -> c u, h -> c^{1-q} h") {
  const double c = 4.0, q = 3.0;
  Problem p;
  p.domain = gen_tree_ball(3, 3);
  p.q = q;
  p.h = SourceSpec::constant(1.0);
  p.u0 = VertexField::LinSpaced(p.domain.size(), 0.1, 0.4);
  p.horizon = 2.0;
  p.output_times = uniform_grid(2.0, 1.0);
  Problem scaled = p;
  scaled.h = SourceSpec::constant(std::pow(c, 1 - q));
  scaled.u0 = c * p.u0;
  const auto a = solve(p);
  const auto b = solve(scaled);
  REQUIRE(a.verdict == Verdict::CompletedHorizon);
  REQUIRE(b.verdict == Verdict::CompletedHorizon);
  for (std::size_t k = 0; k < a.times.size(); ++k)
    CHECK((b.fields[k] - c * a.fields[k]).lpNorm<Eigen::Infinity>() <= 1e-8 * b.fields[k].maxCoeff());
}

TEST_CASE("single Picard slab contracts") {
  Problem p = cycle_problem(0.5, SourceSpec::constant(1.0), 1.0);
  const HeatPropagator prop(p.domain, p.kernel_tol);
  const auto slab = picard_slab(p.u0, 0.0, 0.1, p, prop);
  CHECK(slab.nodes.size() == static_cast<std::size_t>(p.nodes + 1));
  CHECK(slab.contraction <= 0.75);
  CHECK(std::abs(slab.nodes.back()(0) - oracle::scalar_ode(0.5, 2.0, 0.1)) < 1e-6);
  // A slab far too long for the datum cannot contract.
  Problem big = cycle_problem(50.0, SourceSpec::constant(1.0), 1.0);
  CHECK_THROWS_AS(picard_slab(big.u0, 0.0, 0.5, big, prop), Error);
}

TEST_CASE("problem validation") {
  auto p = cycle_problem(1.0, SourceSpec::constant(1.0), 1.0);
  auto bad = [&](auto mutate) {
    Problem c = p;
    mutate(c);
    try {
      c.validate();
    } catch (const Error&) {
      return true;
    }
    return false;
  };
  CHECK_FALSE(bad([](Problem&) {}));
  CHECK(bad([](Problem& c) { c.q = 1.0; }));
  CHECK(bad([](Problem& c) { c.horizon = 0.0; }));
  CHECK(bad([](Problem& c) { c.nodes = 7; }));
  CHECK(bad([](Problem& c) { c.u0(2) = -1.0; }));
  CHECK(bad([](Problem& c) { c.u0 = VertexField::Ones(3); }));
  CHECK(bad([](Problem& c) { c.output_times = {0.5, 0.25}; }));
  CHECK(bad([](Problem& c) { c.output_times = {2.0}; }));
}

TEST_CASE("uniform grid ends on the horizon") {
  const auto g = uniform_grid(1.0, 0.3);
  REQUIRE(g.size() == 3);
  CHECK(g.front() == doctest::Approx(1.0 / 3));
  CHECK(g.back() == 1.0);
  CHECK(uniform_grid(2.0, 0.5).size() == 4);
}
