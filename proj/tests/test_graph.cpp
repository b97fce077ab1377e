#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "graphheat/graph.hpp"
#include "graphheat/spectral.hpp"
#include "oracles.hpp"

using namespace graphheat;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::InvalidParameter;
}

}  // namespace

TEST_CASE("build_graph rejects malformed input") {
  CHECK(code_of([] { build_graph(2, {1, 1}, {{0, 0, 1.0}}); }) == Errc::SelfLoop);
  CHECK(code_of([] { build_graph(2, {1, 1}, {{0, 1, 0.0}}); }) == Errc::NonPositiveWeight);
  CHECK(code_of([] { build_graph(2, {1, -1}, {{0, 1, 1.0}}); }) == Errc::NonPositiveMeasure);
  CHECK(code_of([] { build_graph(3, {1, 1, 1}, {{0, 1, 1.0}}); }) == Errc::Disconnected);
  CHECK(code_of([] { build_graph(2, {1, 1}, {{0, 1, 1.0}, {1, 0, 2.0}}); }) == Errc::DuplicateEdgeConflict);
  CHECK(code_of([] { build_graph(2, {1}, {{0, 1, 1.0}}); }) == Errc::InvalidParameter);
}

TEST_CASE("repeated edge with equal weight is accepted once") {
  auto g = build_graph(2, {1, 1}, {{0, 1, 2.0}, {1, 0, 2.0}});
  CHECK(g.edges().size() == 1);
  CHECK(g.weight(0, 1) == 2.0);
  CHECK(g.weight(1, 0) == 2.0);
  CHECK(g.degree(0) == 2.0);
}

TEST_CASE("tree ball shape") {
  for (int R : {1, 3, 6}) {
    const auto d = gen_tree_ball(3, R);
    CHECK(d.size() == 1 + 3 * ((1 << R) - 1));
    const auto hops = hop_distances(d.graph, d.origin);
    for (Index x = 0; x < d.size(); ++x) {
      const auto r = hops[static_cast<std::size_t>(x)];
      CHECK(d.graph.degree(x) + d.kill(x) == doctest::Approx(3.0));
      CHECK(d.kill(x) == (r == R ? 2.0 : 0.0));
    }
  }
  const auto deg = gen_tree_ball(3, 2, MuMode::Degree);
  CHECK((deg.graph.mu().array() == 3.0).all());
}

TEST_CASE("lattice box and cycle") {
  const auto line = gen_lattice_box(1, 50);
  CHECK(line.size() == 101);
  CHECK(line.kill.sum() == 2.0);
  const auto box = gen_lattice_box(2, 3);
  CHECK(box.size() == 49);
  for (Index x = 0; x < box.size(); ++x) CHECK(box.graph.degree(x) + box.kill(x) == 4.0);
  const auto c = gen_cycle(8);
  CHECK(c.size() == 8);
  CHECK(c.kill_free());
  CHECK(c.graph.weight(7, 0) == 1.0);
}

TEST_CASE("generator spec round trip") {
  for (const char* s : {"tree:d=3,R=8,mu=unit", "tree:d=4,R=2,mu=degree", "lattice:dim=2,R=5", "cycle:n=8", "k2"}) {
    const auto spec = GeneratorSpec::parse(s);
    CHECK(spec.to_string() == s);
  }
  CHECK(GeneratorSpec::parse("tree:d=3,R=4,mu=unit").generate() == gen_tree_ball(3, 4));
  CHECK(GeneratorSpec::parse("tree:d=3,R=4,mu=unit").generate(6) == gen_tree_ball(3, 6));
  CHECK(code_of([] { GeneratorSpec::parse("torus:n=3"); }) == Errc::InvalidParameter);
  CHECK(code_of([] { GeneratorSpec::parse("tree:d=x"); }) == Errc::InvalidParameter);
}

TEST_CASE("graph file round trip and hash") {
  const auto d = gen_tree_ball(3, 3);
  const auto back = parse_graph(format_graph(d));
  CHECK(back == d);
  CHECK(domain_hash(back) == domain_hash(d));
  CHECK(domain_hash(gen_tree_ball(3, 4)) != domain_hash(d));

  const auto path = std::filesystem::temp_directory_path() / "graphheat_roundtrip.graph";
  save_graph(gen_lattice_box(2, 2), path);
  CHECK(load_graph(path) == gen_lattice_box(2, 2));
  std::filesystem::remove(path);
}

TEST_CASE("parse errors carry the line number") {
  try {
    parse_graph("v 0 1\nv 1 1\ne 0 1 1\ne 1 1 2\n");
    FAIL("expected SelfLoop");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SelfLoop);
    CHECK(e.line() == 4);
  }
  try {
    parse_graph("v 0 1\nv 1 abc\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(e.line() == 2);
  }
}

TEST_CASE("Laplacian agrees with the dense oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  for (const auto& d : {gen_tree_ball(3, 3), gen_tree_ball(3, 3, MuMode::Degree), gen_lattice_box(2, 3), gen_cycle(8)}) {
    VertexField f(d.size());
    for (Index x = 0; x < d.size(); ++x) f(x) = U(rng);
    const VertexField ref = oracle::dense_laplacian(d) * f;
    CHECK((apply_laplacian(d, f) - ref).lpNorm<Eigen::Infinity>() < 1e-13);
    CHECK((laplacian_matrix(d) * f - ref).lpNorm<Eigen::Infinity>() < 1e-13);
  }
}

TEST_CASE("Laplacian is self-adjoint and nonpositive in l2(mu)") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (const auto& d : {gen_tree_ball(3, 4), gen_tree_ball(3, 4, MuMode::Degree), gen_lattice_box(2, 4)}) {
    for (int trial = 0; trial < 5; ++trial) {
      VertexField f(d.size()), g(d.size());
      for (Index x = 0; x < d.size(); ++x) f(x) = U(rng), g(x) = U(rng);
      const double lhs = mu_inner(d, apply_laplacian(d, f), g);
      const double rhs = mu_inner(d, f, apply_laplacian(d, g));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(lhs)));
      CHECK(mu_inner(d, apply_laplacian(d, f), f) <= 0.0);
    }
    const SparseMatrix A = symmetrized_operator(d);
    CHECK((Eigen::MatrixXd(A) - Eigen::MatrixXd(A).transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}
