#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "graphheat/errors.hpp"

namespace graphheat {

using Index = Eigen::Index;
using VertexField = Eigen::VectorXd;

struct Edge {
  Index i = 0;
  Index j = 0;
  double omega = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Index vertex = 0;
  double omega = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Finite, connected, undirected weighted graph (G, omega, mu).
///
/// Edge weights are stored once per unordered pair with i < j, so symmetry and
/// the zero diagonal hold by construction. Instances are only produced by
/// build_graph() and are immutable afterwards.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  Index size() const noexcept { return mu_.size(); }
  const VertexField& mu() const noexcept { return mu_; }
  double mu(Index x) const { return mu_(x); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Neighbor>& neighbors(Index x) const { return adjacency_[static_cast<std::size_t>(x)]; }
  /// Sum over y of omega(x, y).
  double degree(Index x) const { return degree_(x); }
  const VertexField& degrees() const noexcept { return degree_; }
  /// omega(x, y), zero when x and y are not adjacent.
  double weight(Index x, Index y) const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.mu_ == b.mu_ && a.edges_ == b.edges_;
  }

 private:
  friend WeightedGraph build_graph(Index, const std::vector<double>&, const std::vector<Edge>&);

  VertexField mu_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  VertexField degree_;
};

/// Validates the graph axioms and returns the graph, or throws Error with one of
/// SelfLoop, NonPositiveWeight, NonPositiveMeasure, Disconnected,
/// DuplicateEdgeConflict, InvalidParameter.
WeightedGraph build_graph(Index n, const std::vector<double>& mu, const std::vector<Edge>& edges);

/// Ball of an infinite graph with Dirichlet conditions on the removed exterior.
///
/// kill(x) is the total edge weight from x to vertices outside the ball; the
/// Laplacian of the domain is the restriction of the infinite-graph Laplacian
/// to functions extended by zero.
struct TruncatedDomain {
  WeightedGraph graph;
  VertexField kill;
  Index origin = 0;
  int radius = 0;

  Index size() const noexcept { return graph.size(); }
  bool kill_free() const { return (kill.array() == 0.0).all(); }

  friend bool operator==(const TruncatedDomain&, const TruncatedDomain&) = default;
};

TruncatedDomain make_domain(WeightedGraph graph, VertexField kill, Index origin, int radius);

/// Stable 64-bit content hash of a domain (weights, measures, killing, origin).
std::uint64_t domain_hash(const TruncatedDomain& domain);

/// Graph distance from `source` to every vertex (BFS hop count).
std::vector<int> hop_distances(const WeightedGraph& graph, Index source);

enum class MuMode { Unit, Degree };

/// Radius-R ball around the root of the infinite d-regular tree, unit edge weights.
TruncatedDomain gen_tree_ball(int d, int R, MuMode mu_mode = MuMode::Unit);

/// Box [-R, R]^dim of the integer lattice (dim 1 or 2), unit weights, unit measure.
TruncatedDomain gen_lattice_box(int dim, int R);

/// n-cycle, unit weights and measure, no killing.
TruncatedDomain gen_cycle(int n);

/// Generator description such as "tree:d=3,R=8,mu=unit", "lattice:dim=1,R=50",
/// "cycle:n=8" or "k2". `radius` overrides R for exhaustion sweeps.
struct GeneratorSpec {
  std::string family;
  int d = 3;
  int R = 1;
  int dim = 1;
  int n = 3;
  MuMode mu_mode = MuMode::Unit;

  static GeneratorSpec parse(const std::string& text);
  std::string to_string() const;
  TruncatedDomain generate() const;
  TruncatedDomain generate(int radius) const;
};

/// Reads a domain in the line-oriented text format (`v`, `e`, `k`, `o`, `r`, `#`).
TruncatedDomain load_graph(const std::filesystem::path& path);
TruncatedDomain parse_graph(const std::string& text);
void save_graph(const TruncatedDomain& domain, const std::filesystem::path& path);
std::string format_graph(const TruncatedDomain& domain);

}  // namespace graphheat
