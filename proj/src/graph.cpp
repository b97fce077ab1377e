#include "graphheat/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <queue>
#include <sstream>
#include <utility>

#include <fmt/format.h>

namespace graphheat {

double WeightedGraph::weight(Index x, Index y) const {
  const auto& nb = neighbors(x);
  auto it = std::lower_bound(nb.begin(), nb.end(), y,
                             [](const Neighbor& a, Index v) { return a.vertex < v; });
  return (it != nb.end() && it->vertex == y) ? it->omega : 0.0;
}

WeightedGraph build_graph(Index n, const std::vector<double>& mu, const std::vector<Edge>& edges) {
  if (n < 2) throw Error(Errc::InvalidParameter, fmt::format("need at least 2 vertices, got {}", n));
  if (static_cast<Index>(mu.size()) != n)
    throw Error(Errc::InvalidParameter, fmt::format("measure list has {} entries, expected {}", mu.size(), n));

  for (Index x = 0; x < n; ++x) {
    const double m = mu[static_cast<std::size_t>(x)];
    if (!(m > 0.0) || !std::isfinite(m))
      throw Error(Errc::NonPositiveMeasure, fmt::format("mu({}) = {}", x, m));
  }

  std::map<std::pair<Index, Index>, double> unique;
  std::vector<Edge> stored;
  for (const Edge& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
      throw Error(Errc::InvalidParameter, fmt::format("edge ({}, {}) out of range", e.i, e.j));
    if (e.i == e.j) throw Error(Errc::SelfLoop, fmt::format("omega({0}, {0}) must vanish", e.i));
    if (!(e.omega > 0.0) || !std::isfinite(e.omega))
      throw Error(Errc::NonPositiveWeight, fmt::format("omega({}, {}) = {}", e.i, e.j, e.omega));
    const auto key = std::minmax(e.i, e.j);
    auto [it, inserted] = unique.emplace(key, e.omega);
    if (!inserted) {
      if (it->second != e.omega)
        throw Error(Errc::DuplicateEdgeConflict,
                    fmt::format("edge ({}, {}) given weights {} and {}", key.first, key.second, it->second, e.omega));
      continue;
    }
    stored.push_back({key.first, key.second, e.omega});
  }

  std::sort(stored.begin(), stored.end(),
            [](const Edge& a, const Edge& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });

  WeightedGraph g;
  g.mu_ = Eigen::Map<const VertexField>(mu.data(), n);
  g.edges_ = std::move(stored);
  g.adjacency_.assign(static_cast<std::size_t>(n), {});
  g.degree_ = VertexField::Zero(n);
  for (const Edge& e : g.edges_) {
    g.adjacency_[static_cast<std::size_t>(e.i)].push_back({e.j, e.omega});
    g.adjacency_[static_cast<std::size_t>(e.j)].push_back({e.i, e.omega});
  }
  for (Index x = 0; x < n; ++x) {
    auto& nb = g.adjacency_[static_cast<std::size_t>(x)];
    std::sort(nb.begin(), nb.end(), [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    double deg = 0.0;
    for (const auto& y : nb) deg += y.omega;
    g.degree_(x) = deg;
  }

  const auto dist = hop_distances(g, 0);
  for (Index x = 0; x < n; ++x)
    if (dist[static_cast<std::size_t>(x)] < 0)
      throw Error(Errc::Disconnected, fmt::format("vertex {} unreachable from vertex 0", x));
  return g;
}

std::vector<int> hop_distances(const WeightedGraph& graph, Index source) {
  std::vector<int> dist(static_cast<std::size_t>(graph.size()), -1);
  std::queue<Index> frontier;
  dist[static_cast<std::size_t>(source)] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const Index x = frontier.front();
    frontier.pop();
    for (const auto& nb : graph.neighbors(x)) {
      auto& d = dist[static_cast<std::size_t>(nb.vertex)];
      if (d < 0) {
        d = dist[static_cast<std::size_t>(x)] + 1;
        frontier.push(nb.vertex);
      }
    }
  }
  return dist;
}

TruncatedDomain make_domain(WeightedGraph graph, VertexField kill, Index origin, int radius) {
  if (kill.size() != graph.size())
    throw Error(Errc::DimensionMismatch, fmt::format("kill has {} entries for {} vertices", kill.size(), graph.size()));
  for (Index x = 0; x < kill.size(); ++x)
    if (!(kill(x) >= 0.0) || !std::isfinite(kill(x)))
      throw Error(Errc::InvalidParameter, fmt::format("kill({}) = {} must be finite and nonnegative", x, kill(x)));
  if (origin < 0 || origin >= graph.size())
    throw Error(Errc::InvalidParameter, fmt::format("origin {} out of range", origin));
  if (radius < 0) throw Error(Errc::InvalidParameter, "radius must be nonnegative");
  return TruncatedDomain{std::move(graph), std::move(kill), origin, radius};
}

namespace {

// FNV-1a over raw bytes; only used as a cache key.
struct Fnv {
  std::uint64_t h = 14695981039346656037ull;
  void bytes(const void* p, std::size_t len) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t k = 0; k < len; ++k) {
      h ^= c[k];
      h *= 1099511628211ull;
    }
  }
  template <typename T>
  void value(const T& v) { bytes(&v, sizeof(T)); }
};

}  // namespace

std::uint64_t domain_hash(const TruncatedDomain& domain) {
  Fnv f;
  f.value(domain.size());
  f.bytes(domain.graph.mu().data(), sizeof(double) * static_cast<std::size_t>(domain.size()));
  f.bytes(domain.kill.data(), sizeof(double) * static_cast<std::size_t>(domain.size()));
  for (const Edge& e : domain.graph.edges()) {
    f.value(e.i);
    f.value(e.j);
    f.value(e.omega);
  }
  f.value(domain.origin);
  return f.h;
}

TruncatedDomain gen_tree_ball(int d, int R, MuMode mu_mode) {
  if (d < 3) throw Error(Errc::InvalidParameter, fmt::format("tree degree d = {} must be >= 3", d));
  if (R < 1) throw Error(Errc::InvalidParameter, fmt::format("tree radius R = {} must be >= 1", R));

  std::vector<Edge> edges;
  std::vector<int> level{0};
  std::vector<Index> frontier{0};
  Index next = 1;
  for (int r = 1; r <= R; ++r) {
    std::vector<Index> children;
    for (Index parent : frontier) {
      const int count = parent == 0 ? d : d - 1;
      for (int c = 0; c < count; ++c) {
        edges.push_back({parent, next, 1.0});
        level.push_back(r);
        children.push_back(next++);
      }
    }
    frontier = std::move(children);
  }

  const Index n = next;
  const double m = mu_mode == MuMode::Unit ? 1.0 : static_cast<double>(d);
  auto graph = build_graph(n, std::vector<double>(static_cast<std::size_t>(n), m), edges);
  VertexField kill = VertexField::Zero(n);
  for (Index x = 0; x < n; ++x)
    if (level[static_cast<std::size_t>(x)] == R) kill(x) = static_cast<double>(d - 1);
  return make_domain(std::move(graph), std::move(kill), 0, R);
}

TruncatedDomain gen_lattice_box(int dim, int R) {
  if (dim != 1 && dim != 2) throw Error(Errc::InvalidParameter, fmt::format("lattice dim = {} must be 1 or 2", dim));
  if (R < 1) throw Error(Errc::InvalidParameter, fmt::format("lattice radius R = {} must be >= 1", R));

  using Point = std::pair<int, int>;
  const std::vector<Point> steps = dim == 1 ? std::vector<Point>{{-1, 0}, {1, 0}}
                                            : std::vector<Point>{{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  auto inside = [&](Point p) { return std::abs(p.first) <= R && std::abs(p.second) <= R; };

  std::map<Point, Index> id;
  std::vector<Point> order;
  std::queue<Point> frontier;
  id[{0, 0}] = 0;
  order.push_back({0, 0});
  frontier.push({0, 0});
  std::vector<Edge> edges;
  while (!frontier.empty()) {
    const Point p = frontier.front();
    frontier.pop();
    for (const Point& s : steps) {
      const Point q{p.first + s.first, p.second + s.second};
      if (!inside(q)) continue;
      if (!id.contains(q)) {
        id[q] = static_cast<Index>(order.size());
        order.push_back(q);
        frontier.push(q);
      }
    }
  }
  VertexField kill = VertexField::Zero(static_cast<Index>(order.size()));
  for (const Point& p : order) {
    const Index a = id.at(p);
    for (const Point& s : steps) {
      const Point q{p.first + s.first, p.second + s.second};
      if (!inside(q)) {
        kill(a) += 1.0;
      } else if (const Index b = id.at(q); a < b) {
        edges.push_back({a, b, 1.0});
      }
    }
  }
  const auto n = static_cast<Index>(order.size());
  auto graph = build_graph(n, std::vector<double>(static_cast<std::size_t>(n), 1.0), edges);
  return make_domain(std::move(graph), std::move(kill), 0, R);
}

TruncatedDomain gen_cycle(int n) {
  if (n < 3) throw Error(Errc::InvalidParameter, fmt::format("cycle length n = {} must be >= 3", n));
  std::vector<Edge> edges;
  for (int x = 0; x < n; ++x) edges.push_back({x, (x + 1) % n, 1.0});
  auto graph = build_graph(n, std::vector<double>(static_cast<std::size_t>(n), 1.0), edges);
  return make_domain(std::move(graph), VertexField::Zero(n), 0, 0);
}

namespace {

TruncatedDomain gen_k2() {
  auto graph = build_graph(2, {1.0, 1.0}, {{0, 1, 1.0}});
  return make_domain(std::move(graph), VertexField::Zero(2), 0, 0);
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::InvalidParameter, fmt::format("generator key '{}' expects an integer, got '{}'", key, value));
  }
}

}  // namespace

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  spec.family = text.substr(0, colon);
  if (spec.family != "tree" && spec.family != "lattice" && spec.family != "cycle" && spec.family != "k2")
    throw Error(Errc::InvalidParameter, fmt::format("unknown generator family '{}'", spec.family));
  if (colon == std::string::npos) return spec;

  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(Errc::InvalidParameter, fmt::format("malformed generator item '{}'", item));
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "d") spec.d = parse_int(key, value);
    else if (key == "R") spec.R = parse_int(key, value);
    else if (key == "dim") spec.dim = parse_int(key, value);
    else if (key == "n") spec.n = parse_int(key, value);
    else if (key == "mu") {
      if (value == "unit") spec.mu_mode = MuMode::Unit;
      else if (value == "degree") spec.mu_mode = MuMode::Degree;
      else throw Error(Errc::InvalidParameter, fmt::format("mu must be unit or degree, got '{}'", value));
    } else {
      throw Error(Errc::InvalidParameter, fmt::format("unknown generator key '{}'", key));
    }
  }
  return spec;
}

std::string GeneratorSpec::to_string() const {
  if (family == "tree") return fmt::format("tree:d={},R={},mu={}", d, R, mu_mode == MuMode::Unit ? "unit" : "degree");
  if (family == "lattice") return fmt::format("lattice:dim={},R={}", dim, R);
  if (family == "cycle") return fmt::format("cycle:n={}", n);
  return family;
}

TruncatedDomain GeneratorSpec::generate() const { return generate(R); }

TruncatedDomain GeneratorSpec::generate(int radius) const {
  if (family == "tree") return gen_tree_ball(d, radius, mu_mode);
  if (family == "lattice") return gen_lattice_box(dim, radius);
  if (family == "cycle") return gen_cycle(n);
  if (family == "k2") return gen_k2();
  throw Error(Errc::InvalidParameter, fmt::format("unknown generator family '{}'", family));
}

}  // namespace graphheat
