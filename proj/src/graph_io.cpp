#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "graphheat/graph.hpp"

namespace graphheat {

namespace {

struct LineReader {
  std::istringstream fields;
  int line;

  long long integer(const char* what) {
    std::string tok;
    if (!(fields >> tok)) throw Error(Errc::ParseError, fmt::format("missing {}", what), line);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (errno != 0 || *end != '\0') throw Error(Errc::ParseError, fmt::format("bad {} '{}'", what, tok), line);
    return v;
  }

  double decimal(const char* what) {
    std::string tok;
    if (!(fields >> tok)) throw Error(Errc::ParseError, fmt::format("missing {}", what), line);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(tok.c_str(), &end);
    if (errno == ERANGE || *end != '\0') throw Error(Errc::ParseError, fmt::format("bad {} '{}'", what, tok), line);
    return v;
  }

  void finish() {
    std::string extra;
    if (fields >> extra) throw Error(Errc::ParseError, fmt::format("unexpected token '{}'", extra), line);
  }
};

}  // namespace

TruncatedDomain parse_graph(const std::string& text) {
  std::map<long long, double> mu;
  std::map<long long, double> kill;
  std::map<std::pair<long long, long long>, std::pair<double, int>> edges;
  long long origin = 0;
  int radius = 0;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    LineReader r{std::istringstream(raw), line};
    std::string tag;
    if (!(r.fields >> tag)) continue;

    if (tag == "v") {
      const long long id = r.integer("vertex id");
      const double m = r.decimal("measure");
      r.finish();
      if (!(m > 0.0) || !std::isfinite(m))
        throw Error(Errc::NonPositiveMeasure, fmt::format("mu({}) = {}", id, m), line);
      if (!mu.emplace(id, m).second) throw Error(Errc::ParseError, fmt::format("vertex {} declared twice", id), line);
    } else if (tag == "e") {
      const long long i = r.integer("edge endpoint");
      const long long j = r.integer("edge endpoint");
      const double w = r.decimal("edge weight");
      r.finish();
      if (i == j) throw Error(Errc::SelfLoop, fmt::format("omega({0}, {0}) must vanish", i), line);
      if (!(w > 0.0) || !std::isfinite(w))
        throw Error(Errc::NonPositiveWeight, fmt::format("omega({}, {}) = {}", i, j, w), line);
      const auto key = std::minmax(i, j);
      auto [it, inserted] = edges.emplace(key, std::pair{w, line});
      if (!inserted && it->second.first != w)
        throw Error(Errc::DuplicateEdgeConflict,
                    fmt::format("edge ({}, {}) already given weight {} at line {}", key.first, key.second,
                                it->second.first, it->second.second),
                    line);
    } else if (tag == "k") {
      const long long id = r.integer("vertex id");
      const double k = r.decimal("killing weight");
      r.finish();
      if (!(k >= 0.0) || !std::isfinite(k))
        throw Error(Errc::ParseError, fmt::format("kill({}) = {} must be nonnegative", id, k), line);
      if (!kill.emplace(id, k).second) throw Error(Errc::ParseError, fmt::format("kill({}) given twice", id), line);
    } else if (tag == "o") {
      origin = r.integer("origin id");
      r.finish();
    } else if (tag == "r") {
      radius = static_cast<int>(r.integer("radius"));
      r.finish();
    } else {
      throw Error(Errc::ParseError, fmt::format("unknown record '{}'", tag), line);
    }
  }

  const auto n = static_cast<long long>(mu.size());
  long long expected = 0;
  for (const auto& [id, m] : mu) {
    if (id != expected) throw Error(Errc::ParseError, fmt::format("vertex ids must be dense 0..n-1; missing {}", expected));
    ++expected;
  }
  auto check_id = [n](long long id, int at) {
    if (id < 0 || id >= n) throw Error(Errc::ParseError, fmt::format("vertex id {} not declared", id), at);
  };

  std::vector<double> mus;
  for (const auto& [id, m] : mu) mus.push_back(m);
  std::vector<Edge> edge_list;
  for (const auto& [key, wl] : edges) {
    check_id(key.first, wl.second);
    check_id(key.second, wl.second);
    edge_list.push_back({key.first, key.second, wl.first});
  }
  VertexField k = VertexField::Zero(n);
  for (const auto& [id, value] : kill) {
    if (id < 0 || id >= n) throw Error(Errc::ParseError, fmt::format("kill for undeclared vertex {}", id));
    k(id) = value;
  }
  if (origin < 0 || origin >= n) throw Error(Errc::ParseError, fmt::format("origin {} not declared", origin));

  auto graph = build_graph(n, mus, edge_list);
  return make_domain(std::move(graph), std::move(k), origin, radius);
}

TruncatedDomain load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, fmt::format("cannot open '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

std::string format_graph(const TruncatedDomain& domain) {
  // fmt prints doubles in shortest round-trip form, so parse(format(d)) == d.
  std::string out = "# graphheat domain\n";
  out += fmt::format("r {}\no {}\n", domain.radius, domain.origin);
  for (Index x = 0; x < domain.size(); ++x) out += fmt::format("v {} {}\n", x, domain.graph.mu(x));
  for (const Edge& e : domain.graph.edges()) out += fmt::format("e {} {} {}\n", e.i, e.j, e.omega);
  for (Index x = 0; x < domain.size(); ++x)
    if (domain.kill(x) != 0.0) out += fmt::format("k {} {}\n", x, domain.kill(x));
  return out;
}

void save_graph(const TruncatedDomain& domain, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::ParseError, fmt::format("cannot write '{}'", path.string()));
  out << format_graph(domain);
}

}  // namespace graphheat
