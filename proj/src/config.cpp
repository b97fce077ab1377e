#include "graphheat/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "graphheat/heat_kernel.hpp"

namespace graphheat {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kKeys = {
    {"run", {"name", "seed", "jobs", "output_dir"}},
    {"graph", {"spec", "file"}},
    {"source", {"kind", "amplitude", "alpha", "beta", "t", "h"}},
    {"problem", {"q", "horizon", "output_step", "datum", "datum_value", "datum_gamma", "datum_vertex", "datum_file"}},
    {"solver", {"tol", "kernel_tol", "nodes", "max_slab", "blowup_threshold", "dt_min", "mol_rtol", "cross_validate"}},
    {"kernel", {"source", "times", "samples", "random_samples", "validate", "tol"}},
    {"spectral", {"radii", "tol", "lambda1"}},
    {"certificate", {"gamma", "y0", "window_from", "window_to"}},
    {"lemma", {"eps_fraction", "grid_end", "grid_step", "phi_step"}},
    {"sweep", {"alpha"}},
};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(Errc::ConfigError, fmt::format("{}: {}", path, what));
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& path) const {
    if (auto v = tree_.get_optional<std::string>(path)) return *v;
    return std::nullopt;
  }

  std::string text(const std::string& path, const std::string& fallback) const { return raw(path).value_or(fallback); }

  double real(const std::string& path, double fallback) const {
    const auto v = raw(path);
    if (!v) return fallback;
    return parse_real(path, *v);
  }

  long long integer(const std::string& path, long long fallback) const {
    const auto v = raw(path);
    if (!v) return fallback;
    std::size_t used = 0;
    long long out = 0;
    try {
      out = std::stoll(*v, &used);
    } catch (const std::exception&) {
      fail(path, fmt::format("'{}' is not an integer", *v));
    }
    if (used != v->size()) fail(path, fmt::format("'{}' is not an integer", *v));
    return out;
  }

  bool boolean(const std::string& path, bool fallback) const {
    const auto v = raw(path);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    fail(path, fmt::format("'{}' is not a boolean", *v));
  }

  std::vector<double> reals(const std::string& path) const {
    std::vector<double> out;
    const auto v = raw(path);
    if (!v) return out;
    std::string s = *v;
    for (char& c : s)
      if (c == ',') c = ' ';
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(parse_real(path, tok));
    return out;
  }

 private:
  static double parse_real(const std::string& path, const std::string& s) {
    std::size_t used = 0;
    double out = 0.0;
    try {
      out = std::stod(s, &used);
    } catch (const std::exception&) {
      fail(path, fmt::format("'{}' is not a number", s));
    }
    if (used != s.size() || !std::isfinite(out)) fail(path, fmt::format("'{}' is not a finite number", s));
    return out;
  }

  const pt::ptree& tree_;
};

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(Errc::ConfigError, fmt::format("line {}: {}", e.line(), e.message()));
  }
  for (const auto& [section, body] : tree) {
    const auto it = kKeys.find(section);
    if (it == kKeys.end()) fail(section, "unknown section");
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) fail(section + "." + key, "unknown key");
  }

  const Reader r(tree);
  auto resolve = [&](const std::filesystem::path& p) { return p.is_absolute() ? p : base_dir / p; };
  ScenarioConfig c;

  c.name = r.text("run.name", c.name);
  const auto seed = r.integer("run.seed", 1);
  if (seed < 0) fail("run.seed", "must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.jobs = static_cast<int>(r.integer("run.jobs", 1));
  if (c.jobs < 1) fail("run.jobs", "must be at least 1");
  c.output_dir = r.text("run.output_dir", "out");

  c.graph_spec = r.text("graph.spec", "");
  if (const auto f = r.raw("graph.file")) {
    c.graph_file = resolve(*f);
    if (!std::filesystem::exists(c.graph_file)) fail("graph.file", fmt::format("'{}' does not exist", c.graph_file.string()));
  }
  if (c.graph_spec.empty() == c.graph_file.empty()) fail("graph", "give exactly one of spec or file");
  if (!c.graph_spec.empty()) {
    try {
      GeneratorSpec::parse(c.graph_spec);
    } catch (const Error& e) {
      fail("graph.spec", e.what());
    }
  }

  const std::string kind = r.text("source.kind", "constant");
  const double amplitude = r.real("source.amplitude", 1.0);
  try {
    if (kind == "constant")
      c.h = SourceSpec::constant(amplitude);
    else if (kind == "exponential")
      c.h = SourceSpec::exponential(r.real("source.alpha", 0.0), amplitude);
    else if (kind == "power")
      c.h = SourceSpec::power(r.real("source.beta", 0.0), amplitude);
    else if (kind == "table")
      c.h = SourceSpec::table(r.reals("source.t"), r.reals("source.h"));
    else
      fail("source.kind", fmt::format("unknown kind '{}'", kind));
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigError) throw;
    fail("source", e.what());
  }

  c.q = r.real("problem.q", c.q);
  if (!(c.q > 1.0)) fail("problem.q", fmt::format("q = {} must exceed 1", c.q));
  c.horizon = r.real("problem.horizon", c.horizon);
  if (!(c.horizon > 0.0)) fail("problem.horizon", "must be positive");
  c.output_step = r.real("problem.output_step", c.output_step);
  if (!(c.output_step > 0.0)) fail("problem.output_step", "must be positive");
  const std::string datum = r.text("problem.datum", "constant");
  if (datum == "constant")
    c.datum = ScenarioConfig::Datum::Constant;
  else if (datum == "kernel")
    c.datum = ScenarioConfig::Datum::Kernel;
  else if (datum == "point")
    c.datum = ScenarioConfig::Datum::Point;
  else if (datum == "file")
    c.datum = ScenarioConfig::Datum::File;
  else
    fail("problem.datum", fmt::format("unknown datum '{}'", datum));
  c.datum_value = r.real("problem.datum_value", c.datum_value);
  if (!(c.datum_value >= 0.0)) fail("problem.datum_value", "must be nonnegative");
  c.datum_gamma = r.real("problem.datum_gamma", c.datum_gamma);
  if (!(c.datum_gamma > 0.0)) fail("problem.datum_gamma", "must be positive");
  c.datum_vertex = r.integer("problem.datum_vertex", -1);
  if (c.datum == ScenarioConfig::Datum::File) {
    const auto f = r.raw("problem.datum_file");
    if (!f) fail("problem.datum_file", "required for datum = file");
    c.datum_file = resolve(*f);
    if (!std::filesystem::exists(c.datum_file)) fail("problem.datum_file", fmt::format("'{}' does not exist", c.datum_file.string()));
  }

  c.tol = r.real("solver.tol", c.tol);
  c.kernel_tol = r.real("solver.kernel_tol", c.kernel_tol);
  c.nodes = static_cast<int>(r.integer("solver.nodes", c.nodes));
  c.max_slab = r.real("solver.max_slab", c.max_slab);
  c.blowup_threshold = r.real("solver.blowup_threshold", c.blowup_threshold);
  c.dt_min = r.real("solver.dt_min", c.dt_min);
  c.mol_rtol = r.real("solver.mol_rtol", c.mol_rtol);
  c.cross_validate = r.boolean("solver.cross_validate", c.cross_validate);
  if (!(c.tol > 0.0)) fail("solver.tol", "must be positive");
  if (!(c.kernel_tol > 0.0)) fail("solver.kernel_tol", "must be positive");
  if (c.nodes < 2 || c.nodes % 2) fail("solver.nodes", "must be even and at least 2");
  if (!(c.max_slab > 0.0)) fail("solver.max_slab", "must be positive");
  if (!(c.dt_min > 0.0)) fail("solver.dt_min", "must be positive");
  if (!(c.mol_rtol > 0.0)) fail("solver.mol_rtol", "must be positive");

  c.kernel_source = r.integer("kernel.source", -1);
  if (r.raw("kernel.times")) c.kernel_times = r.reals("kernel.times");
  for (double v : r.reals("kernel.samples")) c.kernel_samples.push_back(static_cast<Index>(v));
  c.random_samples = static_cast<int>(r.integer("kernel.random_samples", 0));
  c.kernel_validate = r.boolean("kernel.validate", c.kernel_validate);
  c.kernel_check_tol = r.real("kernel.tol", c.kernel_check_tol);
  if (c.kernel_times.empty()) fail("kernel.times", "grid is empty");
  for (std::size_t k = 0; k < c.kernel_times.size(); ++k)
    if (!(c.kernel_times[k] > 0.0) || (k > 0 && !(c.kernel_times[k] > c.kernel_times[k - 1])))
      fail("kernel.times", "must be positive and increasing");
  if (c.random_samples < 0) fail("kernel.random_samples", "must be nonnegative");

  for (double v : r.reals("spectral.radii")) c.radii.push_back(static_cast<int>(v));
  for (std::size_t k = 1; k < c.radii.size(); ++k)
    if (c.radii[k] <= c.radii[k - 1]) fail("spectral.radii", "must be strictly increasing");
  c.lambda_tol = r.real("spectral.tol", c.lambda_tol);
  if (!(c.lambda_tol > 0.0)) fail("spectral.tol", "must be positive");
  if (r.raw("spectral.lambda1")) {
    c.lambda1 = r.real("spectral.lambda1", 0.0);
    if (!(*c.lambda1 >= 0.0)) fail("spectral.lambda1", "must be nonnegative");
  }

  c.gamma = r.real("certificate.gamma", c.gamma);
  if (!(c.gamma > 0.0)) fail("certificate.gamma", "must be positive");
  c.y0 = r.integer("certificate.y0", -1);
  c.window_from = r.real("certificate.window_from", c.window_from);
  c.window_to = r.real("certificate.window_to", c.window_to);
  if (!(c.window_from > 0.0) || !(c.window_to > c.window_from)) fail("certificate.window_from", "bad window");

  c.eps_fraction = r.real("lemma.eps_fraction", c.eps_fraction);
  if (!(c.eps_fraction > 0.0) || !(c.eps_fraction < 1.0)) fail("lemma.eps_fraction", "must lie in (0, 1)");
  c.lemma_grid_end = r.real("lemma.grid_end", c.lemma_grid_end);
  c.lemma_grid_step = r.real("lemma.grid_step", c.lemma_grid_step);
  if (!(c.lemma_grid_step > 0.0) || !(c.lemma_grid_end > c.lemma_grid_step)) fail("lemma.grid_step", "bad grid");
  c.phi_step = r.real("lemma.phi_step", 0.0);
  if (c.phi_step < 0.0) fail("lemma.phi_step", "must be nonnegative");

  if (r.raw("sweep.alpha")) {
    c.alphas = r.reals("sweep.alpha");
    if (c.alphas.empty()) fail("sweep.alpha", "grid is empty");
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, fmt::format("cannot open config '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

TruncatedDomain ScenarioConfig::domain() const {
  if (!graph_spec.empty()) return GeneratorSpec::parse(graph_spec).generate();
  return load_graph(graph_file);
}

VertexField ScenarioConfig::datum_field(const TruncatedDomain& dom) const {
  const Index vertex = datum_vertex < 0 ? dom.origin : datum_vertex;
  if (vertex >= dom.size()) fail("problem.datum_vertex", fmt::format("vertex {} out of range", vertex));
  switch (datum) {
    case Datum::Constant:
      return VertexField::Constant(dom.size(), datum_value);
    case Datum::Point: {
      VertexField u = VertexField::Zero(dom.size());
      u(vertex) = datum_value;
      return u;
    }
    case Datum::Kernel:
      return datum_value * heat_kernel_column(dom, vertex, {datum_gamma}, kernel_tol).values.col(0);
    case Datum::File: {
      std::ifstream in(datum_file);
      std::vector<double> values;
      double v = 0.0;
      while (in >> v) values.push_back(v);
      if (static_cast<Index>(values.size()) != dom.size())
        fail("problem.datum_file", fmt::format("{} values for {} vertices", values.size(), dom.size()));
      return Eigen::Map<VertexField>(values.data(), dom.size());
    }
  }
  return {};
}

}  // namespace graphheat
