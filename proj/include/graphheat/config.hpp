#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "graphheat/graph.hpp"
#include "graphheat/source.hpp"

namespace graphheat {

/// Scenario description read from an INI file.
///
///   [run]          name, seed, jobs, output_dir
///   [graph]        spec (generator string) or file
///   [source]       kind = constant|exponential|power|table, amplitude, alpha, beta, t, h
///   [problem]      q, horizon, output_step, datum = constant|kernel|point|file,
///                  datum_value, datum_gamma, datum_vertex, datum_file
///   [solver]       tol, kernel_tol, nodes, max_slab, blowup_threshold, dt_min, mol_rtol, cross_validate
///   [kernel]       source, times, samples, random_samples, validate, tol
///   [spectral]     radii, tol, lambda1
///   [certificate]  gamma, y0, window_from, window_to
///   [lemma]        eps_fraction, grid_end, grid_step, phi_step
///   [sweep]        alpha
///
/// Lists are comma- or whitespace-separated. Unknown sections or keys are rejected.
struct ScenarioConfig {
  enum class Datum { Constant, Kernel, Point, File };

  std::string name = "scenario";
  std::uint64_t seed = 1;
  int jobs = 1;
  std::filesystem::path output_dir = "out";

  std::string graph_spec;
  std::filesystem::path graph_file;

  SourceSpec h;

  double q = 2.0;
  double horizon = 10.0;
  double output_step = 1.0;
  Datum datum = Datum::Constant;
  double datum_value = 1.0;
  double datum_gamma = 1.0;
  /// -1 means the domain origin.
  Index datum_vertex = -1;
  std::filesystem::path datum_file;

  double tol = 1e-10;
  double kernel_tol = 1e-13;
  int nodes = 16;
  double max_slab = 0.5;
  double blowup_threshold = 1e12;
  double dt_min = 1e-10;
  double mol_rtol = 1e-10;
  bool cross_validate = false;

  Index kernel_source = -1;
  std::vector<double> kernel_times{0.1, 1.0, 10.0};
  std::vector<Index> kernel_samples;
  int random_samples = 0;
  bool kernel_validate = true;
  double kernel_check_tol = 1e-13;

  std::vector<int> radii;
  double lambda_tol = 1e-10;
  std::optional<double> lambda1;

  double gamma = 1.0;
  Index y0 = -1;
  double window_from = 1.0;
  double window_to = 40.0;

  double eps_fraction = 0.5;
  double lemma_grid_end = 60.0;
  double lemma_grid_step = 0.5;
  double phi_step = 0.0;

  std::vector<double> alphas;

  /// Generator spec if given, otherwise the graph file.
  TruncatedDomain domain() const;
  /// The datum field on the domain.
  VertexField datum_field(const TruncatedDomain& domain) const;
};

/// Throws Error(ConfigError) whose message starts with the offending "section.key".
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace graphheat
