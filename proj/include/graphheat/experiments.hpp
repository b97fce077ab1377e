#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "graphheat/config.hpp"

namespace graphheat {

enum class Command { GenGraph, Lambda1, Kernel, Solve, BoundCheck, Certify, Criterion, Dichotomy, Report };

Command parse_command(const std::string& name);
std::string to_string(Command c);

struct CheckResult {
  std::string name;
  std::string point;
  bool passed = false;
  std::string detail;
};

struct Artifacts {
  std::vector<std::filesystem::path> files;
  std::vector<CheckResult> checks;
  /// key=value lines for the terminal.
  std::vector<std::string> lines;

  bool passed() const;
};

/// Runs one subcommand and writes its outputs plus manifest.txt into out_dir.
/// Deterministic given (config, seed) apart from the manifest timestamp and timing.
Artifacts run_scenario(const ScenarioConfig& config, Command command, const std::filesystem::path& out_dir);

struct SweepRow {
  double alpha = 0.0;
  double lambda1 = 0.0;
  std::string criterion;
  double eps = 0.0;
  std::string certificate;
  double M = 0.0;
  std::string verdict;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double final_sup = 0.0;
  double T_upper = 0.0;
  std::string envelope;
  bool consistent = false;
  std::string error;
  /// Not part of the CSV.
  double wall_seconds = 0.0;
};

/// One row per alpha in config.alphas with h = e^{alpha t}; rows come back in grid
/// order whatever order the workers finish in. A failing point becomes a row
/// with the error column set.
std::vector<SweepRow> dichotomy_sweep(const ScenarioConfig& config, int jobs);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// "transition=(a,b) threshold=(q-1)lambda1" line for a sweep.
std::string sweep_summary(const std::vector<SweepRow>& rows, double q);

struct Report {
  std::string csv;
  std::string summary;
  bool all_passed = false;
};

/// Fixed-order CSV of checks and a text summary ending in "ALL CHECKS PASSED"
/// or naming every failing check and point. Throws InvalidParameter on no checks.
Report make_report(const std::vector<CheckResult>& checks);

/// 17 significant digits, as written to every CSV.
std::string format_real(double v);

std::string sha256_file(const std::filesystem::path& path);

}  // namespace graphheat
