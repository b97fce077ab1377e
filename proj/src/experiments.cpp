#include "graphheat/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <random>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <openssl/evp.h>

#include "graphheat/blowup.hpp"
#include "graphheat/heat_kernel.hpp"
#include "graphheat/mild_solver.hpp"
#include "graphheat/spectral.hpp"

namespace graphheat {

namespace fs = std::filesystem;

namespace {

const std::vector<std::pair<Command, std::string>> kCommands = {
    {Command::GenGraph, "gen-graph"}, {Command::Lambda1, "lambda1"},     {Command::Kernel, "kernel"},
    {Command::Solve, "solve"},        {Command::BoundCheck, "bound-check"}, {Command::Certify, "certify"},
    {Command::Criterion, "criterion"}, {Command::Dichotomy, "dichotomy"}, {Command::Report, "report"},
};

std::string yes_no(bool b) { return b ? "pass" : "FAIL"; }

Problem make_problem(const ScenarioConfig& c, const TruncatedDomain& domain, const SourceSpec& h,
                     double output_step = 0.0) {
  Problem p;
  p.domain = domain;
  p.q = c.q;
  p.h = h;
  p.u0 = c.datum_field(domain);
  p.horizon = c.horizon;
  p.tol = c.tol;
  p.kernel_tol = c.kernel_tol;
  p.nodes = c.nodes;
  p.max_slab = c.max_slab;
  p.blowup_threshold = c.blowup_threshold;
  p.dt_min = c.dt_min;
  p.output_times = uniform_grid(c.horizon, output_step > 0.0 ? output_step : c.output_step);
  return p;
}

double lambda_for(const ScenarioConfig& c, const TruncatedDomain& domain) {
  return c.lambda1 ? *c.lambda1 : lambda1(domain, c.lambda_tol).lambda1;
}

Index y0_for(const ScenarioConfig& c, const TruncatedDomain& domain) { return c.y0 < 0 ? domain.origin : c.y0; }

class Writer {
 public:
  Writer(const fs::path& dir, Artifacts& art) : dir_(dir), art_(art) { fs::create_directories(dir); }

  void file(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(Errc::ConfigError, fmt::format("run.output_dir: cannot write '{}'", p.string()));
    out << content;
    art_.files.push_back(p);
  }

 private:
  fs::path dir_;
  Artifacts& art_;
};

void write_manifest(const fs::path& dir, const Artifacts& art, double seconds) {
  std::string out = "# sha256  file\n";
  for (const auto& f : art.files) out += fmt::format("{}  {}\n", sha256_file(f), f.filename().string());
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  out += fmt::format("timestamp={}\nwall_seconds={:.3f}\n", stamp, seconds);
  std::ofstream(dir / "manifest.txt", std::ios::binary) << out;
}

std::string trajectory_csv(const Trajectory& traj, const TruncatedDomain& domain, Index y0, double gamma,
                           double tol) {
  std::vector<double> ratio(traj.times.size(), std::nan(""));
  if (!traj.times.empty()) ratio = global_bound_monitor(traj, domain, y0, gamma, 0.0, tol).ratio;
  std::string out = "t,supnorm,mass,ratio_to_kernel\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    out += fmt::format("{},{},{},{}\n", format_real(traj.times[k]), format_real(traj.supnorm[k]),
                       format_real(traj.fields[k].dot(domain.graph.mu())), format_real(ratio[k]));
  return out;
}

std::string verdict_line(const Trajectory& traj) {
  return fmt::format("verdict={} t_lo={} t_hi={}", to_string(traj.verdict), format_real(traj.t_lo),
                     format_real(traj.t_hi));
}

std::vector<Index> sample_vertices(const ScenarioConfig& c, const TruncatedDomain& domain, Index source) {
  std::set<Index> picked(c.kernel_samples.begin(), c.kernel_samples.end());
  picked.insert(source);
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<Index> pick(0, domain.size() - 1);
  for (int k = 0; k < c.random_samples; ++k) picked.insert(pick(rng));
  for (Index v : picked)
    if (v < 0 || v >= domain.size()) throw Error(Errc::ConfigError, fmt::format("kernel.samples: vertex {} out of range", v));
  return {picked.begin(), picked.end()};
}

void kernel_checks(const ScenarioConfig& c, const TruncatedDomain& domain, Index source, Artifacts& art,
                   Writer& w) {
  ValidationOptions opt;
  opt.lambda_tol = c.lambda_tol;
  const double lam = lambda_for(c, domain);
  opt.decay = lam > 0.01;
  const auto rep = validate_kernel(domain, sample_vertices(c, domain, source), c.kernel_times, c.kernel_check_tol, opt);
  w.file("kernel_report.txt",
         fmt::format("symmetry_residual={}\nmass_max={}\nmass_min={}\nsemigroup_residual={}\npositivity_min={}\n"
                     "decay_slope={}\ndecay_slope_target={}\n",
                     format_real(rep.symmetry_residual), format_real(rep.mass_max), format_real(rep.mass_min),
                     format_real(rep.semigroup_residual), format_real(rep.positivity_min),
                     format_real(rep.decay_slope), format_real(rep.decay_slope_target)));
  const std::string pt = c.name;
  art.checks.push_back({"kernel-symmetry", pt, rep.symmetry_residual <= 1e-8,
                        fmt::format("residual {:.3e} <= 1e-8", rep.symmetry_residual)});
  const bool mass_ok = rep.mass_max <= 1.0 + 1e-10 && (!domain.kill_free() || rep.mass_min >= 1.0 - 1e-10);
  art.checks.push_back({"kernel-mass-bound", pt, mass_ok,
                        fmt::format("mass in [{:.12f}, {:.12f}]{}", rep.mass_min, rep.mass_max,
                                    domain.kill_free() ? ", conserved" : "")});
  art.checks.push_back({"semigroup-identity", pt, rep.semigroup_residual <= 1e-6,
                        fmt::format("residual {:.3e} <= 1e-6", rep.semigroup_residual)});
  art.checks.push_back({"kernel-positivity", pt, rep.positivity_min > 0.0,
                        fmt::format("min p = {:.3e}", rep.positivity_min)});
  if (opt.decay) {
    const double rel = std::abs(rep.decay_slope - rep.decay_slope_target) / std::abs(rep.decay_slope_target);
    art.checks.push_back({"kernel-decay-rate", pt, rel <= 0.02,
                          fmt::format("slope {:.6f} vs {:.6f} ({:.2f}%)", rep.decay_slope, rep.decay_slope_target,
                                      100 * rel)});
  }
}

void bound_checks(const ScenarioConfig& c, const TruncatedDomain& domain, Artifacts& art, Writer& w) {
  const double step = c.phi_step > 0.0 ? c.phi_step : c.output_step;
  const Problem prob = make_problem(c, domain, c.h, step);
  const auto probes = default_probes(domain);
  TimeBoundOptions opt;
  opt.cap = c.horizon;
  opt.tol = c.kernel_tol;
  double T_upper = std::numeric_limits<double>::infinity();
  try {
    const auto tb = lemma2_blowup_time_bound(prob.u0, domain, probes, c.q, c.h, opt);
    T_upper = tb.T_upper;
    for (std::size_t i = 0; i < probes.size(); ++i)
      art.lines.push_back(fmt::format("T_upper[{}]={}", probes[i], format_real(tb.per_probe[i])));
  } catch (const Error& e) {
    if (e.code() != Errc::NoBoundInHorizon) throw;
  }
  art.lines.push_back(fmt::format("T_upper={}", format_real(T_upper)));

  const Trajectory traj = solve(prob);
  art.lines.push_back(verdict_line(traj));
  if (traj.verdict == Verdict::BlowupDetected) {
    const bool ok = std::isfinite(T_upper) && traj.t_lo <= 1.01 * T_upper;
    art.checks.push_back({"blowup-time-bound", c.name, ok,
                          fmt::format("t_lo {:.6f} <= 1.01 * T_upper {:.6f}", traj.t_lo, T_upper)});
  }
  // Phi on the uniform part of the stored grid.
  std::size_t last = traj.times.size() - 1;
  if (traj.verdict == Verdict::BlowupDetected && last > 0) --last;
  if (last >= 2) {
    const double T = traj.times[last];
    const auto series = phi_series(traj, domain, probes.front(), T, c.h, c.kernel_tol);
    const auto chk = phi_ode_check(series, c.h, c.q);
    std::string csv = "t,phi,H\n";
    for (std::size_t k = 0; k < series.times.size(); ++k)
      csv += fmt::format("{},{},{}\n", format_real(series.times[k]), format_real(series.values[k]),
                         format_real(series.H_values[k]));
    w.file("phi.csv", csv);
    art.checks.push_back({"phi-ode-inequality", c.name, chk.relative_violation <= 1e-3,
                          fmt::format("relative violation {:.3e} <= 1e-3", chk.relative_violation)});
    art.checks.push_back({"phi-endpoint-identity", c.name, series.endpoint_residual <= 1e-6,
                          fmt::format("relative residual {:.3e} <= 1e-6", series.endpoint_residual)});
  }
}

void certificate_checks(const ScenarioConfig& c, const TruncatedDomain& domain, Artifacts& art, Writer& w) {
  const double lam = lambda_for(c, domain);
  const Index y0 = y0_for(c, domain);
  const VertexField u0 = c.datum_field(domain);
  CertificateOptions opt;
  opt.tol = c.kernel_tol;
  opt.window_from = c.window_from;
  opt.window_to = c.window_to;
  const auto cert = theorem2_certificate(domain, u0, c.q, c.h, c.gamma, y0, lam, opt);
  std::string text = fmt::format(
      "granted={}\nfailed_check={}\nlambda1={}\nHtilde={}\nC_under={}\ndelta={}\nM={}\nepsilon={}\ngamma={}\ny0={}\n",
      cert.granted, cert.failed_check, format_real(lam), format_real(cert.Htilde), format_real(cert.C_under),
      format_real(cert.delta), format_real(cert.M), format_real(cert.epsilon), format_real(cert.gamma), cert.y0);
  for (const auto& [name, ok] : cert.checks) text += fmt::format("check.{}={}\n", name, ok);
  w.file("certificate.txt", text);
  art.lines.push_back(fmt::format("certificate={}", cert.granted ? "granted" : "refuted:" + cert.failed_check));
  if (!cert.granted) return;

  const Trajectory traj = solve(make_problem(c, domain, c.h));
  const auto mon = global_bound_monitor(traj, domain, y0, c.gamma, cert.M, c.kernel_tol);
  const double worst = mon.ratio.empty() ? 0.0 : *std::max_element(mon.ratio.begin(), mon.ratio.end());
  art.checks.push_back({"global-envelope", c.name, traj.verdict == Verdict::CompletedHorizon && mon.holds,
                        fmt::format("{}; max ratio {:.6e} <= M {:.6e}", to_string(traj.verdict), worst, cert.M)});
}

}  // namespace

Command parse_command(const std::string& name) {
  for (const auto& [c, n] : kCommands)
    if (n == name) return c;
  throw Error(Errc::ConfigError, fmt::format("unknown command '{}'", name));
}

std::string to_string(Command c) {
  for (const auto& [cmd, n] : kCommands)
    if (cmd == c) return n;
  return "?";
}

bool Artifacts::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& r) { return r.passed; });
}

std::string format_real(double v) { return fmt::format("{:.16e}", v); }

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ConfigError, fmt::format("cannot read '{}'", path.string()));
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

std::vector<SweepRow> dichotomy_sweep(const ScenarioConfig& config, int jobs) {
  if (config.alphas.empty()) throw Error(Errc::ConfigError, "sweep.alpha: grid is empty");
  const TruncatedDomain domain = config.domain();
  const double lam = lambda_for(config, domain);
  const Index y0 = y0_for(config, domain);
  std::vector<SweepRow> rows(config.alphas.size());

  auto run = [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    SweepRow& row = rows[i];
    row.alpha = config.alphas[i];
    row.lambda1 = lam;
    try {
      const SourceSpec h = SourceSpec::exponential(row.alpha);
      const auto crit = theorem1_criterion(h, config.q, lam);
      row.criterion = to_string(crit.verdict);
      row.eps = crit.eps;

      const Problem prob = make_problem(config, domain, h);
      CertificateOptions copt;
      copt.tol = config.kernel_tol;
      copt.window_from = config.window_from;
      copt.window_to = config.window_to;
      const auto cert = theorem2_certificate(domain, prob.u0, config.q, h, config.gamma, y0, lam, copt);
      row.certificate = cert.granted ? "granted" : "refuted:" + cert.failed_check;
      row.M = cert.M;

      const Trajectory traj = solve(prob);
      row.verdict = to_string(traj.verdict);
      row.t_lo = traj.t_lo;
      row.t_hi = traj.t_hi;
      row.final_sup = traj.supnorm.back();

      TimeBoundOptions topt;
      topt.cap = config.horizon;
      topt.tol = config.kernel_tol;
      row.T_upper = std::numeric_limits<double>::infinity();
      try {
        row.T_upper = lemma2_blowup_time_bound(prob.u0, domain, default_probes(domain), config.q, h, topt).T_upper;
      } catch (const Error& e) {
        if (e.code() != Errc::NoBoundInHorizon) throw;
      }

      bool envelope_ok = true;
      row.envelope = "n/a";
      if (cert.granted) {
        envelope_ok = global_bound_monitor(traj, domain, y0, config.gamma, cert.M, config.kernel_tol).holds;
        row.envelope = envelope_ok ? "held" : "violated";
      }
      const bool blew = traj.verdict == Verdict::BlowupDetected;
      row.consistent = traj.verdict != Verdict::SolverFailure;
      if (crit.verdict == CriterionVerdict::Diverges && !blew) row.consistent = false;
      if (cert.granted && (traj.verdict != Verdict::CompletedHorizon || !envelope_ok)) row.consistent = false;
      if (blew && !(traj.t_lo <= 1.01 * row.T_upper)) row.consistent = false;
    } catch (const std::exception& e) {
      row.error = e.what();
      row.consistent = false;
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < rows.size();) run(i);
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "alpha,lambda1,criterion,eps,certificate,M,verdict,t_lo,t_hi,final_supnorm,T_upper,envelope,consistent,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", format_real(r.alpha), format_real(r.lambda1),
                       r.criterion, format_real(r.eps), r.certificate, format_real(r.M), r.verdict,
                       format_real(r.t_lo), format_real(r.t_hi), format_real(r.final_sup), format_real(r.T_upper),
                       r.envelope, r.consistent ? "yes" : "no", err);
  }
  return out;
}

std::string sweep_summary(const std::vector<SweepRow>& rows, double q) {
  std::vector<const SweepRow*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return a->alpha < b->alpha; });
  double first_blow = std::numeric_limits<double>::infinity();
  for (auto r : sorted)
    if (r->verdict == "BlowupDetected") {
      first_blow = r->alpha;
      break;
    }
  double last_global = -std::numeric_limits<double>::infinity();
  for (auto r : sorted)
    if (r->verdict == "CompletedHorizon" && r->alpha < first_blow) last_global = r->alpha;
  const double lam = rows.empty() ? 0.0 : rows.front().lambda1;
  return fmt::format("transition=({}, {}) threshold={}", last_global, first_blow, format_real((q - 1.0) * lam));
}

Report make_report(const std::vector<CheckResult>& checks) {
  if (checks.empty()) throw Error(Errc::InvalidParameter, "report needs at least one check");
  Report rep;
  rep.csv = "check,point,passed,detail\n";
  rep.all_passed = true;
  for (const auto& c : checks) {
    std::string detail = c.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    rep.csv += fmt::format("{},{},{},{}\n", c.name, c.point, c.passed ? "yes" : "no", detail);
    rep.summary += fmt::format("{:<28} {:<24} {}  {}\n", c.name, c.point, yes_no(c.passed), c.detail);
    rep.all_passed = rep.all_passed && c.passed;
  }
  if (rep.all_passed) {
    rep.summary += "ALL CHECKS PASSED\n";
  } else {
    for (const auto& c : checks)
      if (!c.passed) rep.summary += fmt::format("FAILED: {} at {}\n", c.name, c.point);
  }
  return rep;
}

Artifacts run_scenario(const ScenarioConfig& config, Command command, const fs::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  Artifacts art;
  Writer w(out_dir, art);

  switch (command) {
    case Command::GenGraph: {
      const auto domain = config.domain();
      w.file("domain.graph", format_graph(domain));
      art.lines.push_back(fmt::format("vertices={}", domain.size()));
      art.lines.push_back(fmt::format("edges={}", domain.graph.edges().size()));
      art.lines.push_back(fmt::format("hash={:016x}", domain_hash(domain)));
      break;
    }
    case Command::Lambda1: {
      std::vector<SpectralEstimate> estimates;
      ExhaustionResult ex;
      bool monotone = true;
      std::string why;
      if (!config.radii.empty() && !config.graph_spec.empty()) {
        try {
          ex = lambda1_exhaustion(GeneratorSpec::parse(config.graph_spec), config.radii, config.lambda_tol);
        } catch (const Error& e) {
          if (e.code() != Errc::MonotonicityViolation) throw;
          monotone = false;
          why = e.what();
        }
      } else {
        const auto domain = config.domain();
        ex.estimates.push_back(lambda1(domain, config.lambda_tol));
        ex.limit = ex.estimates.back().lambda1;
        ex.fit_residual = std::nan("");
      }
      std::string csv = "radius,lambda1,residual,iterations\n";
      for (const auto& e : ex.estimates)
        csv += fmt::format("{},{},{},{}\n", e.radius, format_real(e.lambda1), format_real(e.residual), e.iterations);
      w.file("lambda1.csv", csv);
      art.lines.push_back(fmt::format("limit={}", format_real(ex.limit)));
      art.lines.push_back(fmt::format("fit_residual={}", format_real(ex.fit_residual)));
      art.checks.push_back({"lambda1-monotone", config.name, monotone, monotone ? "non-increasing in R" : why});
      break;
    }
    case Command::Kernel: {
      const auto domain = config.domain();
      const Index source = config.kernel_source < 0 ? domain.origin : config.kernel_source;
      const auto col = heat_kernel_column(domain, source, config.kernel_times, config.kernel_check_tol);
      std::string csv = "t,vertex,p,mass\n";
      for (std::size_t k = 0; k < col.times.size(); ++k)
        for (Index x = 0; x < domain.size(); ++x)
          csv += fmt::format("{},{},{},{}\n", format_real(col.times[k]), x, format_real(col(x, k)),
                             format_real(col.mass[k]));
      w.file("kernel.csv", csv);
      if (config.kernel_validate) kernel_checks(config, domain, source, art, w);
      break;
    }
    case Command::Solve: {
      const auto domain = config.domain();
      const Problem prob = make_problem(config, domain, config.h);
      const Trajectory traj = solve(prob);
      w.file("trajectory.csv", trajectory_csv(traj, domain, y0_for(config, domain), config.gamma, config.kernel_tol));
      w.file("verdict.txt", verdict_line(traj) + "\n");
      art.lines.push_back(verdict_line(traj));
      art.checks.push_back({"contraction-factor", config.name, traj.max_contraction() <= 0.75,
                            fmt::format("max {:.4f} <= 0.75", traj.max_contraction())});
      if (traj.verdict == Verdict::SolverFailure)
        art.checks.push_back({"solver-completed", config.name, false, traj.message});
      if (config.cross_validate && traj.verdict == Verdict::CompletedHorizon) {
        const Trajectory ref = mol_reference_solve(prob, config.mol_rtol);
        double diff = 0.0;
        const std::size_t n = std::min(ref.times.size(), traj.times.size());
        for (std::size_t k = 0; k < n; ++k)
          diff = std::max(diff, (ref.fields[k] - traj.fields[k]).cwiseAbs().maxCoeff());
        const double limit = std::max(1e-4, 10 * config.tol);
        art.checks.push_back({"solver-cross-validation", config.name,
                              ref.verdict == Verdict::CompletedHorizon && diff <= limit,
                              fmt::format("sup distance {:.3e} <= {:.1e}", diff, limit)});
      }
      break;
    }
    case Command::BoundCheck:
      bound_checks(config, config.domain(), art, w);
      break;
    case Command::Certify:
      certificate_checks(config, config.domain(), art, w);
      break;
    case Command::Criterion: {
      const auto domain = config.domain();
      const double lam = lambda_for(config, domain);
      const auto crit = theorem1_criterion(config.h, config.q, lam);
      art.lines.push_back(fmt::format("criterion={}", to_string(crit.verdict)));
      art.lines.push_back(fmt::format("eps={}", format_real(crit.eps)));
      art.lines.push_back(fmt::format("slope={}", format_real(crit.slope)));
      art.lines.push_back(fmt::format("lambda1={}", format_real(lam)));
      w.file("criterion.txt", fmt::format("{}\n", fmt::join(art.lines, "\n")));
      break;
    }
    case Command::Dichotomy: {
      const auto rows = dichotomy_sweep(config, config.jobs);
      w.file("dichotomy.csv", sweep_csv(rows));
      const std::string summary = sweep_summary(rows, config.q);
      w.file("dichotomy_summary.txt", summary + "\n");
      art.lines.push_back(summary);
      std::string timing = "alpha,wall_seconds\n";
      for (const auto& r : rows) {
        art.checks.push_back({"dichotomy-consistency", fmt::format("alpha={}", r.alpha), r.consistent,
                              r.error.empty() ? fmt::format("{} / {} / {}", r.criterion, r.certificate, r.verdict)
                                              : r.error});
        timing += fmt::format("{},{:.3f}\n", r.alpha, r.wall_seconds);
      }
      // Timing is not deterministic, so it lives beside the manifest and is not hashed.
      std::ofstream(out_dir / "timing.csv") << timing;
      break;
    }
    case Command::Report: {
      const auto domain = config.domain();
      kernel_checks(config, domain, domain.origin, art, w);
      const double lam = lambda_for(config, domain);
      if (lam > 0.0) {
        VertexField point = VertexField::Zero(domain.size());
        point(domain.origin) = 1.0;
        std::vector<double> grid;
        for (double t = config.lemma_grid_step; t <= config.lemma_grid_end + 1e-12; t += config.lemma_grid_step)
          grid.push_back(t);
        const auto lb = lemma1_lower_bound_check(domain, point, domain.origin, lam, config.eps_fraction * lam, grid,
                                                 config.kernel_tol);
        art.checks.push_back({"lemma-lower-bound", config.name, lb.holds,
                              fmt::format("C1 = {:.6f}, t0 = {:.3f}", lb.C1, lb.t0)});
        certificate_checks(config, domain, art, w);
      }
      bound_checks(config, domain, art, w);
      break;
    }
  }

  if (command == Command::Report || !art.checks.empty()) {
    const Report rep = make_report(art.checks);
    w.file("checks.csv", rep.csv);
    w.file("summary.txt", rep.summary);
  }
  write_manifest(out_dir, art, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return art;
}

}  // namespace graphheat
