// muchlab: simulate, verify, fsurface and stability-sweep front end.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "muchlab/lab/fsurface.hpp"
#include "muchlab/lab/report.hpp"
#include "muchlab/lab/sweep.hpp"
#include "muchlab/lab/verify.hpp"
#include "muchlab/solver.hpp"

namespace fs = std::filesystem;
using namespace muchlab;
using namespace muchlab::lab;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::size_t> n;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> filter_alpha;
  std::optional<int> filter_order;
  std::optional<bool> dealias;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string out;
};

SolverConfig solver_from(const Common& c, SolverConfig base) {
  if (c.n) base.n = *c.n;
  if (c.dt) base.dt = *c.dt;
  if (c.t_end) base.t_end = *c.t_end;
  if (c.filter_alpha) base.filter_alpha = *c.filter_alpha;
  if (c.filter_order) base.filter_order = *c.filter_order;
  if (c.dealias) base.dealias = *c.dealias;
  return base;
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path p = fs::path(dir) / name;
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

void print_checks(const std::vector<Check>& checks) {
  for (const Check& c : checks)
    std::printf("%-4s  %-44s measured %11.4e  bound %11.4e\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.measured, c.bound);
}

void write_summary(const Common& c, const json& s) {
  if (c.out.empty()) return;
  open_output(c.out, "summary.json") << s.dump(2) << '\n';
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string init = "peakon";
  double c = 1.0;
  double value = 2.0;
  double mean = 2.0;
  int mode = 1;
  double amp = 0.1;
  double phase = 0.0;
  std::size_t record_every = 1;
  std::optional<double> orbit_speed;
  std::string xi_mode = "argmax";
  bool fields = false;
};

PeriodicField initial_data(const SimulateArgs& a, Grid g) {
  if (a.init == "peakon") return peakon_field(a.c, a.phase, g);
  if (a.init == "constant") return PeriodicField::constant(g, a.value);
  if (a.init == "fourier") {
    if (a.mode < 1 || a.mode > g.max_mode()) throw UsageError("--mode must lie in [1, n/2 - 1]");
    return PeriodicField::sample(
        g, [&](double x) { return a.mean + a.amp * std::sin(two_pi * a.mode * x + a.phase); });
  }
  throw UsageError("unknown --init '" + a.init + "' (expected peakon, constant or fourier)");
}

int cmd_simulate(const Common& c, const SimulateArgs& a) {
  SolverConfig base;
  base.filter_alpha = 36.0;
  SolverConfig cfg = solver_from(c, base);
  cfg.record_every = a.record_every;
  cfg.xi_mode = parse_xi_mode(a.xi_mode);
  cfg.keep_snapshots = a.fields;
  if (a.orbit_speed) cfg.orbit_speed = a.orbit_speed;
  else if (a.init == "peakon") cfg.orbit_speed = a.c;

  const Grid g(cfg.n);
  const PeriodicField u0 = initial_data(a, g);
  if (!c.dt) {
    const double umax = std::max(max_abs(u0), 1e-300);
    cfg.dt = std::min(1e-3, 0.25 / (static_cast<double>(cfg.n) * umax));
  }
  cfg.validate_for(u0);

  const TrajectoryRecord rec = evolve(u0, cfg);
  const ConservedTriple& h0 = rec.conserved.front();
  const ConservedTriple& h1 = rec.conserved.back();

  std::vector<Check> checks;
  double drift0 = 0.0;
  for (const ConservedTriple& h : rec.conserved) drift0 = std::max(drift0, std::abs(h.h0 - h0.h0));
  checks.push_back(make_check("H0 drift", drift0, 1e-12));
  if (c.tol) {
    auto rel = [](double a, double b) { return std::abs(b - a) / std::max(std::abs(a), 1e-300); };
    checks.push_back(make_check("relative H1 drift", rel(h0.h1, h1.h1), *c.tol));
    checks.push_back(make_check("relative H2 drift", rel(h0.h2, h1.h2), *c.tol));
  }
  if (rec.status == RunStatus::failed) checks.push_back({"integration", 1.0, 0.0, false});

  double sup_dist = std::numeric_limits<double>::quiet_NaN();
  if (!rec.dist_to_orbit.empty())
    sup_dist = *std::max_element(rec.dist_to_orbit.begin(), rec.dist_to_orbit.end());

  json config = to_json(cfg);
  config["init"] = a.init;
  config["seed"] = c.seed;
  json s = summary("simulate", config, checks, sup_dist, rec.status == RunStatus::breaking);
  s["status"] = to_string(rec.status);
  s["steps"] = rec.steps;
  s["final_time"] = rec.times.back();
  s["h0"] = {h0.h0, h1.h0};
  s["h1"] = {h0.h1, h1.h1};
  s["h2"] = {h0.h2, h1.h2};
  if (!rec.message.empty()) s["message"] = rec.message;

  if (!c.out.empty()) {
    auto os = open_output(c.out, "trajectory.csv");
    write_trajectory_csv(os, rec);
    if (a.fields) {
      auto fos = open_output(c.out, "fields.csv");
      write_fields_csv(fos, rec);
    }
  }
  write_summary(c, s);

  std::printf("status %s after %zu steps, t = %.6g\n", to_string(rec.status), rec.steps, rec.times.back());
  std::printf("H0 %.17g -> %.17g\nH1 %.17g -> %.17g\nH2 %.17g -> %.17g\n", h0.h0, h1.h0, h0.h1,
              h1.h1, h0.h2, h1.h2);
  if (std::isfinite(sup_dist)) std::printf("sup orbital distance %.6e\n", sup_dist);
  if (!rec.message.empty()) std::fprintf(stderr, "%s\n", rec.message.c_str());
  print_checks(checks);
  return all_pass(checks) ? kPass : kFail;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const Common& c, const std::string& suite, std::optional<std::size_t> trials) {
  VerifyOptions opt;
  opt.trials = trials;
  opt.seed = c.seed;
  opt.tol = c.tol;
  opt.n = c.n;
  const std::vector<Check> checks = verify(parse_suite(suite), opt);
  print_checks(checks);

  json config = {{"suite", suite}, {"seed", c.seed}};
  if (trials) config["trials"] = *trials;
  if (c.tol) config["tol"] = *c.tol;
  if (c.n) config["n"] = *c.n;
  write_summary(c, summary("verify", config, checks, std::numeric_limits<double>::quiet_NaN(), false));
  return all_pass(checks) ? kPass : kFail;
}

// ---------------------------------------------------------------- fsurface

struct FSurfaceArgs {
  std::string source = "peakon";
  double c = 1.0;
  double value = 2.0;
  std::string field;
  std::vector<double> M_range;
  std::vector<double> m_range;
  std::size_t points = 41;
};

PeriodicField read_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read field file " + path);
  std::vector<double> v;
  std::string tok;
  while (is >> tok) {
    std::replace(tok.begin(), tok.end(), ',', ' ');
    std::istringstream ts(tok);
    double x;
    while (ts >> x) v.push_back(x);
  }
  const Grid g(v.size());
  return PeriodicField(g, std::move(v));
}

int cmd_fsurface(const Common& c, const FSurfaceArgs& a) {
  FStats stats;
  FPoint own;
  if (a.source == "peakon") {
    stats = exact_stats(a.c);
    own = {a.c * peakon_constants::max, a.c * peakon_constants::min};
  } else if (a.source == "constant") {
    stats = {a.value, 0.5 * a.value * a.value, a.value * a.value * a.value, a.value * a.value};
    own = {a.value, a.value};
  } else if (a.source == "field") {
    if (a.field.empty()) throw UsageError("--source field needs --field <path>");
    const PeriodicField u = read_field(a.field);
    stats = fstats(u);
    const ExtremaRecord e = extrema(u);
    own = {e.max_val, e.min_val};
  } else {
    throw UsageError("unknown --source '" + a.source + "' (expected peakon, constant or field)");
  }
  require_f_domain(own);

  FSurfaceSpec spec;
  const double w = 0.1 * own.M;
  spec.M_lo = own.M - w;
  spec.M_hi = own.M + w;
  spec.m_lo = own.m - w;
  spec.m_hi = own.m + w;
  auto range = [](const std::vector<double>& r, double& lo, double& hi, const char* flag) {
    if (r.empty()) return;
    if (r.size() != 2) throw UsageError(std::string(flag) + " takes two values");
    lo = r[0];
    hi = r[1];
  };
  range(a.M_range, spec.M_lo, spec.M_hi, "--M-range");
  range(a.m_range, spec.m_lo, spec.m_hi, "--m-range");
  spec.points = a.points;

  FSurface surf;
  try {
    surf = tabulate_f(stats, spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const double tol = c.tol.value_or(1e-8);
  std::vector<Check> checks{make_check("F nonnegative at own extrema", -f_eval(stats, own), tol)};

  if (c.out.empty()) {
    write_fsurface_csv(std::cout, surf);
  } else {
    auto os = open_output(c.out, "fsurface.csv");
    write_fsurface_csv(os, surf);
  }
  std::fprintf(stderr, "F(%.17g, %.17g) = %.6e\n", own.M, own.m, f_eval(stats, own));
  std::fprintf(stderr, "grid max F = %.6e at (M, m) = (%.17g, %.17g)\n", surf.argmax.F,
               surf.argmax.M, surf.argmax.m);

  json config = {{"source", a.source}, {"points", spec.points}, {"M_range", {spec.M_lo, spec.M_hi}},
                 {"m_range", {spec.m_lo, spec.m_hi}}};
  json s = summary("fsurface", config, checks, std::numeric_limits<double>::quiet_NaN(), false);
  s["max"] = {{"M", surf.argmax.M}, {"m", surf.argmax.m}, {"F", surf.argmax.F}};
  write_summary(c, s);
  return all_pass(checks) ? kPass : kFail;
}

// --------------------------------------------------------- stability-sweep

struct SweepArgs {
  std::vector<double> deltas{1e-3, 3e-3, 1e-2};
  std::string perturbation = "single-mode";
  double c = 1.0;
  std::size_t record_every = 20;
  std::string xi_mode = "argmax";
  double chain_slack = 1e-6;
};

int cmd_sweep(const Common& c, const SweepArgs& a) {
  SweepSpec spec;
  spec.deltas = a.deltas;
  spec.kind = parse_perturbation(a.perturbation);
  spec.seed = c.seed;
  spec.c = a.c;
  spec.chain_slack = c.tol.value_or(a.chain_slack);
  spec.solver = solver_from(c, default_sweep_solver());
  spec.solver.record_every = a.record_every;
  spec.solver.xi_mode = parse_xi_mode(a.xi_mode);
  spec.validate();

  const StabilityReport rep = run_sweep(spec);
  std::printf("%10s  %-10s %12s %12s %12s %10s %12s\n", "delta", "status", "D(delta)", "sup|M-c|",
              "min slack", "D/sqrt(d)", "D own orbit");
  bool breaking = false;
  double sup = 0.0;
  json rows = json::array();
  for (const DeltaResult& r : rep.rows) {
    std::printf("%10.3e  %-10s %12.4e %12.4e %12.4e %10.4f %12.4e\n", r.delta, to_string(r.status),
                r.sup_dist, r.sup_height_dev, r.chain_min_slack, r.sqrt_ratio, r.sup_dist_own);
    if (r.status == RunStatus::breaking) {
      breaking = true;
      std::printf("            run terminated (breaking): %s\n", r.message.c_str());
    }
    sup = std::max(sup, r.sup_dist);
    rows.push_back(to_json(r));
  }
  std::printf("max D/sqrt(delta) = %.4f\n", rep.max_sqrt_ratio);

  std::vector<Check> checks = sweep_checks(rep, spec.chain_slack);
  print_checks(checks);

  json config = to_json(spec.solver);
  config["deltas"] = spec.deltas;
  config["perturbation"] = to_string(spec.kind);
  config["c"] = spec.c;
  config["seed"] = spec.seed;
  json s = summary("stability-sweep", config, checks, sup, breaking);
  s["rows"] = rows;
  s["max_distance_over_sqrt_delta"] = number(rep.max_sqrt_ratio);
  write_summary(c, s);
  return rep.pass() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"muchlab: spectral laboratory for periodic peakon stability"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file mirroring the flags; flags override it");

  Common c;
  app.add_option("--n", c.n, "grid size (power of two >= 16)");
  app.add_option("--dt", c.dt, "time step");
  app.add_option("--t-end", c.t_end, "final time");
  app.add_option("--filter-alpha", c.filter_alpha, "exponential filter strength");
  app.add_option("--filter-order", c.filter_order, "exponential filter order (even, >= 4)");
  app.add_option("--dealias", c.dealias, "2/3-rule dealiasing (true/false)");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--tol", c.tol, "tolerance override");
  app.add_option("--out", c.out, "output directory");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "evolve initial data and record a trajectory");
  simulate->fallthrough();
  simulate->add_option("--init", sim.init, "peakon | constant | fourier")->capture_default_str();
  simulate->add_option("--c", sim.c, "peakon speed")->capture_default_str();
  simulate->add_option("--value", sim.value, "constant value")->capture_default_str();
  simulate->add_option("--mean", sim.mean, "fourier mean")->capture_default_str();
  simulate->add_option("--mode", sim.mode, "fourier wavenumber")->capture_default_str();
  simulate->add_option("--amp", sim.amp, "fourier amplitude")->capture_default_str();
  simulate->add_option("--phase", sim.phase, "peakon phase or fourier phase")->capture_default_str();
  simulate->add_option("--record-every", sim.record_every, "steps between records")->capture_default_str();
  simulate->add_option("--orbit-speed", sim.orbit_speed, "track distance to this peakon orbit");
  simulate->add_option("--xi-mode", sim.xi_mode, "argmax | minimize")->capture_default_str();
  simulate->add_flag("--fields", sim.fields, "also write fields.csv with every snapshot");

  std::string suite = "all";
  std::optional<std::size_t> trials;
  auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
  verify_cmd->fallthrough();
  verify_cmd->add_option("--suite", suite, "constants | identities | inequalities | all")->capture_default_str();
  verify_cmd->add_option("--trials", trials, "random trials per suite");

  FSurfaceArgs fsa;
  auto* fsurface = app.add_subcommand("fsurface", "tabulate F over a rectangle of (M, m)");
  fsurface->fallthrough();
  fsurface->add_option("--source", fsa.source, "peakon | constant | field")->capture_default_str();
  fsurface->add_option("--c", fsa.c, "peakon speed")->capture_default_str();
  fsurface->add_option("--value", fsa.value, "constant value")->capture_default_str();
  fsurface->add_option("--field", fsa.field, "file of grid values (whitespace or comma separated)");
  fsurface->add_option("--M-range", fsa.M_range, "M lo hi")->expected(2);
  fsurface->add_option("--m-range", fsa.m_range, "m lo hi")->expected(2);
  fsurface->add_option("--points", fsa.points, "grid points per axis")->capture_default_str();

  SweepArgs swa;
  auto* sweep = app.add_subcommand("stability-sweep", "perturb the peakon and track orbital distance");
  sweep->fallthrough();
  sweep->add_option("--deltas", swa.deltas, "perturbation sizes in H1 norm")->delimiter(',');
  sweep->add_option("--perturbation", swa.perturbation, "single-mode | random-band | amplitude-scale")
      ->capture_default_str();
  sweep->add_option("--c", swa.c, "peakon speed")->capture_default_str();
  sweep->add_option("--record-every", swa.record_every, "steps between snapshots")->capture_default_str();
  sweep->add_option("--xi-mode", swa.xi_mode, "argmax | minimize")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(c, sim);
    if (*verify_cmd) return cmd_verify(c, suite, trials);
    if (*fsurface) return cmd_fsurface(c, fsa);
    if (*sweep) return cmd_sweep(c, swa);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const IntegrationFailure& e) {
    std::fprintf(stderr, "integration failed at t = %g: %s\n", e.time(), e.what());
    return kFail;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFail;
  }
  return kUsage;
}
