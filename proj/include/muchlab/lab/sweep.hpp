#pragma once

// Stability sweep: perturb c phi by an exact H1 amount delta, evolve, and track
// the orbital distance and the energy/height bound on it at every snapshot.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "muchlab/lab/random.hpp"
#include "muchlab/orbit.hpp"
#include "muchlab/peakon.hpp"
#include "muchlab/solver.hpp"

namespace muchlab::lab {

enum class PerturbationKind { single_mode, random_band, amplitude_scale };

inline PerturbationKind parse_perturbation(std::string_view s) {
  if (s == "single-mode") return PerturbationKind::single_mode;
  if (s == "random-band") return PerturbationKind::random_band;
  if (s == "amplitude-scale") return PerturbationKind::amplitude_scale;
  throw std::invalid_argument("unknown perturbation '" + std::string(s) +
                              "' (expected single-mode, random-band or amplitude-scale)");
}

inline const char* to_string(PerturbationKind k) {
  switch (k) {
    case PerturbationKind::single_mode: return "single-mode";
    case PerturbationKind::random_band: return "random-band";
    case PerturbationKind::amplitude_scale: return "amplitude-scale";
  }
  return "unknown";
}

inline SolverConfig default_sweep_solver() {
  SolverConfig cfg;
  cfg.n = 512;
  cfg.dt = 5e-4;
  cfg.t_end = 1.0;
  cfg.filter_alpha = 36.0;
  cfg.filter_order = 8;
  cfg.record_every = 20;
  return cfg;
}

struct SweepSpec {
  std::vector<double> deltas{1e-3, 3e-3, 1e-2};
  PerturbationKind kind = PerturbationKind::single_mode;
  std::uint64_t seed = 0;
  SolverConfig solver = default_sweep_solver();
  double c = 1.0;
  /// Allowed shortfall in the snapshot bound before it counts as violated.
  double chain_slack = 1e-6;

  void validate() const {
    solver.validate();
    if (deltas.empty()) throw std::invalid_argument("SweepSpec: no deltas");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (!(deltas[i] >= 0.0) || !std::isfinite(deltas[i]))
        throw std::invalid_argument("SweepSpec: deltas must be finite and >= 0");
      if (i > 0 && !(deltas[i] > deltas[i - 1]))
        throw std::invalid_argument("SweepSpec: deltas must be strictly increasing");
    }
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("SweepSpec: c must be > 0");
  }
};

/// Unit-H1 perturbation direction, determined by (kind, seed) alone.
inline PeriodicField perturbation_direction(Grid g, PerturbationKind kind, std::uint64_t seed) {
  PeriodicField p(g);
  if (kind == PerturbationKind::amplitude_scale) {
    p = peakon_field(1.0, 0.0, g);
  } else {
    auto rng = stream_rng(seed, 0);
    if (kind == PerturbationKind::single_mode) {
      const double theta = uniform(rng, 0.0, two_pi);
      p = PeriodicField::sample(g, [theta](double x) { return std::sin(2.0 * two_pi * x + theta); });
    } else {
      p = random_fourier_sum(rng, 0.0, 8, 1.0).field(g);
    }
  }
  p *= 1.0 / std::sqrt(h1_norm_sq(p));
  return p;
}

/// c phi + delta p with ||p||_{H1} = 1, so the initial H1 distance to the
/// grid peakon is delta exactly.
inline PeriodicField perturbed_peakon(const SweepSpec& spec, double delta) {
  const Grid g(spec.solver.n);
  PeriodicField u = peakon_field(spec.c, 0.0, g);
  u += delta * perturbation_direction(g, spec.kind, spec.seed);
  return u;
}

struct DeltaResult {
  double delta = 0.0;
  RunStatus status = RunStatus::completed;
  std::string message;
  double sup_dist = 0.0;          // sup_t orbital distance (projected peakon)
  double sup_height_dev = 0.0;    // sup_t |M_u - c|
  double chain_min_slack = 0.0;   // min over snapshots of bound - distance^2
  std::size_t chain_violations = 0;
  std::size_t snapshots = 0;
  double sqrt_ratio = std::numeric_limits<double>::quiet_NaN();  // sup_dist / sqrt(delta)
  double h0_drift = 0.0;
  /// amplitude-scale only: speed of the perturbed orbit and sup distance to it.
  double own_speed = std::numeric_limits<double>::quiet_NaN();
  double sup_dist_own = std::numeric_limits<double>::quiet_NaN();
};

struct StabilityReport {
  std::vector<DeltaResult> rows;
  bool finite = true;          // every non-breaking run has finite sup values
  bool chain_holds = true;     // no snapshot violated the bound
  bool nondecreasing = true;   // D(delta) ordered like delta over non-breaking runs
  double max_sqrt_ratio = 0.0;

  bool pass() const noexcept { return finite && chain_holds && nondecreasing; }
};

/// ||u - c phi(. - xi)||_{H1}^2 against 6 (H1[u] - H1[c phi]) + (72/13) c (c - M_u),
/// xi = argmax - 1/2, measured against the exact peakon. Returns bound - lhs.
inline double chain_slack(const PeriodicField& u, double c, const ExtremaRecord& e,
                          const ConservedTriple& h) {
  const Spectrum s = transform(u);
  const double xi = wrap_unit(e.argmax - 0.5);
  const double lhs = h1_distance_sq(s, Peakon{c, xi}, PeakonReference::exact);
  const double rhs = 6.0 * (h.h1 - c * c * peakon_constants::energy) +
                     (72.0 / 13.0) * c * (c - e.max_val);
  return rhs - lhs;
}

inline DeltaResult run_delta(const SweepSpec& spec, double delta) {
  SolverConfig cfg = spec.solver;
  cfg.orbit_speed = spec.c;
  cfg.keep_snapshots = true;
  const PeriodicField u0 = perturbed_peakon(spec, delta);
  const TrajectoryRecord rec = evolve(u0, cfg);

  DeltaResult r;
  r.delta = delta;
  r.status = rec.status;
  r.message = rec.message;
  r.snapshots = rec.size();
  r.chain_min_slack = HUGE_VAL;
  if (spec.kind == PerturbationKind::amplitude_scale) {
    const Grid g(cfg.n);
    r.own_speed = spec.c + delta / std::sqrt(h1_norm_sq(peakon_field(1.0, 0.0, g)));
    r.sup_dist_own = 0.0;
  }
  for (std::size_t i = 0; i < rec.size(); ++i) {
    r.sup_dist = std::max(r.sup_dist, rec.dist_to_orbit[i]);
    r.sup_height_dev = std::max(r.sup_height_dev, std::abs(rec.extrema[i].max_val - spec.c));
    r.h0_drift = std::max(r.h0_drift, std::abs(rec.conserved[i].h0 - rec.conserved[0].h0));
    const double slack = chain_slack(rec.snapshots[i], spec.c, rec.extrema[i], rec.conserved[i]);
    r.chain_min_slack = std::min(r.chain_min_slack, slack);
    if (!(slack >= -spec.chain_slack)) ++r.chain_violations;
    if (spec.kind == PerturbationKind::amplitude_scale)
      r.sup_dist_own = std::max(r.sup_dist_own, orbital_distance(rec.snapshots[i], r.own_speed).dist);
  }
  if (delta > 0.0) r.sqrt_ratio = r.sup_dist / std::sqrt(delta);
  return r;
}

/// Runs every delta concurrently; the report is ordered like spec.deltas and
/// does not depend on scheduling.
inline StabilityReport run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<std::future<DeltaResult>> jobs;
  jobs.reserve(spec.deltas.size());
  for (const double d : spec.deltas)
    jobs.push_back(std::async(std::launch::async, [&spec, d] { return run_delta(spec, d); }));

  StabilityReport rep;
  for (auto& j : jobs) rep.rows.push_back(j.get());

  const DeltaResult* prev = nullptr;
  for (const DeltaResult& r : rep.rows) {
    if (r.status == RunStatus::failed) {
      rep.finite = false;
      continue;
    }
    if (!std::isfinite(r.sup_dist) || !std::isfinite(r.sup_height_dev)) rep.finite = false;
    if (r.chain_violations > 0) rep.chain_holds = false;
    if (std::isfinite(r.sqrt_ratio)) rep.max_sqrt_ratio = std::max(rep.max_sqrt_ratio, r.sqrt_ratio);
    if (r.status != RunStatus::completed) continue;
    if (prev && r.sup_dist < prev->sup_dist) rep.nondecreasing = false;
    prev = &r;
  }
  return rep;
}

}  // namespace muchlab::lab
