#pragma once

// CSV and JSON writers for trajectories, F-surface tables and summaries.

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "muchlab/lab/sweep.hpp"
#include "muchlab/lab/verify.hpp"
#include "muchlab/solver.hpp"

namespace muchlab::lab {

using json = nlohmann::ordered_json;

namespace detail {
struct FullPrecision {
  explicit FullPrecision(std::ostream& os) : os_(os), flags_(os.flags()), prec_(os.precision()) {
    os_ << std::setprecision(17);
  }
  ~FullPrecision() {
    os_.flags(flags_);
    os_.precision(prec_);
  }
  FullPrecision(const FullPrecision&) = delete;
  FullPrecision& operator=(const FullPrecision&) = delete;

 private:
  std::ostream& os_;
  std::ios::fmtflags flags_;
  std::streamsize prec_;
};
}  // namespace detail

/// Columns t,M,m,xi,H0,H1,H2,dist_to_orbit. Without orbit tracking xi is
/// argmax - 1/2 and dist_to_orbit is empty.
inline void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
  detail::FullPrecision guard(os);
  os << "t,M,m,xi,H0,H1,H2,dist_to_orbit\n";
  const bool orbit = rec.dist_to_orbit.size() == rec.size();
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const ExtremaRecord& e = rec.extrema[i];
    const ConservedTriple& h = rec.conserved[i];
    os << rec.times[i] << ',' << e.max_val << ',' << e.min_val << ',';
    os << (orbit ? rec.orbit_xi[i] : wrap_unit(e.argmax - 0.5)) << ',' << h.h0 << ',' << h.h1 << ',' << h.h2 << ',';
    if (orbit) os << rec.dist_to_orbit[i];
    os << '\n';
  }
}

/// Long-format snapshots: t,x,u.
inline void write_fields_csv(std::ostream& os, const TrajectoryRecord& rec) {
  detail::FullPrecision guard(os);
  os << "t,x,u\n";
  for (std::size_t i = 0; i < rec.snapshots.size(); ++i) {
    const PeriodicField& u = rec.snapshots[i];
    for (std::size_t j = 0; j < u.size(); ++j)
      os << rec.times[i] << ',' << u.grid().node(j) << ',' << u[j] << '\n';
  }
}

/// NaN and infinities become null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const Check& c) {
  return {{"name", c.name}, {"measured", number(c.measured)}, {"bound", number(c.bound)},
          {"pass", c.pass}};
}

inline json to_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const Check& c : checks) arr.push_back(to_json(c));
  return arr;
}

inline json to_json(const SolverConfig& cfg) {
  json j = {{"n", cfg.n},
            {"dt", cfg.dt},
            {"t_end", cfg.t_end},
            {"dealias", cfg.dealias},
            {"filter_alpha", cfg.filter_alpha},
            {"filter_order", cfg.filter_order},
            {"record_every", cfg.record_every}};
  if (cfg.orbit_speed) j["orbit_speed"] = *cfg.orbit_speed;
  return j;
}

inline json to_json(const DeltaResult& r) {
  json j = {{"delta", r.delta},
            {"status", to_string(r.status)},
            {"sup_orbital_distance", number(r.sup_dist)},
            {"sup_height_deviation", number(r.sup_height_dev)},
            {"chain_min_slack", number(r.chain_min_slack)},
            {"chain_violations", r.chain_violations},
            {"snapshots", r.snapshots},
            {"distance_over_sqrt_delta", number(r.sqrt_ratio)},
            {"h0_drift", number(r.h0_drift)}};
  if (std::isfinite(r.own_speed)) {
    j["own_speed"] = r.own_speed;
    j["sup_distance_own_orbit"] = number(r.sup_dist_own);
  }
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

/// Sweep rows as pass/fail checks.
inline std::vector<Check> sweep_checks(const StabilityReport& rep, double chain_slack) {
  std::vector<Check> out;
  for (const DeltaResult& r : rep.rows) {
    const std::string tag = "delta " + std::to_string(r.delta) + ": ";
    if (r.status == RunStatus::breaking) continue;
    out.push_back(make_check(tag + "sup orbital distance finite",
                             std::isfinite(r.sup_dist) ? r.sup_dist : HUGE_VAL,
                             std::numeric_limits<double>::max()));
    out.push_back(make_check(tag + "energy-height bound shortfall", -r.chain_min_slack, chain_slack));
  }
  out.push_back({"distance nondecreasing in delta", rep.nondecreasing ? 0.0 : 1.0, 0.0, rep.nondecreasing});
  return out;
}

inline json summary(const std::string& command, json config, const std::vector<Check>& checks,
                    double sup_orbital_distance, bool breaking) {
  return {{"command", command},
          {"config", std::move(config)},
          {"checks", to_json(checks)},
          {"sup_orbital_distance", number(sup_orbital_distance)},
          {"breaking", breaking}};
}

}  // namespace muchlab::lab
