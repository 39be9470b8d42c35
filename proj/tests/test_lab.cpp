#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "muchlab/lab/fsurface.hpp"
#include "muchlab/lab/random.hpp"
#include "muchlab/lab/report.hpp"
#include "muchlab/lab/sweep.hpp"
#include "muchlab/lab/verify.hpp"

using namespace muchlab;
using namespace muchlab::lab;

namespace {

SweepSpec small_sweep(PerturbationKind kind) {
  SweepSpec s;
  s.kind = kind;
  s.seed = 17;
  s.solver.n = 128;
  s.solver.dt = 1e-3;
  s.solver.t_end = 0.25;
  s.solver.record_every = 25;
  return s;
}

}  // namespace

TEST(Random, StreamsAreReproducible) {
  auto a = stream_rng(5, 3), b = stream_rng(5, 3), c = stream_rng(5, 4), d = stream_rng(6, 3);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

TEST(Random, PositiveFieldsArePositive) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    auto rng = stream_rng(1, t);
    EXPECT_GT(extrema(random_positive_field(Grid(128), rng)).min_val, 0.0);
  }
}

TEST(Verify, ConstantsSuitePasses) {
  const auto checks = verify(Suite::constants);
  EXPECT_GE(checks.size(), 9u);
  for (const Check& c : checks) EXPECT_TRUE(c.pass) << c.name << " " << c.measured;
}

TEST(Verify, IdentitySuitePasses) {
  VerifyOptions o;
  o.trials = 25;
  o.seed = 7;
  for (const Check& c : verify(Suite::identities, o)) {
    EXPECT_TRUE(c.pass) << c.name << " " << c.measured;
    EXPECT_LT(c.measured, 1e-6);
  }
}

TEST(Verify, InequalitySuitePasses) {
  VerifyOptions o;
  o.trials = 100;
  for (const Check& c : verify(Suite::inequalities, o)) EXPECT_TRUE(c.pass) << c.name << " " << c.measured;
}

TEST(Verify, ToleranceOverrideCanFail) {
  VerifyOptions o;
  o.tol = -1.0;
  EXPECT_FALSE(all_pass(verify(Suite::constants, o)));
}

TEST(Verify, SuiteParsing) {
  EXPECT_EQ(parse_suite("all"), Suite::all);
  EXPECT_THROW(parse_suite("lemmas"), std::invalid_argument);
}

TEST(Sweep, PerturbationHasExactSize) {
  for (auto kind : {PerturbationKind::single_mode, PerturbationKind::random_band, PerturbationKind::amplitude_scale}) {
    SweepSpec s = small_sweep(kind);
    const Grid g(s.solver.n);
    for (double delta : {1e-3, 1e-2}) {
      const PeriodicField u = perturbed_peakon(s, delta);
      EXPECT_NEAR(std::sqrt(h1_norm_sq(u - peakon_field(s.c, 0.0, g))), delta, 1e-13);
    }
  }
}

TEST(Sweep, SameSeedSameFields) {
  const SweepSpec s = small_sweep(PerturbationKind::random_band);
  const PeriodicField a = perturbed_peakon(s, 0.01), b = perturbed_peakon(s, 0.01);
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_EQ(a[j], b[j]);
  SweepSpec t = s;
  t.seed = 18;
  EXPECT_GT(max_abs(perturbed_peakon(t, 0.01) - a), 0.0);
}

TEST(Sweep, ValidatesDeltas) {
  SweepSpec s = small_sweep(PerturbationKind::single_mode);
  s.deltas = {1e-2, 1e-3};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.deltas = {};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.deltas = {-1e-3};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.deltas = {0.0, 1e-3};
  EXPECT_NO_THROW(s.validate());
  EXPECT_THROW(parse_perturbation("bump"), std::invalid_argument);
}

TEST(Sweep, DeterministicAndChainHolds) {
  const SweepSpec s = small_sweep(PerturbationKind::single_mode);
  const StabilityReport a = run_sweep(s), b = run_sweep(s);
  ASSERT_EQ(a.rows.size(), s.deltas.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].delta, s.deltas[i]);
    EXPECT_EQ(a.rows[i].sup_dist, b.rows[i].sup_dist);
    EXPECT_EQ(a.rows[i].chain_min_slack, b.rows[i].chain_min_slack);
    EXPECT_EQ(a.rows[i].status, RunStatus::completed);
    EXPECT_EQ(a.rows[i].chain_violations, 0u);
    EXPECT_TRUE(std::isfinite(a.rows[i].sup_dist));
    EXPECT_LT(a.rows[i].h0_drift, 1e-12);
  }
  EXPECT_TRUE(a.pass());
  EXPECT_EQ(to_json(a.rows[1]).dump(), to_json(b.rows[1]).dump());
}

TEST(Sweep, AmplitudeScaleStaysOnItsOwnOrbit) {
  SweepSpec s = small_sweep(PerturbationKind::amplitude_scale);
  s.deltas = {0.05};
  s.solver.t_end = 1.0;
  s.solver.filter_alpha = 36.0;
  const StabilityReport r = run_sweep(s);
  const DeltaResult& d = r.rows.at(0);
  EXPECT_GT(d.own_speed, 1.0);
  EXPECT_LT(d.sup_dist_own, d.sup_dist);
  EXPECT_LT(d.sup_dist_own, 5e-2);
}

TEST(Sweep, ChainSlackIsTheProofBound) {
  // On an exact orbit member the bound reduces to 3 ||tail||_mu^2 - ||tail||_H1^2 >= 0.
  const Grid g(256);
  const PeriodicField u = peakon_field(1.0, 0.4, g);
  const double slack = chain_slack(u, 1.0, extrema(u), conserved(u));
  EXPECT_GE(slack, 0.0);
  EXPECT_LT(slack, 1e-2);
}

TEST(FSurface, PeakonMaximumAtItsExtrema) {
  FSurfaceSpec spec;
  spec.M_lo = 0.9;
  spec.M_hi = 1.1;
  spec.m_lo = 23.0 / 26.0 - 0.1;
  spec.m_hi = 23.0 / 26.0 + 0.1;
  spec.points = 21;
  const FSurface s = tabulate_f(exact_stats(1.0), spec);
  EXPECT_NEAR(s.argmax.M, 1.0, 1e-12);
  EXPECT_NEAR(s.argmax.m, 23.0 / 26.0, 1e-12);
  EXPECT_NEAR(s.argmax.F, 0.0, 1e-12);
  for (const FSurfaceRow& r : s.rows) {
    EXPECT_LE(r.F, 1e-12);
    EXPECT_GE(r.M, r.m);
  }
}

TEST(FSurface, ConstantPointAndEmptyDomain) {
  FSurfaceSpec spec{2.0, 2.0, 2.0, 2.0, 1};
  const FStats c{2.0, 2.0, 8.0, 4.0};
  const FSurface s = tabulate_f(c, spec);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_NEAR(s.rows[0].F, 0.0, 1e-12);
  EXPECT_THROW(tabulate_f(c, FSurfaceSpec{0.1, 0.2, 0.5, 0.6, 5}), std::invalid_argument);
  EXPECT_THROW(tabulate_f(c, FSurfaceSpec{-1.0, 0.0, -1.0, 0.0, 5}), std::invalid_argument);

  std::ostringstream os;
  write_fsurface_csv(os, s);
  EXPECT_EQ(os.str().substr(0, 15), "M,m,F,gradnorm\n");
}

TEST(Report, TrajectoryCsvSchema) {
  SolverConfig cfg;
  cfg.n = 64;
  cfg.t_end = 0.01;
  cfg.record_every = 5;
  cfg.keep_snapshots = true;
  const TrajectoryRecord r = evolve(PeriodicField::constant(Grid(64), 2.0), cfg);
  std::ostringstream os;
  write_trajectory_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,M,m,xi,H0,H1,H2,dist_to_orbit");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
  }
  EXPECT_EQ(rows, r.size());

  std::ostringstream fs;
  write_fields_csv(fs, r);
  const std::string fields = fs.str();
  EXPECT_EQ(fields.substr(0, 6), "t,x,u\n");
  EXPECT_EQ(static_cast<std::size_t>(std::count(fields.begin(), fields.end(), '\n')), 1 + 64 * r.size());
}

TEST(Report, SummaryKeys) {
  const json s = summary("verify", json::object(), {make_check("x", 0.5, 1.0)}, NAN, false);
  EXPECT_EQ(s["command"], "verify");
  EXPECT_TRUE(s["config"].is_object());
  EXPECT_TRUE(s["checks"][0]["pass"].get<bool>());
  EXPECT_TRUE(s["sup_orbital_distance"].is_null());
  EXPECT_FALSE(s["breaking"].get<bool>());
}
