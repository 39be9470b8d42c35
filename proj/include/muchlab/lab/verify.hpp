#pragma once

// Verification suites. Each row reports the worst measured value over all
// trials against the bound it must not exceed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "muchlab/functionals.hpp"
#include "muchlab/lab/random.hpp"
#include "muchlab/muoperator.hpp"
#include "muchlab/peakon.hpp"

namespace muchlab::lab {

struct Check {
  std::string name;
  double measured;
  double bound;
  bool pass;
};

inline Check make_check(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, std::isfinite(measured) && measured <= bound};
}

enum class Suite { constants, identities, inequalities, all };

inline Suite parse_suite(std::string_view s) {
  if (s == "constants") return Suite::constants;
  if (s == "identities") return Suite::identities;
  if (s == "inequalities") return Suite::inequalities;
  if (s == "all") return Suite::all;
  throw std::invalid_argument("unknown suite '" + std::string(s) +
                              "' (expected constants, identities, inequalities or all)");
}

struct VerifyOptions {
  std::optional<std::size_t> trials;  // defaults: 200 identity, 1000 inequality trials
  std::uint64_t seed = 0;
  std::optional<double> tol;     // overrides every suite's default tolerance
  std::optional<std::size_t> n;  // overrides every suite's default grid size
};

inline double rel_err(double measured, double exact) {
  return std::abs(measured - exact) / std::max(std::abs(exact), 1e-300);
}

/// Peakon constants by closed-form quadrature, the peakon ODE, and the F
/// surface at the peakon. Default tolerance 1e-6 (1e-10 for the F rows).
inline std::vector<Check> verify_constants(const VerifyOptions& opt = {}) {
  namespace pc = peakon_constants;
  const std::size_t n = opt.n.value_or(1024);
  const double tol = opt.tol.value_or(1e-6);
  const double ftol = opt.tol.value_or(1e-10);
  const PeakonQuadrature q = peakon_quadrature(n);

  std::vector<Check> out;
  out.push_back(make_check("peakon mean H0", rel_err(q.h0, pc::mean), tol));
  out.push_back(make_check("peakon energy H1", rel_err(q.h1, pc::energy), tol));
  out.push_back(make_check("peakon cubic H2", rel_err(q.h2, pc::cubic), tol));
  out.push_back(make_check("peakon L2 norm squared", rel_err(q.l2sq, pc::l2sq), tol));
  out.push_back(make_check("peakon maximum", rel_err(q.max, pc::max), tol));
  out.push_back(make_check("peakon minimum", rel_err(q.min, pc::min), tol));
  out.push_back(make_check("slope limit below crest", rel_err(q.slope_left, pc::corner_slope), tol));
  out.push_back(make_check("slope limit above crest", rel_err(q.slope_right, -pc::corner_slope), tol));
  out.push_back(make_check("energy equals max slope", rel_err(q.h1, q.max_slope), tol));

  // phi_x^2 = (24/13)(phi - 23/26) and phi_xx = 12/13 away from the crest.
  double ode = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = -0.5 + (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    const double s = phi_x(x).value;
    ode = std::max(ode, std::abs(s * s - (24.0 / 13.0) * (phi(x) - pc::min)));
  }
  out.push_back(make_check("peakon first-order ODE", ode, tol));

  const FStats st = exact_stats(1.0);
  const FPoint at{pc::max, pc::min};
  const FGradient gr = f_grad(st, at);
  const FHessian h = f_hess(st, at);
  out.push_back(make_check("F at peakon extrema", std::abs(f_eval(st, at)), ftol));
  out.push_back(make_check("dF/dM at peakon", std::abs(gr.dM), ftol));
  out.push_back(make_check("dF/dm at peakon", std::abs(gr.dm), ftol));
  out.push_back(make_check("F_MM + 12/13", std::abs(h.MM + pc::mean), ftol));
  out.push_back(make_check("F_mm + 12/13", std::abs(h.mm + pc::mean), ftol));
  out.push_back(make_check("F_Mm", std::abs(h.Mm), ftol));
  return out;
}

/// Both-sides residuals of the energy expansion, the g identities, the
/// kernel identity and the phi_xx pairing on random positive fields.
inline std::vector<Check> verify_identities(const VerifyOptions& opt = {}) {
  const Grid g(opt.n.value_or(512));
  const double tol = opt.tol.value_or(1e-6);
  const std::size_t trials = opt.trials.value_or(200);
  double expansion = 0.0, g2 = 0.0, ug2 = 0.0, kernel = 0.0, pairing = 0.0, energy = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = stream_rng(opt.seed, t);
    const PeriodicField u = random_positive_field(g, rng);
    const double xi = uniform(rng, 0.0, 1.0);
    const double x = uniform(rng, 0.0, 1.0);
    const Spectrum s = transform(u);

    expansion = std::max(expansion, h1_expansion(u, xi).residual());

    const ExtremaRecord e = extrema(u);
    const FStats st = fstats(u);
    const FPoint p{e.max_val, e.min_val};
    const GIntegrals gi = g_integrals(u, e.argmax, e.argmin, e.min_val);
    g2 = std::max(g2, std::abs(gi.half_g2 - g_energy_closed_form(st, p)));
    ug2 = std::max(ug2, std::abs(gi.half_ug2 - ug_energy_closed_form(st, p)));

    kernel = std::max(kernel, std::abs(kernel_reproduce(u, x) - TrigInterpolant(s)(x)));

    const Spectrum ps = peakon_spectrum(g, 1.0, 0.0);
    const double phi_uxx = -detail::mode_pairing(ps, s, detail::slope_weight);
    pairing = std::max(pairing, std::abs(phi_xx_pairing(u) - phi_uxx));

    energy = std::max(energy, std::abs(0.5 * l2_inner(apply_A(u), u) - st.h1));
  }
  return {make_check("energy expansion about the peakon", expansion, tol),
          make_check("half integral of g^2", g2, tol),
          make_check("half integral of u g^2", ug2, tol),
          make_check("peakon reproduces point values", kernel, tol),
          make_check("phi_xx pairing", pairing, tol),
          make_check("H1 as half <Au, u>", energy, tol)};
}

/// Worst violation (measured - bound) of each inequality over random fields;
/// a row passes when the violation stays below the slack.
inline std::vector<Check> verify_inequalities(const VerifyOptions& opt = {}) {
  const Grid g(opt.n.value_or(512));
  const double slack = opt.tol.value_or(1e-8);
  constexpr double eps_values[] = {1.0, 24.0, 100.0};

  double lyapunov = -HUGE_VAL, max_mu = -HUGE_VAL, lower = -HUGE_VAL, upper = -HUGE_VAL;
  double eps_viol[3] = {-HUGE_VAL, -HUGE_VAL, -HUGE_VAL};
  double sup_h1 = -HUGE_VAL;
  const std::size_t trials = opt.trials.value_or(1000);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = stream_rng(opt.seed, t);
    const PeriodicField pos = random_positive_field(g, rng);
    const ExtremaRecord e = extrema(pos);
    lyapunov = std::max(lyapunov, -f_eval(fstats(pos), {e.max_val, e.min_val}));

    const PeriodicField f = random_field(g, rng);
    const Bound b = max_mu_inequality(f);
    max_mu = std::max(max_mu, b.measured - b.bound);
    const double mu2 = mu_norm_sq(f), h12 = h1_norm_sq(f);
    lower = std::max(lower, mu2 - h12);
    upper = std::max(upper, h12 - 3.0 * mu2);
    for (int i = 0; i < 3; ++i) {
      const Bound be = sup_bound_eps(f, eps_values[i]);
      eps_viol[i] = std::max(eps_viol[i], be.measured - be.bound);
    }
    const Bound bh = sup_h1_inequality(f);
    sup_h1 = std::max(sup_h1, bh.measured - bh.bound);
  }

  const PeakonQuadrature q = peakon_quadrature(1024);
  const double equality = std::abs(q.max - std::sqrt(13.0 / 12.0) * std::sqrt(2.0 * q.h1));

  return {make_check("F nonnegative at own extrema", lyapunov, slack),
          make_check("max|f| <= sqrt(13/12) |f|_mu", max_mu, slack),
          make_check("peakon attains max-mu equality", equality, std::max(slack, 1e-6)),
          make_check("|f|_mu^2 <= |f|_H1^2", lower, slack),
          make_check("|f|_H1^2 <= 3 |f|_mu^2", upper, slack),
          make_check("sup bound, eps = 1", eps_viol[0], slack),
          make_check("sup bound, eps = 24", eps_viol[1], slack),
          make_check("sup bound, eps = 100", eps_viol[2], slack),
          make_check("sharp sup-H1 bound", sup_h1, slack)};
}

inline std::vector<Check> verify(Suite suite, const VerifyOptions& opt = {}) {
  std::vector<Check> out;
  auto append = [&](std::vector<Check> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (suite == Suite::constants || suite == Suite::all) append(verify_constants(opt));
  if (suite == Suite::identities || suite == Suite::all) append(verify_identities(opt));
  if (suite == Suite::inequalities || suite == Suite::all) append(verify_inequalities(opt));
  return out;
}

inline bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace muchlab::lab
