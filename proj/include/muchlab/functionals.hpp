#pragma once

// Conservation laws, the g-construction and the Lyapunov surface
//
//   F_u(M, m) = M [H1 - H0^2/2 - 8 sqrt(2/39) (M-m)^{3/2} + (12/13)(H0 - m)]
//             + (H0 - 12/13) ||u||_2^2 + (12/13) m H0
//             + (8/5) sqrt(2/39) (M-m)^{3/2} (2m + 3M) - H2,
//
// defined on M >= m > 0. F_u(M_u, m_u) >= 0 for every positive u, and the
// peakon is the critical point F = 0 with Hessian -(12/13) I.

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "muchlab/field.hpp"
#include "muchlab/invariants.hpp"
#include "muchlab/peakon.hpp"

namespace muchlab {

/// sqrt(2/39), the constant in front of every (M-m)^{3/2} term.
inline const double kF = std::sqrt(2.0 / 39.0);

inline ConservedTriple conserved(const PeriodicField& u) {
  const Spectrum s = transform(u);
  const double mu = s.modes()[0].real();
  const PeriodicField ux = inverse_transform(
      apply_symbol(s, [](int k) { return complex(0.0, two_pi * k); }, 0.0));
  double l2 = 0.0, cubic = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    l2 += u[j] * u[j];
    cubic += u[j] * ux[j] * ux[j];
  }
  const double inv_n = 1.0 / static_cast<double>(u.size());
  return {mu, 0.5 * (mu * mu + slope_norm_sq(s)), mu * l2 * inv_n + 0.5 * cubic * inv_n};
}

inline FStats fstats(const PeriodicField& u) {
  const ConservedTriple t = conserved(u);
  return {t.h0, t.h1, t.h2, l2_norm_sq(u)};
}

struct FPoint {
  double M;
  double m;
};

inline void require_f_domain(const FPoint& p) {
  if (!(p.M >= p.m && p.m > 0.0) || !std::isfinite(p.M))
    throw std::domain_error("F_u is defined on M >= m > 0; got (M, m) = (" + std::to_string(p.M) +
                            ", " + std::to_string(p.m) + ")");
}

/// Right-hand side of the g^2 identity: (1/2) integral of g^2. Equals dF/dM.
inline double g_energy_closed_form(const FStats& s, const FPoint& p) {
  const double gap = p.M - p.m;
  return s.h1 - 0.5 * s.h0 * s.h0 - 8.0 * kF * gap * std::sqrt(gap) +
         peakon_constants::mean * (s.h0 - p.m);
}

/// Right-hand side of the u g^2 identity: (1/2) integral of u g^2.
inline double ug_energy_closed_form(const FStats& s, const FPoint& p) {
  const double gap = p.M - p.m;
  return s.h2 - (s.h0 - peakon_constants::mean) * s.l2sq - peakon_constants::mean * p.m * s.h0 -
         1.6 * kF * gap * std::sqrt(gap) * (2.0 * p.m + 3.0 * p.M);
}

inline double f_eval(const FStats& s, const FPoint& p) {
  require_f_domain(p);
  const double gap = p.M - p.m;
  return p.M * g_energy_closed_form(s, p) + (s.h0 - peakon_constants::mean) * s.l2sq +
         peakon_constants::mean * p.m * s.h0 +
         1.6 * kF * gap * std::sqrt(gap) * (2.0 * p.m + 3.0 * p.M) - s.h2;
}

struct FGradient {
  double dM;
  double dm;
};

inline FGradient f_grad(const FStats& s, const FPoint& p) {
  require_f_domain(p);
  const double gap = p.M - p.m;
  return {g_energy_closed_form(s, p),
          peakon_constants::mean * (s.h0 - p.M) + 8.0 * kF * gap * std::sqrt(gap)};
}

/// Second derivatives of F. They do not depend on u. At M = m the
/// (M-m)^{1/2} factor is only one-sided differentiable; `one_sided` flags it.
struct FHessian {
  double MM;
  double Mm;
  double mm;
  bool one_sided;

  std::array<std::array<double, 2>, 2> matrix() const { return {{{MM, Mm}, {Mm, mm}}}; }
};

inline FHessian f_hess(const FStats&, const FPoint& p) {
  require_f_domain(p);
  const double root = std::sqrt(p.M - p.m);
  const double diag = -12.0 * kF * root;
  return {diag, -peakon_constants::mean + 12.0 * kF * root, diag, p.M == p.m};
}

namespace detail {

struct GBranchPoints {
  double xi;   // argmax
  double eta;  // argmin, unwrapped so that xi < eta <= xi + 1
  double M;
  double m;
};

inline GBranchPoints g_branch_points(const ExtremaRecord& e) {
  double eta = e.argmin;
  if (eta <= e.argmax) eta += 1.0;
  return {e.argmax, eta, e.max_val, e.min_val};
}

inline double g_root(double u, double m) {
  return peakon_constants::mean * std::sqrt((13.0 / 6.0) * std::max(u - m, 0.0));
}

}  // namespace detail

/// g = u_x + (12/13) sqrt((13/6)(u - m)) on (xi, eta] and
/// g = u_x - (12/13) sqrt((13/6)(u - m)) on (eta, xi + 1], sampled on the grid.
/// Identically zero for the peakon.
inline PeriodicField g_field(const PeriodicField& u) {
  const auto bp = detail::g_branch_points(extrema(u));
  const PeriodicField ux = derivative(u);
  PeriodicField g(u.grid());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = u.grid().node(j);
    const double t = bp.xi + wrap_unit(x - bp.xi);
    const double sign = (t > bp.xi && t <= bp.eta) ? 1.0 : -1.0;
    g[j] = ux[j] + sign * detail::g_root(u[j], bp.m);
  }
  return g;
}

struct GIntegrals {
  double half_g2;   // (1/2) integral of g^2
  double half_ug2;  // (1/2) integral of u g^2
};

/// Integrals of g^2 and u g^2 on the trigonometric interpolant of u, by
/// composite Gauss-Legendre quadrature on each branch interval. g jumps at
/// the maximum and has a corner at the minimum, both of which are interval
/// endpoints here. `xi`/`eta` select the extremum representatives.
inline GIntegrals g_integrals(const PeriodicField& u, double xi, double eta, double m) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  if (eta <= xi) eta += 1.0;
  const TrigInterpolant interp(u);
  const double panels_per_unit = std::max(16.0, static_cast<double>(u.size()) / 8.0);

  auto integrate = [&](double a, double b, double sign) {
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) * panels_per_unit)));
    const double width = (b - a) / panels;
    GIntegrals acc{0.0, 0.0};
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * width, hi = lo + width;
      acc.half_g2 += Rule::integrate(
          [&](double x) {
            const auto jet = interp.jet(x);
            const double g = jet.d1 + sign * detail::g_root(jet.value, m);
            return g * g;
          },
          lo, hi);
      acc.half_ug2 += Rule::integrate(
          [&](double x) {
            const auto jet = interp.jet(x);
            const double g = jet.d1 + sign * detail::g_root(jet.value, m);
            return jet.value * g * g;
          },
          lo, hi);
    }
    return acc;
  };

  const GIntegrals plus = integrate(xi, eta, 1.0);
  const GIntegrals minus = integrate(eta, xi + 1.0, -1.0);
  return {0.5 * (plus.half_g2 + minus.half_g2), 0.5 * (plus.half_ug2 + minus.half_ug2)};
}

inline GIntegrals g_integrals(const PeriodicField& u) {
  const auto e = extrema(u);
  return g_integrals(u, e.argmax, e.argmin, e.min_val);
}

/// Both sides of H1[u] - H1[phi] = (1/2)||u - phi(. - xi)||_mu^2 + (12/13)(u(xi + 1/2) - 1).
/// The mu-distance is to the exact peakon, including its unresolved modes.
struct SidePair {
  double lhs;
  double rhs;
  double residual() const noexcept { return std::abs(lhs - rhs); }
};

inline SidePair h1_expansion(const PeriodicField& u, double xi) {
  const Spectrum s = transform(u);
  const double h1 = 0.5 * mu_inner(s, s);
  const double dist = mu_distance_sq(s, Peakon{1.0, xi}, PeakonReference::exact);
  const TrigInterpolant interp(s);
  return {h1 - peakon_constants::energy,
          0.5 * dist + peakon_constants::mean * (interp(xi + 0.5) - peakon_constants::max)};
}

/// max |f| against the bound sqrt(13/12) ||f||_mu.
struct Bound {
  double measured;
  double bound;
  double margin() const noexcept { return bound - measured; }
};

inline double sup_abs(const PeriodicField& f) {
  const auto e = extrema(f);
  return std::max(std::abs(e.max_val), std::abs(e.min_val));
}

inline Bound max_mu_inequality(const PeriodicField& f) {
  return {sup_abs(f), std::sqrt(13.0 / 12.0) * std::sqrt(mu_norm_sq(f))};
}

/// max f^2 <= ((eps+2)/24) integral f_x^2 + ((eps+2)/eps) mu(f)^2.
inline Bound sup_bound_eps(const PeriodicField& f, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("sup_bound_eps: eps must be positive");
  const double s = sup_abs(f);
  const double mu = mean(f);
  return {s * s, (eps + 2.0) / 24.0 * slope_norm_sq(f) + (eps + 2.0) / eps * mu * mu};
}

/// cosh(1/2) / (2 sinh(1/2)), the sharp constant in max |f|^2 <= C ||f||_{H^1}^2.
inline const double sup_h1_constant = std::cosh(0.5) / (2.0 * std::sinh(0.5));

inline Bound sup_h1_inequality(const PeriodicField& f) {
  const double s = sup_abs(f);
  return {s * s, sup_h1_constant * h1_norm_sq(f)};
}

}  // namespace muchlab
