#pragma once

// Method-of-lines integration of the conservative form
//
//   u_t + u u_x + A^{-1} d/dx (2 mu(u) u + u_x^2 / 2) = 0,
//
// Fourier pseudospectral in space, classical RK4 in time, with optional 2/3
// dealiasing and an exponential filter applied after every step.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "muchlab/field.hpp"
#include "muchlab/functionals.hpp"
#include "muchlab/muoperator.hpp"
#include "muchlab/orbit.hpp"

namespace muchlab {

struct SolverConfig {
  std::size_t n = 256;
  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = true;
  double filter_alpha = 0.0;
  int filter_order = 8;
  std::size_t record_every = 1;
  double cfl = 0.5;
  /// Run stops with RunStatus::breaking once max|u_x| exceeds this multiple
  /// of the initial max|u_x|.
  double breaking_factor = 50.0;
  /// When set, every record also stores the H1 distance to the orbit of c phi.
  std::optional<double> orbit_speed;
  XiMode xi_mode = XiMode::argmax;
  bool keep_snapshots = false;

  void validate() const {
    (void)Grid{n};
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("SolverConfig: dt must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
      throw std::invalid_argument("SolverConfig: t_end must be >= 0");
    if (!(filter_alpha >= 0.0)) throw std::invalid_argument("SolverConfig: filter alpha must be >= 0");
    if (filter_order < 4 || filter_order % 2 != 0)
      throw std::invalid_argument("SolverConfig: filter order must be an even integer >= 4");
    if (record_every == 0) throw std::invalid_argument("SolverConfig: record_every must be >= 1");
    if (!(cfl > 0.0 && cfl <= 0.5)) throw std::invalid_argument("SolverConfig: cfl must lie in (0, 0.5]");
    if (!(breaking_factor > 1.0)) throw std::invalid_argument("SolverConfig: breaking factor must be > 1");
  }

  /// Checks the grid and the advective bound dt <= cfl h / max|u0|.
  void validate_for(const PeriodicField& u0) const {
    validate();
    if (u0.size() != n)
      throw std::invalid_argument("SolverConfig: initial data has " + std::to_string(u0.size()) +
                                  " samples but n = " + std::to_string(n));
    const double umax = max_abs(u0);
    if (umax > 0.0 && dt > cfl / (static_cast<double>(n) * umax)) {
      std::ostringstream os;
      os << "SolverConfig: dt = " << dt << " violates the CFL bound " << cfl / (n * umax)
         << " (cfl " << cfl << ", max|u0| " << umax << ")";
      throw std::invalid_argument(os.str());
    }
  }
};

class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

namespace detail {

/// Largest wavenumber kept by the 2/3 rule: 3K < n.
inline std::size_t dealias_cutoff(std::size_t n) { return (n - 1) / 3; }

inline void truncate_modes(Spectrum& s, std::size_t kmax) {
  auto m = s.modes();
  for (std::size_t k = kmax + 1; k < m.size(); ++k) m[k] = 0.0;
}

/// Zeroes the Nyquist mode and, when dealiasing, every mode above the 2/3 cutoff.
inline void project_resolved(Spectrum& s, bool dealias) {
  s.modes().back() = 0.0;
  if (dealias) truncate_modes(s, dealias_cutoff(s.grid().size()));
}

inline Spectrum rhs_spectral(const Spectrum& u_hat, bool dealias) {
  const Grid g = u_hat.grid();
  Spectrum v = u_hat;
  project_resolved(v, dealias);
  const PeriodicField u = inverse_transform(v);
  const PeriodicField ux =
      inverse_transform(apply_symbol(v, [](int k) { return complex(0.0, two_pi * k); }, 0.0));
  const double mu = v.modes()[0].real();

  std::vector<double> advect(g.size()), flux(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    advect[j] = u[j] * ux[j];
    flux[j] = 2.0 * mu * u[j] + 0.5 * ux[j] * ux[j];
  }
  const Spectrum p = transform(PeriodicField(g, std::move(advect)));
  const Spectrum q = transform(PeriodicField(g, std::move(flux)));

  Spectrum out(g);
  auto o = out.modes();
  auto pm = p.modes();
  auto qm = q.modes();
  // Mode 0 stays zero: the update has zero mean, so H0 is invariant.
  for (std::size_t k = 1; k + 1 < o.size(); ++k)
    o[k] = -pm[k] - complex(0.0, 1.0) * qm[k] / (two_pi * static_cast<double>(k));
  project_resolved(out, dealias);
  return out;
}

inline void axpy(Spectrum& y, double a, const Spectrum& x) {
  auto ym = y.modes();
  auto xm = x.modes();
  for (std::size_t k = 0; k < ym.size(); ++k) ym[k] += a * xm[k];
}

inline void apply_filter(Spectrum& s, double alpha, int order) {
  if (alpha <= 0.0) return;
  auto m = s.modes();
  const double half = static_cast<double>(s.grid().size() / 2);
  for (std::size_t k = 1; k + 1 < m.size(); ++k)
    m[k] *= std::exp(-alpha * std::pow(static_cast<double>(k) / half, order));
  m.back() = 0.0;
}

inline bool finite(const Spectrum& s) {
  for (const complex& c : s.modes())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

// One RK4 step plus filter, entirely in coefficient space.
inline Spectrum rk4_stages(const Spectrum& u, double dt, bool dealias, double alpha, int order) {
  const Spectrum k1 = rhs_spectral(u, dealias);
  Spectrum tmp = u;
  axpy(tmp, 0.5 * dt, k1);
  const Spectrum k2 = rhs_spectral(tmp, dealias);
  tmp = u;
  axpy(tmp, 0.5 * dt, k2);
  const Spectrum k3 = rhs_spectral(tmp, dealias);
  tmp = u;
  axpy(tmp, dt, k3);
  const Spectrum k4 = rhs_spectral(tmp, dealias);

  Spectrum next = u;
  axpy(next, dt / 6.0, k1);
  axpy(next, dt / 3.0, k2);
  axpy(next, dt / 3.0, k3);
  axpy(next, dt / 6.0, k4);
  apply_filter(next, alpha, order);
  return next;
}

// Empty when any stage or the result leaves the finite range.
inline std::optional<Spectrum> rk4_step(const Spectrum& u, double dt, bool dealias, double alpha, int order) {
  try {
    Spectrum next = rk4_stages(u, dt, dealias, alpha, order);
    if (!finite(next)) return std::nullopt;
    return next;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Right-hand side of u_t = -u u_x - A^{-1} d/dx (2 mu(u) u + u_x^2 / 2).
inline PeriodicField rhs(const PeriodicField& u, bool dealias = true) {
  return inverse_transform(detail::rhs_spectral(transform(u), dealias));
}

/// One RK4 step of size dt (negative dt integrates backward) followed by the
/// exponential filter c_k -> c_k exp(-alpha (|k| / (n/2))^p).
inline PeriodicField step(const PeriodicField& u, double dt, const SolverConfig& cfg) {
  const auto next = detail::rk4_step(transform(u), dt, cfg.dealias, cfg.filter_alpha, cfg.filter_order);
  if (!next) throw IntegrationFailure("non-finite state in RK4 step", dt);
  return inverse_transform(*next);
}

enum class RunStatus { completed, breaking, failed };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::breaking: return "breaking";
    case RunStatus::failed: return "failed";
  }
  return "unknown";
}

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<ExtremaRecord> extrema;
  std::vector<ConservedTriple> conserved;
  std::vector<double> dist_to_orbit;  // filled when SolverConfig::orbit_speed is set
  std::vector<double> orbit_xi;
  std::vector<PeriodicField> snapshots;  // filled when keep_snapshots
  RunStatus status = RunStatus::completed;
  std::string message;
  std::size_t steps = 0;
  std::optional<PeriodicField> final_state;  // last finite state

  std::size_t size() const noexcept { return times.size(); }
};

/// Integrates from t = 0 to cfg.t_end. The initial data is first projected
/// onto the resolved modes (Nyquist removed, 2/3 cutoff when dealiasing).
inline TrajectoryRecord evolve(const PeriodicField& u0, const SolverConfig& cfg) {
  cfg.validate_for(u0);
  Spectrum state = transform(u0);
  detail::project_resolved(state, cfg.dealias);

  auto slope_max = [](const Spectrum& s) {
    return max_abs(inverse_transform(
        apply_symbol(s, [](int k) { return complex(0.0, two_pi * k); }, 0.0)));
  };
  const double slope0 = slope_max(state);

  TrajectoryRecord rec;
  auto record = [&](double t, const PeriodicField& u) {
    rec.times.push_back(t);
    rec.extrema.push_back(extrema(u));
    rec.conserved.push_back(conserved(u));
    if (cfg.orbit_speed) {
      const OrbitFit fit = orbital_distance(u, *cfg.orbit_speed, cfg.xi_mode);
      rec.dist_to_orbit.push_back(fit.dist);
      rec.orbit_xi.push_back(fit.xi);
    }
    if (cfg.keep_snapshots) rec.snapshots.push_back(u);
  };

  PeriodicField current = inverse_transform(state);
  record(0.0, current);
  rec.final_state = current;

  const auto nsteps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  for (std::size_t i = 1; i <= nsteps; ++i) {
    const double t_prev = static_cast<double>(i - 1) * cfg.dt;
    const double t = (i == nsteps) ? cfg.t_end : static_cast<double>(i) * cfg.dt;
    auto next = detail::rk4_step(state, t - t_prev, cfg.dealias, cfg.filter_alpha, cfg.filter_order);
    if (!next) {
      rec.status = RunStatus::failed;
      std::ostringstream os;
      os << "non-finite state at t = " << t << "; last good state at t = " << t_prev;
      rec.message = os.str();
      return rec;
    }
    state = std::move(*next);
    rec.steps = i;
    current = inverse_transform(state);
    rec.final_state = current;

    const double slope = slope_max(state);
    if (slope0 > 0.0 && slope > cfg.breaking_factor * slope0) {
      record(t, current);
      rec.status = RunStatus::breaking;
      std::ostringstream os;
      os << "wave breaking suspected at t = " << t << ": max|u_x| = " << slope << " exceeds "
         << cfg.breaking_factor << " x initial " << slope0;
      rec.message = os.str();
      return rec;
    }
    if (i % cfg.record_every == 0 || i == nsteps) record(t, current);
  }
  return rec;
}

/// L2 norm of (m_next - m_prev)/dt + u m_x + 2 u_x m, m = A u, evaluated at
/// the midpoint state. Small for resolved smooth solutions.
inline double m_form_residual(const PeriodicField& u_prev, const PeriodicField& u_next, double dt) {
  u_prev.require_same_grid(u_next);
  const PeriodicField mid = 0.5 * (u_prev + u_next);
  const PeriodicField m_prev = apply_A(u_prev);
  const PeriodicField m_next = apply_A(u_next);
  const PeriodicField m = apply_A(mid);
  const PeriodicField mx = derivative(m);
  const PeriodicField ux = derivative(mid);
  double sum = 0.0;
  for (std::size_t j = 0; j < mid.size(); ++j) {
    const double r = (m_next[j] - m_prev[j]) / dt + mid[j] * mx[j] + 2.0 * ux[j] * m[j];
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(mid.size()));
}

}  // namespace muchlab
