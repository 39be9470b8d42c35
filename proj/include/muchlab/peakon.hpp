#pragma once

// The periodic peakon phi(x) = (12 x^2 + 23)/26 on [-1/2, 1/2), extended
// 1-periodically, and the traveling waves c phi(x - c t).

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "muchlab/field.hpp"
#include "muchlab/invariants.hpp"

namespace muchlab {

namespace peakon_constants {
inline constexpr double mean = 12.0 / 13.0;
inline constexpr double energy = 6.0 / 13.0;          // H1
inline constexpr double cubic = 9024.0 / 10985.0;     // H2
inline constexpr double l2sq = 721.0 / 845.0;         // integral of phi^2
inline constexpr double slope_sq = 12.0 / 169.0;      // integral of phi_x^2
inline constexpr double max = 1.0;                    // phi(1/2)
inline constexpr double min = 23.0 / 26.0;            // phi(0)
inline constexpr double corner_slope = 6.0 / 13.0;    // one-sided |phi_x| at the crest
}  // namespace peakon_constants

/// Representative of x in [-1/2, 1/2).
inline double wrap_centered(double x) {
  double r = x - std::floor(x + 0.5);
  return r >= 0.5 ? r - 1.0 : r;
}

inline double phi(double x) {
  const double w = wrap_centered(x);
  return (12.0 * w * w + 23.0) / 26.0;
}

struct Slope {
  double value;
  bool corner;  // x sits on the crest; value is the right-hand limit
};

inline Slope phi_x(double x) {
  const double w = wrap_centered(x);
  return {12.0 * w / 13.0, w == -0.5};
}

enum class Side { left, right };

/// One-sided limit of phi_x at x (the two limits differ only at the crest).
inline double phi_x_limit(double x, Side side) {
  const Slope s = phi_x(x);
  if (s.corner && side == Side::left) return peakon_constants::corner_slope;
  return s.value;
}

/// Fourier coefficient of phi: 12/13 at k = 0, 3 (-1)^k / (13 pi^2 k^2) otherwise.
inline double peakon_coefficient(int k) {
  if (k == 0) return peakon_constants::mean;
  const double kk = static_cast<double>(k) * static_cast<double>(k);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return 3.0 * sign / (13.0 * pi * pi * kk);
}

/// Spectrum of c phi(x - phase) truncated to |k| < n/2 (Nyquist mode zero).
inline Spectrum peakon_spectrum(Grid grid, double c, double phase) {
  Spectrum s(grid);
  auto modes = s.modes();
  for (std::size_t k = 0; k + 1 < modes.size(); ++k) {
    const int kk = static_cast<int>(k);
    modes[k] = c * peakon_coefficient(kk) * std::polar(1.0, -two_pi * kk * phase);
  }
  return s;
}

/// A peakon c phi(x - phase).
struct Peakon {
  double speed = 1.0;
  double phase = 0.0;

  double operator()(double x) const { return speed * phi(x - phase); }

  /// L2 projection onto the grid's resolved modes.
  PeriodicField field(Grid grid) const {
    return inverse_transform(peakon_spectrum(grid, speed, phase));
  }
};

inline PeriodicField peakon_field(double c, double phase, Grid grid) {
  return Peakon{c, phase}.field(grid);
}

/// H0, H1, H2 of c phi (homogeneous of degrees 1, 2, 3 in c).
inline ConservedTriple exact_invariants(double c) {
  return {c * peakon_constants::mean, c * c * peakon_constants::energy,
          c * c * c * peakon_constants::cubic};
}

inline FStats exact_stats(double c) {
  const ConservedTriple t = exact_invariants(c);
  return {t.h0, t.h1, t.h2, c * c * peakon_constants::l2sq};
}

/// Squared norms of the part of phi not resolved on the grid (|k| >= n/2).
struct PeakonTail {
  double l2sq;
  double slope_sq;
  double h1sq() const noexcept { return l2sq + slope_sq; }
};

inline PeakonTail peakon_tail(Grid grid) {
  double l2 = 0.0, slope = 0.0;
  for (int k = grid.max_mode(); k >= 1; --k) {
    const double a = peakon_coefficient(k);
    l2 += 2.0 * a * a;
    slope += 2.0 * (two_pi * k) * (two_pi * k) * a * a;
  }
  l2 += peakon_constants::mean * peakon_constants::mean;
  return {peakon_constants::l2sq - l2, peakon_constants::slope_sq - slope};
}

/// Which peakon a grid field is compared against: its projection onto the
/// grid's modes, or the exact peakon (adds the unresolved tail's norm).
enum class PeakonReference { projected, exact };

namespace detail {
template <class Weight>
double peakon_gap(const Spectrum& u, const Peakon& p, Weight&& weight) {
  auto m = u.modes();
  const double d0 = m[0].real() - p.speed * peakon_constants::mean;
  double sum = weight(0.0) * d0 * d0;
  for (std::size_t k = 1; k + 1 < m.size(); ++k) {
    const int kk = static_cast<int>(k);
    const complex ref = p.speed * peakon_coefficient(kk) * std::polar(1.0, -two_pi * kk * p.phase);
    sum += 2.0 * weight(static_cast<double>(k)) * std::norm(m[k] - ref);
  }
  return sum;
}
}  // namespace detail

/// ||u - p||_mu^2 for a grid field u.
inline double mu_distance_sq(const Spectrum& u, const Peakon& p, PeakonReference ref) {
  double d = detail::peakon_gap(u, p, [](double k) { return k == 0.0 ? 1.0 : (two_pi * k) * (two_pi * k); });
  if (ref == PeakonReference::exact) d += p.speed * p.speed * peakon_tail(u.grid()).slope_sq;
  return d;
}

/// ||u - p||_{H^1}^2 for a grid field u.
inline double h1_distance_sq(const Spectrum& u, const Peakon& p, PeakonReference ref) {
  double d = detail::peakon_gap(u, p, [](double k) { return 1.0 + (two_pi * k) * (two_pi * k); });
  d += std::norm(u.nyquist());
  if (ref == PeakonReference::exact) d += p.speed * p.speed * peakon_tail(u.grid()).h1sq();
  return d;
}

/// Action of the distribution phi_xx = 12/13 - (12/13) delta(x - 1/2) on a
/// test field; equals the integral of phi * test_xx by parts.
inline double phi_xx_pairing(const PeriodicField& test) {
  const TrigInterpolant interp(test);
  return peakon_constants::mean * (mean(test) - interp(0.5));
}

/// Peakon constants measured by composite Simpson quadrature of the closed
/// form over the smooth cell [-1/2, 1/2], plus extrema over the panel nodes.
struct PeakonQuadrature {
  double h0;
  double h1;
  double h2;
  double l2sq;
  double max;
  double min;
  double slope_left;   // lim x -> 1/2 from below
  double slope_right;  // lim x -> -1/2 from above
  double max_slope;    // sup of phi_x over the nodes
};

inline PeakonQuadrature peakon_quadrature(std::size_t panels) {
  if (panels < 2 || panels % 2 != 0)
    throw std::invalid_argument("peakon_quadrature: panel count must be even and >= 2");
  const double h = 1.0 / static_cast<double>(panels);
  double s_phi = 0.0, s_phi2 = 0.0, s_dphi2 = 0.0, s_phidphi2 = 0.0;
  double hi = -HUGE_VAL, lo = HUGE_VAL, max_slope = -HUGE_VAL;
  for (std::size_t j = 0; j <= panels; ++j) {
    const double x = -0.5 + static_cast<double>(j) * h;
    const double w = (j == 0 || j == panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    // Closed form on the cell itself, so both endpoints use their one-sided values.
    const double p = (12.0 * x * x + 23.0) / 26.0;
    const double dp = 12.0 * x / 13.0;
    s_phi += w * p;
    s_phi2 += w * p * p;
    s_dphi2 += w * dp * dp;
    s_phidphi2 += w * p * dp * dp;
    hi = std::max(hi, phi(x));
    lo = std::min(lo, phi(x));
    max_slope = std::max(max_slope, dp);
  }
  const double scale = h / 3.0;
  const double h0 = scale * s_phi;
  const double l2sq = scale * s_phi2;
  const double slope_sq = scale * s_dphi2;
  const double cubic_tail = scale * s_phidphi2;
  return {h0,
          0.5 * (h0 * h0 + slope_sq),
          h0 * l2sq + 0.5 * cubic_tail,
          l2sq,
          hi,
          lo,
          phi_x_limit(0.5, Side::left),
          phi_x_limit(-0.5, Side::right),
          max_slope};
}

}  // namespace muchlab
