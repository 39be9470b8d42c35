#pragma once

// H1 distance from a field to the orbit { c phi(. - xi) : xi in [0,1) }.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "muchlab/field.hpp"
#include "muchlab/peakon.hpp"

namespace muchlab {

/// How the translate is chosen. `argmax` places the crest at the field's
/// maximum (xi = argmax - 1/2); `minimize` searches all translates.
enum class XiMode { argmax, minimize };

inline XiMode parse_xi_mode(std::string_view s) {
  if (s == "argmax") return XiMode::argmax;
  if (s == "minimize") return XiMode::minimize;
  throw std::invalid_argument("unknown xi mode '" + std::string(s) + "'");
}

struct OrbitFit {
  double xi;    // phase of the matching translate c phi(. - xi)
  double dist;  // H1 distance
};

namespace detail {

inline double minimize_phase(const Spectrum& s, double c, PeakonReference ref, double start) {
  const std::size_t n = s.grid().size();
  auto objective = [&](double xi) { return h1_distance_sq(s, Peakon{c, xi}, ref); };
  double best = start, best_val = objective(start);
  for (std::size_t j = 0; j < n; ++j) {
    const double xi = static_cast<double>(j) / static_cast<double>(n);
    const double v = objective(xi);
    if (v < best_val) {
      best_val = v;
      best = xi;
    }
  }
  constexpr double inv_phi = 0.6180339887498949;
  const double h = 1.0 / static_cast<double>(n);
  double a = best - h, b = best + h;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > 1e-13) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    }
  }
  const double refined = 0.5 * (a + b);
  return objective(refined) < best_val ? wrap_unit(refined) : best;
}

}  // namespace detail

inline OrbitFit orbital_distance(const PeriodicField& u, double c, XiMode mode = XiMode::argmax,
                                 PeakonReference ref = PeakonReference::projected) {
  const Spectrum s = transform(u);
  const double xi_argmax = wrap_unit(extrema(u).argmax - 0.5);
  const double d_argmax = h1_distance_sq(s, Peakon{c, xi_argmax}, ref);
  if (mode == XiMode::argmax) return {xi_argmax, std::sqrt(std::max(d_argmax, 0.0))};
  const double xi = detail::minimize_phase(s, c, ref, xi_argmax);
  const double d = std::min(h1_distance_sq(s, Peakon{c, xi}, ref), d_argmax);
  return {d < d_argmax ? xi : xi_argmax, std::sqrt(std::max(d, 0.0))};
}

}  // namespace muchlab
