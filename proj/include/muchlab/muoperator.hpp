#pragma once

// Inertia operator A = mu - d^2/dx^2. Diagonal in Fourier space with symbol
// 1 on the mean and (2 pi k)^2 elsewhere, so it is inverted mode by mode.

#include "muchlab/field.hpp"
#include "muchlab/peakon.hpp"

namespace muchlab {

inline double mu_symbol(int k) {
  return k == 0 ? 1.0 : (two_pi * k) * (two_pi * k);
}

inline double nyquist_mu_symbol(const Grid& g) {
  const double w = pi * static_cast<double>(g.size());
  return w * w;
}

inline Spectrum apply_A(Spectrum s) {
  const double nyq = nyquist_mu_symbol(s.grid());
  return apply_symbol(std::move(s), [](int k) { return complex(mu_symbol(k)); }, nyq);
}

inline Spectrum invert_A(Spectrum s) {
  const double nyq = 1.0 / nyquist_mu_symbol(s.grid());
  return apply_symbol(std::move(s), [](int k) { return complex(1.0 / mu_symbol(k)); }, nyq);
}

/// m = A u = mu(u) - u_xx.
inline PeriodicField apply_A(const PeriodicField& u) {
  return inverse_transform(apply_A(transform(u)));
}

inline PeriodicField invert_A(const PeriodicField& g) {
  return inverse_transform(invert_A(transform(g)));
}

/// (13/12) <phi(. - x + 1/2), f>_mu. The peakon is the Green's function of A
/// scaled by 12/13, so this reproduces f(x). The kernel enters through its
/// exact Fourier coefficients; for f band-limited below the Nyquist mode the
/// identity is exact.
inline double kernel_reproduce(const PeriodicField& f, double x) {
  const Spectrum kernel = peakon_spectrum(f.grid(), 1.0, x - 0.5);
  return (13.0 / 12.0) * mu_inner(kernel, transform(f));
}

}  // namespace muchlab
