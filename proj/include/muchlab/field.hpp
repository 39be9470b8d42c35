#pragma once

// Periodic grid on the unit circle, Fourier transforms, spectral calculus
// and the quadratic norms used throughout the library.
//
// Coefficient convention: u(x) = sum_k c_k exp(2 pi i k x), k = -n/2 .. n/2-1,
// c_k = (1/n) sum_j u(x_j) exp(-2 pi i k x_j), x_j = j/n.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace muchlab {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

using complex = std::complex<double>;

/// Uniform grid of n nodes x_j = j/n on [0,1). n must be a power of two >= 16.
class Grid {
 public:
  explicit Grid(std::size_t n) : n_(n) {
    if (n < 16 || (n & (n - 1)) != 0)
      throw std::invalid_argument("Grid: size must be a power of two >= 16, got " +
                                  std::to_string(n));
  }

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(n_); }
  double node(std::size_t j) const noexcept {
    return static_cast<double>(j) / static_cast<double>(n_);
  }
  /// Index of the highest non-Nyquist mode, n/2 - 1.
  int max_mode() const noexcept { return static_cast<int>(n_ / 2) - 1; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
};

/// Samples of a real 1-periodic function on a Grid.
class PeriodicField {
 public:
  explicit PeriodicField(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

  PeriodicField(Grid grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw std::invalid_argument("PeriodicField: expected " + std::to_string(grid_.size()) +
                                  " samples, got " + std::to_string(values_.size()));
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("PeriodicField: non-finite sample");
  }

  static PeriodicField constant(Grid grid, double c) {
    return PeriodicField(grid, std::vector<double>(grid.size(), c));
  }

  template <class Fn>
  static PeriodicField sample(Grid grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.node(j));
    return PeriodicField(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const& noexcept { return values_; }
  std::span<double> values() & noexcept { return values_; }
  std::vector<double> values() && noexcept { return std::move(values_); }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  double& operator[](std::size_t j) noexcept { return values_[j]; }

  bool all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

  PeriodicField& operator+=(const PeriodicField& o) {
    require_same_grid(o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
  }
  PeriodicField& operator-=(const PeriodicField& o) {
    require_same_grid(o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    return *this;
  }
  PeriodicField& operator*=(double a) noexcept {
    for (double& v : values_) v *= a;
    return *this;
  }
  PeriodicField& operator+=(double a) noexcept {
    for (double& v : values_) v += a;
    return *this;
  }

  friend PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
  friend PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
  friend PeriodicField operator*(double s, PeriodicField a) { return a *= s; }
  friend PeriodicField operator*(PeriodicField a, double s) { return a *= s; }
  friend PeriodicField operator+(PeriodicField a, double s) { return a += s; }

  void require_same_grid(const PeriodicField& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("PeriodicField: grid mismatch");
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Fourier coefficients of a real field. Only k = 0..n/2 are stored; negative
/// modes follow from conjugate symmetry. Stored index n/2 holds the Nyquist
/// coefficient, which the symmetric index range labels k = -n/2.
class Spectrum {
 public:
  explicit Spectrum(Grid grid) : grid_(grid), modes_(grid.size() / 2 + 1) {}

  Spectrum(Grid grid, std::vector<complex> modes) : grid_(grid), modes_(std::move(modes)) {
    if (modes_.size() != grid_.size() / 2 + 1)
      throw std::invalid_argument("Spectrum: expected n/2+1 stored modes");
  }

  const Grid& grid() const noexcept { return grid_; }

  /// Coefficient c_k for k in [-n/2, n/2-1].
  complex operator[](int k) const {
    const int half = static_cast<int>(grid_.size() / 2);
    if (k < -half || k >= half) throw std::out_of_range("Spectrum: mode index out of range");
    if (k == -half) return modes_[static_cast<std::size_t>(half)];
    return k >= 0 ? modes_[static_cast<std::size_t>(k)]
                  : std::conj(modes_[static_cast<std::size_t>(-k)]);
  }

  /// Stored modes k = 0..n/2 (last entry is the Nyquist mode).
  std::span<const complex> modes() const& noexcept { return modes_; }
  std::span<complex> modes() & noexcept { return modes_; }
  std::vector<complex> modes() && noexcept { return std::move(modes_); }
  complex nyquist() const noexcept { return modes_.back(); }

 private:
  Grid grid_;
  std::vector<complex> modes_;
};

namespace detail {

// FFTW plans are created once per size under a lock; execution through the
// new-array interface is thread-safe.
class FftPlans {
 public:
  static const FftPlans& get(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<FftPlans>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot.reset(new FftPlans(n));
    return *slot;
  }

  ~FftPlans() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(const double* in, complex* out) const {
    fftw_execute_dft_r2c(forward_, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
  }
  // Overwrites `in`.
  void backward(complex* in, double* out) const {
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in), out);
  }

 private:
  explicit FftPlans(std::size_t n) {
    const int size = static_cast<int>(n);
    double* r = fftw_alloc_real(n);
    fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
    forward_ = fftw_plan_dft_r2c_1d(size, r, c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_ = fftw_plan_dft_c2r_1d(size, c, r, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(r);
    fftw_free(c);
    if (!forward_ || !backward_) throw std::runtime_error("FFTW planning failed");
  }

  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace detail

inline Spectrum transform(const PeriodicField& f) {
  const Grid& g = f.grid();
  Spectrum s(g);
  detail::FftPlans::get(g.size()).forward(f.values().data(), s.modes().data());
  const double scale = 1.0 / static_cast<double>(g.size());
  for (complex& c : s.modes()) c *= scale;
  return s;
}

inline PeriodicField inverse_transform(const Spectrum& s) {
  const Grid& g = s.grid();
  std::vector<complex> work(s.modes().begin(), s.modes().end());
  // c2r reads only the real parts of the zero and Nyquist modes.
  std::vector<double> out(g.size());
  detail::FftPlans::get(g.size()).backward(work.data(), out.data());
  return PeriodicField(g, std::move(out));
}

/// Multiplies mode k >= 0 by symbol(k) (the conjugate symbol acts on -k).
/// The Nyquist mode is scaled by nyquist_factor.
template <class Symbol>
Spectrum apply_symbol(Spectrum s, Symbol&& symbol, double nyquist_factor) {
  auto modes = s.modes();
  const std::size_t half = modes.size() - 1;
  for (std::size_t k = 0; k < half; ++k) modes[k] *= symbol(static_cast<int>(k));
  modes[half] *= nyquist_factor;
  return s;
}

/// Spectral derivative of the given order; the Nyquist mode is zeroed.
inline PeriodicField derivative(const PeriodicField& f, int order = 1) {
  if (order < 0) throw std::invalid_argument("derivative: negative order");
  if (order == 0) return f;
  auto sym = [order](int k) { return std::pow(complex(0.0, two_pi * k), order); };
  return inverse_transform(apply_symbol(transform(f), sym, 0.0));
}

/// Mean over the period (trapezoid rule; equals the zero mode).
inline double mean(const PeriodicField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum / static_cast<double>(f.size());
}

/// Integral of f g over the period, trapezoid rule.
inline double l2_inner(const PeriodicField& f, const PeriodicField& g) {
  f.require_same_grid(g);
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) sum += f[j] * g[j];
  return sum / static_cast<double>(f.size());
}

inline double l2_norm_sq(const PeriodicField& f) { return l2_inner(f, f); }

namespace detail {
// sum over k != 0 (excluding Nyquist) of weight(k) * Re(a_k conj(b_k)).
template <class Weight>
double mode_pairing(const Spectrum& a, const Spectrum& b, Weight&& weight) {
  auto ma = a.modes();
  auto mb = b.modes();
  double sum = 0.0;
  for (std::size_t k = 1; k + 1 < ma.size(); ++k)
    sum += 2.0 * weight(static_cast<double>(k)) * (ma[k] * std::conj(mb[k])).real();
  return sum;
}
inline double slope_weight(double k) { return (two_pi * k) * (two_pi * k); }
}  // namespace detail

/// <f,g>_mu = mean(f) mean(g) + integral of f_x g_x.
inline double mu_inner(const Spectrum& f, const Spectrum& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("mu_inner: grid mismatch");
  return f.modes()[0].real() * g.modes()[0].real() +
         detail::mode_pairing(f, g, detail::slope_weight);
}

inline double mu_inner(const PeriodicField& f, const PeriodicField& g) {
  f.require_same_grid(g);
  return mu_inner(transform(f), transform(g));
}

inline double mu_norm_sq(const PeriodicField& f) {
  const Spectrum s = transform(f);
  return mu_inner(s, s);
}

/// Integral of f_x^2 (spectral derivative, Nyquist excluded).
inline double slope_norm_sq(const Spectrum& s) {
  return detail::mode_pairing(s, s, detail::slope_weight);
}

inline double slope_norm_sq(const PeriodicField& f) { return slope_norm_sq(transform(f)); }

/// ||f||^2_{H^1} = integral of f^2 + f_x^2.
inline double h1_norm_sq(const PeriodicField& f) { return l2_norm_sq(f) + slope_norm_sq(f); }

inline double h1_norm_sq(const Spectrum& s) {
  auto m = s.modes();
  double l2 = std::norm(m[0]) + std::norm(m.back());
  for (std::size_t k = 1; k + 1 < m.size(); ++k) l2 += 2.0 * std::norm(m[k]);
  return l2 + slope_norm_sq(s);
}

inline double max_abs(const PeriodicField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

/// f(x - a), exact for band-limited f. The Nyquist mode is read as
/// c cos(pi n x), whose shift sampled on the grid is c cos(pi n a) (-1)^j.
inline PeriodicField shift(const PeriodicField& f, double a) {
  const double n = static_cast<double>(f.size());
  auto sym = [a](int k) { return std::polar(1.0, -two_pi * k * a); };
  return inverse_transform(apply_symbol(transform(f), sym, std::cos(pi * n * a)));
}

/// Evaluates the trigonometric interpolant of a field (and its first two
/// derivatives) at arbitrary points.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const Spectrum& s)
      : n_(static_cast<double>(s.grid().size())), modes_(s.modes().begin(), s.modes().end()) {}
  explicit TrigInterpolant(const PeriodicField& f) : TrigInterpolant(transform(f)) {}

  struct Jet {
    double value;
    double d1;
    double d2;
  };

  Jet jet(double x) const {
    const std::size_t half = modes_.size() - 1;
    const complex z = std::polar(1.0, two_pi * x);
    complex w = z;
    double v = modes_[0].real(), d1 = 0.0, d2 = 0.0;
    for (std::size_t k = 1; k < half; ++k) {
      if (k % 32 == 0) w = std::polar(1.0, two_pi * static_cast<double>(k) * x);
      const double omega = two_pi * static_cast<double>(k);
      const complex t = modes_[k] * w;
      v += 2.0 * t.real();
      d1 -= 2.0 * omega * t.imag();
      d2 -= 2.0 * omega * omega * t.real();
      w *= z;
    }
    const double cn = modes_[half].real();
    if (cn != 0.0) {
      const double omega = pi * n_;
      v += cn * std::cos(omega * x);
      d1 -= cn * omega * std::sin(omega * x);
      d2 -= cn * omega * omega * std::cos(omega * x);
    }
    return {v, d1, d2};
  }

  double operator()(double x) const { return jet(x).value; }

 private:
  double n_;
  std::vector<complex> modes_;
};

/// Wraps x into [0,1).
inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

struct ExtremaRecord {
  double max_val;
  double min_val;
  double argmax;  // in [0,1)
  double argmin;  // in [0,1)
};

namespace detail {

struct Peak {
  double x;
  double value;
};

// Locates the maximum of sign*u near node j: 3-point quadratic vertex (capped
// at half a cell), then Newton polish on the interpolant within one cell,
// falling back to golden-section search. The node is kept unless the
// refinement strictly improves on it.
inline Peak refine_peak(const PeriodicField& f, const TrigInterpolant& interp, std::size_t j,
                        double sign) {
  const std::size_t n = f.size();
  const double h = f.grid().spacing();
  const double x0 = f.grid().node(j);
  const double fm = sign * f[(j + n - 1) % n];
  const double f0 = sign * f[j];
  const double fp = sign * f[(j + 1) % n];
  const double denom = fm - 2.0 * f0 + fp;
  double offset = denom < 0.0 ? 0.5 * (fm - fp) / denom : 0.0;
  offset = std::clamp(offset, -0.5, 0.5);

  Peak best{x0, f0};
  const double noise = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f0));
  auto consider = [&](double x) {
    const double v = sign * interp(x);
    if (v > f0 + noise) best = {x, v};
  };

  double x = x0 + offset * h;
  bool converged = false;
  for (int it = 0; it < 60; ++it) {
    const auto jet = interp.jet(x);
    const double g = sign * jet.d1;
    const double curv = sign * jet.d2;
    if (!(curv < 0.0)) break;
    const double step = -g / curv;
    x += step;
    if (std::abs(x - x0) > h) break;
    if (std::abs(step) <= 1e-15) {
      converged = true;
      break;
    }
  }
  if (converged) {
    consider(x);
  } else {
    constexpr double inv_phi = 0.6180339887498949;
    double a = x0 - h, b = x0 + h;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = sign * interp(c), fd = sign * interp(d);
    while (b - a > 1e-14) {
      if (fc > fd) {
        b = d; d = c; fd = fc;
        c = b - inv_phi * (b - a);
        fc = sign * interp(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + inv_phi * (b - a);
        fd = sign * interp(d);
      }
    }
    consider(0.5 * (a + b));
  }
  return {wrap_unit(best.x), sign * best.value};
}

}  // namespace detail

/// Global maximum and minimum of f with their locations. The discrete
/// extremum (smallest index on ties) is refined on the trigonometric
/// interpolant.
inline ExtremaRecord extrema(const PeriodicField& f) {
  std::size_t jmax = 0, jmin = 0;
  for (std::size_t j = 1; j < f.size(); ++j) {
    if (f[j] > f[jmax]) jmax = j;
    if (f[j] < f[jmin]) jmin = j;
  }
  const TrigInterpolant interp(f);
  const auto hi = detail::refine_peak(f, interp, jmax, 1.0);
  const auto lo = detail::refine_peak(f, interp, jmin, -1.0);
  return {hi.value, lo.value, hi.x, lo.x};
}

}  // namespace muchlab
