#pragma once

// Seeded random band-limited fields. Every draw is a function of
// (seed, stream) only, so trials can run in any order or on any thread.

#include <cmath>
#include <cstdint>
#include <random>

#include "muchlab/field.hpp"
#include "muchlab/peakon.hpp"

namespace muchlab::lab {

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// mean + sum_{k=1}^{K} (a_k cos 2 pi k x + b_k sin 2 pi k x), sampled exactly.
struct FourierSum {
  double mean = 0.0;
  std::vector<double> a;
  std::vector<double> b;

  double operator()(double x) const {
    double v = mean;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double w = two_pi * static_cast<double>(i + 1) * x;
      v += a[i] * std::cos(w) + b[i] * std::sin(w);
    }
    return v;
  }
  PeriodicField field(Grid g) const {
    return PeriodicField::sample(g, [this](double x) { return (*this)(x); });
  }
};

inline FourierSum random_fourier_sum(std::mt19937_64& rng, double mean, int max_mode,
                                     double amplitude) {
  FourierSum s;
  s.mean = mean;
  const int modes = static_cast<int>(std::uniform_int_distribution<int>(1, max_mode)(rng));
  for (int k = 1; k <= modes; ++k) {
    const double scale = amplitude / std::pow(static_cast<double>(k), 1.5);
    s.a.push_back(scale * uniform(rng, -1.0, 1.0));
    s.b.push_back(scale * uniform(rng, -1.0, 1.0));
  }
  return s;
}

/// Strictly positive field: mean in [1, 3] plus up to 8 modes; redrawn until
/// its minimum exceeds 5% of its mean.
inline PeriodicField random_positive_field(Grid g, std::mt19937_64& rng) {
  for (;;) {
    const double mean = uniform(rng, 1.0, 3.0);
    const FourierSum s = random_fourier_sum(rng, mean, 8, uniform(rng, 0.05, 0.6) * mean);
    PeriodicField f = s.field(g);
    if (extrema(f).min_val > 0.05 * mean) return f;
  }
}

/// Sign-indefinite field. Every fourth draw is a scaled, shifted peakon with a
/// small perturbation, which sits close to equality in the sup-norm bounds.
inline PeriodicField random_field(Grid g, std::mt19937_64& rng) {
  const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
  if (kind == 0) {
    const double c = uniform(rng, -2.0, 2.0);
    const double phase = uniform(rng, 0.0, 1.0);
    PeriodicField f = peakon_field(c, phase, g);
    f += random_fourier_sum(rng, 0.0, 4, 0.05 * std::abs(c)).field(g);
    return f;
  }
  return random_fourier_sum(rng, uniform(rng, -2.0, 2.0), 16, uniform(rng, 0.1, 2.0)).field(g);
}

}  // namespace muchlab::lab
