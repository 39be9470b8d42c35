#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "muchlab/muoperator.hpp"

using namespace muchlab;

namespace {

PeriodicField random_band(Grid g, std::mt19937_64& rng, int modes, double mean_value) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> a(modes + 1), b(modes + 1);
  for (auto& v : a) v = d(rng);
  for (auto& v : b) v = d(rng);
  return PeriodicField::sample(g, [&](double x) {
    double s = mean_value;
    for (int k = 1; k <= modes; ++k)
      s += (a[k] * std::cos(two_pi * k * x) + b[k] * std::sin(two_pi * k * x)) / k;
    return s;
  });
}

}  // namespace

TEST(ApplyA, Examples) {
  const Grid g(64);
  const PeriodicField c = apply_A(PeriodicField::constant(g, 2.5));
  const PeriodicField s = apply_A(PeriodicField::sample(g, [](double x) { return std::sin(two_pi * x); }));
  const PeriodicField u = apply_A(PeriodicField::sample(g, [](double x) { return 2.0 + std::cos(two_pi * x); }));
  const double w2 = two_pi * two_pi;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    EXPECT_NEAR(c[j], 2.5, 1e-14);
    EXPECT_NEAR(s[j], w2 * std::sin(two_pi * x), 1e-11);
    EXPECT_NEAR(u[j], 2.0 + w2 * std::cos(two_pi * x), 1e-11);
  }
}

TEST(InvertA, Examples) {
  const Grid g(64);
  const PeriodicField c = invert_A(PeriodicField::constant(g, -1.5));
  const PeriodicField s = invert_A(PeriodicField::sample(g, [](double x) { return std::sin(two_pi * x); }));
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_NEAR(c[j], -1.5, 1e-14);
    EXPECT_NEAR(s[j], std::sin(two_pi * g.node(j)) / (two_pi * two_pi), 1e-15);
  }
}

TEST(InvertA, BothCompositionsAreIdentity) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {32u, 256u}) {
    const Grid g(n);
    for (int t = 0; t < 10; ++t) {
      const PeriodicField u = random_band(g, rng, static_cast<int>(n / 2 - 1), 1.0);
      const PeriodicField a = apply_A(invert_A(u));
      const PeriodicField b = invert_A(apply_A(u));
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_NEAR(a[j], u[j], 1e-9);
        EXPECT_NEAR(b[j], u[j], 1e-9);
      }
    }
  }
}

TEST(ApplyA, PreservesMean) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const PeriodicField u = random_band(Grid(128), rng, 30, 0.7);
    EXPECT_NEAR(mean(apply_A(u)), mean(u), 1e-14 * std::max(1.0, max_abs(apply_A(u))));
  }
}

TEST(InvertA, SmoothsMeanZeroFields) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const PeriodicField g = random_band(Grid(128), rng, 30, 0.0);
    EXPECT_LE(h1_norm_sq(invert_A(g)), h1_norm_sq(g));
    EXPECT_LT(std::abs(mean(invert_A(g))), 1e-15);
  }
}

TEST(ApplyA, EnergyIdentity) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 10; ++t) {
    const PeriodicField u = random_band(Grid(128), rng, 30, 1.3);
    EXPECT_NEAR(0.5 * l2_inner(apply_A(u), u), 0.5 * mu_norm_sq(u), 1e-10);
  }
}

TEST(KernelReproduce, Examples) {
  const Grid g(256);
  const PeriodicField one = PeriodicField::constant(g, 1.0);
  for (double x : {0.0, 0.3, 0.77}) EXPECT_NEAR(kernel_reproduce(one, x), 1.0, 1e-14);
  const PeriodicField u = PeriodicField::sample(g, [](double x) { return 2.0 + std::sin(two_pi * x); });
  EXPECT_NEAR(kernel_reproduce(u, 0.0), 2.0, 1e-13);
  EXPECT_NEAR(kernel_reproduce(u, 0.25), 3.0, 1e-13);
}

TEST(KernelReproduce, PeakonCrestConvergesFirstOrder) {
  double prev = 1.0;
  for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
    const Grid g(n);
    const double err = std::abs(kernel_reproduce(peakon_field(1.0, 0.0, g), 0.5) - 1.0);
    EXPECT_LT(err, 1.0 / static_cast<double>(n));
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(KernelReproduce, ExactForBandLimitedFields) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  const Grid g(64);
  for (int t = 0; t < 20; ++t) {
    const PeriodicField f = random_band(g, rng, 20, 0.5);
    const TrigInterpolant interp(f);
    const double x = d(rng);
    EXPECT_NEAR(kernel_reproduce(f, x), interp(x), 1e-12);
  }
}

TEST(MuSymbol, Values) {
  EXPECT_EQ(mu_symbol(0), 1.0);
  EXPECT_NEAR(mu_symbol(3), 36.0 * pi * pi, 1e-12);
  EXPECT_EQ(mu_symbol(-3), mu_symbol(3));
}
