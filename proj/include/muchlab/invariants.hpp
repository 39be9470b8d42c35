#pragma once

namespace muchlab {

/// Values of the three conservation laws H0 (mean), H1 (energy) and H2
/// (cubic functional).
struct ConservedTriple {
  double h0 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};

/// Everything the Lyapunov surface F_u depends on: the conserved triple and
/// the squared L2 norm, which is not conserved.
struct FStats {
  double h0 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double l2sq = 0.0;

  ConservedTriple conserved() const noexcept { return {h0, h1, h2}; }
};

}  // namespace muchlab
