#pragma once

// Tabulation of F over a rectangle of (M, m), restricted to M >= m > 0.

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "muchlab/functionals.hpp"

namespace muchlab::lab {

struct FSurfaceSpec {
  double M_lo = 0.9, M_hi = 1.1;
  double m_lo = 0.8, m_hi = 1.0;
  std::size_t points = 41;  // per axis, endpoints included
};

struct FSurfaceRow {
  double M;
  double m;
  double F;
  double gradnorm;
};

struct FSurface {
  std::vector<FSurfaceRow> rows;
  FSurfaceRow argmax;
};

inline FSurface tabulate_f(const FStats& stats, const FSurfaceSpec& spec) {
  if (spec.points < 1) throw std::invalid_argument("fsurface: need at least one point per axis");
  if (!(spec.M_hi >= spec.M_lo) || !(spec.m_hi >= spec.m_lo))
    throw std::invalid_argument("fsurface: ranges must satisfy lo <= hi");
  auto axis = [&](double lo, double hi, std::size_t i) {
    return spec.points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(spec.points - 1);
  };
  FSurface out;
  for (std::size_t i = 0; i < spec.points; ++i) {
    const double M = axis(spec.M_lo, spec.M_hi, i);
    for (std::size_t j = 0; j < spec.points; ++j) {
      const FPoint p{M, axis(spec.m_lo, spec.m_hi, j)};
      if (!(p.M >= p.m && p.m > 0.0)) continue;
      const FGradient g = f_grad(stats, p);
      out.rows.push_back({p.M, p.m, f_eval(stats, p), std::hypot(g.dM, g.dm)});
      if (out.rows.size() == 1 || out.rows.back().F > out.argmax.F) out.argmax = out.rows.back();
    }
  }
  if (out.rows.empty())
    throw std::invalid_argument("fsurface: the rectangle does not meet the domain M >= m > 0");
  return out;
}

inline void write_fsurface_csv(std::ostream& os, const FSurface& s) {
  const auto prec = os.precision(17);
  os << "M,m,F,gradnorm\n";
  for (const FSurfaceRow& r : s.rows) os << r.M << ',' << r.m << ',' << r.F << ',' << r.gradnorm << '\n';
  os.precision(prec);
}

}  // namespace muchlab::lab
