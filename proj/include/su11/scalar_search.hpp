#ifndef SU11_SCALAR_SEARCH_HPP
#define SU11_SCALAR_SEARCH_HPP

#include <cmath>
#include <limits>

namespace su11 {

struct GridMinimum {
  int index = -1;  // -1 when every sample was non-finite
  double x = 0.0;
  double value = std::numeric_limits<double>::infinity();
  double max_finite = -std::numeric_limits<double>::infinity();
};

/// Samples f at lo + k·(hi − lo)/points, k = 0..points−1. Ties resolve to the
/// smallest abscissa; non-finite samples are skipped.
template <class F>
GridMinimum grid_minimize(F&& f, double lo, double hi, int points) {
  GridMinimum best;
  const double step = (hi - lo) / points;
  for (int k = 0; k < points; ++k) {
    const double x = lo + k * step;
    const double v = f(x);
    if (!std::isfinite(v)) continue;
    if (v > best.max_finite) best.max_finite = v;
    if (v < best.value) {
      best = {k, x, v, best.max_finite};
    }
  }
  return best;
}

/// Golden-section minimization of a unimodal f on [a, b] until the bracket is
/// narrower than `tol`.
template <class F>
double golden_section_minimize(F&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    // <= keeps the left point on ties.
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Minimizes g(t) near t = 0: golden section on [−h, h], re-centred and
/// widened while the minimum sits on a bracket edge (total width capped at
/// 2·limit). Returns 0 unless the step strictly improves on g(0).
template <class F>
double line_minimize(F&& g, double h, double tol, double limit) {
  double lo = -h, hi = h;
  double t = golden_section_minimize(g, lo, hi, tol);
  for (int i = 0; i < 64; ++i) {
    const bool on_edge = t - lo < 2.0 * tol || hi - t < 2.0 * tol;
    const double width = 2.0 * (hi - lo);
    if (!on_edge || width > 2.0 * limit) break;
    lo = t - 0.5 * width;
    hi = t + 0.5 * width;
    t = golden_section_minimize(g, lo, hi, tol);
  }
  return g(t) < g(0.0) ? t : 0.0;
}

}  // namespace su11

#endif  // SU11_SCALAR_SEARCH_HPP
