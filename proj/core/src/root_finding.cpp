#include "mapl/root_finding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace mapl {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

RootResult brent_root(const std::function<double(double)>& g, double lo, double hi,
                      double g_lo, double g_hi, double value_tol, int max_iterations) {
  RootResult out;
  if (g_lo == 0.0) return {lo, 0.0, 0};
  if (g_hi == 0.0) return {hi, 0.0, 0};
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    std::ostringstream msg;
    msg << "brent_root: interval [" << lo << ", " << hi << "] does not bracket a root";
    throw SolverError(msg.str());
  }

  double a = lo, b = hi, fa = g_lo, fb = g_hi;
  double c = a, fc = fa;
  double d = b - a, e = d;

  for (int it = 0; it < max_iterations; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * kEps * std::fabs(b) + 1e-300;
    const double m = 0.5 * (c - b);
    if (std::fabs(fb) <= value_tol || std::fabs(m) <= tol || fb == 0.0) {
      out.root = b;
      out.residual = fb;
      return out;
    }
    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      // inverse quadratic interpolation, or secant when only two points
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = g(b);
    ++out.evaluations;
  }
  std::ostringstream msg;
  msg << "brent_root: no convergence after " << max_iterations << " iterations, residual " << fb;
  throw SolverError(msg.str());
}

RootResult solve_increasing(const std::function<double(double)>& f, double target,
                            const RootOptions& options) {
  auto g = [&](double x) { return f(x) - target; };
  const double x0 = options.start;
  const double g0 = g(x0);
  int evaluations = 1;
  if (g0 == 0.0) return {x0, 0.0, evaluations};

  // g increasing: root lies above x0 when g0 < 0.
  const double dir = g0 < 0.0 ? 1.0 : -1.0;
  double near = x0, g_near = g0;
  double step = options.initial_step;
  double far = x0 + dir * step;
  double g_far = g(far);
  ++evaluations;
  while ((g_far > 0.0) == (g0 > 0.0) && g_far != 0.0) {
    if (std::fabs(far) > options.bracket_limit) {
      std::ostringstream msg;
      msg << "solve_increasing: bracket expansion exceeded |x| = " << options.bracket_limit
          << " (target " << target << ", last value " << g_far + target << ")";
      throw SolverError(msg.str());
    }
    near = far;
    g_near = g_far;
    step *= 2.0;
    far = x0 + dir * step;
    g_far = g(far);
    ++evaluations;
  }
  double lo = near, hi = far, g_lo = g_near, g_hi = g_far;
  if (lo > hi) {
    std::swap(lo, hi);
    std::swap(g_lo, g_hi);
  }
  RootResult r = brent_root(g, lo, hi, g_lo, g_hi, options.value_tol, options.max_iterations);
  r.evaluations += evaluations;
  return r;
}

MinimizeResult golden_section_minimize(const std::function<double(double)>& f, double lo,
                                       double hi, double x_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int evaluations = 2;
  while (b - a > x_tol) {
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
    ++evaluations;
  }
  return fc <= fd ? MinimizeResult{c, fc, evaluations} : MinimizeResult{d, fd, evaluations};
}

}  // namespace mapl
