#pragma once

// Derivative-free one-dimensional solvers: bracketed Brent root finding for
// monotone functions and golden-section minimisation.

#include <functional>
#include <stdexcept>
#include <string>

namespace mapl {

/// Raised when a solver cannot bracket or converge. The message carries the
/// diagnostic (last bracket, residual).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  // f(root) - target
  int evaluations = 0;
};

struct RootOptions {
  double start = 0.0;          // expansion origin
  double initial_step = 1.0;   // first bracket step; doubles every expansion
  double bracket_limit = 1e6;  // |x| beyond which expansion gives up
  double value_tol = 1e-13;    // stop once |f(x) - target| <= value_tol
  int max_iterations = 200;
};

/// Solves f(x) = target for a strictly increasing f. The bracket is grown
/// geometrically from options.start in the direction indicated by the sign
/// of f(start) - target, then refined by Brent's method.
RootResult solve_increasing(const std::function<double(double)>& f, double target,
                            const RootOptions& options = {});

/// Brent's method on an already bracketing interval (g(lo), g(hi) of
/// opposite sign, or one of them zero).
RootResult brent_root(const std::function<double(double)>& g, double lo, double hi,
                      double g_lo, double g_hi, double value_tol, int max_iterations);

struct MinimizeResult {
  double argmin = 0.0;
  double minimum = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a minimum of f on [lo, hi], stopping once the
/// bracket is narrower than x_tol.
MinimizeResult golden_section_minimize(const std::function<double(double)>& f, double lo,
                                       double hi, double x_tol);

}  // namespace mapl
