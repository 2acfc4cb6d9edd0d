#pragma once

#include <functional>

namespace binfit {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;
};

void check(const QuadratureSpec& spec);

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 7/15-point Gauss-Kronrod integration over [a, b].
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureSpec& spec = {});

// ∫_0^∞ x^k f(x) dx. The half line is split at `split` (ideally near the
// median of f); above it the integral runs in s = ln(x / split), with a
// power-law extrapolation past the last node. A result with converged ==
// false signals a divergent (heavy-tailed) moment or one that cannot be
// resolved to tolerance.
QuadratureResult moment_by_quadrature(const Integrand& density, int k,
                                      const QuadratureSpec& spec = {},
                                      double split = 1.0);

// Same, from ln f(x); reaches tails where f itself underflows.
QuadratureResult moment_by_quadrature_log(const Integrand& log_density, int k,
                                          const QuadratureSpec& spec = {},
                                          double split = 1.0);

}  // namespace binfit
