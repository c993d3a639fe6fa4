#pragma once

#include <span>

namespace tvdeblur {

/// Separable penalty sigma * sum_i |v_i|^q with q in (0,1]; q = 1 is the
/// convex case, smaller q is nonconvex (and coercive for any q > 0).
struct Penalty {
  double q = 1.0;
  double sigma = 1e-3;
};

/// tau*|y|^q + (y-x)^2/2 evaluated at y.
double prox_objective(double q, double tau, double y, double x);

/// Global minimizer of tau*|y|^q + (y-x)^2/2. Odd in x, shrinks toward 0;
/// when the zero and nonzero candidates tie, returns 0. q = 1 is the soft
/// threshold, q = 1/2 uses the trigonometric cubic root, other q solve the
/// stationarity equation by safeguarded Newton.
double prox_scalar(double q, double tau, double x);

/// Entrywise prox with threshold weight tau = pen.sigma / delta.
void prox_edgewise(const Penalty& pen, double delta, std::span<const double> z,
                   std::span<double> out);

}  // namespace tvdeblur
