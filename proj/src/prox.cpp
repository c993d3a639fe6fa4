#include "tvdeblur/prox.hpp"

#include <cmath>
#include <stdexcept>

#include "tvdeblur/errors.hpp"
#include "tvdeblur/kernels.hpp"

namespace tvdeblur {

namespace {

void validate_q_tau(double q, double tau) {
  if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("prox: q must be in (0,1]");
  if (!(tau > 0.0)) throw std::invalid_argument("prox: tau must be > 0");
}

// Largest root of s^3 - x*s + tau/2 = 0 for x > 0 when three real roots
// exist; the square root of the candidate nonzero minimizer for q = 1/2.
// Returns a negative value when no real positive root exists.
double half_prox_root(double tau, double x) {
  const double disc = 4.0 * x * x * x - 27.0 * (tau * tau) / 4.0;
  if (disc <= 0.0) return -1.0;
  const double m = 2.0 * std::sqrt(x / 3.0);
  // cos(3t) = -(3 tau) / (4 x) * sqrt(3/x), in (-1, 0) here
  double c3 = -(3.0 * tau) / (4.0 * x) * std::sqrt(3.0 / x);
  if (c3 < -1.0) c3 = -1.0;
  if (c3 > 1.0) c3 = 1.0;
  return m * std::cos(std::acos(c3) / 3.0);
}

// Larger root of psi(y) = tau*q*y^(q-1) + y - x on (0, inf) for 0 < q < 1.
// psi is convex with a unique minimum at ystar; no root when psi(ystar) >= 0.
double generic_nonzero_candidate(double q, double tau, double x) {
  const double ystar = std::pow(tau * q * (1.0 - q), 1.0 / (2.0 - q));
  const auto psi = [&](double y) { return tau * q * std::pow(y, q - 1.0) + y - x; };
  if (psi(ystar) >= 0.0) return -1.0;

  double lo = ystar;
  double hi = std::max(x, ystar);
  while (psi(hi) < 0.0) hi *= 2.0;

  // Newton from the right with bisection safeguard; psi convex keeps the
  // iterates above the root.
  double y = hi;
  for (int it = 0; it < 200; ++it) {
    const double f = psi(y);
    if (f < 0.0) lo = y; else hi = y;
    const double df = tau * q * (q - 1.0) * std::pow(y, q - 2.0) + 1.0;
    double ynext = df > 0.0 ? y - f / df : 0.5 * (lo + hi);
    if (!(ynext > lo) || !(ynext < hi)) ynext = 0.5 * (lo + hi);
    if (std::fabs(ynext - y) <= 1e-15 * std::max(1.0, y)) {
      y = ynext;
      break;
    }
    y = ynext;
  }
  return y;
}

}  // namespace

double prox_objective(double q, double tau, double y, double x) {
  const double d = y - x;
  return tau * std::pow(std::fabs(y), q) + 0.5 * d * d;
}

double prox_scalar(double q, double tau, double x) {
  validate_q_tau(q, tau);
  if (x == 0.0) return 0.0;
  const double ax = std::fabs(x);
  const double sgn = x > 0.0 ? 1.0 : -1.0;

  if (q == 1.0) {
    const double m = ax - tau;
    return m > 0.0 ? sgn * m : 0.0;
  }

  double cand;
  if (q == 0.5) {
    const double s = half_prox_root(tau, ax);
    cand = s > 0.0 ? s * s : -1.0;
  } else {
    cand = generic_nonzero_candidate(q, tau, ax);
  }
  if (cand <= 0.0) return 0.0;

  // tie-break toward 0 (the zero branch wins on equality)
  const double obj_zero = 0.5 * ax * ax;
  const double obj_cand = prox_objective(q, tau, cand, ax);
  return obj_cand < obj_zero ? sgn * cand : 0.0;
}

void prox_edgewise(const Penalty& pen, double delta, std::span<const double> z,
                   std::span<double> out) {
  if (z.size() != out.size()) throw ShapeError("prox_edgewise: size mismatch");
  if (!(delta > 0.0)) throw std::invalid_argument("prox_edgewise: delta must be > 0");
  const double tau = pen.sigma / delta;
  validate_q_tau(pen.q, tau);
  if (pen.q == 1.0) {
    kernels::soft_threshold(z, tau, out);
    return;
  }
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = prox_scalar(pen.q, tau, z[i]);
}

}  // namespace tvdeblur
