#pragma once

#include <cstdint>
#include <string>

#include "tvdeblur/linsolve.hpp"
#include "tvdeblur/operators.hpp"

namespace tvdeblur {

/// Constants of the convergence analysis, evaluated for one (alpha, delta)
/// configuration:
///   theta   = 1/(2 sin(pi/2n)), exact for the banded differences
///   norm_K  = ||K||_2 (power iteration), norm_T = ||T||_2 (closed form)
///   nu      = smallest eigenvalue of K0*K0 + T*T (beta = 1 stacked operator),
///             probabilistic lower bound or small-n dense value
///   delta_min: the penalty must exceed
///              max{1, (6 + 7 alpha^2) theta^2 ||K||^4 / nu, theta^2 ||K||^4}
///   h_hat   = nu/2 - (3 + 7 alpha^2 / 2) theta^2 ||K||^4 / delta, the
///             per-step descent constant (positive when delta is admissible)
///   gamma_* : the relative-error constants bounding the assembled
///             subgradient by gamma (||u^{k+1}-u^k|| + ||u^k-u^{k-1}||).
struct TheoryConstants {
  double theta = 0.0;
  double norm_T = 0.0;
  double norm_K = 0.0;
  double nu = 0.0;
  double nu_confidence = 1.0;
  std::string nu_source;  // "dense" or "halko"
  double alpha = 0.0;
  double delta = 0.0;
  double delta_min = 0.0;
  double h_hat = 0.0;
  double gamma_v = 0.0;
  double gamma_u = 0.0;
  double gamma_p = 0.0;
  double gamma = 0.0;
  bool admissible = false;

  /// Coefficient of the ||u - x||^2 memory term in the descent function:
  /// 7 alpha^2 theta^2 ||K||^4 / (2 delta).
  double memory_coeff() const;
};

struct NuOptions {
  enum class Source { auto_, halko, dense };
  Source source = Source::auto_;  // auto: dense when n <= 8, else halko
  int probes = 8;
  double base = 2.0;
  std::uint64_t seed = 0;
};

/// Recompute delta_min / h_hat / gammas of `base` for another (alpha, delta)
/// without re-estimating the spectral quantities.
TheoryConstants with_parameters(const TheoryConstants& base, double alpha, double delta);

TheoryConstants compute_theory_constants(const BlurOperator& blur, const DiffOperator& T,
                                         double alpha, double delta, double beta,
                                         const NuOptions& nu = {});

}  // namespace tvdeblur
