#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tvdeblur/operators.hpp"

namespace tvdeblur {

struct SolveReport {
  int iterations = 0;
  double final_residual_norm = 0.0;
  bool converged = false;
};

/// A = K*K + delta T*T on R^{2n^2}; symmetric, and positive definite whenever
/// the stacked (T; K0) operator has trivial null space.
class NormalOperator {
 public:
  NormalOperator(StackedOperator K, DiffOperator T, double delta);

  std::size_t size() const { return K_.size(); }
  const StackedOperator& K() const { return K_; }
  const DiffOperator& T() const { return T_; }
  double delta() const { return delta_; }

  void apply(std::span<const double> u, std::span<double> out) const;
  /// Exact diagonal of A, for Jacobi preconditioning.
  std::vector<double> diagonal() const;

 private:
  StackedOperator K_;
  DiffOperator T_;
  double delta_;
};

struct CgOptions {
  double tol = 1e-10;    // relative to ||rhs||
  int max_iters = 0;     // 0 -> 10 * size
  bool jacobi = true;
};

/// Conjugate gradient on A x = rhs. x carries the initial guess on entry
/// (warm start) and the solution on exit. rhs == 0 short-circuits to x = 0.
SolveReport solve_normal(const NormalOperator& A, std::span<const double> rhs,
                         std::span<double> x, const CgOptions& opts = {});

/// Direct per-frequency solve of the 2x2 block system; circulant variant
/// only. Exact up to FFT roundoff.
void solve_circulant_fast(const NormalOperator& A, std::span<const double> rhs,
                          std::span<double> x);

struct NuEstimate {
  double nu_lower_bound = 0.0;
  double confidence = 0.0;
  int probes = 0;
};

/// Probabilistic lower bound on the smallest eigenvalue of A = K0*K0 + T*T
/// (the strong-convexity constant of the quadratic subproblem): solves
/// A x_i = w_i for M standard Gaussian probes and returns
/// 1 / (b * sqrt(2/pi) * max_i ||x_i||), valid with probability 1 - b^-M.
/// Requires the beta = 1, delta = 1 operator.
NuEstimate estimate_nu(const NormalOperator& A, int M, double b, std::uint64_t seed);

}  // namespace tvdeblur
