#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace tvdeblur {

/// Difference-operator flavor. The banded variant is the default: its
/// smallest singular bound theta_bound(n) is exact, which the solver
/// diagnostics rely on. The circulant variant wraps around and diagonalizes
/// under the DFT, enabling the per-frequency direct solve.
enum class DiffVariant { banded, circulant };

DiffVariant diff_variant_from_string(const std::string& name);
std::string to_string(DiffVariant v);

/// 1/(2 sin(pi/2n)): reciprocal of the smallest singular value of the banded
/// difference adjoint on the edge space.
double theta_bound(int n);

/// Stacked first-difference operator on duplicated image vectors
/// u = (u1, u2) in R^{2n^2}: block-diagonal with vertical differences of u1
/// (identity (x) banded difference) and horizontal differences of u2.
/// Banded range is R^{2n(n-1)}, circulant range is R^{2n^2}.
class DiffOperator {
 public:
  DiffOperator(int n, DiffVariant variant);

  int n() const { return n_; }
  DiffVariant variant() const { return variant_; }
  std::size_t domain_size() const { return 2 * static_cast<std::size_t>(n_) * n_; }
  std::size_t range_size() const;

  void apply(std::span<const double> u, std::span<double> w) const;
  void apply_adjoint(std::span<const double> w, std::span<double> u) const;

  /// Largest singular value: 2 cos(pi/2n) banded, 2 circulant (n even).
  double norm2() const;

 private:
  int n_;
  DiffVariant variant_;
};

/// Normalized 2-D Gaussian kernel, size x size, centered offsets, unit sum.
std::vector<double> build_gaussian_kernel(int size, double sigma);

/// Circular 2-D convolution on n x n grids via precomputed frequency-domain
/// transfer coefficients. The adjoint is correlation (conjugate transfer).
/// Instances are immutable and cheap to copy; applications are thread-safe.
class BlurOperator {
 public:
  BlurOperator(int n, std::span<const double> kernel, int kernel_size);
  static BlurOperator gaussian(int n, int kernel_size, double sigma);

  int n() const;
  int kernel_size() const;
  std::span<const double> kernel() const;
  /// Transfer coefficients (DFT of the circularly embedded kernel), length n^2.
  std::span<const std::complex<double>> transfer() const;

  void apply(std::span<const double> img, std::span<double> out) const;
  void apply_adjoint(std::span<const double> img, std::span<double> out) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// K = [[Kblur, 0], [beta I, -beta I]] acting on u = (u1, u2):
/// K u = (Kblur u1, beta (u1 - u2)), with f = (f_tilde, 0) as data.
class StackedOperator {
 public:
  StackedOperator(BlurOperator blur, double beta);

  int n() const { return blur_.n(); }
  double beta() const { return beta_; }
  const BlurOperator& blur() const { return blur_; }
  std::size_t size() const { return 2 * static_cast<std::size_t>(n()) * n(); }

  void apply(std::span<const double> u, std::span<double> out) const;
  void apply_adjoint(std::span<const double> y, std::span<double> out) const;

 private:
  BlurOperator blur_;
  double beta_;
};

struct PowerIterResult {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Largest singular value of K by power iteration on K*K, seeded Gaussian
/// start. Non-convergence returns the best estimate flagged accordingly.
PowerIterResult spectral_norm_K(const StackedOperator& op, int max_iters, double tol,
                                std::uint64_t seed);

}  // namespace tvdeblur
