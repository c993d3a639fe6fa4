#include "tvdeblur/linsolve.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <stdexcept>

#include "fft_utils.hpp"
#include "tvdeblur/errors.hpp"
#include "tvdeblur/kernels.hpp"
#include "tvdeblur/rng.hpp"

namespace tvdeblur {

NormalOperator::NormalOperator(StackedOperator K, DiffOperator T, double delta)
    : K_(std::move(K)), T_(std::move(T)), delta_(delta) {
  if (K_.n() != T_.n()) throw ShapeError("NormalOperator: operator sides differ");
  if (!(delta > 0.0)) throw std::invalid_argument("NormalOperator: delta must be > 0");
}

void NormalOperator::apply(std::span<const double> u, std::span<double> out) const {
  const std::size_t m = size();
  if (u.size() != m || out.size() != m) throw ShapeError("NormalOperator::apply: size mismatch");
  thread_local std::vector<double> ku, kku, tu, ttu;
  ku.resize(m);
  kku.resize(m);
  tu.resize(T_.range_size());
  ttu.resize(m);
  K_.apply(u, ku);
  K_.apply_adjoint(ku, kku);
  T_.apply(u, tu);
  T_.apply_adjoint(tu, ttu);
  kernels::add_scaled(kku, delta_, ttu, out);
}

std::vector<double> NormalOperator::diagonal() const {
  const int n = K_.n();
  const std::size_t n2 = static_cast<std::size_t>(n) * n;
  const double beta2 = K_.beta() * K_.beta();
  double ksq = 0.0;
  for (double v : K_.blur().kernel()) ksq += v * v;

  // D^T D diagonal: (1,2,...,2,1) banded, all 2 circulant.
  const bool banded = T_.variant() == DiffVariant::banded;
  auto dtd = [&](int i) {
    if (!banded) return 2.0;
    return (i == 0 || i == n - 1) ? 1.0 : 2.0;
  };

  std::vector<double> d(2 * n2);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      d[static_cast<std::size_t>(c) * n + r] = ksq + beta2 + delta_ * dtd(r);
      d[n2 + static_cast<std::size_t>(c) * n + r] = beta2 + delta_ * dtd(c);
    }
  return d;
}

SolveReport solve_normal(const NormalOperator& A, std::span<const double> rhs,
                         std::span<double> x, const CgOptions& opts) {
  const std::size_t m = A.size();
  if (rhs.size() != m || x.size() != m) throw ShapeError("solve_normal: size mismatch");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("solve_normal: tol must be > 0");
  const int max_iters = opts.max_iters > 0 ? opts.max_iters : static_cast<int>(10 * m);

  SolveReport rep;
  const double rhs_norm = std::sqrt(kernels::norm_sq(rhs));
  if (rhs_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    rep.converged = true;
    return rep;
  }
  const double stop = opts.tol * rhs_norm;

  thread_local std::vector<double> r, z, p, ap, invdiag;
  r.resize(m);
  z.resize(m);
  p.resize(m);
  ap.resize(m);

  std::span<const double> minv;
  if (opts.jacobi) {
    const auto d = A.diagonal();
    invdiag.resize(m);
    for (std::size_t i = 0; i < m; ++i) invdiag[i] = 1.0 / d[i];
    minv = invdiag;
  }

  A.apply(x, ap);
  kernels::sub(rhs, ap, r);
  double rnorm = std::sqrt(kernels::norm_sq(r));

  if (opts.jacobi) kernels::mul(r, minv, z);
  else std::memcpy(z.data(), r.data(), m * sizeof(double));
  std::memcpy(p.data(), z.data(), m * sizeof(double));
  double rz = kernels::dot(r, z);

  int it = 0;
  while (rnorm > stop && it < max_iters) {
    A.apply(p, ap);
    const double pap = kernels::dot(p, ap);
    if (!(pap > 0.0)) break;  // loss of positive definiteness or stagnation
    const double alpha = rz / pap;
    kernels::axpy(alpha, p, x);
    kernels::axpy(-alpha, ap, r);
    if (opts.jacobi) kernels::mul(r, minv, z);
    else std::memcpy(z.data(), r.data(), m * sizeof(double));
    const double rz_new = kernels::dot(r, z);
    kernels::add_scaled(z, rz_new / rz, p, p);
    rz = rz_new;
    rnorm = std::sqrt(kernels::norm_sq(r));
    ++it;
  }

  rep.iterations = it;
  rep.final_residual_norm = rnorm;
  rep.converged = rnorm <= stop;
  return rep;
}

// ----------------------------------------------------------------------------
// Circulant direct solve
// ----------------------------------------------------------------------------

void solve_circulant_fast(const NormalOperator& A, std::span<const double> rhs,
                          std::span<double> x) {
  if (A.T().variant() != DiffVariant::circulant)
    throw UnsupportedVariant("solve_circulant_fast: requires the circulant variant");
  const std::size_t m = A.size();
  if (rhs.size() != m || x.size() != m) throw ShapeError("solve_circulant_fast: size mismatch");

  const int n = A.K().n();
  const std::size_t n2 = static_cast<std::size_t>(n) * n;
  const double beta2 = A.K().beta() * A.K().beta();
  const double delta = A.delta();
  const auto transfer = A.K().blur().transfer();

  std::complex<double>* r1 = fft::scratch(n2);
  std::complex<double>* r2 = fft::scratch2(n2);
  for (std::size_t i = 0; i < n2; ++i) r1[i] = rhs[i];
  for (std::size_t i = 0; i < n2; ++i) r2[i] = rhs[n2 + i];
  fft::forward2d(n, r1);
  fft::forward2d(n, r2);

  // Per frequency (k_r, k_c): wrap-difference symbols along each axis.
  constexpr double kPi = 3.14159265358979323846;
  std::vector<double> sym(n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(kPi * k / n);
    sym[k] = 4.0 * s * s;
  }

  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      const std::size_t i = static_cast<std::size_t>(c) * n + r;
      const double kh2 = std::norm(transfer[i]);
      const double a11 = kh2 + beta2 + delta * sym[r];
      const double a22 = beta2 + delta * sym[c];
      const double a12 = -beta2;
      const double det = a11 * a22 - a12 * a12;
      const std::complex<double> b1 = r1[i], b2 = r2[i];
      r1[i] = (a22 * b1 - a12 * b2) / det;
      r2[i] = (a11 * b2 - a12 * b1) / det;
    }
  }

  fft::inverse2d(n, r1);
  fft::inverse2d(n, r2);
  const double inv = 1.0 / static_cast<double>(n2);
  for (std::size_t i = 0; i < n2; ++i) x[i] = r1[i].real() * inv;
  for (std::size_t i = 0; i < n2; ++i) x[n2 + i] = r2[i].real() * inv;
}

// ----------------------------------------------------------------------------
// nu estimation
// ----------------------------------------------------------------------------

NuEstimate estimate_nu(const NormalOperator& A, int M, double b, std::uint64_t seed) {
  if (M < 1) throw std::invalid_argument("estimate_nu: M must be >= 1");
  if (!(b > 1.0)) throw std::invalid_argument("estimate_nu: b must be > 1");
  if (A.K().beta() != 1.0 || A.delta() != 1.0)
    throw std::invalid_argument("estimate_nu: requires the beta = 1, delta = 1 operator");

  const std::size_t m = A.size();
  GaussianSampler rng(seed);
  std::vector<double> w(m), xsol(m);
  CgOptions opts;
  opts.tol = 1e-10;

  double max_norm = 0.0;
  for (int i = 0; i < M; ++i) {
    for (double& v : w) v = rng();
    std::fill(xsol.begin(), xsol.end(), 0.0);
    const SolveReport rep = solve_normal(A, w, xsol, opts);
    if (!rep.converged)
      throw EstimationError("estimate_nu: probe solve did not converge (probe " +
                            std::to_string(i) + ")");
    max_norm = std::max(max_norm, std::sqrt(kernels::norm_sq(xsol)));
  }

  NuEstimate est;
  est.probes = M;
  est.confidence = 1.0 - std::pow(b, -static_cast<double>(M));
  est.nu_lower_bound = 1.0 / (b * std::sqrt(2.0 / 3.14159265358979323846) * max_norm);
  return est;
}

}  // namespace tvdeblur
