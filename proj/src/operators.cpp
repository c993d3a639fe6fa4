#include "tvdeblur/operators.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "fft_utils.hpp"
#include "tvdeblur/errors.hpp"
#include "tvdeblur/kernels.hpp"
#include "tvdeblur/rng.hpp"

namespace tvdeblur {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

DiffVariant diff_variant_from_string(const std::string& name) {
  if (name == "banded") return DiffVariant::banded;
  if (name == "circulant") return DiffVariant::circulant;
  throw std::invalid_argument("unknown variant: " + name);
}

std::string to_string(DiffVariant v) {
  return v == DiffVariant::banded ? "banded" : "circulant";
}

double theta_bound(int n) {
  if (n < 2) throw std::invalid_argument("theta_bound: n must be >= 2");
  return 1.0 / (2.0 * std::sin(kPi / (2.0 * n)));
}

// ============================================================================
// DiffOperator
// ============================================================================

DiffOperator::DiffOperator(int n, DiffVariant variant) : n_(n), variant_(variant) {
  if (n < 2) throw std::invalid_argument("DiffOperator: n must be >= 2");
}

std::size_t DiffOperator::range_size() const {
  const std::size_t n = n_;
  return variant_ == DiffVariant::banded ? 2 * n * (n - 1) : 2 * n * n;
}

double DiffOperator::norm2() const {
  return variant_ == DiffVariant::banded ? 2.0 * std::cos(kPi / (2.0 * n_)) : 2.0;
}

// Column-major layout throughout: u1 block holds image columns, so the
// "identity (x) difference" block differences adjacent entries within each
// column, and the "difference (x) identity" block differences whole columns.
void DiffOperator::apply(std::span<const double> u, std::span<double> w) const {
  if (u.size() != domain_size() || w.size() != range_size())
    throw ShapeError("DiffOperator::apply: size mismatch");
  const int n = n_;
  const double* u1 = u.data();
  const double* u2 = u.data() + static_cast<std::size_t>(n) * n;

  if (variant_ == DiffVariant::banded) {
    double* w1 = w.data();                                          // (n-1) x n
    double* w2 = w.data() + static_cast<std::size_t>(n) * (n - 1);  // n x (n-1)
    for (int c = 0; c < n; ++c) {
      const double* col = u1 + static_cast<std::size_t>(c) * n;
      double* out = w1 + static_cast<std::size_t>(c) * (n - 1);
      for (int r = 0; r < n - 1; ++r) out[r] = col[r] - col[r + 1];
    }
    for (int c = 0; c < n - 1; ++c) {
      kernels::sub({u2 + static_cast<std::size_t>(c) * n, static_cast<std::size_t>(n)},
                   {u2 + static_cast<std::size_t>(c + 1) * n, static_cast<std::size_t>(n)},
                   {w2 + static_cast<std::size_t>(c) * n, static_cast<std::size_t>(n)});
    }
  } else {
    double* w1 = w.data();
    double* w2 = w.data() + static_cast<std::size_t>(n) * n;
    for (int c = 0; c < n; ++c) {
      const double* col = u1 + static_cast<std::size_t>(c) * n;
      double* out = w1 + static_cast<std::size_t>(c) * n;
      for (int r = 0; r < n - 1; ++r) out[r] = col[r] - col[r + 1];
      out[n - 1] = col[n - 1] - col[0];
    }
    for (int c = 0; c < n; ++c) {
      const int cn = (c + 1) % n;
      kernels::sub({u2 + static_cast<std::size_t>(c) * n, static_cast<std::size_t>(n)},
                   {u2 + static_cast<std::size_t>(cn) * n, static_cast<std::size_t>(n)},
                   {w2 + static_cast<std::size_t>(c) * n, static_cast<std::size_t>(n)});
    }
  }
}

void DiffOperator::apply_adjoint(std::span<const double> w, std::span<double> u) const {
  if (w.size() != range_size() || u.size() != domain_size())
    throw ShapeError("DiffOperator::apply_adjoint: size mismatch");
  const int n = n_;
  double* u1 = u.data();
  double* u2 = u.data() + static_cast<std::size_t>(n) * n;

  if (variant_ == DiffVariant::banded) {
    const double* w1 = w.data();
    const double* w2 = w.data() + static_cast<std::size_t>(n) * (n - 1);
    for (int c = 0; c < n; ++c) {
      const double* in = w1 + static_cast<std::size_t>(c) * (n - 1);
      double* col = u1 + static_cast<std::size_t>(c) * n;
      col[0] = in[0];
      for (int r = 1; r < n - 1; ++r) col[r] = in[r] - in[r - 1];
      col[n - 1] = -in[n - 2];
    }
    // u2 columns: first gets w2 col 0, middles get col differences, last -col
    std::memcpy(u2, w2, static_cast<std::size_t>(n) * sizeof(double));
    for (int c = 1; c < n - 1; ++c) {
      kernels::sub({w2 + static_cast<std::size_t>(c) * n, static_cast<std::size_t>(n)},
                   {w2 + static_cast<std::size_t>(c - 1) * n, static_cast<std::size_t>(n)},
                   {u2 + static_cast<std::size_t>(c) * n, static_cast<std::size_t>(n)});
    }
    kernels::scale_to(-1.0,
                      {w2 + static_cast<std::size_t>(n - 2) * n, static_cast<std::size_t>(n)},
                      {u2 + static_cast<std::size_t>(n - 1) * n, static_cast<std::size_t>(n)});
  } else {
    const double* w1 = w.data();
    const double* w2 = w.data() + static_cast<std::size_t>(n) * n;
    for (int c = 0; c < n; ++c) {
      const double* in = w1 + static_cast<std::size_t>(c) * n;
      double* col = u1 + static_cast<std::size_t>(c) * n;
      for (int r = 0; r < n; ++r) {
        const int rp = (r + n - 1) % n;
        col[r] = in[r] - in[rp];
      }
    }
    for (int c = 0; c < n; ++c) {
      const int cp = (c + n - 1) % n;
      kernels::sub({w2 + static_cast<std::size_t>(c) * n, static_cast<std::size_t>(n)},
                   {w2 + static_cast<std::size_t>(cp) * n, static_cast<std::size_t>(n)},
                   {u2 + static_cast<std::size_t>(c) * n, static_cast<std::size_t>(n)});
    }
  }
}

// ============================================================================
// BlurOperator
// ============================================================================

std::vector<double> build_gaussian_kernel(int size, double sigma) {
  if (size < 1 || size % 2 == 0)
    throw std::invalid_argument("build_gaussian_kernel: size must be odd and positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("build_gaussian_kernel: sigma must be > 0");
  const int h = size / 2;
  std::vector<double> k(static_cast<std::size_t>(size) * size);
  double sum = 0.0;
  for (int b = -h; b <= h; ++b)
    for (int a = -h; a <= h; ++a) {
      const double v = std::exp(-(a * a + b * b) / (2.0 * sigma * sigma));
      k[static_cast<std::size_t>(b + h) * size + (a + h)] = v;
      sum += v;
    }
  for (double& v : k) v /= sum;
  return k;
}

struct BlurOperator::Impl {
  int n = 0;
  int kernel_size = 0;
  std::vector<double> kernel;
  std::vector<std::complex<double>> transfer;  // DFT of embedded kernel
};

BlurOperator::BlurOperator(int n, std::span<const double> kernel, int kernel_size) {
  if (n < 1) throw std::invalid_argument("BlurOperator: n must be >= 1");
  if (kernel_size < 1 || kernel_size % 2 == 0)
    throw std::invalid_argument("BlurOperator: kernel size must be odd");
  if (kernel.size() != static_cast<std::size_t>(kernel_size) * kernel_size)
    throw ShapeError("BlurOperator: kernel length != size^2");

  auto impl = std::make_shared<Impl>();
  impl->n = n;
  impl->kernel_size = kernel_size;
  impl->kernel.assign(kernel.begin(), kernel.end());

  // Embed the kernel with its center at the origin, wrapping negative
  // offsets; accumulate so kernels wider than the grid fold correctly.
  const std::size_t n2 = static_cast<std::size_t>(n) * n;
  std::complex<double>* buf = fft::scratch(n2);
  std::fill(buf, buf + n2, std::complex<double>(0.0, 0.0));
  const int h = kernel_size / 2;
  for (int b = -h; b <= h; ++b)
    for (int a = -h; a <= h; ++a) {
      const int r = ((a % n) + n) % n;
      const int c = ((b % n) + n) % n;
      buf[static_cast<std::size_t>(c) * n + r] +=
          impl->kernel[static_cast<std::size_t>(b + h) * kernel_size + (a + h)];
    }
  fft::forward2d(n, buf);
  impl->transfer.assign(buf, buf + n2);
  impl_ = std::move(impl);
}

BlurOperator BlurOperator::gaussian(int n, int kernel_size, double sigma) {
  const auto k = build_gaussian_kernel(kernel_size, sigma);
  return BlurOperator(n, k, kernel_size);
}

int BlurOperator::n() const { return impl_->n; }
int BlurOperator::kernel_size() const { return impl_->kernel_size; }
std::span<const double> BlurOperator::kernel() const { return impl_->kernel; }
std::span<const std::complex<double>> BlurOperator::transfer() const {
  return impl_->transfer;
}

namespace {

void blur_apply_impl(int n, std::span<const std::complex<double>> transfer,
                     std::span<const double> img, std::span<double> out, bool conjugate) {
  const std::size_t n2 = static_cast<std::size_t>(n) * n;
  if (img.size() != n2 || out.size() != n2)
    throw ShapeError("BlurOperator: vector length != n^2");

  std::complex<double>* buf = fft::scratch(n2);
  for (std::size_t i = 0; i < n2; ++i) buf[i] = img[i];
  fft::forward2d(n, buf);
  if (conjugate) {
    for (std::size_t i = 0; i < n2; ++i) buf[i] *= std::conj(transfer[i]);
  } else {
    for (std::size_t i = 0; i < n2; ++i) buf[i] *= transfer[i];
  }
  fft::inverse2d(n, buf);
  const double inv = 1.0 / static_cast<double>(n2);
  for (std::size_t i = 0; i < n2; ++i) out[i] = buf[i].real() * inv;
}

}  // namespace

void BlurOperator::apply(std::span<const double> img, std::span<double> out) const {
  blur_apply_impl(impl_->n, impl_->transfer, img, out, false);
}

void BlurOperator::apply_adjoint(std::span<const double> img, std::span<double> out) const {
  blur_apply_impl(impl_->n, impl_->transfer, img, out, true);
}

// ============================================================================
// StackedOperator
// ============================================================================

StackedOperator::StackedOperator(BlurOperator blur, double beta)
    : blur_(std::move(blur)), beta_(beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("StackedOperator: beta must be >= 0");
}

void StackedOperator::apply(std::span<const double> u, std::span<double> out) const {
  const std::size_t n2 = static_cast<std::size_t>(n()) * n();
  if (u.size() != 2 * n2 || out.size() != 2 * n2)
    throw ShapeError("StackedOperator::apply: size mismatch");
  blur_.apply(u.first(n2), out.first(n2));
  kernels::scaled_sub(beta_, u.first(n2), u.subspan(n2), out.subspan(n2));
}

void StackedOperator::apply_adjoint(std::span<const double> y, std::span<double> out) const {
  const std::size_t n2 = static_cast<std::size_t>(n()) * n();
  if (y.size() != 2 * n2 || out.size() != 2 * n2)
    throw ShapeError("StackedOperator::apply_adjoint: size mismatch");
  blur_.apply_adjoint(y.first(n2), out.first(n2));
  kernels::axpy(beta_, y.subspan(n2), out.first(n2));
  kernels::scale_to(-beta_, y.subspan(n2), out.subspan(n2));
}

// ============================================================================
// Spectral norm
// ============================================================================

PowerIterResult spectral_norm_K(const StackedOperator& op, int max_iters, double tol,
                                std::uint64_t seed) {
  if (max_iters < 1) throw std::invalid_argument("spectral_norm_K: max_iters must be >= 1");
  const std::size_t m = op.size();
  std::vector<double> v(m), kv(m), w(m);

  GaussianSampler rng(seed);
  for (double& x : v) x = rng();
  double nrm = std::sqrt(kernels::norm_sq(v));
  if (nrm == 0.0) {
    v[0] = 1.0;
    nrm = 1.0;
  }
  kernels::scale_to(1.0 / nrm, v, v);

  PowerIterResult res;
  double prev = 0.0;
  for (int it = 1; it <= max_iters; ++it) {
    op.apply(v, kv);
    op.apply_adjoint(kv, w);
    const double est = std::sqrt(kernels::norm_sq(kv));  // ||Kv|| for unit v
    res.value = est;
    res.iterations = it;
    if (it > 1 && std::fabs(est - prev) <= tol * std::max(est, 1e-300)) {
      res.converged = true;
      break;
    }
    prev = est;
    const double wn = std::sqrt(kernels::norm_sq(w));
    if (wn == 0.0) {  // K v = 0 exactly: estimate settled
      res.converged = true;
      break;
    }
    kernels::scale_to(1.0 / wn, w, v);
  }
  return res;
}

}  // namespace tvdeblur
