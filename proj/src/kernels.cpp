#include "tvdeblur/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernels_table.hpp"

namespace tvdeblur::kernels {

// ============================================================================
// Scalar reference kernels
// ============================================================================

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double norm_sq_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double diff_norm_sq_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void add_scaled_scalar(const double* x, double a, const double* y, double* out,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * y[i];
}

void sub_scalar(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

void scaled_sub_scalar(double a, const double* x, const double* y, double* out,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * (x[i] - y[i]);
}

void scale_to_scalar(double a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void mul_scalar(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void extrapolate_scalar(const double* cur, const double* prev, double alpha,
                        double* out, std::size_t n) {
  if (alpha == 0.0) {
    if (out != cur) std::memcpy(out, cur, n * sizeof(double));
    return;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = cur[i] + alpha * (cur[i] - prev[i]);
}

void soft_threshold_scalar(const double* x, double tau, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::fabs(x[i]) - tau;
    out[i] = m > 0.0 ? (x[i] > 0.0 ? m : -m) : 0.0;
  }
}

}  // namespace

namespace detail {
const KernelTable scalar_table = {
    dot_scalar,        norm_sq_scalar,  diff_norm_sq_scalar, axpy_scalar,
    add_scaled_scalar, sub_scalar,      scaled_sub_scalar,   scale_to_scalar,
    mul_scalar,        extrapolate_scalar, soft_threshold_scalar,
};
}  // namespace detail

// ============================================================================
// Runtime dispatch
// ============================================================================

namespace {

bool avx2_supported() {
#if TVDEBLUR_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const detail::KernelTable* table_for(Isa isa) {
#if TVDEBLUR_HAVE_AVX2
  if (isa == Isa::avx2) return &detail::avx2_table;
#endif
  (void)isa;
  return &detail::scalar_table;
}

Isa default_isa() {
  if (const char* env = std::getenv("TVDEBLUR_ISA")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Isa::avx2;
  }
  return avx2_supported() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& isa_slot() {
  static std::atomic<Isa> slot{default_isa()};
  return slot;
}

const detail::KernelTable& table() { return *table_for(isa_slot().load()); }

}  // namespace

Isa active_isa() { return isa_slot().load(); }

bool isa_available(Isa isa) { return isa == Isa::scalar || avx2_supported(); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("kernels: isa not available");
  isa_slot().store(isa);
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

// ============================================================================
// Public entry points
// ============================================================================

namespace {
void check_same(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernels: length mismatch");
}
}  // namespace

double dot(std::span<const double> x, std::span<const double> y) {
  check_same(x.size(), y.size());
  return table().dot(x.data(), y.data(), x.size());
}

double norm_sq(std::span<const double> x) {
  return table().norm_sq(x.data(), x.size());
}

double diff_norm_sq(std::span<const double> x, std::span<const double> y) {
  check_same(x.size(), y.size());
  return table().diff_norm_sq(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  check_same(x.size(), y.size());
  table().axpy(a, x.data(), y.data(), x.size());
}

void add_scaled(std::span<const double> x, double a, std::span<const double> y,
                std::span<double> out) {
  check_same(x.size(), y.size());
  check_same(x.size(), out.size());
  table().add_scaled(x.data(), a, y.data(), out.data(), x.size());
}

void sub(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  check_same(x.size(), y.size());
  check_same(x.size(), out.size());
  table().sub(x.data(), y.data(), out.data(), x.size());
}

void scaled_sub(double a, std::span<const double> x, std::span<const double> y,
                std::span<double> out) {
  check_same(x.size(), y.size());
  check_same(x.size(), out.size());
  table().scaled_sub(a, x.data(), y.data(), out.data(), x.size());
}

void scale_to(double a, std::span<const double> x, std::span<double> out) {
  check_same(x.size(), out.size());
  table().scale_to(a, x.data(), out.data(), x.size());
}

void mul(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  check_same(x.size(), y.size());
  check_same(x.size(), out.size());
  table().mul(x.data(), y.data(), out.data(), x.size());
}

void extrapolate(std::span<const double> cur, std::span<const double> prev,
                 double alpha, std::span<double> out) {
  check_same(cur.size(), prev.size());
  check_same(cur.size(), out.size());
  table().extrapolate(cur.data(), prev.data(), alpha, out.data(), cur.size());
}

void soft_threshold(std::span<const double> x, double tau, std::span<double> out) {
  check_same(x.size(), out.size());
  table().soft_threshold(x.data(), tau, out.data(), x.size());
}

}  // namespace tvdeblur::kernels
