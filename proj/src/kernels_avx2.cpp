// AVX2/FMA lane of the vector kernels. Compiled with -mavx2 -mfma on x86-64
// only; selected at runtime when the CPU reports both features.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstring>

#include "kernels_table.hpp"

#if !TVDEBLUR_HAVE_AVX2
#error "kernels_avx2.cpp requires TVDEBLUR_HAVE_AVX2"
#endif

namespace tvdeblur::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double norm_sq_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

double diff_norm_sq_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void add_scaled_avx2(const double* x, double a, const double* y, double* out,
                     std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = x[i] + a * y[i];
}

void sub_avx2(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] - y[i];
}

void scaled_sub_avx2(double a, const double* x, const double* y, double* out,
                     std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, d));
  }
  for (; i < n; ++i) out[i] = a * (x[i] - y[i]);
}

void scale_to_avx2(double a, const double* x, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = a * x[i];
}

void mul_avx2(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void extrapolate_avx2(const double* cur, const double* prev, double alpha,
                      double* out, std::size_t n) {
  if (alpha == 0.0) {
    if (out != cur) std::memcpy(out, cur, n * sizeof(double));
    return;
  }
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d c = _mm256_loadu_pd(cur + i);
    const __m256d d = _mm256_sub_pd(c, _mm256_loadu_pd(prev + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, d, c));
  }
  for (; i < n; ++i) out[i] = cur[i] + alpha * (cur[i] - prev[i]);
}

void soft_threshold_avx2(const double* x, double tau, double* out, std::size_t n) {
  const __m256d vtau = _mm256_set1_pd(tau);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d av = _mm256_and_pd(v, abs_mask);
    const __m256d m = _mm256_sub_pd(av, vtau);
    const __m256d sign = _mm256_andnot_pd(abs_mask, v);
    const __m256d keep = _mm256_cmp_pd(m, zero, _CMP_GT_OQ);
    // restore sign, then zero out the dead zone so it yields +0.0
    _mm256_storeu_pd(out + i, _mm256_and_pd(_mm256_or_pd(m, sign), keep));
  }
  for (; i < n; ++i) {
    const double m = std::fabs(x[i]) - tau;
    out[i] = m > 0.0 ? (x[i] > 0.0 ? m : -m) : 0.0;
  }
}

}  // namespace

const KernelTable avx2_table = {
    dot_avx2,        norm_sq_avx2,  diff_norm_sq_avx2, axpy_avx2,
    add_scaled_avx2, sub_avx2,      scaled_sub_avx2,   scale_to_avx2,
    mul_avx2,        extrapolate_avx2, soft_threshold_avx2,
};

}  // namespace tvdeblur::kernels::detail
