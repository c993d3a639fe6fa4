#pragma once

#include <cstddef>

namespace tvdeblur::kernels::detail {

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*norm_sq)(const double*, std::size_t);
  double (*diff_norm_sq)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*add_scaled)(const double*, double, const double*, double*, std::size_t);
  void (*sub)(const double*, const double*, double*, std::size_t);
  void (*scaled_sub)(double, const double*, const double*, double*, std::size_t);
  void (*scale_to)(double, const double*, double*, std::size_t);
  void (*mul)(const double*, const double*, double*, std::size_t);
  void (*extrapolate)(const double*, const double*, double, double*, std::size_t);
  void (*soft_threshold)(const double*, double, double*, std::size_t);
};

extern const KernelTable scalar_table;

#if TVDEBLUR_HAVE_AVX2
extern const KernelTable avx2_table;
#endif

}  // namespace tvdeblur::kernels::detail
