#include "tvdeblur/metrics.hpp"

#include <cmath>
#include <limits>

#include "tvdeblur/errors.hpp"
#include "tvdeblur/kernels.hpp"

namespace tvdeblur {

double snr_db(std::span<const double> original, std::span<const double> restored) {
  if (original.size() != restored.size()) throw ShapeError("snr: size mismatch");
  double mean = 0.0;
  for (double v : original) mean += v;
  mean /= static_cast<double>(original.size());
  double num = 0.0;
  for (double v : original) num += (v - mean) * (v - mean);
  const double den = kernels::diff_norm_sq(original, restored);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(num / den);
}

SnrResult snr(const Image& original, const Image& restored) {
  const double db = snr_db(original.pixels, restored.pixels);
  return {db, std::isinf(db) && db > 0.0};
}

double residual(std::span<const double> u, std::span<const double> p,
                std::span<const double> u_ref, std::span<const double> p_ref) {
  const double num =
      std::sqrt(kernels::diff_norm_sq(u, u_ref) + kernels::diff_norm_sq(p, p_ref));
  const double den =
      1.0 + std::sqrt(kernels::norm_sq(u_ref) + kernels::norm_sq(p_ref));
  return num / den;
}

StopDecision should_stop(double res_prev, double res_curr, double eps, int k, int warmup) {
  if (res_curr < eps) return {true, StopKind::tolerance_met};
  if (k > warmup && res_prev < res_curr) return {true, StopKind::residual_increase};
  return {false, StopKind::continue_};
}

}  // namespace tvdeblur
