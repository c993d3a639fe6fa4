#pragma once

#include <span>

#include "tvdeblur/image.hpp"

namespace tvdeblur {

struct SnrResult {
  double db = 0.0;
  bool identical = false;  // restored == original exactly; db is +inf
};

// 10*log10(||u - mean(u)||^2 / ||u - u*||^2), u the original.
double snr_db(std::span<const double> original, std::span<const double> restored);
SnrResult snr(const Image& original, const Image& restored);

// ||(u,p) - (u_ref,p_ref)|| / (1 + ||(u_ref,p_ref)||); the reference pair is
// the previous iterate (standard) or the extrapolated one (inertial).
double residual(std::span<const double> u, std::span<const double> p,
                std::span<const double> u_ref, std::span<const double> p_ref);

enum class StopKind { tolerance_met, residual_increase, continue_ };

struct StopDecision {
  bool stop = false;
  StopKind reason = StopKind::continue_;
};

// Tolerance branch first; the increase branch is guarded until k > warmup.
StopDecision should_stop(double res_prev, double res_curr, double eps, int k, int warmup);

}  // namespace tvdeblur
