#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense vector kernels backing the solver inner loops. Every operation has a
// scalar reference implementation and may have SIMD variants; the active
// variant is selected once at runtime from CPU capabilities (overridable via
// force_isa() or the TVDEBLUR_ISA environment variable). Variants are
// equivalence-tested against the scalar reference.
namespace tvdeblur::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
void force_isa(Isa isa);
bool isa_available(Isa isa);
std::string_view isa_name(Isa isa);

double dot(std::span<const double> x, std::span<const double> y);
double norm_sq(std::span<const double> x);
// sum((x-y)^2), fused for residual evaluation
double diff_norm_sq(std::span<const double> x, std::span<const double> y);

// y += a*x
void axpy(double a, std::span<const double> x, std::span<double> y);
// out = x + a*y  (out may alias x or y)
void add_scaled(std::span<const double> x, double a, std::span<const double> y,
                std::span<double> out);
// out = x - y
void sub(std::span<const double> x, std::span<const double> y, std::span<double> out);
// out = a*(x - y)
void scaled_sub(double a, std::span<const double> x, std::span<const double> y,
                std::span<double> out);
// out = a*x
void scale_to(double a, std::span<const double> x, std::span<double> out);
// out = x .* y
void mul(std::span<const double> x, std::span<const double> y, std::span<double> out);
// out = cur + alpha*(cur - prev); alpha == 0 is a bit-exact copy of cur
void extrapolate(std::span<const double> cur, std::span<const double> prev,
                 double alpha, std::span<double> out);
// out_i = sign(x_i) * max(|x_i| - tau, 0); dead zone yields +0.0
void soft_threshold(std::span<const double> x, double tau, std::span<double> out);

}  // namespace tvdeblur::kernels
