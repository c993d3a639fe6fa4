#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tvdeblur/image.hpp"
#include "tvdeblur/linsolve.hpp"
#include "tvdeblur/metrics.hpp"
#include "tvdeblur/operators.hpp"
#include "tvdeblur/prox.hpp"
#include "tvdeblur/theory.hpp"

namespace tvdeblur {

enum class Method { iadmm, admm };
enum class StopReason { tolerance_met, residual_increase, max_iters };
enum class InitMode { duplicated, presolve };
enum class Admissibility { off, warn, enforce };

Method method_from_string(const std::string& name);
std::string to_string(Method m);
std::string to_string(StopReason r);
InitMode init_mode_from_string(const std::string& name);
std::string to_string(InitMode m);

struct SolverConfig {
  Method method = Method::iadmm;
  double sigma = 1e-3;    // TV weight
  double delta = 0.001;   // penalty
  double alpha = 0.5;     // inertia (ignored for admm; alpha = 0 IS admm)
  double beta = 1.0;      // duplication penalty weight, >= 1
  double q = 1.0;         // penalty exponent in (0,1]
  double epsilon = 0.005; // stop tolerance
  int max_iters = 500;
  DiffVariant variant = DiffVariant::banded;
  bool diagnostics_on = true;
  int warmup = 3;         // iterations before the residual-increase stop may fire
  double cg_tol = 1e-10;
  int cg_max_iters = 0;   // 0 -> 10 * 2n^2
  InitMode init = InitMode::duplicated;
  Admissibility admissibility = Admissibility::warn;
  NuOptions nu_options;
};

/// One row per completed iteration (row 0 is the initial point). Residual and
/// bound fields describe the transition into this row's state; NaN marks
/// fields that do not apply (no ground truth, initial row).
struct IterTrace {
  int k = 0;
  double objective = 0.0;
  double lagrangian = 0.0;
  double F_value = 0.0;
  double residual = 0.0;           // standard res(k, k+1)
  double residual_inertial = 0.0;  // res_i(k, k+1) against the extrapolated pair
  double real_error = 0.0;         // ||truth - u1||, NaN without truth
  double snr = 0.0;                // dB, NaN without truth
  double dual_ratio = 0.0;         // ||dp|| / (theta ||K||^2 ||du||)
  double subgrad_ratio = 0.0;      // ||s|| / (gamma (||du_k|| + ||du_{k-1}||))
  double tu_minus_v = 0.0;         // ||T u - v||
  double du_norm = 0.0;
  double dv_norm = 0.0;
  double dp_norm = 0.0;
};

struct SolverState {
  std::vector<double> u_prev, u;
  std::vector<double> v_prev, v;
  std::vector<double> p_prev, p;
  int k = 1;
};

struct StepInfo {
  double res_std = 0.0;
  double res_inertial = 0.0;
  double du_norm = 0.0, dv_norm = 0.0, dp_norm = 0.0;
  double dual_ratio = 0.0;
  double subgrad_ratio = 0.0;
  double tu_minus_v = 0.0;
  SolveReport cg;
};

struct RunResult {
  Image restored;
  std::vector<IterTrace> traces;
  StopReason stop_reason = StopReason::max_iters;
  int iterations = 0;
  TheoryConstants constants;
};

double phi_sum(std::span<const double> v, double q);

double eval_lagrangian(std::span<const double> u, std::span<const double> v,
                       std::span<const double> p, double sigma, double delta, double q,
                       const StackedOperator& K, const DiffOperator& T,
                       std::span<const double> f);

/// Lagrangian plus the memory term coeff * ||u - x||^2.
double eval_F(std::span<const double> u, std::span<const double> v,
              std::span<const double> p, std::span<const double> x, double sigma,
              double delta, double q, const StackedOperator& K, const DiffOperator& T,
              std::span<const double> f, double memory_coeff);

/// Alternating-minimization solver for the duplicated-variable deblurring
/// model, with optional inertial extrapolation. One instance owns one run's
/// operators and state; instances are independent.
class Solver {
 public:
  Solver(SolverConfig cfg, BlurOperator blur, std::vector<double> f_tilde);

  const SolverConfig& config() const { return cfg_; }
  const TheoryConstants& constants() const { return constants_; }
  const NormalOperator& normal_op() const { return A_; }
  SolverState& state() { return st_; }
  const SolverState& state() const { return st_; }
  double alpha_eff() const { return cfg_.method == Method::admm ? 0.0 : cfg_.alpha; }

  /// Re-initialize state per cfg.init.
  void reset();

  /// One update sweep: extrapolate, v-prox at the pre-extrapolation u,
  /// u-solve, dual step. Throws SolveError when the inner solve fails.
  StepInfo step();

  double objective(std::span<const double> u) const;
  double lagrangian(std::span<const double> u, std::span<const double> v,
                    std::span<const double> p) const;
  double F_value(std::span<const double> u, std::span<const double> v,
                 std::span<const double> p, std::span<const double> x) const;

  RunResult run(const Image* truth = nullptr);

 private:
  void init_duplicated();
  void init_presolve();
  IterTrace make_trace_row(int k, const StepInfo* info, const std::vector<double>* truth) const;

  SolverConfig cfg_;
  BlurOperator blur_;
  DiffOperator T_;
  StackedOperator K_;
  NormalOperator A_;
  std::vector<double> f_;        // (f_tilde, 0)
  std::vector<double> Kstar_f_;
  TheoryConstants constants_;
  SolverState st_;
  double du_prev_ = 0.0;  // ||u^k - u^{k-1}|| of the previous transition

  // step workspace
  std::vector<double> u_hat_, p_hat_, u_new_, p_new_, v_new_, rhs_, stacked_tmp_;
  std::vector<double> edge_a_, edge_z_, edge_b_;
};

struct CheckResult {
  bool ok = false;
  double value = 0.0;  // descent margin or bound ratio
};

/// F(w^k) - F(w^{k+1}) >= h_hat ||u^{k+1}-u^k||^2 up to 1e-9 (1 + |F(w^k)|).
CheckResult check_descent(const IterTrace& row_k, const IterTrace& row_k1,
                          const TheoryConstants& c);
/// ||p^{k+1}-p^k|| <= theta ||K||^2 ||u^{k+1}-u^k||, ratio form.
CheckResult check_dual_bound(const IterTrace& row_k1, const TheoryConstants& c);
/// Assembled subgradient bound ratio <= 1 + 1e-6.
CheckResult check_subgradient_bound(const IterTrace& row_k1);

}  // namespace tvdeblur
