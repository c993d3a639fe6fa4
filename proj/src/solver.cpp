#include "tvdeblur/solver.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "tvdeblur/errors.hpp"
#include "tvdeblur/kernels.hpp"

namespace tvdeblur {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio_or_zero(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}
}  // namespace

Method method_from_string(const std::string& name) {
  if (name == "iadmm") return Method::iadmm;
  if (name == "admm") return Method::admm;
  throw std::invalid_argument("unknown method: " + name);
}

std::string to_string(Method m) { return m == Method::iadmm ? "iadmm" : "admm"; }

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::tolerance_met: return "tolerance_met";
    case StopReason::residual_increase: return "residual_increase";
    case StopReason::max_iters: return "max_iters";
  }
  return "?";
}

InitMode init_mode_from_string(const std::string& name) {
  if (name == "duplicated") return InitMode::duplicated;
  if (name == "presolve") return InitMode::presolve;
  throw std::invalid_argument("unknown init mode: " + name);
}

std::string to_string(InitMode m) {
  return m == InitMode::duplicated ? "duplicated" : "presolve";
}

double phi_sum(std::span<const double> v, double q) {
  double s = 0.0;
  if (q == 1.0) {
    for (double t : v) s += std::fabs(t);
  } else if (q == 0.5) {
    for (double t : v) s += std::sqrt(std::fabs(t));
  } else {
    for (double t : v) s += std::pow(std::fabs(t), q);
  }
  return s;
}

double eval_lagrangian(std::span<const double> u, std::span<const double> v,
                       std::span<const double> p, double sigma, double delta, double q,
                       const StackedOperator& K, const DiffOperator& T,
                       std::span<const double> f) {
  if (u.size() != K.size() || f.size() != K.size()) throw ShapeError("eval_lagrangian: u/f size");
  if (v.size() != T.range_size() || p.size() != T.range_size())
    throw ShapeError("eval_lagrangian: v/p size");
  thread_local std::vector<double> ku, tu, w;
  ku.resize(K.size());
  tu.resize(T.range_size());
  w.resize(T.range_size());
  K.apply(u, ku);
  T.apply(u, tu);
  kernels::sub(tu, v, w);  // Tu - v
  return 0.5 * kernels::diff_norm_sq(ku, f) + sigma * phi_sum(v, q) - kernels::dot(p, w) +
         0.5 * delta * kernels::norm_sq(w);
}

double eval_F(std::span<const double> u, std::span<const double> v,
              std::span<const double> p, std::span<const double> x, double sigma,
              double delta, double q, const StackedOperator& K, const DiffOperator& T,
              std::span<const double> f, double memory_coeff) {
  return eval_lagrangian(u, v, p, sigma, delta, q, K, T, f) +
         memory_coeff * kernels::diff_norm_sq(u, x);
}

// ============================================================================
// Solver
// ============================================================================

namespace {
SolverConfig validate(SolverConfig cfg) {
  if (!(cfg.sigma > 0.0)) throw std::invalid_argument("SolverConfig: sigma must be > 0");
  if (!(cfg.delta > 0.0)) throw std::invalid_argument("SolverConfig: delta must be > 0");
  if (!(cfg.alpha >= 0.0)) throw std::invalid_argument("SolverConfig: alpha must be >= 0");
  if (!(cfg.beta >= 1.0)) throw std::invalid_argument("SolverConfig: beta must be >= 1");
  if (!(cfg.q > 0.0) || cfg.q > 1.0) throw std::invalid_argument("SolverConfig: q must be in (0,1]");
  if (!(cfg.epsilon >= 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be >= 0");
  if (cfg.max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  return cfg;
}
}  // namespace

Solver::Solver(SolverConfig cfg, BlurOperator blur, std::vector<double> f_tilde)
    : cfg_(validate(cfg)),
      blur_(blur),
      T_(blur.n(), cfg.variant),
      K_(blur, cfg.beta),
      A_(K_, T_, cfg.delta) {
  const std::size_t n2 = static_cast<std::size_t>(blur_.n()) * blur_.n();
  if (f_tilde.size() != n2) throw ShapeError("Solver: blurred vector length != n^2");

  f_.assign(2 * n2, 0.0);
  std::copy(f_tilde.begin(), f_tilde.end(), f_.begin());
  Kstar_f_.resize(2 * n2);
  K_.apply_adjoint(f_, Kstar_f_);

  // theta/||T||/||K|| are always needed (stop ratios); nu only when the
  // admissibility of delta is being checked.
  NuOptions nu = cfg_.nu_options;
  if (cfg_.admissibility == Admissibility::off) {
    TheoryConstants c;
    c.theta = theta_bound(blur_.n());
    c.norm_T = T_.norm2();
    c.norm_K = spectral_norm_K(K_, 500, 1e-11, 0x5eed).value;
    c.nu = kNaN;
    c.nu_confidence = kNaN;
    c.nu_source = "none";
    constants_ = with_parameters(c, alpha_eff(), cfg_.delta);
  } else {
    constants_ = compute_theory_constants(blur_, T_, alpha_eff(), cfg_.delta, cfg_.beta, nu);
    if (!constants_.admissible) {
      if (cfg_.admissibility == Admissibility::enforce)
        throw std::invalid_argument("delta " + std::to_string(cfg_.delta) +
                                    " below admissible threshold " +
                                    std::to_string(constants_.delta_min));
      std::fprintf(stderr,
                   "warning: delta=%g is below the admissible threshold delta_min=%g; "
                   "descent guarantees do not apply\n",
                   cfg_.delta, constants_.delta_min);
    }
  }

  const std::size_t es = T_.range_size();
  u_hat_.resize(2 * n2);
  p_hat_.resize(es);
  u_new_.resize(2 * n2);
  p_new_.resize(es);
  v_new_.resize(es);
  rhs_.resize(2 * n2);
  stacked_tmp_.resize(2 * n2);
  edge_a_.resize(es);
  edge_z_.resize(es);
  edge_b_.resize(es);

  reset();
}

void Solver::init_duplicated() {
  const std::size_t n2 = f_.size() / 2;
  st_.u.assign(f_.size(), 0.0);
  std::copy(f_.begin(), f_.begin() + n2, st_.u.begin());
  std::copy(f_.begin(), f_.begin() + n2, st_.u.begin() + n2);
  st_.v.assign(T_.range_size(), 0.0);
  T_.apply(st_.u, st_.v);
  st_.p.assign(T_.range_size(), 0.0);
}

// One u-solve and dual step from the duplicated start, so that the first
// iterate already satisfies the u-stationarity identity the increment bounds
// build on.
void Solver::init_presolve() {
  init_duplicated();
  kernels::add_scaled(st_.p, cfg_.delta, st_.v, edge_b_);
  T_.apply_adjoint(edge_b_, rhs_);
  kernels::axpy(1.0, Kstar_f_, rhs_);
  CgOptions opts;
  opts.tol = cfg_.cg_tol;
  opts.max_iters = cfg_.cg_max_iters;
  const SolveReport rep = solve_normal(A_, rhs_, st_.u, opts);
  if (!rep.converged) throw SolveError("presolve: linear solve did not converge", 0);
  T_.apply(st_.u, edge_a_);
  kernels::sub(edge_a_, st_.v, edge_z_);
  kernels::add_scaled(st_.p, -cfg_.delta, edge_z_, st_.p);
}

void Solver::reset() {
  if (cfg_.init == InitMode::duplicated) init_duplicated();
  else init_presolve();
  st_.u_prev = st_.u;
  st_.v_prev = st_.v;
  st_.p_prev = st_.p;
  st_.k = 1;
  du_prev_ = 0.0;
}

StepInfo Solver::step() {
  const double alpha = alpha_eff();
  StepInfo info;

  // extrapolation (bit-exact copy at alpha = 0)
  kernels::extrapolate(st_.u, st_.u_prev, alpha, u_hat_);
  kernels::extrapolate(st_.p, st_.p_prev, alpha, p_hat_);

  // v-step: prox at T u^k - p_hat / delta (u^k, not the extrapolated point)
  T_.apply(st_.u, edge_a_);
  kernels::add_scaled(edge_a_, -1.0 / cfg_.delta, p_hat_, edge_z_);
  prox_edgewise({cfg_.q, cfg_.sigma}, cfg_.delta, edge_z_, v_new_);

  // u-step: (K*K + delta T*T) u = K*f + T*(delta v + p_hat), warm-started
  kernels::add_scaled(p_hat_, cfg_.delta, v_new_, edge_b_);
  T_.apply_adjoint(edge_b_, rhs_);
  kernels::axpy(1.0, Kstar_f_, rhs_);
  std::copy(st_.u.begin(), st_.u.end(), u_new_.begin());
  CgOptions opts;
  opts.tol = cfg_.cg_tol;
  opts.max_iters = cfg_.cg_max_iters;
  if (T_.variant() == DiffVariant::circulant) {
    solve_circulant_fast(A_, rhs_, u_new_);
    info.cg.converged = true;
  } else {
    info.cg = solve_normal(A_, rhs_, u_new_, opts);
    if (!info.cg.converged)
      throw SolveError("u-update solve did not converge at iteration " +
                           std::to_string(st_.k),
                       st_.k);
  }

  // dual step: p = p_hat - delta (T u - v)
  T_.apply(u_new_, edge_a_);
  kernels::sub(edge_a_, v_new_, edge_z_);
  kernels::add_scaled(p_hat_, -cfg_.delta, edge_z_, p_new_);

  info.tu_minus_v = std::sqrt(kernels::norm_sq(edge_z_));
  info.du_norm = std::sqrt(kernels::diff_norm_sq(u_new_, st_.u));
  info.dv_norm = std::sqrt(kernels::diff_norm_sq(v_new_, st_.v));
  info.dp_norm = std::sqrt(kernels::diff_norm_sq(p_new_, st_.p));
  info.res_std = residual(u_new_, p_new_, st_.u, st_.p);
  info.res_inertial = residual(u_new_, p_new_, u_hat_, p_hat_);

  const double k2 = constants_.norm_K * constants_.norm_K;
  info.dual_ratio = ratio_or_zero(info.dp_norm, constants_.theta * k2 * info.du_norm);

  if (cfg_.diagnostics_on) {
    // s_v = (1+delta)(p - p_hat); s_u = T*(p_hat - p) + coeff (u - u_prev);
    // s_p = -(T u - v); s_x = -2 coeff (u - u_prev); all at the new point.
    const double coeff = constants_.memory_coeff();
    double sv_sq = 0.0;
    {
      const double c = 1.0 + cfg_.delta;
      sv_sq = c * c * kernels::diff_norm_sq(p_new_, p_hat_);
    }
    // T*(p_hat - p_new) = delta T*(T u_new - v_new), and edge_z_ still holds it
    T_.apply_adjoint(edge_z_, stacked_tmp_);
    double su_sq = 0.0;
    for (std::size_t i = 0; i < stacked_tmp_.size(); ++i) {
      const double t = cfg_.delta * stacked_tmp_[i] + coeff * (u_new_[i] - st_.u[i]);
      su_sq += t * t;
    }
    const double sp_sq = info.tu_minus_v * info.tu_minus_v;
    const double sx = 2.0 * coeff * info.du_norm;
    const double s_norm = std::sqrt(sv_sq + su_sq + sp_sq + sx * sx);
    info.subgrad_ratio =
        ratio_or_zero(s_norm, constants_.gamma * (info.du_norm + du_prev_));
  } else {
    info.subgrad_ratio = kNaN;
  }

  // rotate: new -> current -> previous
  std::swap(st_.u_prev, st_.u);
  std::swap(st_.u, u_new_);
  std::swap(st_.v_prev, st_.v);
  std::swap(st_.v, v_new_);
  std::swap(st_.p_prev, st_.p);
  std::swap(st_.p, p_new_);
  du_prev_ = info.du_norm;
  ++st_.k;
  return info;
}

double Solver::objective(std::span<const double> u) const {
  thread_local std::vector<double> ku, tu;
  ku.resize(K_.size());
  tu.resize(T_.range_size());
  K_.apply(u, ku);
  T_.apply(u, tu);
  return 0.5 * kernels::diff_norm_sq(ku, f_) + cfg_.sigma * phi_sum(tu, cfg_.q);
}

double Solver::lagrangian(std::span<const double> u, std::span<const double> v,
                          std::span<const double> p) const {
  return eval_lagrangian(u, v, p, cfg_.sigma, cfg_.delta, cfg_.q, K_, T_, f_);
}

double Solver::F_value(std::span<const double> u, std::span<const double> v,
                       std::span<const double> p, std::span<const double> x) const {
  return eval_F(u, v, p, x, cfg_.sigma, cfg_.delta, cfg_.q, K_, T_, f_,
                constants_.memory_coeff());
}

IterTrace Solver::make_trace_row(int k, const StepInfo* info,
                                 const std::vector<double>* truth) const {
  IterTrace row;
  row.k = k;
  row.objective = objective(st_.u);
  row.lagrangian = lagrangian(st_.u, st_.v, st_.p);
  row.F_value = row.lagrangian +
                constants_.memory_coeff() * kernels::diff_norm_sq(st_.u, st_.u_prev);
  if (info) {
    row.residual = info->res_std;
    row.residual_inertial = info->res_inertial;
    row.dual_ratio = info->dual_ratio;
    row.subgrad_ratio = info->subgrad_ratio;
    row.tu_minus_v = info->tu_minus_v;
    row.du_norm = info->du_norm;
    row.dv_norm = info->dv_norm;
    row.dp_norm = info->dp_norm;
  } else {
    row.residual = kNaN;
    row.residual_inertial = kNaN;
    row.dual_ratio = kNaN;
    row.subgrad_ratio = kNaN;
    thread_local std::vector<double> tu;
    tu.resize(T_.range_size());
    T_.apply(st_.u, tu);
    row.tu_minus_v = std::sqrt(kernels::diff_norm_sq(tu, st_.v));
    row.du_norm = 0.0;
    row.dv_norm = 0.0;
    row.dp_norm = 0.0;
  }
  if (truth) {
    const std::size_t n2 = f_.size() / 2;
    std::span<const double> u1(st_.u.data(), n2);
    row.real_error = std::sqrt(kernels::diff_norm_sq(*truth, u1));
    row.snr = snr_db(*truth, u1);
  } else {
    row.real_error = kNaN;
    row.snr = kNaN;
  }
  return row;
}

RunResult Solver::run(const Image* truth) {
  reset();
  const std::size_t n2 = f_.size() / 2;
  std::vector<double> truth_vec;
  if (truth) {
    if (truth->n != blur_.n()) throw ShapeError("run: truth image side mismatch");
    truth_vec = truth->pixels;
  }
  const std::vector<double>* tv = truth ? &truth_vec : nullptr;

  RunResult out;
  out.constants = constants_;
  out.traces.push_back(make_trace_row(0, nullptr, tv));

  double res_prev = std::numeric_limits<double>::infinity();
  out.stop_reason = StopReason::max_iters;
  for (int k = 1; k <= cfg_.max_iters; ++k) {
    const StepInfo info = step();
    out.iterations = k;
    IterTrace row = make_trace_row(k, &info, tv);
    out.traces.push_back(row);

    if (!std::isfinite(row.objective) || !std::isfinite(info.res_std) ||
        !std::isfinite(info.du_norm))
      throw DivergenceError("non-finite iterates at iteration " + std::to_string(k), k);

    const double res_used =
        cfg_.method == Method::iadmm ? info.res_inertial : info.res_std;
    const StopDecision dec =
        should_stop(res_prev, res_used, cfg_.epsilon, k, cfg_.warmup);
    if (dec.stop) {
      out.stop_reason = dec.reason == StopKind::tolerance_met
                            ? StopReason::tolerance_met
                            : StopReason::residual_increase;
      break;
    }
    res_prev = res_used;
  }

  out.restored = devectorize(std::span<const double>(st_.u.data(), n2), blur_.n());
  return out;
}

// ============================================================================
// Diagnostics
// ============================================================================

CheckResult check_descent(const IterTrace& row_k, const IterTrace& row_k1,
                          const TheoryConstants& c) {
  const double drop = row_k.F_value - row_k1.F_value;
  const double need = c.h_hat * row_k1.du_norm * row_k1.du_norm;
  const double margin = drop - need;
  return {margin >= -1e-9 * (1.0 + std::fabs(row_k.F_value)), margin};
}

CheckResult check_dual_bound(const IterTrace& row_k1, const TheoryConstants& c) {
  const double k2 = c.norm_K * c.norm_K;
  const double den = c.theta * k2 * row_k1.du_norm;
  const double ratio = den == 0.0 ? (row_k1.dp_norm == 0.0 ? 0.0
                                                           : std::numeric_limits<double>::infinity())
                                  : row_k1.dp_norm / den;
  return {ratio <= 1.0 + 1e-8, ratio};
}

CheckResult check_subgradient_bound(const IterTrace& row_k1) {
  return {row_k1.subgrad_ratio <= 1.0 + 1e-6, row_k1.subgrad_ratio};
}

}  // namespace tvdeblur
