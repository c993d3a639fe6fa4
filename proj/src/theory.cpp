#include "tvdeblur/theory.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace tvdeblur {

double TheoryConstants::memory_coeff() const {
  const double k2 = norm_K * norm_K;
  return 7.0 * alpha * alpha * theta * theta * k2 * k2 / (2.0 * delta);
}

TheoryConstants with_parameters(const TheoryConstants& base, double alpha, double delta) {
  TheoryConstants c = base;
  c.alpha = alpha;
  c.delta = delta;

  const double k2 = c.norm_K * c.norm_K;
  const double tk4 = c.theta * c.theta * k2 * k2;  // theta^2 ||K||^4
  c.delta_min = std::max({1.0, (6.0 + 7.0 * alpha * alpha) * tk4 / c.nu, tk4});
  c.h_hat = c.nu / 2.0 - (3.0 + 3.5 * alpha * alpha) * tk4 / delta;
  c.admissible = delta > c.delta_min;

  const double amax = std::max(1.0, alpha);
  c.gamma_v = (1.0 + delta) * c.theta * k2 * amax;
  c.gamma_u = std::max(c.theta * c.norm_T * k2 + c.memory_coeff(),
                       alpha * c.theta * c.norm_T * k2);
  c.gamma_p = c.theta * k2 * amax / delta;
  c.gamma = c.gamma_u + c.gamma_v + c.gamma_p + 2.0 * c.memory_coeff();
  return c;
}

namespace {

// Dense smallest eigenvalue of K0*K0 + T*T, assembled column-by-column from
// the matrix-free operator; intended for small n.
double dense_nu(const NormalOperator& A0) {
  const std::size_t m = A0.size();
  Eigen::MatrixXd M(m, m);
  std::vector<double> e(m, 0.0), col(m);
  for (std::size_t j = 0; j < m; ++j) {
    e[j] = 1.0;
    A0.apply(e, col);
    for (std::size_t i = 0; i < m; ++i) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
    e[j] = 0.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
  return es.eigenvalues().minCoeff();
}

}  // namespace

TheoryConstants compute_theory_constants(const BlurOperator& blur, const DiffOperator& T,
                                         double alpha, double delta, double beta,
                                         const NuOptions& nu) {
  TheoryConstants c;
  const int n = T.n();
  c.theta = theta_bound(n);
  c.norm_T = T.norm2();

  const StackedOperator K(blur, beta);
  const PowerIterResult pw = spectral_norm_K(K, 500, 1e-11, 0x5eed);
  c.norm_K = pw.value;

  const NormalOperator A0(StackedOperator(blur, 1.0), T, 1.0);
  const bool use_dense = nu.source == NuOptions::Source::dense ||
                         (nu.source == NuOptions::Source::auto_ && n <= 8);
  if (use_dense) {
    c.nu = dense_nu(A0);
    c.nu_confidence = 1.0;
    c.nu_source = "dense";
  } else {
    const NuEstimate est = estimate_nu(A0, nu.probes, nu.base, nu.seed);
    c.nu = est.nu_lower_bound;
    c.nu_confidence = est.confidence;
    c.nu_source = "halko";
  }

  return with_parameters(c, alpha, delta);
}

}  // namespace tvdeblur
