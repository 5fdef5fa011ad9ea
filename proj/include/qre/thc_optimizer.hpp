#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "qre/factorizations.hpp"
#include "qre/tensors.hpp"

namespace qre {

struct FitConfig {
  int M = 0;
  int n_starts = 20;
  int max_iters_lbfgs = 3000;
  int max_iters_adagrad = 2000;
  double adagrad_step = 1e-3;
  double adagrad_eps = 1e-12;
  std::uint64_t seed = 0;
  double rel_tol = 1e-14;  ///< stop when the relative objective decrease falls below this
};

/// sum (V - G)^2 over all n^4 entries
double thc_objective(const Tensor4& V, const THCRep& rep);

struct THCGradient {
  Eigen::MatrixXd dchi;   ///< n x M
  Eigen::MatrixXd dzeta;  ///< M x M, every entry treated as independent
};
THCGradient thc_gradient(const Tensor4& V, const THCRep& rep);

struct FitResult {
  THCRep rep;
  double objective = 0.0;
  std::uint64_t seed = 0;  ///< seed of the winning restart
  int aborted = 0;         ///< restarts dropped for non-finite objectives
};

/**
 * @brief Quasi-Newton stage followed by adaptive-step descent, from n_starts seeds.
 *
 * Columns of chi are normalized on exit with the norms absorbed into zeta.
 * @throws Error if every restart aborts.
 */
FitResult thc_fit(const Tensor4& V, const FitConfig& cfg);

/// Rescales chi columns to unit norm and absorbs c_mu^2 c_nu^2 into zeta.
void normalize_columns(THCRep& rep);

/**
 * @brief Angles with v_p = cos(2 theta_p) prod_{q<p} sin(2 theta_q).
 *
 * Returns n angles. The last is 0 or pi/2 and carries the sign of the last component.
 * @throws Error when the tail is not negligible after the remaining norm vanishes.
 */
Eigen::VectorXd angles_from_chi(const Eigen::VectorXd& v);
Eigen::VectorXd chi_from_angles(const Eigen::VectorXd& theta);

struct QuantizedTHC {
  Eigen::MatrixXd theta;   ///< n x M
  Eigen::MatrixXd zeta_q;  ///< M x M
  int beth = 0;
  int aleph = 0;
  double x = 0.0;
  double unit_theta = 0.0;
  double unit_offdiag = 0.0;
  double unit_diag = 0.0;
  bool normalization_fallback = false;
  double lambda_zeta_pre = 0.0;   ///< 1/2 sum |zeta|
  double lambda_zeta_post = 0.0;  ///< 1/2 sum |zeta_q|

  THCRep rep() const;
};

QuantizedTHC quantize(const THCRep& rep, int beth, int aleph);

/// Sum |zeta_q(x)| - sum |zeta| for the magnitude rounding rule.
double quantization_residual(const Eigen::MatrixXd& zeta, double unit_offdiag, double unit_diag, double x);

}  // namespace qre
