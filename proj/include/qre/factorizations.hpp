#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qre/tensors.hpp"

namespace qre {

/// One-body and two-body parts of lambda are always reported separately.
struct LambdaReport {
  std::string method;
  double lambda_one = 0.0;
  double lambda_two = 0.0;
  double total() const { return lambda_one + lambda_two; }
};

struct SparseEntry {
  int p, q, r, s;
  double value;
};

struct SparseRep {
  std::vector<SparseEntry> entries;  ///< one representative per symmetry class
  double threshold = 0.0;
  std::int64_t d = 0;                ///< survivors + n(n+1)/2
  int n = 0;
  Eigen::MatrixXd Tprime;

  Tensor4 tensor() const;
};

struct SFRep {
  std::vector<Eigen::MatrixXd> W;
  int n = 0;
  int L() const { return static_cast<int>(W.size()); }
  Tensor4 tensor() const;
};

struct DFBlock {
  Eigen::VectorXd f;  ///< kept eigenvalues, |f| descending
  Eigen::MatrixXd U;  ///< matching eigenvectors as columns
  double f_abs_sum_full = 0.0;
};

struct DFRep {
  std::vector<DFBlock> blocks;
  double threshold = 0.0;
  int n = 0;
  int L() const { return static_cast<int>(blocks.size()); }
  std::int64_t Xi_total() const;
  int Xi_max() const;
  double Xi_avg() const { return L() ? double(Xi_total()) / L() : 0.0; }
  Tensor4 tensor() const;
};

struct THCRep {
  Eigen::MatrixXd chi;   ///< n x M
  Eigen::MatrixXd zeta;  ///< M x M
  int M() const { return static_cast<int>(chi.cols()); }
  int n() const { return static_cast<int>(chi.rows()); }
};

using FactorizedRep = std::variant<SparseRep, SFRep, DFRep, THCRep>;

std::pair<SparseRep, LambdaReport> sparse_truncate(const IntegralData& data, const Eigen::MatrixXd& Tprime,
                                                   double threshold);

/// Clipping tolerance for negative residual pivots in the Cholesky sweep.
inline constexpr double kCholeskyClip = 1e-8;

/**
 * @brief Pivoted Cholesky of the (pq),(rs) flattening of V.
 *
 * Stops at target_L vectors when given, otherwise when the largest residual
 * diagonal drops to tol.
 * @throws Error if a residual diagonal is more negative than the clip tolerance.
 */
SFRep single_factorize(const IntegralData& data, std::optional<int> target_L, double tol = 1e-12);

LambdaReport lambda_sf(const SFRep& rep, const Eigen::MatrixXd& Tprime);

DFRep double_factorize(const SFRep& rep, double threshold);

/// lambda_one is the Schatten 1-norm of T'.
LambdaReport lambda_df(const DFRep& rep, const Eigen::MatrixXd& Tprime);

/// G_pqrs = sum_{mu nu} chi_p^mu chi_q^mu zeta_{mu nu} chi_r^nu chi_s^nu
Tensor4 thc_reconstruct(const THCRep& rep);

/// Pairs Eigen-decomposed T' (from the exact V) with half the absolute zeta sum.
LambdaReport lambda_thc(const THCRep& rep, const IntegralData& data);
LambdaReport lambda_thc(const THCRep& rep, const Eigen::MatrixXd& Tprime);

double lambda_thc_naive(const THCRep& rep);

struct ReconstructionErrors {
  double eps_co = 0.0;  ///< sum |dV|
  double eps_in = 0.0;  ///< sqrt(sum dV^2)
};
ReconstructionErrors reconstruction_errors(const Tensor4& V, const Tensor4& approx);

double schatten_norm(const Eigen::MatrixXd& A);

/// Largest power-of-two exponent dividing x (x >= 1).
int two_adic(std::int64_t x);

/**
 * @brief Identity coefficient discarded when the representation is written as an LCU.
 *
 * Equals tr(T') - 1/2 sum_pr G_pprr, plus lambda_two for SF and DF whose
 * squared one-body terms are realized by amplitude amplification.
 */
double identity_shift(const FactorizedRep& rep, const Eigen::MatrixXd& Tprime, const LambdaReport& lam);

/// Two-body tensor the representation encodes.
Tensor4 rep_tensor(const FactorizedRep& rep);

}  // namespace qre
