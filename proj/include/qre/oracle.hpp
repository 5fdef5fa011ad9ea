#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qre/factorizations.hpp"
#include "qre/tensors.hpp"

namespace qre {

/// Real symmetric Hamiltonian over the 2^N occupation basis, spin orbital 2p+sigma.
struct FockMatrix {
  int N = 0;
  Eigen::MatrixXd H;
};

inline constexpr int kMaxFockModes = 8;

/**
 * @brief sum_pq onebody_pq E_pq + 1/2 sum_pqrs V_pqrs E_pq E_rs with E_pq = sum_sigma a+_p a_q.
 * @throws Error for N > 8 or N != 2 n.
 */
FockMatrix build_exact_hamiltonian(const Eigen::MatrixXd& onebody, const Tensor4& twobody, int N);

/// Lambda of a representation, one-body part from the exact T'.
LambdaReport lambda_of(const FactorizedRep& rep, const Eigen::MatrixXd& Tprime);

struct BoundCheck {
  std::string method;
  double lambda = 0.0;
  double shift = 0.0;
  double max_deviation = 0.0;  ///< max |E - shift| over the spectrum
  bool ok = false;
};

/**
 * @brief Diagonalizes the Hamiltonian the representation encodes and checks |E - shift| <= lambda.
 */
BoundCheck lambda_bounds_spectrum(const FactorizedRep& rep, const IntegralData& data, double slack = 1e-9);

struct ScheduleRow {
  int level = 0;     ///< bit weight 2^(level-1)
  std::string line;  ///< equation line the bits come from, e.g. "even.c"
  std::vector<std::string> bits;
};

struct ContiguousSchedule {
  int n = 0;
  std::int64_t toffoli_count = 0;
  std::int64_t product_toffolis = 0;
  std::int64_t adder_toffolis = 0;
  std::vector<std::int64_t> level_toffolis;  ///< index 0 is level 1
  std::vector<ScheduleRow> rows;
  bool correct = false;
};

/**
 * @brief Level-by-level carry-save schedule for p(p+1)/2 + q on n-bit inputs.
 *
 * Evaluates every (p, q) with 64 q values per machine word.
 */
ContiguousSchedule simulate_contiguous_schedule(int n_bits, bool check_all = true);

}  // namespace qre
