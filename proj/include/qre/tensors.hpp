#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qre {

/** @brief Raised for malformed input, violated preconditions and infeasible requests. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief Dense rank-4 tensor in chemist ordering (pq|rs).
 *
 * Element (p,q,r,s) lives at ((p*n+q)*n+r)*n+s, so the (pq),(rs) flattening is
 * a row-major n^2 x n^2 matrix.
 */
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), v_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  std::size_t size() const { return v_.size(); }

  double& operator()(int p, int q, int r, int s) { return v_[index(p, q, r, s)]; }
  double operator()(int p, int q, int r, int s) const { return v_[index(p, q, r, s)]; }

  std::size_t index(int p, int q, int r, int s) const {
    const std::size_t n = static_cast<std::size_t>(n_);
    return ((p * n + q) * n + r) * n + s;
  }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  const std::vector<double>& values() const { return v_; }

  /// Row-major (pq),(rs) flattening.
  Eigen::MatrixXd flatten() const;
  static Tensor4 from_flat(const Eigen::MatrixXd& m, int n);

  /// Writes v to all eight images of (p,q,r,s).
  void set_symmetric(int p, int q, int r, int s, double v);

  bool operator==(const Tensor4& o) const { return n_ == o.n_ && v_ == o.v_; }

 private:
  int n_ = 0;
  std::vector<double> v_;
};

struct IntegralData {
  int n_spatial = 0;
  Eigen::MatrixXd h;
  Tensor4 V;
  double e_core = 0.0;

  int n_spin() const { return 2 * n_spatial; }
};

struct KineticCorrected {
  Eigen::MatrixXd T;
  Eigen::MatrixXd Tprime;
};

/// Index order of the exchange contraction in T, echoed in factorize reports.
inline constexpr const char* kTConvention = "T_pq = h_pq - 1/2 sum_r V_prrq";

/**
 * @brief Checks symmetry of h and the 8-fold symmetry of V.
 * @throws Error naming the first offending element.
 */
void validate(const IntegralData& data, double tol = 1e-12);

/// Averages h and V over their symmetry orbits in place.
void symmetrize(IntegralData& data);

/** @brief Reads an FCIDUMP file. Errors carry the 1-based line number. */
IntegralData load_fcidump(const std::string& path);
IntegralData parse_fcidump(const std::string& text);

/// Writes canonical records only (p>=q, r>=s, pq>=rs), 17 significant digits.
std::string format_fcidump(const IntegralData& data, int nelec = 0, int ms2 = 0);
void write_fcidump(const std::string& path, const IntegralData& data, int nelec = 0, int ms2 = 0);

KineticCorrected compute_T(const IntegralData& data);

/// sum_r V_pqrr, the piece T' absorbs from the two-body term.
Eigen::MatrixXd coulomb_contraction(const Tensor4& V);

/**
 * @brief Number of permutation-unique entries with |V| above threshold.
 *
 * Walks one representative of every symmetry class instead of deduplicating.
 */
std::int64_t count_unique_above(const Tensor4& V, double threshold);

/// Calls f(p,q,r,s) once per symmetry class of an n-orbital tensor.
template <class F>
void for_each_unique(int n, F&& f) {
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) {
      const int pq = p * (p + 1) / 2 + q;
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          const int rs = r * (r + 1) / 2 + s;
          if (rs > pq) continue;
          f(p, q, r, s);
        }
    }
}

/// How many tensor elements share the class of (p,q,r,s): 1, 2, 4 or 8.
int symmetry_multiplicity(int p, int q, int r, int s);

/// Random h and positive semidefinite V with exact 8-fold symmetry.
IntegralData random_integrals(int n, std::uint64_t seed, int rank = -1, double scale = 1.0);

}  // namespace qre
