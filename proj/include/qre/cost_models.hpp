#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qre {

/// All Toffoli arithmetic is exact in 64-bit integers.
using count_t = std::int64_t;

struct CostParams {
  count_t N = 0;  ///< spin orbitals
  double lambda = 0.0;
  double eps_pea = 1e-3;
  std::optional<int> aleph, aleph1, aleph2, beth;
  int b_r = 7;
  count_t M = 0;         ///< THC rank
  count_t d = 0;         ///< sparse data items
  count_t L = 0;         ///< SF/DF outer rank
  count_t Xi_total = 0;  ///< DF
  count_t Xi_max = 0;    ///< DF, 0 means N/2
  bool beth_eq_form = false;
  /// Fixed k per role label. Sparse k1 is fixed at 32 unless overridden; 0 requests a scan.
  std::map<std::string, count_t> k_overrides;
};

struct KChoice {
  std::string role;
  count_t k = 1;
};

struct CostTerm {
  std::string label;
  count_t toffoli = 0;
};

struct CostReport {
  std::string method;
  count_t iterations = 0;
  count_t toffoli_per_step = 0;
  count_t toffoli_total = 0;  ///< exact, 0 when only toffoli_total_real is meaningful
  double toffoli_total_real = 0.0;
  count_t logical_qubits = 0;
  std::vector<KChoice> ks;
  std::vector<CostTerm> breakdown;
  std::map<std::string, double> info;  ///< resolved bit widths and method-specific extras
};

/// ceil(pi lambda / (2 eps))
count_t iterations(double lambda, double eps_pea);

/// ceil(log2 x) for x >= 1
int ceil_log2(count_t x);
/// ceil(log2(a/b)) for a, b >= 1
int ceil_log2_ratio(count_t a, count_t b);
count_t ceil_div(count_t a, count_t b);
/// exponent of the largest power of two dividing x
int eta_of(count_t x);

count_t qrom_cost(count_t d, count_t m, count_t k);
count_t qrom_erase_cost(count_t d, count_t k);
count_t qrom_two_register_cost(count_t N1, count_t N2, count_t b, count_t k1, count_t k2);
count_t qrom_two_register_erase_cost(count_t N1, count_t N2, count_t k1, count_t k2);

/// Toffolis to compute nu(nu-1)/2 + mu style contiguous indices on n-bit registers.
count_t contiguous_register_cost(int n_bits);

count_t equal_superposition_cost_thc(count_t M, int b_r);
count_t equal_superposition_cost(count_t d, int b_r);

/// k candidates 1, 2, 4, ..., 2^ceil(log2 domain)
std::vector<count_t> k_candidates(count_t domain);

/// Best k from the candidates: lowest cost, then fewest qubits, then smallest k.
template <class Cost, class Qubits>
count_t best_k(count_t domain, Cost cost, Qubits qubits) {
  count_t best = 1;
  bool first = true;
  count_t bc = 0, bq = 0;
  for (count_t k : k_candidates(domain)) {
    const count_t c = cost(k), q = qubits(k);
    if (first || c < bc || (c == bc && q < bq)) {
      best = k;
      bc = c;
      bq = q;
      first = false;
    }
  }
  return best;
}

int default_aleph(double lambda, double eps);
/// ceil(5.652 + log2(N lambda / (2 eps))), or without the 2 when eq_form.
int default_beth(count_t N, double lambda, double eps, bool eq_form = false);

CostReport cost_thc(const CostParams& p);
CostReport cost_sparse(const CostParams& p);
CostReport cost_sf(const CostParams& p);
CostReport cost_df(const CostParams& p);

}  // namespace qre
