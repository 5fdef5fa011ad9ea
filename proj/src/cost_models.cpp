#include "qre/cost_models.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "qre/tensors.hpp"

namespace qre {

count_t iterations(double lambda, double eps_pea) {
  if (!(lambda > 0) || !(eps_pea > 0)) throw Error("lambda and eps must be positive");
  const long double x = std::numbers::pi_v<long double> * static_cast<long double>(lambda) /
                        (2.0L * static_cast<long double>(eps_pea));
  return static_cast<count_t>(std::ceil(x));
}

int ceil_log2(count_t x) {
  if (x < 1) throw Error("ceil_log2 needs x >= 1");
  int t = 0;
  while ((count_t{1} << t) < x) ++t;
  return t;
}

int ceil_log2_ratio(count_t a, count_t b) {
  // an address register never has negative width
  int t = 0;
  while ((b << t) < a) ++t;
  return t;
}

count_t ceil_div(count_t a, count_t b) { return (a + b - 1) / b; }

int eta_of(count_t x) {
  if (x < 1) throw Error("eta needs x >= 1");
  int e = 0;
  while ((x & 1) == 0) {
    x >>= 1;
    ++e;
  }
  return e;
}

count_t qrom_cost(count_t d, count_t m, count_t k) { return ceil_div(d, k) + m * (k - 1); }
count_t qrom_erase_cost(count_t d, count_t k) { return ceil_div(d, k) + k; }

count_t qrom_two_register_cost(count_t N1, count_t N2, count_t b, count_t k1, count_t k2) {
  return ceil_div(N1, k1) * ceil_div(N2, k2) + b * (k1 * k2 - 1);
}

count_t qrom_two_register_erase_cost(count_t N1, count_t N2, count_t k1, count_t k2) {
  return ceil_div(N1, k1) * ceil_div(N2, k2) + k1 * k2;
}

count_t contiguous_register_cost(int n) {
  if (n < 1) throw Error("contiguous register needs at least one bit");
  return count_t(n) * n + n - 1;
}

count_t equal_superposition_cost_thc(count_t M, int b_r) { return 10 * ceil_log2(M + 1) + 2 * b_r - 9; }

count_t equal_superposition_cost(count_t d, int b_r) {
  return 3 * ceil_log2(d) - 3 * eta_of(d) + 2 * b_r - 9;
}

std::vector<count_t> k_candidates(count_t domain) {
  std::vector<count_t> ks;
  const int top = ceil_log2(std::max<count_t>(domain, 1));
  for (int i = 0; i <= top; ++i) ks.push_back(count_t{1} << i);
  return ks;
}

int default_aleph(double lambda, double eps) { return static_cast<int>(std::ceil(2.5 + std::log2(lambda / eps))); }

int default_beth(count_t N, double lambda, double eps, bool eq_form) {
  const double arg = eq_form ? double(N) * lambda / eps : double(N) * lambda / (2.0 * eps);
  return static_cast<int>(std::ceil(5.652 + std::log2(arg)));
}

namespace {

struct Scan {
  const CostParams& p;
  CostReport& rep;

  count_t one(const std::string& role, count_t domain, const std::function<count_t(count_t)>& cost,
              const std::function<count_t(count_t)>& qubits = [](count_t) { return count_t{0}; }) {
    count_t k;
    auto it = p.k_overrides.find(role);
    if (it != p.k_overrides.end() && it->second > 0) {
      k = it->second;
      if (k & (k - 1)) throw Error("k for " + role + " must be a power of two");
    } else {
      k = best_k(domain, cost, qubits);
    }
    rep.ks.push_back({role, k});
    return k;
  }

  std::pair<count_t, count_t> two(const std::string& r1, count_t dom1, const std::string& r2, count_t dom2,
                                  const std::function<count_t(count_t, count_t)>& cost,
                                  const std::function<count_t(count_t, count_t)>& qubits) {
    auto fixed = [&](const std::string& r) -> count_t {
      auto it = p.k_overrides.find(r);
      if (it == p.k_overrides.end() || it->second <= 0) return 0;
      if (it->second & (it->second - 1)) throw Error("k for " + r + " must be a power of two");
      return it->second;
    };
    const count_t f1 = fixed(r1), f2 = fixed(r2);
    const auto c1 = f1 ? std::vector<count_t>{f1} : k_candidates(dom1);
    const auto c2 = f2 ? std::vector<count_t>{f2} : k_candidates(dom2);
    count_t b1 = c1.front(), b2 = c2.front(), bc = cost(b1, b2), bq = qubits(b1, b2);
    for (count_t k1 : c1)
      for (count_t k2 : c2) {
        const count_t c = cost(k1, k2), q = qubits(k1, k2);
        if (c < bc || (c == bc && q < bq)) {
          b1 = k1;
          b2 = k2;
          bc = c;
          bq = q;
        }
      }
    rep.ks.push_back({r1, b1});
    rep.ks.push_back({r2, b2});
    return {b1, b2};
  }
};

void require(bool ok, const char* what) {
  if (!ok) throw Error(what);
}

void finish(CostReport& r) {
  r.toffoli_per_step = 0;
  for (const auto& t : r.breakdown) r.toffoli_per_step += t.toffoli;
  r.toffoli_total = r.iterations * r.toffoli_per_step;
  r.toffoli_total_real = static_cast<double>(r.toffoli_total);
}

}  // namespace

CostReport cost_thc(const CostParams& p) {
  require(p.M >= 1, "cost_thc needs M >= 1");
  require(p.N >= 2 && p.N % 2 == 0, "cost_thc needs an even N >= 2");
  CostReport r;
  r.method = "thc";
  r.iterations = iterations(p.lambda, p.eps_pea);
  const count_t N = p.N, M = p.M;
  const int aleph = p.aleph.value_or(default_aleph(p.lambda, p.eps_pea));
  const int beth = p.beth.value_or(default_beth(N, p.lambda, p.eps_pea, p.beth_eq_form));
  const int br = p.b_r;
  const int nM = ceil_log2(M + 1);
  const count_t d = N / 2 + M * (M + 1) / 2;
  const count_t m = 2 * nM + 2 + aleph;
  const count_t base_q = 2 * ceil_log2(r.iterations + 1) + N + 2 * nM + beth + ceil_log2(d) + aleph + 5;
  auto qubits = [&](count_t ks1) {
    return base_q + std::max(m * ks1 + ceil_log2_ratio(d, ks1), m + beth * N / 2 + beth - 2);
  };

  Scan s{p, r};
  const count_t ks1 = s.one("k_s1", d, [&](count_t k) { return qrom_cost(d, m, k); }, qubits);
  const count_t ks2 = s.one("k_s2", d, [&](count_t k) { return qrom_erase_cost(d, k); });
  const count_t kr1 = s.one("k_r1", std::max(M, N / 2),
                            [&](count_t k) { return ceil_div(M, k) + ceil_div(N, 2 * k) + k; });
  const count_t kr2 = s.one("k_r2", M, [&](count_t k) { return qrom_erase_cost(M, k); });

  r.breakdown = {
      {"prepare", 30 * nM + 4 * br - 16 + 2 * nM * nM + 3 * aleph},
      {"prepare_qrom", qrom_cost(d, m, ks1)},
      {"prepare_qrom_erase", qrom_erase_cost(d, ks2)},
      {"select", 2 * M + 4 * N * beth - 11 * N / 2},
      {"rotation_qrom", ceil_div(M, kr1) + ceil_div(N, 2 * kr1) + kr1},
      {"rotation_qrom_erase", qrom_erase_cost(M, kr2)},
  };
  finish(r);
  r.logical_qubits = qubits(ks1);
  r.info = {{"aleph", aleph}, {"beth", beth}, {"b_r", br}, {"d", double(d)}, {"n_M", nM}, {"m", double(m)}};
  return r;
}

CostReport cost_sparse(const CostParams& p) {
  require(p.d >= 1, "cost_sparse needs d >= 1");
  require(p.N >= 2 && p.N % 2 == 0, "cost_sparse needs an even N >= 2");
  CostReport r;
  r.method = "sparse";
  r.iterations = iterations(p.lambda, p.eps_pea);
  const count_t N = p.N, d = p.d;
  const int aleph = p.aleph.value_or(default_aleph(p.lambda, p.eps_pea));
  const int br = p.b_r;
  const int nN = ceil_log2(N / 2);
  const count_t m = aleph + 8 * nN + 4;
  const int eta = eta_of(d);
  const count_t base_q = 2 * ceil_log2(r.iterations + 1) + N + ceil_log2(d) + br + aleph + 1;
  auto qubits = [&](count_t k1) { return base_q + m * k1 + ceil_log2_ratio(d, k1); };

  CostParams q = p;
  if (!q.k_overrides.count("k1")) q.k_overrides["k1"] = 32;
  Scan s{q, r};
  const count_t k1 = s.one("k1", d, [&](count_t k) { return qrom_cost(d, m, k); }, qubits);
  const count_t k2 = s.one("k2", d, [&](count_t k) { return qrom_erase_cost(d, k); });

  r.breakdown = {
      {"prepare_qrom", qrom_cost(d, m, k1)},
      {"prepare_qrom_erase", qrom_erase_cost(d, k2)},
      {"prepare_select_reflect", 4 * N + 8 * nN + 2 * aleph + 7 * ceil_log2(d) - 6 * eta + 4 * br - 19},
  };
  finish(r);
  r.logical_qubits = qubits(k1);
  r.info = {{"aleph", aleph}, {"b_r", br}, {"eta", eta}, {"m", double(m)}};
  return r;
}

CostReport cost_sf(const CostParams& p) {
  require(p.L >= 1, "cost_sf needs L >= 1");
  require(p.N >= 2 && p.N % 2 == 0, "cost_sf needs an even N >= 2");
  CostReport r;
  r.method = "sf";
  r.iterations = iterations(p.lambda, p.eps_pea);
  const count_t N = p.N, L = p.L;
  const int aleph = p.aleph.value_or(default_aleph(p.lambda, p.eps_pea));
  const int a1 = p.aleph1.value_or(aleph), a2 = p.aleph2.value_or(aleph);
  const int br = p.b_r;
  const int nL = ceil_log2(L + 1);
  const int nN = ceil_log2(N / 2);
  const count_t bL = nL + a1 + 2;
  const count_t bp = 2 * nN + a2 + 2;
  const int eta = eta_of(L + 1);
  // pairs p <= q over N/2 orbitals for each of L+1 outer indices
  const count_t D8 = N * N + 4 * N;  // 8 (N^2/8 + N/2)
  auto chunks = [&](count_t k) { return ceil_div(D8, 8 * k); };
  const count_t base_q = 2 * ceil_log2(r.iterations) + N + 2 * nL + 2 * a1 + a2 + br + 2 * nN + 6 +
                         ceil_log2_ratio(N * N + 2 * N, 8);

  Scan s{p, r};
  const count_t kL = s.one("k_L", L + 1, [&](count_t k) { return ceil_div(L + 1, k) + bL * (k + 1); });
  const count_t kLp = s.one("k_L_erase", L + 1, [&](count_t k) { return ceil_div(L + 1, k) + k; });
  auto pair_cost = [&](count_t k1, count_t k2, count_t w) {
    return ceil_div(L + 1, k1) * chunks(k2) + w * k1 * k2 + ceil_div(L, k1) * chunks(k2);
  };
  auto pair_qubits = [&](count_t k1, count_t k2) {
    return base_q + bp * k1 * k2 + ceil_log2_ratio(L + 1, k1) + ceil_log2_ratio(D8, 8 * k2);
  };
  const count_t Ddom = ceil_div(D8, 8);
  const auto [kp1, kp2] = s.two(
      "k_p1", L + 1, "k_p2", Ddom, [&](count_t a, count_t b) { return pair_cost(a, b, 2 * bp); }, pair_qubits);
  const auto [kpp1, kpp2] = s.two(
      "k_p1_erase", L + 1, "k_p2_erase", Ddom, [&](count_t a, count_t b) { return pair_cost(a, b, 2); },
      [](count_t, count_t) { return count_t{0}; });

  r.breakdown = {
      {"prepare_select_reflect", 7 * nL + 4 * nN * nN + 40 * nN - 6 * eta + 12 * br + a1 + 4 * a2 + 4 * N - 56},
      {"outer_qrom", ceil_div(L + 1, kL) + bL * (kL + 1)},
      {"outer_qrom_erase", ceil_div(L + 1, kLp) + kLp},
      {"inner_qrom", pair_cost(kp1, kp2, 2 * bp)},
      {"inner_qrom_erase", pair_cost(kpp1, kpp2, 2)},
  };
  finish(r);
  r.logical_qubits = pair_qubits(kp1, kp2);
  r.info = {{"aleph1", a1}, {"aleph2", a2}, {"b_r", br}, {"eta", eta}};
  return r;
}

CostReport cost_df(const CostParams& p) {
  require(p.L >= 1, "cost_df needs L >= 1");
  require(p.Xi_total >= 1, "cost_df needs Xi_total >= 1");
  require(p.N >= 2 && p.N % 2 == 0, "cost_df needs an even N >= 2");
  CostReport r;
  r.method = "df";
  r.iterations = iterations(p.lambda, p.eps_pea);
  const count_t N = p.N, L = p.L, Xi = p.Xi_total;
  const count_t Xi_max = p.Xi_max > 0 ? p.Xi_max : N / 2;
  const int aleph = p.aleph.value_or(default_aleph(p.lambda, p.eps_pea));
  const int a1 = p.aleph1.value_or(aleph), a2 = p.aleph2.value_or(aleph);
  const int beth = p.beth.value_or(default_beth(N, p.lambda, p.eps_pea, p.beth_eq_form));
  const int br = p.b_r;
  const int nL = ceil_log2(L + 1);
  const int nXi = ceil_log2(Xi_max);
  const int nLXi = ceil_log2(Xi + N / 2);
  const int eta = eta_of(L + 1);
  const count_t bp1 = nL + a1;
  const count_t bo = nXi + nLXi + br + 1;
  const count_t bp2 = nXi + a2 + 2;
  const count_t inner = Xi + N / 2;
  auto inner_chunks = [&](count_t k) { return ceil_div(inner, k) + ceil_div(Xi, k); };

  Scan s{p, r};
  const count_t kp1 = s.one("k_p1", L + 1, [&](count_t k) { return qrom_cost(L + 1, bp1, k); });
  const count_t ko = s.one("k_o", L + 1, [&](count_t k) { return qrom_cost(L + 1, bo, k); });
  const count_t kp1e = s.one("k_p1_erase", L + 1, [&](count_t k) { return qrom_erase_cost(L + 1, k); });
  const count_t koe = s.one("k_o_erase", L + 1, [&](count_t k) { return qrom_erase_cost(L + 1, k); });
  const count_t base_q =
      N + 2 * nL + nXi + 2 * a1 + a2 + beth + bo + bp2 + 2 * ceil_log2(r.iterations + 1) + 7;
  auto qubits = [&](count_t kr) { return base_q + kr * N * beth / 2; };
  const count_t kr = s.one("k_r", inner, [&](count_t k) { return inner_chunks(k) + N * beth * k; }, qubits);
  const count_t kre = s.one("k_r_erase", inner, [&](count_t k) { return inner_chunks(k) + 2 * k; });
  const count_t kp2 = s.one("k_p2", inner, [&](count_t k) { return inner_chunks(k) + 2 * bp2 * (k - 1); });
  const count_t kp2e = s.one("k_p2_erase", inner, [&](count_t k) { return inner_chunks(k) + 2 * k; });

  r.breakdown = {
      {"prepare_select_reflect",
       9 * nL - 6 * eta + 12 * br + 34 * nXi + 8 * nLXi + 3 * a1 + 6 * a2 + 3 * N * beth - 6 * N - 43},
      {"outer_qrom", qrom_cost(L + 1, bp1, kp1)},
      {"offset_qrom", qrom_cost(L + 1, bo, ko)},
      {"outer_qrom_erase", qrom_erase_cost(L + 1, kp1e)},
      {"offset_qrom_erase", qrom_erase_cost(L + 1, koe)},
      {"rotation_qrom", inner_chunks(kr) + N * beth * kr},
      {"rotation_qrom_erase", inner_chunks(kre) + 2 * kre},
      {"inner_qrom", inner_chunks(kp2) + 2 * bp2 * (kp2 - 1)},
      {"inner_qrom_erase", inner_chunks(kp2e) + 2 * kp2e},
  };
  finish(r);
  r.logical_qubits = qubits(kr);
  r.info = {{"aleph1", a1}, {"aleph2", a2}, {"beth", beth}, {"b_r", br}, {"eta", eta}, {"Xi_max", double(Xi_max)}};
  return r;
}

}  // namespace qre
