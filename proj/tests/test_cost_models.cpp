#include <doctest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "qre/cost_models.hpp"
#include "qre/tensors.hpp"

using namespace qre;
using boost::multiprecision::cpp_dec_float_50;

namespace {

count_t iterations_oracle(const std::string& lambda, const std::string& eps) {
  const cpp_dec_float_50 pi = boost::math::constants::pi<cpp_dec_float_50>();
  const cpp_dec_float_50 x = pi * cpp_dec_float_50(lambda) / (2 * cpp_dec_float_50(eps));
  return ceil(x).convert_to<count_t>();
}

CostParams thc_reiher() {
  CostParams p;
  p.N = 108;
  p.M = 350;
  p.lambda = 306.3;
  p.aleph = 10;
  p.beth = 16;
  return p;
}

CostParams sparse_reiher() {
  CostParams p;
  p.N = 108;
  p.d = 705831;
  p.lambda = 2135.3;
  p.aleph = 10;
  return p;
}

CostParams sf_reiher() {
  CostParams p;
  p.N = 108;
  p.L = 200;
  p.lambda = 4258.0;
  p.aleph = 10;
  return p;
}

CostParams df_reiher() {
  CostParams p;
  p.N = 108;
  p.L = 360;
  p.Xi_total = 13031;
  p.lambda = 294.8;
  p.aleph = 10;
  p.beth = 16;
  return p;
}

}  // namespace

TEST_CASE("iteration count against extended precision") {
  for (auto [l, e] : std::vector<std::pair<std::string, std::string>>{
           {"306.3", "0.001"}, {"2135.3", "0.001"}, {"1201.5", "0.001"}, {"1", "1"}, {"4258.0", "0.0016"}}) {
    CHECK(iterations(std::stod(l), std::stod(e)) == iterations_oracle(l, e));
  }
  CHECK_THROWS_AS(iterations(0.0, 1e-3), Error);
  CHECK_THROWS_AS(iterations(1.0, -1.0), Error);
}

TEST_CASE("integer log helpers") {
  for (count_t x = 1; x < 5000; ++x) {
    int t = 0;
    while (std::pow(2.0, t) < double(x)) ++t;
    CHECK(ceil_log2(x) == t);
    int e = 0;
    while (x % (count_t(1) << (e + 1)) == 0) ++e;
    CHECK(eta_of(x) == e);
  }
  CHECK(ceil_log2_ratio(350, 8) == 6);
  CHECK(ceil_log2_ratio(3, 8) == 0);
  CHECK(ceil_div(7, 2) == 4);
  CHECK(ceil_div(8, 2) == 4);
  CHECK_THROWS_AS(ceil_log2(0), Error);
}

TEST_CASE("qrom costs") {
  CHECK(qrom_cost(100, 10, 1) == 100);
  CHECK(qrom_cost(100, 10, 4) == 25 + 30);
  CHECK(qrom_erase_cost(100, 8) == 13 + 8);
  CHECK(contiguous_register_cost(6) == 41);
  CHECK(contiguous_register_cost(7) == 55);
  CHECK(k_candidates(1) == std::vector<count_t>{1});
  CHECK(k_candidates(5) == std::vector<count_t>{1, 2, 4, 8});
}

TEST_CASE("two-register worked example") {
  const count_t two = qrom_two_register_cost(350, 72, 20, 8, 4);
  const count_t contiguous = qrom_cost(350 * 72, 20, 32);
  CHECK(two - contiguous == 4);
  const count_t two_erase = qrom_two_register_erase_cost(350, 72, 16, 8);
  const count_t contiguous_erase = qrom_erase_cost(350 * 72, 128);
  CHECK(two_erase - contiguous_erase == 1);
}

TEST_CASE("two-register QROM never beats the contiguous one at equal k") {
  // 1000 pseudo-random tuples
  std::uint64_t s = 12345;
  auto next = [&](count_t lo, count_t hi) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return lo + count_t((s >> 33) % std::uint64_t(hi - lo + 1));
  };
  for (int i = 0; i < 1000; ++i) {
    const count_t N1 = next(1, 500), N2 = next(1, 200), b = next(1, 40);
    const count_t k1 = count_t(1) << next(0, 5), k2 = count_t(1) << next(0, 5);
    CHECK(qrom_two_register_cost(N1, N2, b, k1, k2) >= qrom_cost(N1 * N2, b, k1 * k2));
    CHECK(qrom_two_register_erase_cost(N1, N2, k1, k2) >= qrom_erase_cost(N1 * N2, k1 * k2));
  }
}

TEST_CASE("best_k agrees with an exhaustive scan") {
  for (count_t d : {1, 7, 100, 705831}) {
    for (count_t m : {1, 16, 200}) {
      const count_t k = best_k(d, [&](count_t k) { return qrom_cost(d, m, k); }, [&](count_t k) { return m * k; });
      count_t best = INT64_MAX;
      for (count_t kk = 1; kk <= 4 * d; kk *= 2) best = std::min(best, qrom_cost(d, m, kk));
      CHECK(qrom_cost(d, m, k) == best);
    }
  }
}

TEST_CASE("default bit widths") {
  CHECK(default_aleph(306.3, 1e-3) == 21);
  CHECK(default_beth(108, 306.3, 1e-3) == 30);
  CHECK(default_beth(108, 306.3, 1e-3, true) == 31);
}

TEST_CASE("table reproductions") {
  const CostReport thc = cost_thc(thc_reiher());
  CHECK(thc.toffoli_total_real == doctest::Approx(5.3e9).epsilon(0.02));
  CHECK(std::abs(thc.logical_qubits - 2142) <= 2);
  CHECK(thc.toffoli_total == thc.iterations * thc.toffoli_per_step);
  CHECK(thc.iterations == iterations(306.3, 1e-3));

  const CostReport sp = cost_sparse(sparse_reiher());
  CHECK(sp.toffoli_total_real == doctest::Approx(8.8e10).epsilon(0.02));
  CHECK(std::abs(sp.logical_qubits - 2190) <= 2);

  const CostReport sf = cost_sf(sf_reiher());
  CHECK(sf.toffoli_total_real == doctest::Approx(9.5e10).epsilon(0.02));
  CHECK(std::abs(sf.logical_qubits - 3320) <= 2);

  const CostReport df = cost_df(df_reiher());
  CHECK(df.toffoli_total_real == doctest::Approx(1.0e10).epsilon(0.02));
  CHECK(std::abs(df.logical_qubits - 3725) <= 2);
}

TEST_CASE("breakdown sums to the step cost") {
  for (const CostReport& r : {cost_thc(thc_reiher()), cost_sparse(sparse_reiher()), cost_sf(sf_reiher()), cost_df(df_reiher())}) {
    count_t sum = 0;
    for (const auto& t : r.breakdown) {
      CHECK(t.toffoli >= 0);
      sum += t.toffoli;
    }
    CHECK(sum == r.toffoli_per_step);
  }
}

TEST_CASE("no single k override improves on the scan") {
  struct Case {
    CostReport (*fn)(const CostParams&);
    CostParams p;
  };
  for (auto c : {Case{cost_thc, thc_reiher()}, Case{cost_sf, sf_reiher()}, Case{cost_df, df_reiher()}}) {
    const CostReport base = c.fn(c.p);
    for (const auto& kc : base.ks) {
      for (count_t k = 1; k <= 8192; k *= 2) {
        CostParams q = c.p;
        q.k_overrides[kc.role] = k;
        CHECK(c.fn(q).toffoli_per_step >= base.toffoli_per_step);
      }
    }
  }
}

TEST_CASE("sparse k1 scan when requested") {
  CostParams p = sparse_reiher();
  const CostReport fixed = cost_sparse(p);
  p.k_overrides["k1"] = 0;
  const CostReport scanned = cost_sparse(p);
  CHECK(scanned.toffoli_per_step <= fixed.toffoli_per_step);
  p.k_overrides["k1"] = 3;
  CHECK_THROWS_AS(cost_sparse(p), Error);
}

TEST_CASE("cost is monotone in lambda and rank") {
  CostParams p = thc_reiher();
  const CostReport a = cost_thc(p);
  p.lambda *= 2;
  CHECK(cost_thc(p).toffoli_total > a.toffoli_total);
  p = thc_reiher();
  p.M = 450;
  CHECK(cost_thc(p).toffoli_per_step > a.toffoli_per_step);
}

TEST_CASE("missing inputs are rejected") {
  CostParams p;
  p.lambda = 1.0;
  CHECK_THROWS_AS(cost_thc(p), Error);
  CHECK_THROWS_AS(cost_sparse(p), Error);
  CHECK_THROWS_AS(cost_sf(p), Error);
  CHECK_THROWS_AS(cost_df(p), Error);
}
