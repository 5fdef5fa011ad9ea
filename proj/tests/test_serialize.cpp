#include <doctest.h>

#include "qre/serialize.hpp"

using namespace qre;

namespace {

FactorizedRep round_trip(const FactorizedRep& rep, const LambdaReport& lam) {
  return rep_from_json(json::parse(rep_json(rep, lam).dump()));
}

}  // namespace

TEST_CASE("matrices survive JSON exactly") {
  Eigen::MatrixXd m(2, 3);
  m << 1.0 / 3.0, -2e-300, 5.0, 0.1, 1e300, -0.0;
  CHECK(matrix_from_json(json::parse(matrix_json(m).dump())) == m);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1,2],[3]]")), Error);
}

TEST_CASE("representations round trip") {
  const IntegralData d = random_integrals(3, 31);
  const Eigen::MatrixXd Tp = compute_T(d).Tprime;

  auto [sp, sl] = sparse_truncate(d, Tp, 0.01);
  const auto sp2 = std::get<SparseRep>(round_trip(sp, sl));
  CHECK(sp2.d == sp.d);
  CHECK(sp2.tensor() == sp.tensor());

  const SFRep sf = single_factorize(d, std::nullopt);
  const auto sf2 = std::get<SFRep>(round_trip(sf, lambda_sf(sf, Tp)));
  CHECK(sf2.tensor() == sf.tensor());

  const DFRep df = double_factorize(sf, 1e-3);
  const json dj = rep_json(df, lambda_df(df, Tp));
  CHECK(dj["cost_inputs"]["Xi_total"] == df.Xi_total());
  CHECK(dj["cost_inputs"]["N"] == 6);
  const auto df2 = std::get<DFRep>(rep_from_json(json::parse(dj.dump())));
  CHECK(df2.Xi_total() == df.Xi_total());
  CHECK(df2.tensor() == df.tensor());

  THCRep thc;
  thc.chi = Eigen::MatrixXd::Random(3, 4);
  thc.zeta = Eigen::MatrixXd::Random(4, 4);
  const json tj = rep_json(thc, lambda_thc(thc, Tp));
  CHECK(tj["cost_inputs"]["M"] == 4);
  CHECK(tj["lambda"]["total"].get<double>() == doctest::Approx(lambda_thc(thc, Tp).total()));
  const auto thc2 = std::get<THCRep>(rep_from_json(json::parse(tj.dump())));
  CHECK(thc2.chi == thc.chi);
  CHECK(thc2.zeta == thc.zeta);

  CHECK_THROWS_AS(rep_from_json(json{{"method", "mps"}, {"n", 2}}), Error);
}

TEST_CASE("cost report fields") {
  CostReport r;
  r.method = "thc";
  r.iterations = 10;
  r.toffoli_per_step = 3;
  r.toffoli_total = 30;
  r.toffoli_total_real = 30.0;
  r.ks = {{"k_s1", 64}};
  r.breakdown = {{"select", 3}};
  const json j = cost_json(r);
  CHECK(j["toffoli_total_exact"] == 30);
  CHECK(j["k"]["k_s1"] == 64);
  CHECK(j["breakdown"]["select"] == 3);
  r.toffoli_total = 0;
  CHECK(!cost_json(r).contains("toffoli_total_exact"));
}

TEST_CASE("serialization is byte stable") {
  const IntegralData d = random_integrals(2, 4);
  const SFRep sf = single_factorize(d, std::nullopt);
  const LambdaReport lam = lambda_sf(sf, compute_T(d).Tprime);
  CHECK(rep_json(sf, lam).dump(2) == rep_json(sf, lam).dump(2));
  PhysicalAssumptions a;
  CHECK(assumptions_json(a)["factory_count"] == 4);
  CHECK(estimate_json(layout_estimate({0.0, std::nullopt, 10.0}, a))["runtime_days"] == 0.0);
}
