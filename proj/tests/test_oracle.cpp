#include <doctest.h>

#include <algorithm>
#include <bit>
#include <fstream>

#include <json.hpp>

#include "qre/cost_models.hpp"
#include "qre/oracle.hpp"

using namespace qre;

TEST_CASE("one orbital against the golden file") {
  std::ifstream f(QRE_GOLDEN_DIR "/fock_n1.json");
  REQUIRE(f);
  const auto g = nlohmann::json::parse(f);
  Eigen::MatrixXd T(1, 1);
  T(0, 0) = g["Tprime"].get<double>();
  Tensor4 V(1);
  V(0, 0, 0, 0) = g["V0000"].get<double>();
  const FockMatrix F = build_exact_hamiltonian(T, V, 2);
  REQUIRE(F.H.rows() == 4);
  const auto diag = g["diagonal"].get<std::vector<double>>();
  for (int i = 0; i < 4; ++i) {
    CHECK(F.H(i, i) == doctest::Approx(diag[i]).epsilon(1e-15));
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(F.H(i, j) == 0.0);
  }
}

TEST_CASE("non-interacting spectrum is subset sums") {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(3, 3);
  T.diagonal() << -1.0, 0.25, 2.0;
  const FockMatrix F = build_exact_hamiltonian(T, Tensor4(3), 6);
  std::vector<double> expect;
  for (int s = 0; s < 64; ++s) {
    double e = 0.0;
    for (int i = 0; i < 6; ++i)
      if (s >> i & 1) e += T(i / 2, i / 2);
    expect.push_back(e);
  }
  std::sort(expect.begin(), expect.end());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F.H);
  for (int i = 0; i < 64; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("hamiltonian is symmetric and conserves particle number") {
  const IntegralData d = random_integrals(3, 17);
  const FockMatrix F = build_exact_hamiltonian(d.h, d.V, 6);
  CHECK(F.H == F.H.transpose());
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      if (std::popcount(unsigned(i)) != std::popcount(unsigned(j))) CHECK(F.H(i, j) == 0.0);
  CHECK_THROWS_AS(build_exact_hamiltonian(Eigen::MatrixXd::Zero(5, 5), Tensor4(5), 10), Error);
  CHECK_THROWS_AS(build_exact_hamiltonian(d.h, d.V, 4), Error);
}

TEST_CASE("hopping sign across an occupied mode") {
  // a+_0 a_2 acting on |mode2, mode1> picks up the parity of mode 1
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(2, 2);
  T(0, 1) = T(1, 0) = 1.0;
  const FockMatrix F = build_exact_hamiltonian(T, Tensor4(2), 4);
  CHECK(F.H(0b0001, 0b0100) == 1.0);
  CHECK(F.H(0b0011, 0b0110) == -1.0);
}

TEST_CASE("lambda bounds the spectrum for every representation") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const int n = 2 + seed % 2;
    const IntegralData d = random_integrals(n, 300 + seed);
    const Eigen::MatrixXd Tp = compute_T(d).Tprime;
    const SFRep sf = single_factorize(d, std::nullopt);
    THCRep thc;
    thc.chi = Eigen::MatrixXd::Random(n, 4);
    thc.zeta = Eigen::MatrixXd::Random(4, 4);
    thc.zeta = (thc.zeta + thc.zeta.transpose()).eval();
    for (const FactorizedRep& rep : std::vector<FactorizedRep>{sparse_truncate(d, Tp, 0.0).first, sf,
                                                                double_factorize(sf, 0.0), thc}) {
      const BoundCheck c = lambda_bounds_spectrum(rep, d);
      CHECK(c.ok);
      CHECK(c.max_deviation <= c.lambda + 1e-9);
      CHECK(c.lambda == doctest::Approx(lambda_of(rep, Tp).total()));
    }
  }
}

TEST_CASE("empty Hamiltonian has zero lambda and zero spectrum") {
  IntegralData d;
  d.n_spatial = 2;
  d.h = Eigen::MatrixXd::Zero(2, 2);
  d.V = Tensor4(2);
  THCRep thc;
  thc.chi = Eigen::MatrixXd::Ones(2, 3);
  thc.zeta = Eigen::MatrixXd::Zero(3, 3);
  const BoundCheck c = lambda_bounds_spectrum(thc, d);
  CHECK(c.lambda == 0.0);
  CHECK(c.max_deviation == 0.0);
  CHECK(c.ok);
}

TEST_CASE("contiguous schedule n = 6 and 7") {
  const ContiguousSchedule s6 = simulate_contiguous_schedule(6);
  CHECK(s6.toffoli_count == 41);
  CHECK(s6.correct);
  CHECK(s6.level_toffolis == std::vector<std::int64_t>{1, 2, 2, 3, 3, 4, 3, 3, 2, 2, 1});
  CHECK(s6.product_toffolis + s6.adder_toffolis == s6.toffoli_count);
  CHECK(!s6.rows.empty());

  const ContiguousSchedule s7 = simulate_contiguous_schedule(7);
  CHECK(s7.toffoli_count == 55);
  CHECK(s7.correct);
  CHECK(s7.level_toffolis == std::vector<std::int64_t>{1, 2, 2, 3, 3, 4, 4, 4, 3, 3, 2, 2, 1});
}

TEST_CASE("contiguous schedule is exact for n = 1..10") {
  for (int n = 1; n <= 10; ++n) {
    const ContiguousSchedule s = simulate_contiguous_schedule(n);
    CHECK(s.toffoli_count == std::int64_t(n) * n + n - 1);
    CHECK(s.toffoli_count == contiguous_register_cost(n));
    CHECK(s.correct);
  }
  CHECK_THROWS_AS(simulate_contiguous_schedule(0), Error);
}
