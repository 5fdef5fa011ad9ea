#include "qre/factorizations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qre {

Tensor4 SparseRep::tensor() const {
  Tensor4 t(n);
  for (const auto& e : entries) t.set_symmetric(e.p, e.q, e.r, e.s, e.value);
  return t;
}

Tensor4 SFRep::tensor() const {
  const int n2 = n * n;
  Eigen::MatrixXd flat = Eigen::MatrixXd::Zero(n2, n2);
  for (const auto& w : W) {
    Eigen::VectorXd v(n2);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) v(p * n + q) = w(p, q);
    flat.noalias() += v * v.transpose();
  }
  return Tensor4::from_flat(flat, n);
}

std::int64_t DFRep::Xi_total() const {
  std::int64_t s = 0;
  for (const auto& b : blocks) s += b.f.size();
  return s;
}

int DFRep::Xi_max() const {
  int m = 0;
  for (const auto& b : blocks) m = std::max(m, static_cast<int>(b.f.size()));
  return m;
}

Tensor4 DFRep::tensor() const {
  SFRep sf;
  sf.n = n;
  for (const auto& b : blocks) sf.W.push_back(b.U * b.f.asDiagonal() * b.U.transpose());
  return sf.tensor();
}

std::pair<SparseRep, LambdaReport> sparse_truncate(const IntegralData& data, const Eigen::MatrixXd& Tprime,
                                                   double threshold) {
  const int n = data.n_spatial;
  SparseRep rep;
  rep.n = n;
  rep.threshold = threshold;
  rep.Tprime = Tprime;
  double two = 0.0;
  for_each_unique(n, [&](int p, int q, int r, int s) {
    const double v = data.V(p, q, r, s);
    if (std::abs(v) > threshold) {
      rep.entries.push_back({p, q, r, s, v});
      two += symmetry_multiplicity(p, q, r, s) * std::abs(v);
    }
  });
  rep.d = static_cast<std::int64_t>(rep.entries.size()) + std::int64_t(n) * (n + 1) / 2;
  LambdaReport lam;
  lam.method = "sparse";
  lam.lambda_one = Tprime.cwiseAbs().sum();
  lam.lambda_two = 0.5 * two;
  return {rep, lam};
}

SFRep single_factorize(const IntegralData& data, std::optional<int> target_L, double tol) {
  const int n = data.n_spatial;
  const int n2 = n * n;
  const Eigen::MatrixXd M = data.V.flatten();
  Eigen::VectorXd diag = M.diagonal();
  std::vector<Eigen::VectorXd> vecs;
  const int cap = target_L ? std::min(*target_L, n2) : n2;
  if (target_L && *target_L < 1) throw Error("target L must be at least 1");

  bool by_tol = false;
  while (static_cast<int>(vecs.size()) < cap) {
    if (diag.minCoeff() < -kCholeskyClip) throw Error("flattened V is indefinite beyond clipping tolerance");
    Eigen::Index j = 0;
    const double dmax = diag.maxCoeff(&j);
    if (dmax <= tol) {
      by_tol = true;
      break;
    }
    Eigen::VectorXd w = M.col(j);
    for (const auto& u : vecs) w -= u(j) * u;
    w /= std::sqrt(dmax);
    diag -= w.cwiseProduct(w);
    diag(j) = 0.0;
    vecs.push_back(std::move(w));
  }
  if (diag.minCoeff() < -kCholeskyClip) throw Error("flattened V is indefinite beyond clipping tolerance");
  if (by_tol || static_cast<int>(vecs.size()) == n2) {
    // a PSD residual obeys |R_ij| <= sqrt(R_ii R_jj)
    Eigen::MatrixXd R = M;
    for (const auto& u : vecs) R.noalias() -= u * u.transpose();
    for (int i = 0; i < n2; ++i)
      for (int k = 0; k < n2; ++k) {
        const double bound = std::sqrt(std::max(R(i, i), 0.0) * std::max(R(k, k), 0.0));
        if (std::abs(R(i, k)) > bound + kCholeskyClip)
          throw Error("flattened V is indefinite beyond clipping tolerance");
      }
  }

  SFRep rep;
  rep.n = n;
  for (const auto& u : vecs) {
    Eigen::MatrixXd W(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) W(p, q) = u(p * n + q);
    rep.W.push_back(0.5 * (W + W.transpose()));
  }
  return rep;
}

LambdaReport lambda_sf(const SFRep& rep, const Eigen::MatrixXd& Tprime) {
  LambdaReport lam;
  lam.method = "sf";
  lam.lambda_one = Tprime.cwiseAbs().sum();
  for (const auto& w : rep.W) {
    const double s = w.cwiseAbs().sum();
    lam.lambda_two += 0.25 * s * s;
  }
  return lam;
}

DFRep double_factorize(const SFRep& sf, double threshold) {
  DFRep rep;
  rep.n = sf.n;
  rep.threshold = threshold;
  for (const auto& W : sf.W) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
    const Eigen::VectorXd& ev = es.eigenvalues();
    std::vector<int> order(ev.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(ev(a)) > std::abs(ev(b)); });
    const double full = ev.cwiseAbs().sum();
    if (full == 0.0) continue;
    std::vector<int> kept;
    for (int m : order)
      if (full * std::abs(ev(m)) >= threshold) kept.push_back(m);
    if (kept.empty()) continue;
    DFBlock b;
    b.f_abs_sum_full = full;
    b.f.resize(kept.size());
    b.U.resize(sf.n, kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      b.f(i) = ev(kept[i]);
      b.U.col(i) = es.eigenvectors().col(kept[i]);
    }
    rep.blocks.push_back(std::move(b));
  }
  return rep;
}

double schatten_norm(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

LambdaReport lambda_df(const DFRep& rep, const Eigen::MatrixXd& Tprime) {
  LambdaReport lam;
  lam.method = "df";
  lam.lambda_one = schatten_norm(Tprime);
  for (const auto& b : rep.blocks) {
    const double s = b.f.cwiseAbs().sum();
    lam.lambda_two += 0.25 * s * s;
  }
  return lam;
}

Tensor4 thc_reconstruct(const THCRep& rep) {
  const int n = rep.n(), M = rep.M();
  // E(pq, mu) = chi_p^mu chi_q^mu
  Eigen::MatrixXd E(n * n, M);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) E.row(p * n + q) = rep.chi.row(p).cwiseProduct(rep.chi.row(q));
  return Tensor4::from_flat(E * rep.zeta * E.transpose(), n);
}

LambdaReport lambda_thc(const THCRep& rep, const Eigen::MatrixXd& Tprime) {
  LambdaReport lam;
  lam.method = "thc";
  lam.lambda_one = schatten_norm(Tprime);
  lam.lambda_two = 0.5 * rep.zeta.cwiseAbs().sum();
  return lam;
}

LambdaReport lambda_thc(const THCRep& rep, const IntegralData& data) {
  return lambda_thc(rep, compute_T(data).Tprime);
}

double lambda_thc_naive(const THCRep& rep) {
  const Eigen::VectorXd col = rep.chi.cwiseAbs().colwise().sum().transpose();
  const Eigen::VectorXd sq = col.cwiseProduct(col);
  return (sq.asDiagonal() * rep.zeta.cwiseAbs() * sq.asDiagonal()).sum();
}

ReconstructionErrors reconstruction_errors(const Tensor4& V, const Tensor4& approx) {
  if (V.dim() != approx.dim()) throw Error("tensor dimensions differ");
  ReconstructionErrors e;
  double sq = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    const double d = V.data()[i] - approx.data()[i];
    e.eps_co += std::abs(d);
    sq += d * d;
  }
  e.eps_in = std::sqrt(sq);
  return e;
}

int two_adic(std::int64_t x) {
  if (x < 1) throw Error("two_adic needs a positive argument");
  int e = 0;
  while ((x & 1) == 0) {
    x >>= 1;
    ++e;
  }
  return e;
}

Tensor4 rep_tensor(const FactorizedRep& rep) {
  return std::visit(
      [](const auto& r) -> Tensor4 {
        if constexpr (std::is_same_v<std::decay_t<decltype(r)>, THCRep>)
          return thc_reconstruct(r);
        else
          return r.tensor();
      },
      rep);
}

double identity_shift(const FactorizedRep& rep, const Eigen::MatrixXd& Tprime, const LambdaReport& lam) {
  const Tensor4 G = rep_tensor(rep);
  const int n = G.dim();
  double gsum = 0.0;
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) gsum += G(p, p, r, r);
  double shift = Tprime.trace() - 0.5 * gsum;
  if (std::holds_alternative<SFRep>(rep) || std::holds_alternative<DFRep>(rep)) shift += lam.lambda_two;
  return shift;
}

}  // namespace qre
