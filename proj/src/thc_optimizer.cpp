#include "qre/thc_optimizer.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <ceres/ceres.h>

namespace qre {

namespace {

Eigen::MatrixXd pair_products(const Eigen::MatrixXd& chi) {
  const int n = static_cast<int>(chi.rows()), M = static_cast<int>(chi.cols());
  Eigen::MatrixXd E(n * n, M);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) E.row(p * n + q) = chi.row(p).cwiseProduct(chi.row(q));
  return E;
}

struct Problem {
  Eigen::MatrixXd Vf;  // flattened target
  int n, M;

  int size() const { return n * M + M * M; }

  THCRep unpack(const double* x) const {
    THCRep r;
    r.chi = Eigen::Map<const Eigen::MatrixXd>(x, n, M);
    r.zeta = Eigen::Map<const Eigen::MatrixXd>(x + n * M, M, M);
    return r;
  }

  static void pack(const THCRep& r, double* x) {
    const auto nm = r.chi.size();
    Eigen::Map<Eigen::MatrixXd>(x, r.chi.rows(), r.chi.cols()) = r.chi;
    Eigen::Map<Eigen::MatrixXd>(x + nm, r.zeta.rows(), r.zeta.cols()) = r.zeta;
  }

  double eval(const double* x, double* g) const {
    const THCRep r = unpack(x);
    const Eigen::MatrixXd E = pair_products(r.chi);
    const Eigen::MatrixXd R = Vf - E * r.zeta * E.transpose();
    const double f = R.squaredNorm();
    if (g) {
      const Eigen::MatrixXd dz = -2.0 * E.transpose() * R * E;
      const Eigen::MatrixXd S = -2.0 * (R * E * r.zeta.transpose() + R.transpose() * E * r.zeta);
      Eigen::Map<Eigen::MatrixXd> dchi(g, n, M);
      dchi.setZero();
      for (int a = 0; a < n; ++a)
        for (int q = 0; q < n; ++q)
          dchi.row(a) += (S.row(a * n + q) + S.row(q * n + a)).cwiseProduct(r.chi.row(q));
      Eigen::Map<Eigen::MatrixXd>(g + n * M, M, M) = dz;
    }
    return f;
  }
};

class CeresObjective : public ceres::FirstOrderFunction {
 public:
  explicit CeresObjective(const Problem& p) : p_(p) {}
  bool Evaluate(const double* x, double* cost, double* grad) const override {
    *cost = p_.eval(x, grad);
    return std::isfinite(*cost);
  }
  int NumParameters() const override { return p_.size(); }

 private:
  const Problem& p_;
};

struct Restart {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  bool ok = false;
};

Restart run_restart(const Problem& prob, const FitConfig& cfg, std::uint64_t seed) {
  const int n = prob.n, M = prob.M;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  THCRep init;
  init.chi.resize(n, M);
  for (int j = 0; j < M; ++j)
    for (int p = 0; p < n; ++p) init.chi(p, j) = g(rng) / std::sqrt(double(n));
  // least-squares zeta for the random chi
  const Eigen::MatrixXd E = pair_products(init.chi);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(E);
  const Eigen::MatrixXd Ep = cod.pseudoInverse();
  init.zeta = Ep * prob.Vf * Ep.transpose();
  init.zeta = (0.5 * (init.zeta + init.zeta.transpose())).eval();

  Restart out;
  out.x.resize(prob.size());
  Problem::pack(init, out.x.data());
  if (!std::isfinite(prob.eval(out.x.data(), nullptr))) return out;

  ceres::GradientProblem problem(new CeresObjective(prob));
  ceres::GradientProblemSolver::Options opt;
  opt.line_search_direction_type = ceres::LBFGS;
  opt.max_num_iterations = cfg.max_iters_lbfgs;
  opt.function_tolerance = cfg.rel_tol;
  opt.gradient_tolerance = 1e-30;
  opt.parameter_tolerance = 1e-30;
  opt.logging_type = ceres::SILENT;
  opt.minimizer_progress_to_stdout = false;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opt, problem, out.x.data(), &summary);
  if (!std::isfinite(summary.final_cost)) return out;

  // per-coordinate steps scaled by accumulated squared gradients
  std::vector<double> x = out.x, grad(x.size()), acc(x.size(), 0.0);
  double best = prob.eval(x.data(), nullptr);
  std::vector<double> best_x = x;
  double last = best;
  for (int it = 0; it < cfg.max_iters_adagrad; ++it) {
    const double f = prob.eval(x.data(), grad.data());
    if (!std::isfinite(f)) return out;
    if (f < best) {
      best = f;
      best_x = x;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      acc[i] += grad[i] * grad[i];
      x[i] -= cfg.adagrad_step * grad[i] / (std::sqrt(acc[i]) + cfg.adagrad_eps);
    }
    if ((it + 1) % 100 == 0) {
      if (last - best <= cfg.rel_tol * std::max(last, 1e-300)) break;
      last = best;
    }
  }
  const double f = prob.eval(x.data(), nullptr);
  if (std::isfinite(f) && f < best) {
    best = f;
    best_x = x;
  }
  out.x = best_x;
  out.f = best;
  out.ok = true;
  return out;
}

}  // namespace

double thc_objective(const Tensor4& V, const THCRep& rep) {
  const Tensor4 G = thc_reconstruct(rep);
  double s = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    const double d = V.data()[i] - G.data()[i];
    s += d * d;
  }
  return s;
}

THCGradient thc_gradient(const Tensor4& V, const THCRep& rep) {
  Problem p{V.flatten(), rep.n(), rep.M()};
  std::vector<double> x(p.size()), g(p.size());
  Problem::pack(rep, x.data());
  p.eval(x.data(), g.data());
  THCGradient out;
  out.dchi = Eigen::Map<Eigen::MatrixXd>(g.data(), p.n, p.M);
  out.dzeta = Eigen::Map<Eigen::MatrixXd>(g.data() + p.n * p.M, p.M, p.M);
  return out;
}

void normalize_columns(THCRep& rep) {
  for (int j = 0; j < rep.M(); ++j) {
    const double c = rep.chi.col(j).norm();
    if (c == 0.0) {
      rep.chi.col(j).setZero();
      rep.chi(0, j) = 1.0;
      rep.zeta.row(j).setZero();
      rep.zeta.col(j).setZero();
      continue;
    }
    rep.chi.col(j) /= c;
    rep.zeta.row(j) *= c * c;
    rep.zeta.col(j) *= c * c;
  }
  rep.zeta = (0.5 * (rep.zeta + rep.zeta.transpose())).eval();
}

FitResult thc_fit(const Tensor4& V, const FitConfig& cfg) {
  if (cfg.M < 1) throw Error("THC rank M must be at least 1");
  if (cfg.n_starts < 1) throw Error("need at least one start");
  Problem prob{V.flatten(), V.dim(), cfg.M};
  FitResult res;
  res.objective = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  for (int i = 0; i < cfg.n_starts; ++i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    Restart r = run_restart(prob, cfg, seed);
    if (!r.ok) {
      ++res.aborted;
      continue;
    }
    if (r.f < res.objective) {
      res.objective = r.f;
      res.seed = seed;
      best_x = std::move(r.x);
    }
  }
  if (best_x.empty()) throw Error("every THC restart aborted");
  res.rep = prob.unpack(best_x.data());
  normalize_columns(res.rep);
  res.objective = thc_objective(V, res.rep);
  return res;
}

Eigen::VectorXd angles_from_chi(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  if (n < 1) throw Error("empty vector");
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
  // tail[p] = norm of v[p:]
  Eigen::VectorXd tail(n + 1);
  tail(n) = 0.0;
  for (int p = n - 1; p >= 0; --p) tail(p) = std::hypot(tail(p + 1), v(p));
  for (int p = 0; p < n; ++p) {
    const double R = tail(p);
    if (R < 1e-14) {
      for (int k = p; k < n; ++k)
        if (std::abs(v(k)) >= 1e-12) throw Error("angle recursion lost a non-negligible component");
      break;
    }
    theta(p) = 0.5 * std::acos(std::clamp(v(p) / R, -1.0, 1.0));
  }
  return theta;
}

Eigen::VectorXd chi_from_angles(const Eigen::VectorXd& theta) {
  const int n = static_cast<int>(theta.size());
  Eigen::VectorXd v(n);
  double prod = 1.0;
  for (int p = 0; p < n; ++p) {
    v(p) = prod * std::cos(2.0 * theta(p));
    prod *= std::sin(2.0 * theta(p));
  }
  return v;
}

double quantization_residual(const Eigen::MatrixXd& zeta, double uo, double ud, double x) {
  double s = 0.0;
  for (int i = 0; i < zeta.rows(); ++i)
    for (int j = 0; j < zeta.cols(); ++j) {
      const double u = (i == j) ? ud : uo;
      s += u * std::max(0.0, std::round(std::abs(zeta(i, j)) / u + x)) - std::abs(zeta(i, j));
    }
  return s;
}

THCRep QuantizedTHC::rep() const {
  THCRep r;
  r.chi.resize(theta.rows(), theta.cols());
  for (int j = 0; j < theta.cols(); ++j) r.chi.col(j) = chi_from_angles(theta.col(j));
  r.zeta = zeta_q;
  return r;
}

QuantizedTHC quantize(const THCRep& rep, int beth, int aleph) {
  if (beth < 2 || aleph < 2) throw Error("beth and aleph must be at least 2");
  const int n = rep.n(), M = rep.M();
  QuantizedTHC q;
  q.beth = beth;
  q.aleph = aleph;
  q.unit_theta = 2.0 * std::numbers::pi / std::ldexp(1.0, beth);
  q.theta.resize(n, M);
  for (int j = 0; j < M; ++j) {
    const Eigen::VectorXd t = angles_from_chi(rep.chi.col(j) / rep.chi.col(j).norm());
    for (int p = 0; p < n; ++p) q.theta(p, j) = q.unit_theta * std::round(t(p) / q.unit_theta);
  }

  const double lz = rep.zeta.cwiseAbs().sum();
  q.lambda_zeta_pre = 0.5 * lz;
  const double d = double(M) * (M + 1) / 2.0;
  q.unit_offdiag = lz / (d * std::ldexp(1.0, aleph));
  q.unit_diag = lz / (d * std::ldexp(1.0, aleph - 1));
  if (lz == 0.0) {
    q.zeta_q = rep.zeta;
    return q;
  }
  auto R = [&](double x) { return quantization_residual(rep.zeta, q.unit_offdiag, q.unit_diag, x); };
  const double tol = 1e-5 * lz;
  double x = 0.0;
  bool found = false;
  if (R(-1.0) <= 0.0 && R(1.0) >= 0.0) {
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (R(mid) < 0.0 ? lo : hi) = mid;
    }
    x = std::abs(R(lo)) <= std::abs(R(hi)) ? lo : hi;
    found = std::abs(R(x)) <= tol;
  }
  if (!found) {
    constexpr int grid = 100000;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
      const double xi = -1.0 + 2.0 * i / grid;
      const double r = std::abs(R(xi));
      if (r < best) {
        best = r;
        x = xi;
      }
    }
    found = best <= tol;
  }
  if (!found) {
    x = 0.0;
    q.normalization_fallback = true;
  }
  q.x = x;
  q.zeta_q.resize(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      const double u = (i == j) ? q.unit_diag : q.unit_offdiag;
      const double z = rep.zeta(i, j);
      q.zeta_q(i, j) = std::copysign(u * std::max(0.0, std::round(std::abs(z) / u + x)), z);
    }
  q.lambda_zeta_post = 0.5 * q.zeta_q.cwiseAbs().sum();
  return q;
}

}  // namespace qre
