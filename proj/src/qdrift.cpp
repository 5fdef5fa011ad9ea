#include "qre/qdrift.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "qre/tensors.hpp"

namespace qre {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-12;
constexpr double kQuadAccept = 1e-9;

template <class F>
double integrate(F f, double a, double b) {
  if (b <= a) return 0.0;
  // short panels keep the oscillating tails well resolved
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / 2.0)));
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    double err = 0.0;
    const double lo = a + i * h, hi = (i + 1 == panels) ? b : lo + h;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, kQuadTol, &err);
    if (err > kQuadAccept * std::max(1.0, std::abs(v)))
      throw Error("window quadrature did not converge, achieved error " + std::to_string(err));
    total += v;
  }
  return total;
}

double cosine_density(double omega) {
  const double u = kPi / 2 - std::abs(omega);
  const double sinc = (u == 0.0) ? 1.0 : std::sin(u) / u;
  const double den = 2 * kPi - 2 * u;
  return 2 * kPi * sinc * sinc / (den * den);
}

double kaiser_raw(double alpha, double omega) {
  const double x = alpha * alpha - omega * omega;
  if (std::abs(x) < 1e-10) return 1.0 + x / 3.0;
  if (x > 0) {
    const double s = std::sinh(std::sqrt(x));
    return s * s / x;
  }
  const double s = std::sin(std::sqrt(-x));
  return s * s / -x;
}

/// Integral of kaiser_raw over the whole line, by Parseval against I0(alpha sqrt(1-x^2)).
double kaiser_norm(double alpha) {
  auto f = [alpha](double x) {
    const double b = boost::math::cyl_bessel_i(0, alpha * std::sqrt(std::max(0.0, 1.0 - x * x)));
    return b * b;
  };
  return 0.5 * kPi * integrate(f, -1.0, 1.0);
}

struct Density {
  Window w;
  double norm = 1.0;
  explicit Density(const Window& win) : w(win) {
    if (w.kind == WindowKind::kaiser) {
      if (!(w.alpha > 0)) throw Error("Kaiser alpha must be positive");
      norm = kaiser_norm(w.alpha);
    }
  }
  double operator()(double omega) const {
    return w.kind == WindowKind::cosine ? cosine_density(omega) : kaiser_raw(w.alpha, omega) / norm;
  }
  double mass(double a) const {
    return 2.0 * integrate([this](double x) { return (*this)(x); }, 0.0, a);
  }
  double mass_between(double a, double b) const {
    return 2.0 * integrate([this](double x) { return (*this)(x); }, a, b);
  }
};

double solve(const std::function<double(double)>& f, double lo, double hi) {
  std::uintmax_t it = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), it);
  return 0.5 * (r.first + r.second);
}

template <class F>
std::pair<double, double> minimize(F f, double lo, double hi) {
  std::uintmax_t it = 200;
  return boost::math::tools::brent_find_minima(f, lo, hi, 40, it);
}

double interval_of(const Density& p, double confidence) {
  if (!(confidence > 0 && confidence < 1)) throw Error("confidence must lie in (0,1)");
  double hi = 1.0, m = p.mass(hi);
  double lo = 0.0;
  while (m < confidence) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) throw Error("no interval reaches the requested confidence");
    m += p.mass_between(lo, hi);
  }
  const double base = p.mass(lo);
  return solve([&](double a) { return base + p.mass_between(lo, a) - confidence; }, lo, hi);
}

/// Smallest a with mass(a) - kappa a >= confidence, or infinity.
double smallest_inflated(const Density& p, double confidence, double kappa) {
  // the root lies above the plain interval; past the main lobe the excess only shrinks
  constexpr double step = 0.05;
  double a = interval_of(p, confidence);
  double m = confidence;
  double g_prev = -kappa * a;
  int falling = 0;
  for (int i = 0; i < 200 && falling < 3; ++i) {
    const double b = a + step;
    const double mb = m + p.mass_between(a, b);
    const double gb = mb - kappa * b - confidence;
    if (gb >= 0) {
      const double ma = m, lo = a;
      return solve([&](double x) { return ma + p.mass_between(lo, x) - kappa * x - confidence; }, a, b);
    }
    falling = gb < g_prev ? falling + 1 : 0;
    g_prev = gb;
    a = b;
    m = mb;
  }
  return std::numeric_limits<double>::infinity();
}

constexpr double kConfidence = 0.95;

struct HLCurves {
  double p_max = 8.0 / (kPi * kPi * kPi);
  double p2_half = 0.0;  // integral of p^2 over [0, inf)
  HLCurves() { p2_half = integrate([](double w) { return std::pow(cosine_density(w), 2); }, 0.0, 80.0); }
  double omega_cut(double c) const {
    const double h = c * p_max;
    return solve([h](double w) { return cosine_density(w) - h; }, 0.0, 1.5 * kPi);
  }
  /// integral of min(p,h)^2 over the line
  double I2(double c) const {
    const double h = c * p_max, w0 = omega_cut(c);
    const double below = integrate([](double w) { return std::pow(cosine_density(w), 2); }, 0.0, w0);
    return 2.0 * (h * h * w0 + p2_half - below);
  }
  /// integral of |p - min(p,h)| over the line
  double D(double c) const {
    const double h = c * p_max, w0 = omega_cut(c);
    return 4.0 * integrate([h](double w) { return cosine_density(w) - h; }, 0.0, w0);
  }
};

const HLCurves& hl_curves() {
  static const HLCurves c;
  return c;
}

}  // namespace

double window_density(const Window& w, double omega) { return Density(w)(omega); }

double window_mass(const Window& w, double a) { return Density(w).mass(a); }

double window_interval(const Window& w, double confidence) { return interval_of(Density(w), confidence); }

KaiserOptimum kaiser_optimize(double confidence) {
  auto r = minimize([&](double al) { return window_interval({WindowKind::kaiser, al}, confidence); }, 0.5, 6.0);
  return {r.first, r.second};
}

CIOptimum ci_optimize(double confidence) {
  auto inner = [&](double alpha, double* a_out, double* d_out) {
    const Density p({WindowKind::kaiser, alpha});
    const double a0 = interval_of(p, confidence);
    const double m0 = confidence;
    auto g = [&](double a) {
      const double delta = m0 + p.mass_between(a0, a) - confidence;
      return delta > 0 ? a * a / delta : std::numeric_limits<double>::max();
    };
    auto r = minimize(g, a0 * (1 + 1e-9), a0 + 8.0);
    if (a_out) *a_out = r.first;
    if (d_out) *d_out = r.first * r.first / r.second;
    return r.second;
  };
  auto outer = minimize([&](double al) { return inner(al, nullptr, nullptr); }, 1.5, 5.0);
  CIOptimum o;
  o.alpha = outer.first;
  o.a2_over_delta = inner(o.alpha, &o.a, &o.delta);
  return o;
}

HLOptimum hl_optimize() {
  const auto& h = hl_curves();
  auto f = [&](double c) {
    const double i2 = h.I2(c);
    return 1.0 / (6.0 * i2 * i2 * h.D(c));
  };
  auto r = minimize(f, 0.3, 0.99);
  HLOptimum o;
  o.truncation = r.first;
  o.factor = r.second;
  o.mse_factor = 1.0 / (12.0 * std::pow(2.0 * h.p2_half, 2));
  return o;
}

QdriftMode parse_qdrift_mode(const std::string& s) {
  if (s == "rms") return QdriftMode::rms;
  if (s == "confidence") return QdriftMode::confidence;
  if (s == "hodges_lehmann" || s == "hl") return QdriftMode::hodges_lehmann;
  throw Error("unknown qdrift mode: " + s);
}

std::string to_string(QdriftMode m) {
  switch (m) {
    case QdriftMode::rms: return "rms";
    case QdriftMode::confidence: return "confidence";
    case QdriftMode::hodges_lehmann: return "hodges_lehmann";
  }
  return "";
}

double qdrift_steps_at(QdriftMode mode, double lambda, double eps, double tau, double* parameter) {
  if (mode == QdriftMode::confidence) {
    const double kappa = lambda * tau / eps;
    auto a_of = [&](double al) {
      const double a = smallest_inflated(Density({WindowKind::kaiser, al}), kConfidence, kappa);
      return std::isfinite(a) ? a : 1e6;
    };
    auto r = minimize(a_of, 1.5, 5.0);
    if (r.second >= 1e6) return std::numeric_limits<double>::infinity();
    if (parameter) *parameter = r.first;
    return r.second * lambda / (eps * tau);
  }
  if (mode == QdriftMode::hodges_lehmann) {
    const auto& h = hl_curves();
    // worst-case deviation sets the truncation; balance it against the variance bound
    const double target = 2.0 * tau * lambda / (std::sqrt(12.0) * eps);
    auto prod = [&](double c) { return h.D(c) * h.I2(c); };
    auto peak = minimize([&](double c) { return -prod(c); }, 0.01, 0.999);
    if (-peak.second < target) return std::numeric_limits<double>::infinity();
    const double c = solve([&](double x) { return prod(x) - target; }, peak.first, 1.0 - 1e-12);
    if (parameter) *parameter = c;
    return h.D(c) / (2.0 * tau * tau);
  }
  throw Error("fixed-step evaluation needs confidence or hodges_lehmann mode");
}

RotationChoice choose_rotation(QdriftMode mode, double lambda, double eps, bool exhaustive) {
  double tau0 = 0.0;
  if (mode == QdriftMode::confidence) {
    const auto o = ci_optimize(kConfidence);
    tau0 = eps * o.delta / (lambda * o.a);
  } else if (mode == QdriftMode::hodges_lehmann) {
    const auto o = hl_optimize();
    const double r = o.factor * lambda * lambda / (eps * eps);
    tau0 = lambda / (std::sqrt(12.0) * r * eps * hl_curves().I2(o.truncation));
  } else {
    throw Error("rotation choice needs confidence or hodges_lehmann mode");
  }
  RotationChoice best;
  best.unrounded = tau0;
  const double floor_steps = qdrift_steps_at(mode, lambda, eps, tau0);
  double best_cost = std::numeric_limits<double>::infinity();
  const int s0 = static_cast<int>(std::floor(std::log2(kPi / tau0)));
  for (int s = s0 - 2; s <= s0 + 6; ++s) {
    // no step size beats the unconstrained optimum, so larger s cannot win once this fails
    if (floor_steps * (s + 1) >= best_cost) break;
    std::vector<int> js;
    if (exhaustive) {
      for (int j = 1; j <= 15; j += 2) js.push_back(j);
    } else {
      // steps are unimodal in lambda t, so only the odd j bracketing tau0 can win at this s
      const double x = tau0 * std::ldexp(1.0, s) / kPi;
      int below = static_cast<int>(std::floor(x));
      if (below % 2 == 0) --below;
      js = {below, below + 2};
    }
    for (int j : js) {
      if (j < 1 || j > 15) continue;
      const double tau = j * kPi / std::ldexp(1.0, s);
      if (tau < 0.6 * tau0 || tau > 1.4 * tau0) continue;
      double param = 0.0;
      const double r = qdrift_steps_at(mode, lambda, eps, tau, &param);
      const double cost = r * (s + 1);
      if (cost < best_cost) {
        best_cost = cost;
        best.j = j;
        best.s = s;
        best.steps = r;
        best.parameter = param;
      }
    }
  }
  if (!std::isfinite(best_cost)) throw Error("no feasible dyadic step size");
  return best;
}

CostReport cost_qdrift(double lambda, double eps, count_t N, QdriftMode mode) {
  if (!(lambda > 0) || !(eps > 0)) throw Error("lambda and eps must be positive");
  if (N < 1) throw Error("cost_qdrift needs N >= 1");
  CostReport r;
  r.method = "qdrift_" + to_string(mode);
  const double l2 = lambda * lambda / (eps * eps);
  if (mode == QdriftMode::rms) {
    const double n_exp = 8 * kPi * kPi * l2 * l2;
    const double q = 0.5 * std::log2(32 * std::pow(kPi, 4) * l2 * l2 * l2) + 1.0;
    r.toffoli_total_real = 4 * kPi * kPi * l2 * l2 * std::log2(32 * std::pow(kPi, 4) * l2 * l2 * l2);
    r.logical_qubits = static_cast<count_t>(std::ceil(double(N) + 2 * std::log2(2 * l2) + 2));
    r.info = {{"n_exp", n_exp}, {"rotation_bits", q}};
    return r;
  }
  const RotationChoice rc = choose_rotation(mode, lambda, eps);
  double n_exp;
  if (mode == QdriftMode::confidence) {
    const auto o = ci_optimize(kConfidence);
    n_exp = o.a2_over_delta * l2;
    r.info["alpha"] = o.alpha;
    r.info["alpha_adjusted"] = rc.parameter;
  } else {
    const auto o = hl_optimize();
    n_exp = o.factor * l2;
    r.info["truncation"] = o.truncation;
    r.info["truncation_adjusted"] = rc.parameter;
  }
  r.toffoli_per_step = rc.s + 1;
  r.breakdown = {{"rotation", rc.s - 1}, {"segment_overhead", 2}};
  r.toffoli_total_real = rc.steps * (rc.s + 1);
  // the window's control register runs over -r..r, so r is half the segment count
  const count_t half = static_cast<count_t>(std::ceil(rc.steps / 2.0));
  r.logical_qubits = N + (rc.s + 1) + 2 * ceil_log2(half + 1) - 1 + rc.s;
  r.info["n_exp"] = n_exp;
  r.info["n_exp_adjusted"] = rc.steps;
  r.info["step_j"] = rc.j;
  r.info["step_s"] = rc.s;
  r.info["lambda_t"] = rc.j * kPi / std::ldexp(1.0, rc.s);
  r.info["lambda_t_unrounded"] = rc.unrounded;
  return r;
}

}  // namespace qre
