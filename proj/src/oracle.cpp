#include "qre/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace qre {

namespace {

/// a+_i a_j applied to a basis state; returns false when the result vanishes.
bool hop(int i, int j, std::uint32_t in, std::uint32_t& out, int& sign) {
  if (!(in >> j & 1u)) return false;
  std::uint32_t s = in & ~(1u << j);
  int parity = std::popcount(in & ((1u << j) - 1u));
  if (s >> i & 1u) return false;
  parity += std::popcount(s & ((1u << i) - 1u));
  out = s | (1u << i);
  sign = (parity & 1) ? -1 : 1;
  return true;
}

}  // namespace

FockMatrix build_exact_hamiltonian(const Eigen::MatrixXd& h1, const Tensor4& V, int N) {
  if (N > kMaxFockModes) throw Error("exact Hamiltonian limited to N <= 8 spin orbitals");
  const int n = V.dim();
  if (N != 2 * n || h1.rows() != n || h1.cols() != n) throw Error("N must equal twice the orbital count");
  const std::uint32_t dim = 1u << N;
  FockMatrix F;
  F.N = N;
  F.H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint32_t b = 0; b < dim; ++b) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int sg = 0; sg < 2; ++sg) {
          std::uint32_t b1;
          int s1;
          if (!hop(2 * p + sg, 2 * q + sg, b, b1, s1)) continue;
          F.H(b1, b) += h1(p, q) * s1;
          for (int r = 0; r < n; ++r)
            for (int t = 0; t < n; ++t) {
              const double v = V(r, t, p, q);
              if (v == 0.0) continue;
              for (int tg = 0; tg < 2; ++tg) {
                std::uint32_t b2;
                int s2;
                if (!hop(2 * r + tg, 2 * t + tg, b1, b2, s2)) continue;
                F.H(b2, b) += 0.5 * v * s1 * s2;
              }
            }
        }
  }
  // summation order leaves rounding-level asymmetry; anything larger is a sign bug
  const double asym = (F.H - F.H.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * std::max(1.0, F.H.cwiseAbs().maxCoeff())) throw Error("exact Hamiltonian is not symmetric");
  F.H = (0.5 * (F.H + F.H.transpose())).eval();
  return F;
}

LambdaReport lambda_of(const FactorizedRep& rep, const Eigen::MatrixXd& Tprime) {
  return std::visit(
      [&](const auto& r) -> LambdaReport {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SparseRep>) {
          LambdaReport lam;
          lam.method = "sparse";
          lam.lambda_one = Tprime.cwiseAbs().sum();
          for (const auto& e : r.entries) lam.lambda_two += 0.5 * symmetry_multiplicity(e.p, e.q, e.r, e.s) * std::abs(e.value);
          return lam;
        } else if constexpr (std::is_same_v<T, SFRep>) {
          return lambda_sf(r, Tprime);
        } else if constexpr (std::is_same_v<T, DFRep>) {
          return lambda_df(r, Tprime);
        } else {
          return lambda_thc(r, Tprime);
        }
      },
      rep);
}

BoundCheck lambda_bounds_spectrum(const FactorizedRep& rep, const IntegralData& data, double slack) {
  const Eigen::MatrixXd Tp = compute_T(data).Tprime;
  const Tensor4 G = rep_tensor(rep);
  const LambdaReport lam = lambda_of(rep, Tp);
  const FockMatrix F = build_exact_hamiltonian(Tp - coulomb_contraction(G), G, data.n_spin());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F.H, Eigen::EigenvaluesOnly);
  BoundCheck c;
  c.method = lam.method;
  c.lambda = lam.total();
  c.shift = identity_shift(rep, Tp, lam);
  c.max_deviation = (es.eigenvalues().array() - c.shift).abs().maxCoeff();
  c.ok = c.max_deviation <= c.lambda + slack;
  return c;
}

namespace {

struct Bit {
  enum Kind { Q, P, PP } kind;
  int a, b;
  std::string name() const {
    if (kind == Q) return "q" + std::to_string(a);
    if (kind == P) return "p" + std::to_string(a);
    return "p" + std::to_string(a) + "p" + std::to_string(b);
  }
};

struct Sources {
  std::map<int, std::vector<Bit>> at;  // exponent -> bits
  std::vector<ScheduleRow> rows;
  void add(int e, const std::string& line, std::vector<Bit> bits) {
    ScheduleRow r;
    r.level = e + 1;
    r.line = line;
    for (const auto& b : bits) r.bits.push_back(b.name());
    rows.push_back(r);
    auto& v = at[e];
    v.insert(v.end(), bits.begin(), bits.end());
  }
};

Bit q(int j) { return {Bit::Q, j, 0}; }
Bit p(int j) { return {Bit::P, j, 0}; }
Bit pp(int j, int k) { return {Bit::PP, std::max(j, k), std::min(j, k)}; }

Sources expand(int n) {
  Sources s;
  if (n == 1) {
    s.add(0, "single", {q(0), p(0)});
    return s;
  }
  if (n % 2 == 0) {
    s.add(0, "even.a", {q(0), p(0), p(1)});
    for (int l = 1; l <= n / 2 - 1; ++l) {
      std::vector<Bit> b{q(2 * l - 1), p(2 * l), p(l)};
      for (int j = 0; j <= l - 1; ++j) b.push_back(pp(2 * l - 1 - j, j));
      s.add(2 * l - 1, "even.b", b);
      std::vector<Bit> c{q(2 * l), p(2 * l + 1)};
      for (int j = 0; j <= l - 1; ++j) c.push_back(pp(2 * l - j, j));
      s.add(2 * l, "even.c", c);
    }
    {
      std::vector<Bit> d{q(n - 1), p(n / 2)};
      for (int j = 0; j <= n / 2 - 1; ++j) d.push_back(pp(n - 1 - j, j));
      s.add(n - 1, "even.d", d);
    }
    for (int l = n / 2; l <= n - 2; ++l) {
      std::vector<Bit> e;
      for (int j = 2 * l - n + 1; j <= l - 1; ++j) e.push_back(pp(2 * l - j, j));
      s.add(2 * l, "even.e", e);
      std::vector<Bit> f{p(l + 1)};
      for (int j = 2 * l - n + 1; j <= l - 1; ++j) f.push_back(pp(2 * l - j, j + 1));
      s.add(2 * l + 1, "even.f", f);
    }
  } else {
    s.add(0, "odd.a", {q(0), p(0), p(1)});
    for (int l = 1; l <= (n - 1) / 2; ++l) {
      std::vector<Bit> b{q(2 * l - 1), p(2 * l), p(l)};
      for (int j = 0; j <= l - 1; ++j) b.push_back(pp(2 * l - 1 - j, j));
      s.add(2 * l - 1, "odd.b", b);
    }
    for (int l = 1; l <= (n - 3) / 2; ++l) {
      std::vector<Bit> c{q(2 * l), p(2 * l + 1)};
      for (int j = 0; j <= l - 1; ++j) c.push_back(pp(2 * l - j, j));
      s.add(2 * l, "odd.c", c);
    }
    {
      std::vector<Bit> d{q(n - 1)};
      for (int j = 0; j <= (n - 3) / 2; ++j) d.push_back(pp(n - 1 - j, j));
      s.add(n - 1, "odd.d", d);
    }
    for (int l = (n + 1) / 2; l <= n - 1; ++l) {
      std::vector<Bit> e{p(l)};
      for (int j = 2 * l - n; j <= l - 1; ++j) e.push_back(pp(2 * l - 1 - j, j));
      s.add(2 * l - 1, "odd.e", e);
    }
    for (int l = (n + 1) / 2; l <= n - 2; ++l) {
      std::vector<Bit> f;
      for (int j = 2 * l - n + 1; j <= l - 1; ++j) f.push_back(pp(2 * l - j, j));
      s.add(2 * l, "odd.f", f);
    }
  }
  return s;
}

}  // namespace

ContiguousSchedule simulate_contiguous_schedule(int n, bool check_all) {
  if (n < 1 || n > 16) throw Error("contiguous schedule supports 1..16 bits");
  ContiguousSchedule out;
  out.n = n;
  const Sources src = expand(n);
  out.rows = src.rows;

  // every product p_j p_k costs one Toffoli
  std::map<std::pair<int, int>, int> products;
  for (const auto& [e, bits] : src.at)
    for (const auto& b : bits)
      if (b.kind == Bit::PP) ++products[{b.a, b.b}];
  out.product_toffolis = static_cast<std::int64_t>(products.size());
  bool products_once = products.size() == std::size_t(n) * (n - 1) / 2;
  for (const auto& [k, c] : products) products_once = products_once && c == 1;

  const int top = src.at.rbegin()->first;
  std::int64_t carry = 0;
  for (int e = 0;; ++e) {
    const std::int64_t m = (src.at.count(e) ? std::int64_t(src.at.at(e).size()) : 0) + carry;
    if (e > top && m <= 1) break;
    out.level_toffolis.push_back(m / 2);
    out.adder_toffolis += m / 2;
    carry = m / 2;
  }
  while (!out.level_toffolis.empty() && out.level_toffolis.back() == 0) out.level_toffolis.pop_back();
  out.toffoli_count = out.product_toffolis + out.adder_toffolis;

  if (!check_all) {
    out.correct = products_once;
    return out;
  }
  using W = std::uint64_t;
  const std::uint64_t range = std::uint64_t{1} << n;
  const int lanes = static_cast<int>(std::min<std::uint64_t>(64, range));
  const W lane_mask = lanes == 64 ? ~W{0} : ((W{1} << lanes) - 1);
  bool ok = products_once;
  std::vector<std::vector<W>> level(top + 2 * n + 4);
  std::vector<W> qbit(n);
  for (std::uint64_t pv = 0; pv < range && ok; ++pv) {
    for (std::uint64_t q0 = 0; q0 < range && ok; q0 += lanes) {
      for (int j = 0; j < n; ++j) {
        W w = 0;
        for (int l = 0; l < lanes; ++l) w |= W(((q0 + l) >> j) & 1u) << l;
        qbit[j] = w;
      }
      auto val = [&](const Bit& b) -> W {
        auto pb = [&](int j) -> W { return ((pv >> j) & 1u) ? lane_mask : 0; };
        if (b.kind == Bit::Q) return qbit[b.a];
        if (b.kind == Bit::P) return pb(b.a);
        return pb(b.a) & pb(b.b);
      };
      for (auto& v : level) v.clear();
      for (const auto& [e, bits] : src.at)
        for (const auto& b : bits) level[e].push_back(val(b));
      std::vector<W> out_bits(level.size(), 0);
      for (std::size_t e = 0; e < level.size(); ++e) {
        auto& v = level[e];
        while (v.size() >= 3) {
          const W a = v.back();
          v.pop_back();
          const W b = v.back();
          v.pop_back();
          const W c = v.back();
          v.pop_back();
          v.push_back(a ^ b ^ c);
          if (e + 1 >= level.size()) {
            ok = false;
            break;
          }
          level[e + 1].push_back((a & b) | (a & c) | (b & c));
        }
        if (v.size() == 2) {
          const W a = v[0], b = v[1];
          v = {a ^ b};
          if (e + 1 >= level.size()) {
            ok = false;
            break;
          }
          level[e + 1].push_back(a & b);
        }
        out_bits[e] = v.empty() ? 0 : v[0];
      }
      for (int l = 0; l < lanes && ok; ++l) {
        std::uint64_t got = 0;
        for (std::size_t e = 0; e < out_bits.size(); ++e) got |= ((out_bits[e] >> l) & 1u) << e;
        const std::uint64_t want = pv * (pv + 1) / 2 + q0 + l;
        if (got != want) ok = false;
      }
    }
  }
  out.correct = ok;
  return out;
}

}  // namespace qre
