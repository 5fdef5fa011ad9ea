#include "qre/tensors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <sstream>
#include <tuple>

namespace qre {

Eigen::MatrixXd Tensor4::flatten() const {
  const int n2 = n_ * n_;
  Eigen::MatrixXd m(n2, n2);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) m(i, j) = v_[static_cast<std::size_t>(i) * n2 + j];
  return m;
}

Tensor4 Tensor4::from_flat(const Eigen::MatrixXd& m, int n) {
  Tensor4 t(n);
  const int n2 = n * n;
  if (m.rows() != n2 || m.cols() != n2) throw Error("flattened tensor has wrong shape");
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) t.v_[static_cast<std::size_t>(i) * n2 + j] = m(i, j);
  return t;
}

void Tensor4::set_symmetric(int p, int q, int r, int s, double v) {
  (*this)(p, q, r, s) = v;
  (*this)(q, p, r, s) = v;
  (*this)(p, q, s, r) = v;
  (*this)(q, p, s, r) = v;
  (*this)(r, s, p, q) = v;
  (*this)(s, r, p, q) = v;
  (*this)(r, s, q, p) = v;
  (*this)(s, r, q, p) = v;
}

int symmetry_multiplicity(int p, int q, int r, int s) {
  int m = 1;
  if (p != q) m *= 2;
  if (r != s) m *= 2;
  if (!(std::minmax(p, q) == std::minmax(r, s))) m *= 2;
  return m;
}

void validate(const IntegralData& d, double tol) {
  const int n = d.n_spatial;
  if (n < 1) throw Error("n_spatial must be at least 1");
  if (d.h.rows() != n || d.h.cols() != n) throw Error("h must be n x n");
  if (d.V.dim() != n) throw Error("V must be n^4");
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (std::abs(d.h(p, q) - d.h(q, p)) > tol)
        throw Error("h not symmetric at (" + std::to_string(p) + "," + std::to_string(q) + ")");
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = d.V(p, q, r, s);
          if (std::abs(v - d.V(q, p, r, s)) > tol || std::abs(v - d.V(p, q, s, r)) > tol ||
              std::abs(v - d.V(r, s, p, q)) > tol)
            throw Error("V lacks 8-fold symmetry at (" + std::to_string(p) + "," + std::to_string(q) +
                        "," + std::to_string(r) + "," + std::to_string(s) + ")");
        }
}

void symmetrize(IntegralData& d) {
  const int n = d.n_spatial;
  d.h = 0.5 * (d.h + d.h.transpose()).eval();
  for_each_unique(n, [&](int p, int q, int r, int s) {
    const double avg = (d.V(p, q, r, s) + d.V(q, p, r, s) + d.V(p, q, s, r) + d.V(q, p, s, r) +
                        d.V(r, s, p, q) + d.V(s, r, p, q) + d.V(r, s, q, p) + d.V(s, r, q, p)) /
                       8.0;
    d.V.set_symmetric(p, q, r, s, avg);
  });
}

namespace {

constexpr double kDuplicateTol = 1e-10;

[[noreturn]] void fail_at(int line, const std::string& what) {
  throw Error("fcidump line " + std::to_string(line) + ": " + what);
}

}  // namespace

IntegralData parse_fcidump(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string header;
  bool header_done = false;
  int header_start = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header_start == 0) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      header_start = lineno;
      if (line.find("&FCI") == std::string::npos && line.find("&fci") == std::string::npos)
        fail_at(lineno, "expected &FCI header");
    }
    header += line + " ";
    std::string up = line;
    std::transform(up.begin(), up.end(), up.begin(), ::toupper);
    const auto trimmed_end = up.find_last_not_of(" \t\r");
    if (up.find("&END") != std::string::npos ||
        (trimmed_end != std::string::npos && up[trimmed_end] == '/')) {
      header_done = true;
      break;
    }
  }
  if (!header_done) fail_at(lineno, "header not terminated by &END or /");

  std::smatch m;
  static const std::regex norb_re(R"(NORB\s*=\s*(\d+))", std::regex::icase);
  if (!std::regex_search(header, m, norb_re)) fail_at(header_start, "header lacks NORB");
  const int n = std::stoi(m[1]);
  if (n < 1) fail_at(header_start, "NORB must be positive");

  IntegralData d;
  d.n_spatial = n;
  d.h = Eigen::MatrixXd::Zero(n, n);
  d.V = Tensor4(n);

  // canonical key -> (value, line)
  std::map<std::tuple<int, int, int, int>, std::pair<double, int>> seen;
  bool have_core = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream rec(line);
    double v;
    long long idx[4];
    if (!(rec >> v >> idx[0] >> idx[1] >> idx[2] >> idx[3])) fail_at(lineno, "malformed record");
    std::string extra;
    if (rec >> extra) fail_at(lineno, "trailing tokens in record");
    for (long long k : idx)
      if (k < 0 || k > n) fail_at(lineno, "index out of range [1, " + std::to_string(n) + "]");
    int i = int(idx[0]), j = int(idx[1]), k = int(idx[2]), l = int(idx[3]);
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      if (have_core && std::abs(d.e_core - v) > kDuplicateTol) fail_at(lineno, "conflicting core energy");
      d.e_core = v;
      have_core = true;
      continue;
    }
    if (i > 0 && j == 0 && k == 0 && l == 0) continue;  // orbital energy, carries no Hamiltonian data
    if (i > 0 && j > 0 && k == 0 && l == 0) {
      const int p = std::max(i, j) - 1, q = std::min(i, j) - 1;
      auto key = std::make_tuple(p, q, -1, -1);
      auto [it, fresh] = seen.emplace(key, std::make_pair(v, lineno));
      if (!fresh && std::abs(it->second.first - v) > kDuplicateTol)
        fail_at(lineno, "conflicts with record on line " + std::to_string(it->second.second));
      d.h(p, q) = d.h(q, p) = v;
      continue;
    }
    if (i == 0 || j == 0 || k == 0 || l == 0) fail_at(lineno, "index out of range [1, " + std::to_string(n) + "]");
    int p = i - 1, q = j - 1, r = k - 1, s = l - 1;
    if (p < q) std::swap(p, q);
    if (r < s) std::swap(r, s);
    if (p * (p + 1) / 2 + q < r * (r + 1) / 2 + s) {
      std::swap(p, r);
      std::swap(q, s);
    }
    auto key = std::make_tuple(p, q, r, s);
    auto [it, fresh] = seen.emplace(key, std::make_pair(v, lineno));
    if (!fresh && std::abs(it->second.first - v) > kDuplicateTol)
      fail_at(lineno, "conflicts with record on line " + std::to_string(it->second.second));
    d.V.set_symmetric(p, q, r, s, v);
  }
  return d;
}

IntegralData load_fcidump(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_fcidump(ss.str());
}

std::string format_fcidump(const IntegralData& d, int nelec, int ms2) {
  std::string out = "&FCI NORB=" + std::to_string(d.n_spatial) + ",NELEC=" + std::to_string(nelec) +
                    ",MS2=" + std::to_string(ms2) + ",\n&END\n";
  char buf[128];
  const int n = d.n_spatial;
  for_each_unique(n, [&](int p, int q, int r, int s) {
    const double v = d.V(p, q, r, s);
    if (v == 0.0) return;
    std::snprintf(buf, sizeof buf, "%.17g %d %d %d %d\n", v, p + 1, q + 1, r + 1, s + 1);
    out += buf;
  });
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) {
      if (d.h(p, q) == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g %d %d 0 0\n", d.h(p, q), p + 1, q + 1);
      out += buf;
    }
  std::snprintf(buf, sizeof buf, "%.17g 0 0 0 0\n", d.e_core);
  out += buf;
  return out;
}

void write_fcidump(const std::string& path, const IntegralData& d, int nelec, int ms2) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << format_fcidump(d, nelec, ms2);
}

Eigen::MatrixXd coulomb_contraction(const Tensor4& V) {
  const int n = V.dim();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) c(p, q) += V(p, q, r, r);
  return c;
}

KineticCorrected compute_T(const IntegralData& d) {
  const int n = d.n_spatial;
  KineticCorrected k;
  k.T = d.h;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double x = 0.0;
      for (int r = 0; r < n; ++r) x += d.V(p, r, r, q);
      k.T(p, q) -= 0.5 * x;
    }
  k.Tprime = k.T + coulomb_contraction(d.V);
  return k;
}

std::int64_t count_unique_above(const Tensor4& V, double t) {
  const int n = V.dim();
  std::int64_t c = 0;
  auto hit = [&](int p, int q, int r, int s) {
    if (std::abs(V(p, q, r, s)) > t) ++c;
  };
  for (int a = 0; a < n; ++a) {
    hit(a, a, a, a);
    for (int b = a + 1; b < n; ++b) {
      hit(a, a, b, b);
      hit(a, b, a, b);
      hit(a, a, a, b);
      hit(a, b, b, b);
      for (int c3 = b + 1; c3 < n; ++c3) {
        // each of the three indices may be the repeated one
        const int idx[3] = {a, b, c3};
        for (int k = 0; k < 3; ++k) {
          const int x = idx[k], y = idx[(k + 1) % 3], z = idx[(k + 2) % 3];
          hit(x, x, y, z);
          hit(x, y, x, z);
        }
        for (int e = c3 + 1; e < n; ++e) {
          hit(a, b, c3, e);
          hit(a, c3, b, e);
          hit(a, e, b, c3);
        }
      }
    }
  }
  return c;
}

IntegralData random_integrals(int n, std::uint64_t seed, int rank, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  IntegralData d;
  d.n_spatial = n;
  d.h = Eigen::MatrixXd::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) d.h(p, q) = d.h(q, p) = scale * g(rng);
  if (rank < 0) rank = n * (n + 1) / 2;
  const int n2 = n * n;
  Eigen::MatrixXd flat = Eigen::MatrixXd::Zero(n2, n2);
  for (int k = 0; k < rank; ++k) {
    Eigen::MatrixXd B(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q <= p; ++q) B(p, q) = B(q, p) = g(rng) / std::sqrt(double(n));
    Eigen::Map<const Eigen::VectorXd> b(B.data(), n2);
    flat += scale * b * b.transpose();
  }
  d.V = Tensor4::from_flat(flat, n);
  for_each_unique(n, [&](int p, int q, int r, int s) { d.V.set_symmetric(p, q, r, s, d.V(p, q, r, s)); });
  d.e_core = 0.0;
  return d;
}

}  // namespace qre
