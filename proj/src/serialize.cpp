#include "qre/serialize.hpp"

namespace qre {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j.at(i).size()) != cols) throw Error("ragged matrix in JSON");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = j.at(i).at(k).get<double>();
  }
  return m;
}

json lambda_json(const LambdaReport& lam) {
  return {{"method", lam.method}, {"one_body", lam.lambda_one}, {"two_body", lam.lambda_two}, {"total", lam.total()}};
}

json rep_json(const FactorizedRep& rep, const LambdaReport& lam) {
  json j;
  j["lambda"] = lambda_json(lam);
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SparseRep>) {
          j["method"] = "sparse";
          j["n"] = r.n;
          j["threshold"] = r.threshold;
          j["d"] = r.d;
          json e = json::array();
          for (const auto& x : r.entries) e.push_back({x.p, x.q, x.r, x.s, x.value});
          j["entries"] = e;
          j["cost_inputs"] = {{"N", 2 * r.n}, {"d", r.d}, {"lambda", lam.total()}};
        } else if constexpr (std::is_same_v<T, SFRep>) {
          j["method"] = "sf";
          j["n"] = r.n;
          j["L"] = r.L();
          json w = json::array();
          for (const auto& m : r.W) w.push_back(matrix_json(m));
          j["W"] = w;
          j["cost_inputs"] = {{"N", 2 * r.n}, {"L", r.L()}, {"lambda", lam.total()}};
        } else if constexpr (std::is_same_v<T, DFRep>) {
          j["method"] = "df";
          j["n"] = r.n;
          j["threshold"] = r.threshold;
          j["L"] = r.L();
          j["Xi_total"] = r.Xi_total();
          j["Xi_max"] = r.Xi_max();
          j["Xi_avg"] = r.Xi_avg();
          json b = json::array();
          for (const auto& blk : r.blocks) {
            json f = json::array();
            for (Eigen::Index i = 0; i < blk.f.size(); ++i) f.push_back(blk.f(i));
            b.push_back({{"f", f}, {"U", matrix_json(blk.U)}, {"f_abs_sum_full", blk.f_abs_sum_full}});
          }
          j["blocks"] = b;
          j["cost_inputs"] = {{"N", 2 * r.n},          {"L", r.L()},          {"Xi_total", r.Xi_total()},
                              {"Xi_max", r.Xi_max()}, {"lambda", lam.total()}};
        } else {
          j["method"] = "thc";
          j["n"] = r.n();
          j["M"] = r.M();
          j["chi"] = matrix_json(r.chi);
          j["zeta"] = matrix_json(r.zeta);
          j["lambda_naive"] = lambda_thc_naive(r);
          j["cost_inputs"] = {{"N", 2 * r.n()}, {"M", r.M()}, {"lambda", lam.total()}};
        }
      },
      rep);
  return j;
}

FactorizedRep rep_from_json(const json& j) {
  const std::string m = j.at("method").get<std::string>();
  const int n = j.at("n").get<int>();
  if (m == "sparse") {
    SparseRep r;
    r.n = n;
    r.threshold = j.at("threshold").get<double>();
    r.d = j.at("d").get<std::int64_t>();
    for (const auto& e : j.at("entries"))
      r.entries.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(), e.at(3).get<int>(),
                           e.at(4).get<double>()});
    return r;
  }
  if (m == "sf") {
    SFRep r;
    r.n = n;
    for (const auto& w : j.at("W")) r.W.push_back(matrix_from_json(w));
    return r;
  }
  if (m == "df") {
    DFRep r;
    r.n = n;
    r.threshold = j.at("threshold").get<double>();
    for (const auto& b : j.at("blocks")) {
      DFBlock blk;
      const auto& f = b.at("f");
      blk.f.resize(static_cast<Eigen::Index>(f.size()));
      for (std::size_t i = 0; i < f.size(); ++i) blk.f(static_cast<Eigen::Index>(i)) = f.at(i).get<double>();
      blk.U = matrix_from_json(b.at("U"));
      blk.f_abs_sum_full = b.at("f_abs_sum_full").get<double>();
      r.blocks.push_back(std::move(blk));
    }
    return r;
  }
  if (m == "thc") {
    THCRep r;
    r.chi = matrix_from_json(j.at("chi"));
    r.zeta = matrix_from_json(j.at("zeta"));
    return r;
  }
  throw Error("unknown representation method: " + m);
}

json quantized_json(const QuantizedTHC& q) {
  return {{"beth", q.beth},
          {"aleph", q.aleph},
          {"x", q.x},
          {"unit_theta", q.unit_theta},
          {"unit_zeta_offdiag", q.unit_offdiag},
          {"unit_zeta_diag", q.unit_diag},
          {"normalization_fallback", q.normalization_fallback},
          {"lambda_zeta_pre", q.lambda_zeta_pre},
          {"lambda_zeta_post", q.lambda_zeta_post},
          {"theta", matrix_json(q.theta)},
          {"zeta", matrix_json(q.zeta_q)}};
}

json cost_json(const CostReport& r) {
  json ks = json::object();
  for (const auto& k : r.ks) ks[k.role] = k.k;
  json br = json::object();
  for (const auto& t : r.breakdown) br[t.label] = t.toffoli;
  json j = {{"method", r.method},
            {"iterations", r.iterations},
            {"toffoli_per_step", r.toffoli_per_step},
            {"toffoli_total", r.toffoli_total_real},
            {"logical_qubits", r.logical_qubits},
            {"k", ks},
            {"breakdown", br},
            {"info", r.info}};
  if (r.toffoli_total > 0) j["toffoli_total_exact"] = r.toffoli_total;
  return j;
}

json estimate_json(const PhysicalEstimate& e) {
  return {{"code_distance", e.d},
          {"factory_distance_level1", e.factory_level1},
          {"factory_distance_level2", e.factory_level2},
          {"tiles", e.tiles},
          {"data_tiles", e.data_tiles},
          {"factory_tiles", e.factory_tiles},
          {"physical_qubits", e.physical_qubits},
          {"runtime_seconds", e.runtime_seconds},
          {"runtime_days", e.runtime_seconds / 86400.0},
          {"toffoli_rate", e.toffoli_rate},
          {"memory_error", e.memory_error},
          {"limiting_constraint", e.limiting}};
}

json assumptions_json(const PhysicalAssumptions& a) {
  return {{"phys_error_rate", a.phys_error_rate},
          {"cycle_time", a.cycle_time},
          {"reaction_time", a.reaction_time},
          {"total_error_budget", a.total_error_budget},
          {"factory_count", a.factory_count},
          {"factory_rate_per_factory", a.factory_rate_per_factory},
          {"reference_distance", a.reference_distance},
          {"factory_calibration", factory_calibration(a)},
          {"routing_overhead", a.routing_overhead},
          {"max_distance", a.max_distance}};
}

}  // namespace qre
