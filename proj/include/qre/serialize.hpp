#pragma once

#include <json.hpp>

#include "qre/cost_models.hpp"
#include "qre/factorizations.hpp"
#include "qre/surface.hpp"
#include "qre/thc_optimizer.hpp"

namespace qre {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Row-major nested arrays.
json matrix_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

json lambda_json(const LambdaReport& lam);

/**
 * @brief Representation record with factors, metadata and the inputs cost models need.
 */
json rep_json(const FactorizedRep& rep, const LambdaReport& lam);
FactorizedRep rep_from_json(const json& j);

json quantized_json(const QuantizedTHC& q);

json cost_json(const CostReport& r);
json estimate_json(const PhysicalEstimate& e);
json assumptions_json(const PhysicalAssumptions& a);

}  // namespace qre
