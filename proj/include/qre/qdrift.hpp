#pragma once

#include <string>

#include "qre/cost_models.hpp"

namespace qre {

enum class WindowKind { cosine, kaiser };

struct Window {
  WindowKind kind = WindowKind::cosine;
  double alpha = 0.0;  ///< Kaiser shape parameter
};

/// Normalized spectral density of the phase-estimation error for the window, p(-w) = p(w).
double window_density(const Window& w, double omega);

/// P(|error| <= a) for the window.
double window_mass(const Window& w, double a);

/**
 * @brief Half-width a with P(|error| <= a) = confidence.
 * @throws Error when the quadrature misses its tolerance or no root is bracketed.
 */
double window_interval(const Window& w, double confidence);

struct KaiserOptimum {
  double alpha = 0.0;
  double a = 0.0;
};
/// Kaiser alpha giving the narrowest interval.
KaiserOptimum kaiser_optimize(double confidence);

struct CIOptimum {
  double alpha = 0.0;
  double a = 0.0;
  double delta = 0.0;
  double a2_over_delta = 0.0;
};
/// Minimizes a^2/delta subject to P_alpha(|error| <= a) = confidence + delta.
CIOptimum ci_optimize(double confidence = 0.95);

struct HLOptimum {
  double truncation = 0.0;  ///< cap as a fraction of the peak density
  double factor = 0.0;      ///< N_exp = factor * lambda^2 / eps^2
  double mse_factor = 0.0;  ///< mean-square error constant with no qDRIFT error
};
HLOptimum hl_optimize();

enum class QdriftMode { rms, confidence, hodges_lehmann };
QdriftMode parse_qdrift_mode(const std::string& s);
std::string to_string(QdriftMode m);

struct RotationChoice {
  int j = 1;  ///< lambda t = j pi / 2^s
  int s = 0;
  double steps = 0.0;       ///< segments at this step size
  double parameter = 0.0;   ///< Kaiser alpha (confidence) or truncation fraction (HL)
  double unrounded = 0.0;   ///< step size before rounding, as lambda t
};

/**
 * @brief Dyadic step size minimizing steps * (s - 1 + 2).
 *
 * Candidates are j pi / 2^s with odd j <= 15 within 40% of the unconstrained step.
 * exhaustive evaluates every candidate instead of the two bracketing ones per s.
 */
RotationChoice choose_rotation(QdriftMode mode, double lambda, double eps, bool exhaustive = false);

/// Steps needed at a fixed lambda t.
double qdrift_steps_at(QdriftMode mode, double lambda, double eps, double lambda_t, double* parameter = nullptr);

/// Toffoli and qubit estimates. Totals are reported in toffoli_total_real.
CostReport cost_qdrift(double lambda, double eps, count_t N, QdriftMode mode);

}  // namespace qre
