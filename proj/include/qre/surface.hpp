#pragma once

#include <optional>
#include <string>

namespace qre {

struct PhysicalAssumptions {
  double phys_error_rate = 1e-3;
  double cycle_time = 1e-6;
  double reaction_time = 1e-5;
  double total_error_budget = 0.01;
  int factory_count = 4;
  /// CCZ states per second from one factory at reference_distance.
  double factory_rate_per_factory = 6250.0;
  int reference_distance = 31;
  double routing_overhead = 0.5;
  int max_distance = 51;
};

/// Tiles of one CCZ factory: a 15x8 block, two 3x4 fixups and a 15-tile routing row.
inline constexpr int kFactoryTiles = 15 * 8 + 2 * 3 * 4 + 15;

/// p_L(d) = 0.1 (p/0.01)^((d+1)/2) per tile per cycle
double logical_error_rate(double p, int d);

/// Cycles between CCZ outputs of one factory, 5d times the calibration constant.
double factory_period_cycles(const PhysicalAssumptions& a, int d);

/// Pipelining constant fixed so the reference configuration meets its rate.
double factory_calibration(const PhysicalAssumptions& a);

double runtime_seconds(double toffoli, const PhysicalAssumptions& a, int d);

/**
 * @brief Smallest odd distance whose memory error fits half the budget.
 * @param exposed_tiles tiles holding data (factories excluded)
 * @throws Error when no distance up to max_distance fits.
 */
int choose_distance(double toffoli, double exposed_tiles, const PhysicalAssumptions& a);

struct LayoutInput {
  double toffoli = 0.0;
  std::optional<double> tiles;           ///< total tiles, factories included
  std::optional<double> logical_qubits;  ///< used when tiles is absent
};

struct PhysicalEstimate {
  int d = 0;
  int factory_level1 = 0;
  int factory_level2 = 0;
  double tiles = 0.0;
  double data_tiles = 0.0;
  double factory_tiles = 0.0;
  double physical_qubits = 0.0;
  double runtime_seconds = 0.0;
  double toffoli_rate = 0.0;
  double memory_error = 0.0;
  std::string limiting;  ///< "beat" or "tick"
};

PhysicalEstimate layout_estimate(const LayoutInput& in, const PhysicalAssumptions& a);

/// Qubits of one tile at distance d.
inline double tile_qubits(int d) { return 2.0 * (d + 1) * (d + 1); }

}  // namespace qre
