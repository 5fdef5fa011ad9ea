#include "qre/surface.hpp"

#include <cmath>

#include "qre/tensors.hpp"

namespace qre {

namespace {

void check(const PhysicalAssumptions& a) {
  if (!(a.phys_error_rate > 0 && a.phys_error_rate < 0.01)) throw Error("physical error rate must lie in (0, 0.01)");
  if (!(a.total_error_budget > 0 && a.total_error_budget < 1)) throw Error("error budget must lie in (0, 1)");
  if (a.factory_count < 1) throw Error("need at least one factory");
  if (!(a.cycle_time > 0) || !(a.reaction_time >= 0)) throw Error("cycle and reaction times must be positive");
  if (!(a.factory_rate_per_factory > 0)) throw Error("factory rate must be positive");
}

}  // namespace

double logical_error_rate(double p, int d) { return 0.1 * std::pow(p / 0.01, (d + 1) / 2.0); }

double factory_calibration(const PhysicalAssumptions& a) {
  return 1.0 / (a.factory_rate_per_factory * 5.0 * a.reference_distance * a.cycle_time);
}

double factory_period_cycles(const PhysicalAssumptions& a, int d) { return 5.0 * d * factory_calibration(a); }

double runtime_seconds(double toffoli, const PhysicalAssumptions& a, int d) {
  const double per = std::max(factory_period_cycles(a, d) * a.cycle_time / a.factory_count, a.reaction_time);
  return toffoli * per;
}

int choose_distance(double toffoli, double exposed_tiles, const PhysicalAssumptions& a) {
  check(a);
  for (int d = 3; d <= a.max_distance; d += 2) {
    const double cycles = runtime_seconds(toffoli, a, d) / a.cycle_time;
    if (exposed_tiles * cycles * logical_error_rate(a.phys_error_rate, d) <= 0.5 * a.total_error_budget) return d;
  }
  throw Error("infeasible: no code distance up to " + std::to_string(a.max_distance) + " meets the error budget");
}

PhysicalEstimate layout_estimate(const LayoutInput& in, const PhysicalAssumptions& a) {
  check(a);
  if (!(in.toffoli >= 0)) throw Error("Toffoli count must be non-negative");
  PhysicalEstimate e;
  const bool idle = in.toffoli == 0.0;
  e.factory_tiles = idle ? 0.0 : double(a.factory_count) * kFactoryTiles;
  if (in.tiles) {
    const double fac = double(a.factory_count) * kFactoryTiles;
    if (*in.tiles <= fac) throw Error("tile count does not exceed the factory footprint");
    e.data_tiles = *in.tiles - fac;
  } else if (in.logical_qubits) {
    if (!(*in.logical_qubits > 0)) throw Error("logical qubit count must be positive");
    e.data_tiles = std::ceil(*in.logical_qubits * (1.0 + a.routing_overhead));
  } else {
    throw Error("layout needs tiles or logical qubits");
  }
  e.tiles = e.data_tiles + e.factory_tiles;
  e.d = choose_distance(in.toffoli, e.data_tiles, a);
  e.factory_level2 = e.d;
  e.factory_level1 = 2 * static_cast<int>(std::floor(0.3 * e.d)) + 1;
  e.physical_qubits = e.tiles * tile_qubits(e.d);
  e.runtime_seconds = runtime_seconds(in.toffoli, a, e.d);
  const double factory_per = factory_period_cycles(a, e.d) * a.cycle_time / a.factory_count;
  e.toffoli_rate = 1.0 / std::max(factory_per, a.reaction_time);
  e.limiting = factory_per >= a.reaction_time ? "beat" : "tick";
  e.memory_error = e.data_tiles * (e.runtime_seconds / a.cycle_time) * logical_error_rate(a.phys_error_rate, e.d);
  return e;
}

}  // namespace qre
