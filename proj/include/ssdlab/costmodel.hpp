#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssdlab/types.hpp"

namespace ssdlab {

// Provisioning arithmetic: how many drives a deployment needs is the max
// of the capacity bound (dataset inflated by space amplification) and the
// throughput bound (target ops over what one instance sustains).
std::uint64_t drives_needed(double dataset_bytes, double space_amp,
                            double usable_bytes_per_drive, double target_ops_s,
                            double ops_s_per_instance);

struct EngineEconomics {
  std::string name;
  double space_amp = 1.0;
  double ops_s_per_instance = 1.0;
};

struct HeatmapCell {
  double dataset_bytes;
  double target_ops_s;
  std::uint64_t drives_a;
  std::uint64_t drives_b;
  std::string winner;  // engine name, or "TIE"
};

// Full grid comparison of two engines. Ties are flagged, not silently
// broken, since "equal drives" is a real answer.
std::vector<HeatmapCell> cost_heatmap(const EngineEconomics& a,
                                      const EngineEconomics& b,
                                      double usable_bytes_per_drive,
                                      const std::vector<double>& datasets,
                                      const std::vector<double>& targets);

void write_heatmap_csv(const std::string& path,
                       const std::vector<HeatmapCell>& cells);

}  // namespace ssdlab
