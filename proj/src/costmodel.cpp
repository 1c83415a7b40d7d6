#include "ssdlab/costmodel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ssdlab {

std::uint64_t drives_needed(double dataset_bytes, double space_amp,
                            double usable_bytes_per_drive, double target_ops_s,
                            double ops_s_per_instance) {
  if (dataset_bytes <= 0 || space_amp < 1.0 || usable_bytes_per_drive <= 0 ||
      target_ops_s < 0 || ops_s_per_instance <= 0)
    throw ConfigError("costmodel: arguments out of range");
  auto capacity = static_cast<std::uint64_t>(
      std::ceil(dataset_bytes * space_amp / usable_bytes_per_drive));
  auto throughput = static_cast<std::uint64_t>(
      std::ceil(target_ops_s / ops_s_per_instance));
  return std::max<std::uint64_t>({capacity, throughput, 1});
}

std::vector<HeatmapCell> cost_heatmap(const EngineEconomics& a,
                                      const EngineEconomics& b,
                                      double usable_bytes_per_drive,
                                      const std::vector<double>& datasets,
                                      const std::vector<double>& targets) {
  std::vector<HeatmapCell> cells;
  cells.reserve(datasets.size() * targets.size());
  for (double d : datasets) {
    for (double t : targets) {
      std::uint64_t na = drives_needed(d, a.space_amp, usable_bytes_per_drive,
                                       t, a.ops_s_per_instance);
      std::uint64_t nb = drives_needed(d, b.space_amp, usable_bytes_per_drive,
                                       t, b.ops_s_per_instance);
      std::string winner = na < nb ? a.name : nb < na ? b.name : "TIE";
      cells.push_back({d, t, na, nb, std::move(winner)});
    }
  }
  return cells;
}

void write_heatmap_csv(const std::string& path,
                       const std::vector<HeatmapCell>& cells) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path);
  std::fputs("dataset_B,target_ops_s,drives_a,drives_b,winner\n", f);
  for (const HeatmapCell& c : cells)
    std::fprintf(f, "%.0f,%.6g,%llu,%llu,%s\n", c.dataset_bytes,
                 c.target_ops_s, static_cast<unsigned long long>(c.drives_a),
                 static_cast<unsigned long long>(c.drives_b),
                 c.winner.c_str());
  std::fclose(f);
}

}  // namespace ssdlab
