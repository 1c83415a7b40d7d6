#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssdlab/costmodel.hpp"
#include "ssdlab/fsalloc.hpp"
#include "ssdlab/metrics.hpp"
#include "ssdlab/profile.hpp"
#include "ssdlab/workload.hpp"

namespace ssdlab {

enum class PrepareState : std::uint8_t { kTrimmed, kPreconditioned };
enum class EngineKind : std::uint8_t {
  kLsm,
  kBtree,
  kRawRandom,
  kRawSequential,
};

const char* to_string(PrepareState s);
const char* to_string(EngineKind e);

// One fully-resolved experiment: device, preparation, partition layout,
// engine, and budget. Everything a run needs; deterministic given seed.
struct RunConfig {
  std::string label;
  std::string scenario = "custom";
  DeviceProfile profile;
  double partition_fraction = 1.0;  // rest of the device is reserved OP
  AllocPolicy alloc_policy = AllocPolicy::kNextFit;
  bool discard_on_delete = false;
  PrepareState prepare = PrepareState::kTrimmed;
  EngineKind engine = EngineKind::kLsm;
  double dataset_fraction = 0.5;  // of device logical capacity
  std::uint32_t key_bytes = 16;
  std::uint32_t value_bytes = 4000;
  double write_fraction = 1.0;
  LsmParams lsm;
  BtreeParams btree;
  RawParams raw;
  double budget_capacity_x = 5.0;  // app bytes, in device capacities
  double window_minutes = 10.0;
  SteadyConfig steady;
  std::uint64_t seed = 42;

  std::uint64_t partition_pages() const;
  std::uint64_t dataset_bytes() const;
  KvSpec kv_spec() const;
  void validate() const;
};

struct RunSummary {
  std::string label;
  std::string scenario;
  std::string engine;
  std::string profile;
  std::string prepare;
  double dataset_fraction = 0.0;
  double partition_fraction = 1.0;
  std::uint32_t value_bytes = 0;
  std::uint64_t seed = 0;
  std::string outcome;      // "completed" or "out_of_space"
  std::string steady_rule;  // "quiet-windows", "host-bytes" or "none"
  double steady_at_min = -1.0;
  double transient_ops_s = 0.0;  // first 15 virtual minutes
  double steady_ops_s = 0.0;     // after the detector fired
  double waa_end = 1.0;          // cumulative over the benchmark phase
  double wad_end = 1.0;
  double waa_steady = 1.0;  // over the post-detection region only
  double wad_steady = 1.0;
  double e2e_steady = 1.0;
  double space_amp_max = 0.0;
  double unwritten_frac = 0.0;
  double cov_1min = 0.0;
  std::uint64_t ops = 0;
  std::uint64_t app_bytes = 0;
  std::uint64_t host_bytes = 0;
  std::uint64_t flash_bytes = 0;
  double virtual_min = 0.0;
  double load_min = 0.0;
  std::uint64_t load_host_bytes = 0;
};

struct RunResult {
  RunSummary summary;
  std::vector<Sample> samples;
  std::vector<CdfRow> cdf;
};

// Executes one experiment. The loading phase is excluded from metrics:
// the first sample (t_us = 0) is taken at benchmark start. Out of space
// ends the run with outcome "out_of_space"; partial metrics are kept.
// If trace_path is non-empty the flash trace streams to that CSV.
RunResult run_experiment(const RunConfig& cfg,
                         const std::string& trace_path = "");

// Runs independent experiments, up to `parallel` at a time. Results come
// back in input order regardless of scheduling.
std::vector<RunResult> run_many(const std::vector<RunConfig>& cfgs,
                                int parallel);

void write_summary_csv(const std::string& path,
                       const std::vector<RunSummary>& rows);

// The seven pitfall scenarios, addressable as P1..P7.
struct Scenario {
  std::string name;
  std::string title;
  std::vector<RunConfig> runs;
};

std::vector<std::string> scenario_names();
Scenario make_scenario(const std::string& name, std::uint64_t base_seed);

// Stamps a per-grid-point derived seed on each run and fills in any empty
// label from the axes that distinguish it. Used by the presets and by
// config-driven sweeps so both name and seed runs identically.
void finalize_runs(std::vector<RunConfig>& runs, std::uint64_t base_seed);

// Runs a scenario end to end and writes per-run directories plus the
// scenario-level summary.csv, report.txt and any scenario-specific
// artifacts (P3: cdf.csv per run; P5: heatmap.csv).
struct ScenarioOutcome {
  std::vector<RunResult> results;
  bool any_out_of_space = false;
};
ScenarioOutcome run_scenario(const Scenario& sc, const std::string& out_dir,
                             int parallel, bool trace);

}  // namespace ssdlab
