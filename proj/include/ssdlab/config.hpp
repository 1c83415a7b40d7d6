#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssdlab/scenarios.hpp"

namespace ssdlab {

// Experiment description, parsed from a JSON config file and expanded to
// one RunConfig per grid point. A config either names a preset scenario
// (P1..P7) or describes a custom run, optionally swept over axes; in both
// cases explicitly present keys override the defaults of every run.
struct LoadedConfig {
  std::string scenario = "custom";
  std::string title = "custom experiment";
  std::vector<RunConfig> runs;
  std::string out_dir;
  bool trace = false;
  bool is_sweep = false;  // more than one grid point
};

// "128B", "4KiB", "8MiB", "4GiB" or a plain integer string; throws
// ConfigError on malformed input or a non-integral byte count.
std::uint64_t parse_size(const std::string& text);

// Parses config text (JSON), applies `--set dot.path=value` overrides in
// order, then expands presets or the sweep grid. Unknown keys anywhere in
// the tree are rejected. An empty `text` means "all defaults".
LoadedConfig parse_config(const std::string& text,
                          const std::vector<std::string>& overrides);

// Same, reading from a file; a missing file is a ConfigError naming the
// path.
LoadedConfig load_config_file(const std::string& path,
                              const std::vector<std::string>& overrides);

}  // namespace ssdlab
