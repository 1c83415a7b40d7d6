#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssdlab/types.hpp"

namespace ssdlab {

// Describes one flash device: geometry, GC thresholds, timing, and the
// optional write cache. All simulated time is virtual microseconds.
//
// The write cache absorbs flash work: each write adds its flash programs
// (host plus GC) to a backlog that drains at cache_drain_pages_per_ms in
// the background. A burst that fits the remaining room is acknowledged at
// the ingest rate; a full backlog stalls the writer, so sustained flash
// throughput equals the drain rate no matter how bursty the host is.
struct DeviceProfile {
  std::string name = "custom";

  std::uint64_t logical_bytes = 4 * kGiB;
  std::uint32_t page_bytes = 4096;
  std::uint32_t pages_per_block = 256;
  double hw_op_fraction = 0.07;

  // GC runs inline when the free pool falls to the trigger and keeps
  // collecting until it is back at the stop level.
  std::uint32_t gc_trigger_free_blocks = 2;
  std::uint32_t gc_stop_free_blocks = 4;

  double page_program_us = 2000.0;
  double page_read_us = 150.0;
  double block_erase_us = 6000.0;
  std::uint32_t parallelism = 1;

  std::uint64_t write_cache_pages = 0;
  double cache_drain_pages_per_ms = 0.0;
  double cache_ingest_pages_per_us = 1.0;

  // Budget devices share one write frontier between host data and GC
  // relocations, which remixes long-lived pages into fresh blocks.
  // Better firmware separates the two streams.
  bool single_frontier = false;

  std::uint64_t logical_pages() const { return logical_bytes / page_bytes; }
  std::uint64_t physical_blocks() const {
    auto pages = static_cast<std::uint64_t>(
        static_cast<double>(logical_pages()) * (1.0 + hw_op_fraction));
    return ceil_div(pages, pages_per_block);
  }
  std::uint64_t physical_pages() const {
    return physical_blocks() * pages_per_block;
  }
  bool has_cache() const { return write_cache_pages > 0; }

  void validate() const;  // throws ConfigError
};

// Service time of a batch on the uncached flash path.
double service_time_us(const DeviceProfile& p, std::uint64_t programs,
                       std::uint64_t reads, std::uint64_t erases);

// Built-in profiles: "desk" is the default modest device, "nvme-fast" a
// high-parallelism device, "sata-cache" a slow device fronted by a large
// write cache.
const std::vector<DeviceProfile>& profile_library();
DeviceProfile profile_by_name(const std::string& name);

}  // namespace ssdlab
