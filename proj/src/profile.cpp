#include "ssdlab/profile.hpp"

namespace ssdlab {

void DeviceProfile::validate() const {
  if (page_bytes == 0 || (page_bytes & (page_bytes - 1)) != 0)
    throw ConfigError("profile: page_bytes must be a power of two");
  if (logical_bytes == 0 || logical_bytes % page_bytes != 0)
    throw ConfigError("profile: logical_bytes must be a page multiple");
  if (pages_per_block == 0)
    throw ConfigError("profile: pages_per_block must be positive");
  if (pages_per_block > 0xffff)
    throw ConfigError("profile: pages_per_block too large");
  if (hw_op_fraction < 0.005 || hw_op_fraction > 1.0)
    throw ConfigError("profile: hw_op_fraction out of range [0.005, 1]");
  if (gc_stop_free_blocks <= gc_trigger_free_blocks)
    throw ConfigError("profile: gc_stop must exceed gc_trigger");
  if (physical_blocks() <= gc_stop_free_blocks + 2)
    throw ConfigError("profile: device too small for GC thresholds");
  if (logical_pages() >= kNoLba)
    throw ConfigError("profile: logical capacity exceeds address space");
  if (page_program_us <= 0 || page_read_us <= 0 || block_erase_us <= 0)
    throw ConfigError("profile: latencies must be positive");
  if (parallelism == 0)
    throw ConfigError("profile: parallelism must be positive");
  if (write_cache_pages > 0 && cache_drain_pages_per_ms <= 0)
    throw ConfigError("profile: cached device needs a drain rate");
  if (cache_ingest_pages_per_us <= 0)
    throw ConfigError("profile: cache ingest rate must be positive");
}

const std::vector<DeviceProfile>& profile_library() {
  static const std::vector<DeviceProfile> lib = [] {
    std::vector<DeviceProfile> v;

    // A: the modest default. One channel, no cache, a shared write
    // frontier, and the factory spare of a datacenter-class SATA drive.
    DeviceProfile desk;
    desk.name = "desk";
    desk.single_frontier = true;
    desk.hw_op_fraction = 0.19;
    v.push_back(desk);

    // B: slow flash behind a big write cache; bursts land in DRAM and the
    // drain rate caps sustained flash work.
    DeviceProfile sata;
    sata.name = "sata-cache";
    sata.page_program_us = 2600.0;
    sata.page_read_us = 180.0;
    sata.block_erase_us = 7000.0;
    sata.write_cache_pages = 8192;         // 32 MiB of 4 KiB pages
    sata.cache_drain_pages_per_ms = 0.25;  // flash programs per ms
    sata.cache_ingest_pages_per_us = 1.0;
    v.push_back(sata);

    // C: fast flash, wide internal parallelism, no cache.
    DeviceProfile nvme;
    nvme.name = "nvme-fast";
    nvme.page_program_us = 60.0;
    nvme.page_read_us = 10.0;
    nvme.block_erase_us = 1000.0;
    nvme.parallelism = 4;
    v.push_back(nvme);

    for (const auto& p : v) p.validate();
    return v;
  }();
  return lib;
}

DeviceProfile profile_by_name(const std::string& name) {
  for (const auto& p : profile_library())
    if (p.name == name) return p;
  throw ConfigError("unknown device profile: " + name);
}

}  // namespace ssdlab
