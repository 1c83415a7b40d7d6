#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ssdlab/profile.hpp"
#include "ssdlab/types.hpp"

namespace ssdlab {

enum class PageState : std::uint8_t { kFree, kValid, kInvalid };

enum class TraceKind : std::uint8_t { kHostWrite, kGcRelocate, kErase, kTrim };

struct TraceRecord {
  double clock_us;
  TraceKind kind;
  Lba lba;       // kNoLba for erase records
  BlockId block;
};

// Flash work performed by one device call, plus the virtual time it took.
struct ServiceReport {
  std::uint64_t host_pages = 0;
  std::uint64_t programs = 0;   // host + GC programs
  std::uint64_t gc_reads = 0;
  std::uint64_t erases = 0;
  double elapsed_us = 0.0;

  ServiceReport& operator+=(const ServiceReport& o) {
    host_pages += o.host_pages;
    programs += o.programs;
    gc_reads += o.gc_reads;
    erases += o.erases;
    elapsed_us += o.elapsed_us;
    return *this;
  }
};

struct DeviceCounters {
  std::uint64_t host_pages_written = 0;
  std::uint64_t flash_pages_programmed = 0;
  std::uint64_t gc_pages_relocated = 0;
  std::uint64_t gc_pages_read = 0;
  std::uint64_t blocks_erased = 0;
  std::uint64_t pages_trimmed = 0;
  std::uint64_t pages_read = 0;
};

// Page-mapped FTL over an idealized flash geometry.
//
// Out-of-place writes, greedy min-valid GC (ties to the lowest block id),
// TRIM, and inline foreground GC. Host writes and GC relocations use
// separate active blocks by default so host data is not re-mixed with
// relocated cold data; set single_frontier for the naive layout.
//
// Conservation invariant, checked by audit():
//   flash_pages_programmed == host_pages_written + gc_pages_relocated
class Device {
 public:
  explicit Device(DeviceProfile profile);

  ServiceReport write(std::span<const Lba> lbas);
  ServiceReport write_run(Lba first, std::uint64_t count);
  void trim(Lba first, std::uint64_t count);
  double read_pages(std::uint64_t count);
  void advance_time(double us);

  // Runs one GC cycle regardless of the free-pool level. Returns the
  // victim block and how many valid pages it relocated.
  std::pair<BlockId, std::uint32_t> collect_once();

  double wa_device_cumulative() const {
    return counters_.host_pages_written == 0
               ? 1.0
               : static_cast<double>(counters_.flash_pages_programmed) /
                     static_cast<double>(counters_.host_pages_written);
  }

  const DeviceCounters& counters() const { return counters_; }
  const DeviceProfile& profile() const { return profile_; }
  double clock_us() const { return clock_us_; }

  std::uint64_t mapped_pages() const { return mapped_pages_; }
  std::uint64_t free_blocks() const { return free_list_.size() - free_head_; }
  std::uint64_t valid_pages() const;
  std::uint32_t block_valid_count(BlockId b) const {
    return valid_count_[b];
  }
  PageState page_state(Ppa p) const { return state_[p]; }
  Ppa ppa_of(Lba l) const { return map_[l]; }

  std::span<const std::uint32_t> lba_write_counts() const {
    return lba_write_count_;
  }
  void reset_lba_write_counts();

  void set_single_frontier(bool on) { single_frontier_ = on; }
  void set_trace(std::vector<TraceRecord>* sink) { trace_ = sink; }

  double cache_occupancy_pages() const { return cache_occupancy_; }

  // Full-scan consistency check of mapping, states, per-block counts and
  // counters. Throws InternalError on any mismatch. O(physical pages).
  void audit() const;

 private:
  BlockId take_free_block(bool for_gc);
  void maybe_gc(ServiceReport& r);
  void do_collect(ServiceReport& r, BlockId victim);
  BlockId pick_victim() const;
  Ppa frontier_next(bool gc_stream, ServiceReport& r);
  void program_page(Lba lba, Ppa ppa, bool gc_stream);
  void invalidate(Lba lba);
  void drain_cache_to_now();
  void charge(ServiceReport& r);

  DeviceProfile profile_;
  std::uint64_t n_pages_;
  std::uint32_t ppb_;

  std::vector<Ppa> map_;                 // lba -> ppa, kNoPpa if unmapped
  std::vector<Lba> rmap_;                // ppa -> lba, kNoLba if not valid
  std::vector<PageState> state_;
  std::vector<std::uint16_t> valid_count_;  // per block
  std::vector<BlockId> free_list_;       // FIFO: erased blocks at the back
  std::size_t free_head_ = 0;

  // Active blocks: index 0 = host stream, 1 = GC stream.
  BlockId active_[2] = {kNoPpa, kNoPpa};
  std::uint32_t active_used_[2] = {0, 0};

  std::uint64_t mapped_pages_ = 0;
  DeviceCounters counters_;
  double clock_us_ = 0.0;
  bool single_frontier_ = false;
  bool in_gc_ = false;

  double cache_occupancy_ = 0.0;
  double cache_drained_to_us_ = 0.0;

  std::vector<std::uint32_t> lba_write_count_;
  std::vector<TraceRecord>* trace_ = nullptr;
};

}  // namespace ssdlab
