#include "ssdlab/device.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace ssdlab {

double service_time_us(const DeviceProfile& p, std::uint64_t programs,
                       std::uint64_t reads, std::uint64_t erases) {
  double raw = static_cast<double>(programs) * p.page_program_us +
               static_cast<double>(reads) * p.page_read_us +
               static_cast<double>(erases) * p.block_erase_us;
  return raw / static_cast<double>(p.parallelism);
}

Device::Device(DeviceProfile profile) : profile_(std::move(profile)) {
  profile_.validate();
  single_frontier_ = profile_.single_frontier;
  n_pages_ = profile_.logical_pages();
  ppb_ = profile_.pages_per_block;
  const std::uint64_t blocks = profile_.physical_blocks();
  const std::uint64_t phys_pages = blocks * ppb_;

  map_.assign(n_pages_, kNoPpa);
  rmap_.assign(phys_pages, kNoLba);
  state_.assign(phys_pages, PageState::kFree);
  valid_count_.assign(blocks, 0);
  free_list_.resize(blocks);
  for (std::uint64_t b = 0; b < blocks; ++b)
    free_list_[b] = static_cast<BlockId>(b);
  lba_write_count_.assign(n_pages_, 0);
}

BlockId Device::take_free_block(bool for_gc) {
  internal_check(free_head_ < free_list_.size(),
                 "ftl: free pool exhausted with no erasable block");
  BlockId b = free_list_[free_head_++];
  if (free_head_ >= 4096 && free_head_ * 2 >= free_list_.size()) {
    free_list_.erase(free_list_.begin(),
                     free_list_.begin() + static_cast<long>(free_head_));
    free_head_ = 0;
  }
  (void)for_gc;
  return b;
}

Ppa Device::frontier_next(bool gc_stream, ServiceReport& r) {
  const int s = (single_frontier_ && gc_stream) ? 0 : (gc_stream ? 1 : 0);
  // With a shared frontier the GC pass below writes into the block we just
  // opened and can leave it exactly full, so the fullness check must be
  // re-evaluated after GC runs.
  while (active_[s] == kNoPpa || active_used_[s] == ppb_) {
    active_[s] = take_free_block(gc_stream);
    active_used_[s] = 0;
    if (!gc_stream) maybe_gc(r);
  }
  Ppa ppa = static_cast<Ppa>(active_[s]) * ppb_ + active_used_[s];
  ++active_used_[s];
  return ppa;
}

void Device::program_page(Lba lba, Ppa ppa, bool gc_stream) {
  internal_check(state_[ppa] == PageState::kFree,
                 "ftl: programming a non-free page");
  state_[ppa] = PageState::kValid;
  rmap_[ppa] = lba;
  map_[lba] = ppa;
  ++valid_count_[ppa / ppb_];
  ++counters_.flash_pages_programmed;
  if (gc_stream) {
    ++counters_.gc_pages_relocated;
  } else {
    ++counters_.host_pages_written;
    ++lba_write_count_[lba];
  }
}

void Device::invalidate(Lba lba) {
  Ppa old = map_[lba];
  if (old == kNoPpa) return;
  internal_check(state_[old] == PageState::kValid && rmap_[old] == lba,
                 "ftl: mapping table out of sync");
  state_[old] = PageState::kInvalid;
  rmap_[old] = kNoLba;
  --valid_count_[old / ppb_];
  map_[lba] = kNoPpa;
}

BlockId Device::pick_victim() const {
  const std::uint64_t blocks = valid_count_.size();
  BlockId best = kNoPpa;
  std::uint32_t best_valid = std::numeric_limits<std::uint32_t>::max();
  for (std::uint64_t b = 0; b < blocks; ++b) {
    // Skip the open frontiers; free blocks are excluded below.
    if (b == active_[0] || b == active_[1]) continue;
    bool is_free = valid_count_[b] == 0 &&
                   state_[b * ppb_] == PageState::kFree;
    if (is_free) continue;
    if (valid_count_[b] < best_valid) {
      best_valid = valid_count_[b];
      best = static_cast<BlockId>(b);
      if (best_valid == 0) break;
    }
  }
  internal_check(best != kNoPpa, "ftl: no GC victim available");
  return best;
}

void Device::do_collect(ServiceReport& r, BlockId victim) {
  const Ppa base = static_cast<Ppa>(victim) * ppb_;
  for (std::uint32_t i = 0; i < ppb_; ++i) {
    if (state_[base + i] != PageState::kValid) continue;
    Lba lba = rmap_[base + i];
    ++counters_.gc_pages_read;
    ++r.gc_reads;
    // Relocate: invalidate the old copy, program into the GC frontier.
    state_[base + i] = PageState::kInvalid;
    rmap_[base + i] = kNoLba;
    --valid_count_[victim];
    Ppa dst = frontier_next(true, r);
    program_page(lba, dst, true);
    ++r.programs;
    if (trace_)
      trace_->push_back({clock_us_, TraceKind::kGcRelocate, lba, dst / ppb_});
  }
  internal_check(valid_count_[victim] == 0, "ftl: victim not fully drained");
  for (std::uint32_t i = 0; i < ppb_; ++i) state_[base + i] = PageState::kFree;
  free_list_.push_back(victim);
  ++counters_.blocks_erased;
  ++r.erases;
  if (trace_)
    trace_->push_back({clock_us_, TraceKind::kErase, kNoLba, victim});
}

void Device::maybe_gc(ServiceReport& r) {
  if (in_gc_) return;
  if (free_blocks() > profile_.gc_trigger_free_blocks) return;
  in_gc_ = true;
  while (free_blocks() < profile_.gc_stop_free_blocks) {
    do_collect(r, pick_victim());
  }
  in_gc_ = false;
}

std::pair<BlockId, std::uint32_t> Device::collect_once() {
  ServiceReport r;
  in_gc_ = true;
  BlockId victim = pick_victim();
  std::uint32_t relocated = valid_count_[victim];
  do_collect(r, victim);
  in_gc_ = false;
  charge(r);
  return {victim, relocated};
}

void Device::drain_cache_to_now() {
  if (!profile_.has_cache()) return;
  double dt_ms = (clock_us_ - cache_drained_to_us_) / 1000.0;
  if (dt_ms > 0.0)
    cache_occupancy_ = std::max(
        0.0, cache_occupancy_ - dt_ms * profile_.cache_drain_pages_per_ms);
  cache_drained_to_us_ = clock_us_;
}

void Device::charge(ServiceReport& r) {
  if (profile_.has_cache()) {
    // Cached path: the host pays cache dynamics; flash work (including any
    // GC this op caused) becomes backlog that drains in the background. A
    // burst that fits the cache costs only ingest time; once the backlog
    // hits the cache size, the op stalls until the drain makes room.
    drain_cache_to_now();
    double n = static_cast<double>(r.programs);
    double room = static_cast<double>(profile_.write_cache_pages) -
                  cache_occupancy_;
    double stall_us = 0.0;
    if (n > room) {
      stall_us = (n - room) / profile_.cache_drain_pages_per_ms * 1000.0;
      cache_occupancy_ = static_cast<double>(profile_.write_cache_pages);
    } else {
      cache_occupancy_ += n;
    }
    r.elapsed_us = stall_us + static_cast<double>(r.host_pages) /
                                  profile_.cache_ingest_pages_per_us;
  } else {
    r.elapsed_us = service_time_us(profile_, r.programs, r.gc_reads, r.erases);
  }
  clock_us_ += r.elapsed_us;
  if (profile_.has_cache()) cache_drained_to_us_ = clock_us_;
}

ServiceReport Device::write(std::span<const Lba> lbas) {
  ServiceReport r;
  for (Lba lba : lbas) {
    if (lba >= n_pages_)
      throw AddressError("ftl: write beyond logical capacity: lba " +
                         std::to_string(lba));
    const bool was_mapped = map_[lba] != kNoPpa;
    invalidate(lba);
    Ppa dst = frontier_next(false, r);
    program_page(lba, dst, false);
    if (!was_mapped) ++mapped_pages_;
    ++r.host_pages;
    ++r.programs;
    if (trace_)
      trace_->push_back({clock_us_, TraceKind::kHostWrite, lba, dst / ppb_});
  }
  charge(r);
  return r;
}

ServiceReport Device::write_run(Lba first, std::uint64_t count) {
  ServiceReport r;
  if (static_cast<std::uint64_t>(first) + count > n_pages_)
    throw AddressError("ftl: write run beyond logical capacity");
  for (std::uint64_t i = 0; i < count; ++i) {
    Lba lba = first + static_cast<Lba>(i);
    const bool was_mapped = map_[lba] != kNoPpa;
    invalidate(lba);
    Ppa dst = frontier_next(false, r);
    program_page(lba, dst, false);
    if (!was_mapped) ++mapped_pages_;
    ++r.host_pages;
    ++r.programs;
    if (trace_)
      trace_->push_back({clock_us_, TraceKind::kHostWrite, lba, dst / ppb_});
  }
  charge(r);
  return r;
}

void Device::trim(Lba first, std::uint64_t count) {
  if (static_cast<std::uint64_t>(first) + count > n_pages_)
    throw AddressError("ftl: trim beyond logical capacity");
  for (std::uint64_t i = 0; i < count; ++i) {
    Lba lba = first + static_cast<Lba>(i);
    if (map_[lba] == kNoPpa) continue;
    invalidate(lba);
    --mapped_pages_;
    ++counters_.pages_trimmed;
    if (trace_)
      trace_->push_back({clock_us_, TraceKind::kTrim, lba, kNoPpa});
  }
}

double Device::read_pages(std::uint64_t count) {
  counters_.pages_read += count;
  double us = service_time_us(profile_, 0, count, 0);
  clock_us_ += us;
  drain_cache_to_now();
  return us;
}

void Device::advance_time(double us) {
  internal_check(us >= 0.0, "ftl: time cannot run backwards");
  clock_us_ += us;
  drain_cache_to_now();
}

std::uint64_t Device::valid_pages() const {
  std::uint64_t n = 0;
  for (auto c : valid_count_) n += c;
  return n;
}

void Device::reset_lba_write_counts() {
  std::fill(lba_write_count_.begin(), lba_write_count_.end(), 0);
}

void Device::audit() const {
  const std::uint64_t blocks = valid_count_.size();
  std::uint64_t mapped = 0;
  for (Lba l = 0; l < n_pages_; ++l) {
    Ppa p = map_[l];
    if (p == kNoPpa) continue;
    ++mapped;
    internal_check(p < rmap_.size(), "audit: ppa out of range");
    internal_check(state_[p] == PageState::kValid, "audit: mapped lba not valid");
    internal_check(rmap_[p] == l, "audit: reverse map mismatch");
  }
  internal_check(mapped == mapped_pages_, "audit: mapped page count drifted");

  std::uint64_t valid_total = 0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    std::uint32_t v = 0;
    for (std::uint32_t i = 0; i < ppb_; ++i) {
      Ppa p = static_cast<Ppa>(b) * ppb_ + i;
      if (state_[p] == PageState::kValid) {
        ++v;
        internal_check(rmap_[p] != kNoLba && map_[rmap_[p]] == p,
                       "audit: valid page without forward mapping");
      } else {
        internal_check(rmap_[p] == kNoLba, "audit: stale reverse mapping");
      }
    }
    internal_check(v == valid_count_[b], "audit: per-block valid count drifted");
    valid_total += v;
  }
  internal_check(valid_total == mapped_pages_,
                 "audit: valid pages != mapped lbas");
  internal_check(counters_.flash_pages_programmed ==
                     counters_.host_pages_written +
                         counters_.gc_pages_relocated,
                 "audit: conservation violated");
  internal_check(counters_.gc_pages_read == counters_.gc_pages_relocated,
                 "audit: gc reads != gc relocations");
}

}  // namespace ssdlab
