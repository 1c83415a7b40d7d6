#include <algorithm>
#include <cmath>

#include "ssdlab/workload.hpp"

namespace ssdlab {

void BtreeParams::validate() const {
  if (footprint_amp < 1.0) throw ConfigError("btree: footprint_amp < 1");
  if (space_amp < footprint_amp)
    throw ConfigError("btree: space_amp below footprint_amp");
  if (write_multiplier < 1.0)
    throw ConfigError("btree: write_multiplier < 1");
  if (checkpoint_every_ops == 0)
    throw ConfigError("btree: checkpoint_every_ops == 0");
  if (per_op_cpu_us < 0.0) throw ConfigError("btree: negative cpu cost");
}

BtreeEngine::BtreeEngine(Partition& part, const KvSpec& kv,
                         const BtreeParams& p)
    : part_(part), kv_(kv), p_(p), rng_(derive_seed(kv.seed, {3})) {
  kv_.validate();
  p_.validate();

  const std::uint64_t page = part_.device().profile().page_bytes;
  const std::uint64_t kvs_per_leaf = std::max<std::uint64_t>(
      1, page / kv_.kv_bytes());
  leaves_ = ceil_div(kv_.num_keys, kvs_per_leaf);
  const std::uint64_t d = kv_.dataset_bytes();
  span_ = static_cast<std::uint64_t>(
      std::llround(p_.footprint_amp * static_cast<double>(d))) / page;
  file_pages_ = static_cast<std::uint64_t>(
      std::llround(p_.space_amp * static_cast<double>(d))) / page;
  if (span_ <= leaves_)
    throw ConfigError("btree: footprint_amp leaves no room for overhead");
  if (file_pages_ < span_)
    throw ConfigError("btree: space_amp below the written footprint");
  is_dirty_.assign(leaves_, false);
}

void BtreeEngine::load() {
  file_ = part_.create_file(file_pages_);
  // Bulk build writes the leaf region once, sequentially. The overhead
  // band and the allocated tail beyond it stay untouched until updates
  // start dirtying pages.
  part_.write_file(file_, 0, leaves_);
}

std::uint64_t BtreeEngine::disk_util_bytes() const {
  return file_pages_ * part_.device().profile().page_bytes;
}

void BtreeEngine::checkpoint() {
  if (dirty_.empty()) return;
  Device& dev = part_.device();

  // Leaves are written back in place, in page order, plus the overhead
  // writes (internal nodes, journal) cycling through the band.
  std::sort(dirty_.begin(), dirty_.end());
  std::vector<Lba> lbas;
  extra_carry_ += static_cast<double>(dirty_.size()) *
                  (p_.write_multiplier - 1.0);
  auto extra = static_cast<std::uint64_t>(extra_carry_);
  extra_carry_ -= static_cast<double>(extra);
  lbas.reserve(dirty_.size() + extra);

  for (std::uint32_t leaf : dirty_) {
    part_.map_range(file_, leaf, 1, lbas);
    is_dirty_[leaf] = false;
  }
  dirty_.clear();

  const std::uint64_t band = span_ - leaves_;
  for (std::uint64_t i = 0; i < extra; ++i) {
    part_.map_range(file_, leaves_ + band_cursor_, 1, lbas);
    band_cursor_ = (band_cursor_ + 1) % band;
  }
  dev.write(lbas);
}

StepStats BtreeEngine::step(std::uint32_t ops) {
  StepStats st;
  Device& dev = part_.device();
  const std::uint64_t kv = kv_.kv_bytes();
  for (std::uint32_t i = 0; i < ops; ++i) {
    bool is_write = kv_.write_fraction >= 1.0 ||
                    rng_.next_double() < kv_.write_fraction;
    cpu_debt_us_ += p_.per_op_cpu_us;
    if (is_write) {
      auto leaf = static_cast<std::uint32_t>(rng_.next_below(leaves_));
      if (!is_dirty_[leaf]) {
        is_dirty_[leaf] = true;
        dirty_.push_back(leaf);
      }
      st.app_bytes += kv;
      ++st.writes;
      if (++ops_since_ckpt_ >= p_.checkpoint_every_ops) {
        checkpoint();
        ops_since_ckpt_ = 0;
      }
    } else {
      dev.read_pages(1);
      ++st.reads;
    }
    ++st.ops;
  }
  if (cpu_debt_us_ > 0.0) {
    dev.advance_time(cpu_debt_us_);
    cpu_debt_us_ = 0.0;
  }
  return st;
}

}  // namespace ssdlab
