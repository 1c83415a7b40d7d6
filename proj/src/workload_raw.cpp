#include <algorithm>

#include "ssdlab/workload.hpp"

namespace ssdlab {

void KvSpec::validate() const {
  if (num_keys == 0) throw ConfigError("kv: num_keys must be positive");
  if (key_bytes == 0 || value_bytes == 0)
    throw ConfigError("kv: key and value sizes must be positive");
  if (write_fraction < 0.0 || write_fraction > 1.0)
    throw ConfigError("kv: write_fraction out of [0, 1]");
}

void raw_fill_sequential(Device& dev, Lba start, std::uint64_t count,
                         std::uint32_t chunk_pages) {
  std::uint64_t done = 0;
  while (done < count) {
    std::uint64_t n = std::min<std::uint64_t>(chunk_pages, count - done);
    dev.write_run(start + static_cast<Lba>(done), n);
    done += n;
  }
}

void raw_random_writes(Device& dev, Lba start, std::uint64_t span,
                       std::uint64_t count, Rng& rng) {
  for (std::uint64_t i = 0; i < count; ++i) {
    Lba lba = start + static_cast<Lba>(rng.next_below(span));
    dev.write_run(lba, 1);
  }
}

void prepare_trimmed(Device& dev) {
  dev.trim(0, dev.profile().logical_pages());
}

void prepare_preconditioned(Device& dev, Lba start, std::uint64_t count,
                            std::uint64_t seed) {
  raw_fill_sequential(dev, start, count);
  Rng rng(derive_seed(seed, {0x9e7f'5ca7'd00d'f00dull}));
  raw_random_writes(dev, start, count, 2 * count, rng);
}

RawEngine::RawEngine(Partition& part, const KvSpec& kv, const RawParams& p)
    : part_(part), kv_(kv), raw_(p), rng_(derive_seed(kv.seed, {1})) {
  kv_.validate();
  if (raw_.region_fraction <= 0.0 || raw_.region_fraction > 1.0)
    throw ConfigError("raw: region_fraction out of (0, 1]");
  if (raw_.io_pages == 0) throw ConfigError("raw: io_pages must be positive");
  start_ = part_.lba_begin();
  span_ = static_cast<std::uint64_t>(
      static_cast<double>(part_.size_pages()) * raw_.region_fraction);
  if (span_ == 0) span_ = 1;
  seq_pos_ = start_;
}

void RawEngine::load() {}

StepStats RawEngine::step(std::uint32_t ops) {
  StepStats st;
  Device& dev = part_.device();
  const std::uint64_t page = dev.profile().page_bytes;
  for (std::uint32_t i = 0; i < ops; ++i) {
    std::uint64_t n = std::min<std::uint64_t>(raw_.io_pages, span_);
    if (raw_.sequential) {
      if (seq_pos_ + n > start_ + span_) seq_pos_ = start_;
      dev.write_run(seq_pos_, n);
      seq_pos_ += static_cast<Lba>(n);
    } else {
      Lba lba = start_ + static_cast<Lba>(rng_.next_below(span_ - n + 1));
      dev.write_run(lba, n);
    }
    ++st.ops;
    ++st.writes;
    st.app_bytes += n * page;
  }
  return st;
}

std::uint64_t RawEngine::disk_util_bytes() const {
  return span_ * part_.device().profile().page_bytes;
}

}  // namespace ssdlab
