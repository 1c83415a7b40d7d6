#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ssdlab/fsalloc.hpp"
#include "ssdlab/rng.hpp"
#include "ssdlab/types.hpp"

namespace ssdlab {

struct KvSpec {
  std::uint64_t num_keys = 0;
  std::uint32_t key_bytes = 16;
  std::uint32_t value_bytes = 4000;
  double write_fraction = 1.0;  // rest are point reads
  std::uint64_t seed = 42;

  std::uint64_t kv_bytes() const { return key_bytes + value_bytes; }
  std::uint64_t dataset_bytes() const { return num_keys * kv_bytes(); }
  void validate() const;
};

struct StepStats {
  std::uint64_t ops = 0;
  std::uint64_t writes = 0;
  std::uint64_t reads = 0;
  std::uint64_t app_bytes = 0;

  StepStats& operator+=(const StepStats& o) {
    ops += o.ops;
    writes += o.writes;
    reads += o.reads;
    app_bytes += o.app_bytes;
    return *this;
  }
};

// A KV engine driving its partition. load() bulk-ingests the dataset;
// step() applies a batch of operations. Both advance the device clock;
// step() may throw OutOfSpaceError, which ends the run as a result, not
// a crash.
class Engine {
 public:
  virtual ~Engine() = default;
  virtual void load() = 0;
  virtual StepStats step(std::uint32_t ops) = 0;
  virtual std::uint64_t disk_util_bytes() const = 0;
  virtual const char* name() const = 0;
};

// ---------------------------------------------------------------------
// LSM tree.
//
// Memtable -> L1 dump files (whole key range) -> leveled, range-
// partitioned deeper levels with size ratio T. Compactions pick victims
// round-robin, merge with overlapping files one level down, and survive
// `survival_ratio` of their input (updates shadow older versions). The
// last level additionally caps its output at the live data volume per key
// range times (1 + last_level_slack): garbage beyond that slack is
// dropped, which is what keeps both space use and write amplification
// self-limiting.
struct LsmParams {
  std::uint64_t memtable_bytes = 8 * kMiB;
  std::uint32_t l1_trigger_files = 4;
  std::uint32_t size_ratio = 10;
  std::uint32_t max_levels = 8;
  std::uint64_t sst_file_pages = 64;
  double survival_ratio = 0.9;
  double last_level_slack = 0.17;
  std::uint64_t min_deep_level_bytes = 16 * kMiB;
  // How full the capped levels are when the bulk load finishes.
  double load_level_fill = 0.5;
  double per_op_cpu_us = 1000.0;
  // Write-ahead log: one page per page of accumulated entries, recycled
  // at every flush.
  bool wal = true;
  // Compaction outputs stream through background writers: files write in
  // chunks, round-robin across everything in flight, so concurrent
  // compactions and the foreground WAL interleave on the device exactly
  // as concurrent writers do on a real drive.
  std::uint64_t writer_chunk_pages = 1;
  std::uint64_t writer_backlog_pages = 4096;

  void validate() const;
};

class LsmEngine : public Engine {
 public:
  LsmEngine(Partition& part, const KvSpec& kv, const LsmParams& p);

  void load() override;
  StepStats step(std::uint32_t ops) override;
  std::uint64_t disk_util_bytes() const override;
  const char* name() const override { return "lsm"; }

  // Introspection for tests.
  std::size_t level_count() const { return levels_.size(); }
  std::uint64_t level_bytes(std::size_t i) const { return levels_[i].bytes; }
  std::uint64_t level_files(std::size_t i) const {
    return levels_[i].files.size();
  }
  std::uint64_t compactions() const { return compactions_; }

 private:
  struct SstFile {
    std::uint64_t lo, hi;   // key range, fixed point in [0, kSpan)
    std::uint64_t bytes;
    FileId file;
  };
  struct Level {
    std::vector<SstFile> files;  // L1 by age; deeper levels sorted by lo
    std::uint64_t bytes = 0;
    std::uint64_t cap_bytes = 0;  // 0 = uncapped (last level)
    std::uint64_t rr_cursor = 0;  // round-robin victim position
  };

  static constexpr std::uint64_t kSpan = 1ull << 40;

  struct PendingRun {
    FileId file;
    std::uint64_t next, end;  // page range not yet on the device
  };

  void flush_memtable();
  void maintain();
  void compact_l1();
  void compact_deep(std::size_t i);
  void emit_outputs(std::size_t dst, std::uint64_t lo, std::uint64_t hi,
                    std::uint64_t out_bytes, std::vector<SstFile>& out);
  void wal_append();
  void enqueue_write(FileId id, std::uint64_t pages);
  void finish_file(FileId id);   // force any pending pages onto the device
  void remove_file(FileId id);   // finish, then delete
  bool pump_chunk();
  void pump_to(std::uint64_t target_pages);
  std::uint64_t page_bytes() const;

  Partition& part_;
  KvSpec kv_;
  LsmParams p_;
  Rng rng_;
  std::vector<Level> levels_;
  std::uint64_t memtable_fill_ = 0;
  std::uint64_t compactions_ = 0;
  double cpu_debt_us_ = 0.0;
  std::vector<PendingRun> pending_;
  std::size_t pump_rr_ = 0;
  std::uint64_t pending_pages_ = 0;
  bool bulk_ = false;  // load() writes straight through
  bool wal_open_ = false;
  FileId wal_file_ = 0;
  std::uint64_t wal_written_ = 0;
};

// ---------------------------------------------------------------------
// B+Tree with in-place page-image checkpoints.
//
// One contiguous footprint file holds the leaves plus an overhead band
// (internal nodes, journal). Updates dirty random leaves; every
// checkpoint_every_ops the dirty leaves are written back in place, along
// with write_multiplier-1 overhead pages per leaf cycled through the
// band. The footprint never grows past its initial allocation, so the
// rest of the partition is never written: the device only learns that if
// it is told (TRIM) or was never written there.
struct BtreeParams {
  double footprint_amp = 1.08;  // written LBA span / dataset
  double space_amp = 1.13;      // allocated file size / dataset
  double write_multiplier = 9.8;
  std::uint32_t checkpoint_every_ops = 128;
  double per_op_cpu_us = 40000.0;

  void validate() const;
};

class BtreeEngine : public Engine {
 public:
  BtreeEngine(Partition& part, const KvSpec& kv, const BtreeParams& p);

  void load() override;
  StepStats step(std::uint32_t ops) override;
  std::uint64_t disk_util_bytes() const override;
  const char* name() const override { return "btree"; }

  std::uint64_t leaf_pages() const { return leaves_; }
  std::uint64_t span_pages() const { return span_; }
  std::uint64_t file_pages() const { return file_pages_; }

 private:
  void checkpoint();

  Partition& part_;
  KvSpec kv_;
  BtreeParams p_;
  Rng rng_;
  FileId file_ = 0;
  std::uint64_t leaves_ = 0;
  std::uint64_t span_ = 0;
  std::uint64_t file_pages_ = 0;
  std::uint64_t band_cursor_ = 0;
  std::uint32_t ops_since_ckpt_ = 0;
  std::vector<std::uint32_t> dirty_;     // leaf ids, deduplicated
  std::vector<bool> is_dirty_;
  double cpu_debt_us_ = 0.0;
  double extra_carry_ = 0.0;
};

// ---------------------------------------------------------------------
// Raw block workloads and device preparation.

// Writes [start, start+count) once, sequentially, in chunk-sized calls.
void raw_fill_sequential(Device& dev, Lba start, std::uint64_t count,
                         std::uint32_t chunk_pages = 256);

// Uniform random single-page writes over [start, start+span).
void raw_random_writes(Device& dev, Lba start, std::uint64_t span,
                       std::uint64_t count, Rng& rng);

// TRIMs the whole device: the factory-fresh state.
void prepare_trimmed(Device& dev);

// Sequential fill of the range followed by two random overwrite passes,
// leaving the device at its worst-case steady layout.
void prepare_preconditioned(Device& dev, Lba start, std::uint64_t count,
                            std::uint64_t seed);

// Raw engine for scenarios that bypass the allocator entirely.
struct RawParams {
  bool sequential = false;
  double region_fraction = 1.0;  // of the partition
  std::uint32_t io_pages = 1;
};

class RawEngine : public Engine {
 public:
  RawEngine(Partition& part, const KvSpec& kv, const RawParams& p);

  void load() override;
  StepStats step(std::uint32_t ops) override;
  std::uint64_t disk_util_bytes() const override;
  const char* name() const override { return raw_.sequential ? "raw-seq" : "raw-rand"; }

 private:
  Partition& part_;
  KvSpec kv_;
  RawParams raw_;
  Rng rng_;
  Lba start_ = 0;
  std::uint64_t span_ = 0;
  Lba seq_pos_ = 0;
};

}  // namespace ssdlab
