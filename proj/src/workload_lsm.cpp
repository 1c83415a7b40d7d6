#include <algorithm>
#include <cmath>

#include "ssdlab/workload.hpp"

namespace ssdlab {

void LsmParams::validate() const {
  if (memtable_bytes == 0) throw ConfigError("lsm: memtable_bytes == 0");
  if (l1_trigger_files == 0) throw ConfigError("lsm: l1_trigger_files == 0");
  if (size_ratio < 2) throw ConfigError("lsm: size_ratio must be >= 2");
  if (max_levels < 3) throw ConfigError("lsm: max_levels must be >= 3");
  if (sst_file_pages == 0) throw ConfigError("lsm: sst_file_pages == 0");
  if (survival_ratio <= 0.0 || survival_ratio > 1.0)
    throw ConfigError("lsm: survival_ratio out of (0, 1]");
  if (last_level_slack < 0.0 || last_level_slack > 2.0)
    throw ConfigError("lsm: last_level_slack out of [0, 2]");
  if (load_level_fill < 0.0 || load_level_fill > 1.0)
    throw ConfigError("lsm: load_level_fill out of [0, 1]");
  if (per_op_cpu_us < 0.0) throw ConfigError("lsm: negative cpu cost");
  if (writer_chunk_pages == 0) throw ConfigError("lsm: writer_chunk_pages == 0");
}

LsmEngine::LsmEngine(Partition& part, const KvSpec& kv, const LsmParams& p)
    : part_(part), kv_(kv), p_(p), rng_(derive_seed(kv.seed, {2})) {
  kv_.validate();
  p_.validate();

  // Level plan: L1 is the dump level (whole-range files, triggered by
  // count); below it, capacities form a fixed ladder under the partition
  // size, falling by size_ratio until they would drop under
  // min_deep_level_bytes. The last level is uncapped and self-limits via
  // the slack rule. The ladder follows the volume, not the dataset, the
  // way stores size levels from static configuration: a small dataset
  // still carries the full ladder of newer versions above it, which is
  // what makes its relative space overhead larger.
  const std::uint64_t part_bytes =
      part_.size_pages() * part_.device().profile().page_bytes;
  const std::uint64_t l1_bytes = p_.l1_trigger_files * p_.memtable_bytes;
  std::vector<std::uint64_t> caps;
  std::uint64_t c = part_bytes / p_.size_ratio;
  while (c >= p_.min_deep_level_bytes && caps.size() + 2 < p_.max_levels) {
    caps.push_back(c);
    c /= p_.size_ratio;
  }
  std::reverse(caps.begin(), caps.end());

  levels_.resize(caps.size() + 2);
  levels_[0].cap_bytes = l1_bytes;
  for (std::size_t i = 0; i < caps.size(); ++i)
    levels_[i + 1].cap_bytes = caps[i];
  // levels_.back() stays uncapped.
}

std::uint64_t LsmEngine::page_bytes() const {
  return part_.device().profile().page_bytes;
}

std::uint64_t LsmEngine::disk_util_bytes() const {
  return part_.live_bytes();
}

void LsmEngine::enqueue_write(FileId id, std::uint64_t pages) {
  if (bulk_) {
    part_.write_file(id, 0, pages);
    return;
  }
  pending_.push_back({id, 0, pages});
  pending_pages_ += pages;
}

bool LsmEngine::pump_chunk() {
  if (pending_.empty()) return false;
  if (pump_rr_ >= pending_.size()) pump_rr_ = 0;
  PendingRun& r = pending_[pump_rr_];
  std::uint64_t n = std::min(p_.writer_chunk_pages, r.end - r.next);
  part_.write_file(r.file, r.next, n);
  r.next += n;
  pending_pages_ -= n;
  if (r.next == r.end) {
    pending_.erase(pending_.begin() + static_cast<long>(pump_rr_));
  } else {
    ++pump_rr_;
  }
  return true;
}

void LsmEngine::pump_to(std::uint64_t target_pages) {
  while (pending_pages_ > target_pages)
    if (!pump_chunk()) break;
}

void LsmEngine::finish_file(FileId id) {
  for (std::size_t i = 0; i < pending_.size();) {
    if (pending_[i].file != id) {
      ++i;
      continue;
    }
    PendingRun r = pending_[i];
    part_.write_file(r.file, r.next, r.end - r.next);
    pending_pages_ -= r.end - r.next;
    pending_.erase(pending_.begin() + static_cast<long>(i));
    if (pump_rr_ > i) --pump_rr_;
  }
}

void LsmEngine::remove_file(FileId id) {
  finish_file(id);
  part_.delete_file(id);
}

void LsmEngine::wal_append() {
  const std::uint64_t page = page_bytes();
  if (!wal_open_) {
    wal_file_ = part_.create_file(ceil_div(p_.memtable_bytes, page) + 2);
    wal_written_ = 0;
    wal_open_ = true;
  }
  std::uint64_t need = ceil_div(memtable_fill_, page);
  if (need > wal_written_) {
    part_.write_file(wal_file_, wal_written_, need - wal_written_);
    wal_written_ = need;
  }
}

// Splits `out_bytes` across sst-file-sized outputs covering [lo, hi)
// proportionally, appending the new files (written through the device)
// to `out`.
void LsmEngine::emit_outputs(std::size_t dst, std::uint64_t lo,
                             std::uint64_t hi, std::uint64_t out_bytes,
                             std::vector<SstFile>& out) {
  (void)dst;
  if (out_bytes == 0) return;
  const std::uint64_t page = page_bytes();
  const std::uint64_t file_bytes = p_.sst_file_pages * page;
  const std::uint64_t n = ceil_div(out_bytes, file_bytes);
  const std::uint64_t width = hi - lo;
  std::uint64_t written = 0;
  for (std::uint64_t j = 0; j < n; ++j) {
    std::uint64_t bytes = std::min(file_bytes, out_bytes - written);
    written += bytes;
    std::uint64_t flo = lo + width * j / n;
    std::uint64_t fhi = (j + 1 == n) ? hi : lo + width * (j + 1) / n;
    if (fhi <= flo) fhi = flo + 1;
    std::uint64_t pages = ceil_div(bytes, page);
    FileId id = part_.create_file(pages);
    enqueue_write(id, pages);
    out.push_back({flo, fhi, bytes, id});
  }
}

void LsmEngine::load() {
  // Bulk load: sorted ingest dumps straight into the last level as
  // range-partitioned files; intermediate levels see only trivial moves,
  // so each byte is written once. No WAL and no background writers.
  const std::uint64_t d = kv_.dataset_bytes();
  bulk_ = true;
  std::vector<SstFile> files;
  emit_outputs(levels_.size() - 1, 0, kSpan, d, files);
  Level& last = levels_.back();
  last.files = std::move(files);
  for (const SstFile& f : last.files) last.bytes += f.bytes;
  // Ingest keeps arriving while the tail of the bulk phase compacts down,
  // so the middle levels start partially filled rather than empty.
  for (std::size_t i = 1; i + 1 < levels_.size(); ++i) {
    auto warm = static_cast<std::uint64_t>(
        static_cast<double>(levels_[i].cap_bytes) * p_.load_level_fill);
    if (warm == 0) continue;
    std::vector<SstFile> wf;
    emit_outputs(i, 0, kSpan, warm, wf);
    levels_[i].files = std::move(wf);
    for (const SstFile& f : levels_[i].files) levels_[i].bytes += f.bytes;
  }
  bulk_ = false;
}

void LsmEngine::flush_memtable() {
  const std::uint64_t page = page_bytes();
  std::uint64_t pages = ceil_div(memtable_fill_, page);
  FileId id = part_.create_file(pages);
  enqueue_write(id, pages);
  levels_[0].files.push_back({0, kSpan, memtable_fill_, id});
  levels_[0].bytes += memtable_fill_;
  memtable_fill_ = 0;
  if (wal_open_) {
    // The memtable is durable in L1 now, so the log is garbage.
    part_.delete_file(wal_file_);
    wal_open_ = false;
  }
  maintain();
  pump_to(p_.writer_backlog_pages);
}

void LsmEngine::maintain() {
  // Top-down: settle each level before looking deeper, repeat until calm.
  bool moved = true;
  while (moved) {
    moved = false;
    if (levels_[0].files.size() >= p_.l1_trigger_files) {
      compact_l1();
      moved = true;
      continue;
    }
    for (std::size_t i = 1; i + 1 < levels_.size(); ++i) {
      if (levels_[i].cap_bytes > 0 && levels_[i].bytes > levels_[i].cap_bytes) {
        compact_deep(i);
        moved = true;
        break;
      }
    }
  }
}

void LsmEngine::compact_l1() {
  // L1 files cover the whole key range, so everything in L2 overlaps.
  Level& l1 = levels_[0];
  Level& l2 = levels_[1];
  ++compactions_;

  // Inputs must be fully on the device before the merge can read them.
  for (const SstFile& f : l1.files) finish_file(f.file);
  for (const SstFile& f : l2.files) finish_file(f.file);

  std::uint64_t in_bytes = l1.bytes + l2.bytes;
  part_.device().read_pages(ceil_div(in_bytes, page_bytes()));
  std::uint64_t out_bytes = static_cast<std::uint64_t>(
      std::llround(p_.survival_ratio * static_cast<double>(in_bytes)));
  if (levels_.size() == 2) {
    // Degenerate two-level tree: apply the last-level cap.
    double cap = (1.0 + p_.last_level_slack) *
                 static_cast<double>(kv_.dataset_bytes());
    out_bytes = std::min(out_bytes,
                         static_cast<std::uint64_t>(std::llround(cap)));
  }

  std::vector<SstFile> outputs;
  emit_outputs(1, 0, kSpan, out_bytes, outputs);

  for (const SstFile& f : l1.files) part_.delete_file(f.file);
  for (const SstFile& f : l2.files) part_.delete_file(f.file);
  l1.files.clear();
  l1.bytes = 0;
  l2.files = std::move(outputs);
  l2.bytes = out_bytes;
}

void LsmEngine::compact_deep(std::size_t i) {
  Level& up = levels_[i];
  Level& down = levels_[i + 1];
  const bool into_last = (i + 2 == levels_.size());
  ++compactions_;

  // Round-robin victim: first file starting at or past the cursor.
  internal_check(!up.files.empty(), "lsm: compacting an empty level");
  auto vit = std::lower_bound(
      up.files.begin(), up.files.end(), up.rr_cursor,
      [](const SstFile& f, std::uint64_t c) { return f.lo < c; });
  std::size_t vi =
      vit == up.files.end() ? 0 : static_cast<std::size_t>(vit - up.files.begin());
  SstFile victim = up.files[vi];
  up.rr_cursor = victim.hi;

  // Overlaps one level down; the merge covers the union of ranges. Files
  // in a level are disjoint and sorted, so both bounds binary-search.
  auto& fs = down.files;
  std::size_t o_begin = static_cast<std::size_t>(
      std::lower_bound(fs.begin(), fs.end(), victim.lo,
                       [](const SstFile& f, std::uint64_t v) {
                         return f.hi <= v;
                       }) -
      fs.begin());
  std::size_t o_end = o_begin;
  std::uint64_t o_bytes = 0;
  std::uint64_t lo = victim.lo, hi = victim.hi;
  while (o_end < fs.size() && fs[o_end].lo < victim.hi) {
    o_bytes += fs[o_end].bytes;
    lo = std::min(lo, fs[o_end].lo);
    hi = std::max(hi, fs[o_end].hi);
    ++o_end;
  }

  finish_file(victim.file);
  for (std::size_t j = o_begin; j < o_end; ++j) finish_file(fs[j].file);
  part_.device().read_pages(ceil_div(victim.bytes + o_bytes, page_bytes()));
  std::uint64_t out_bytes = static_cast<std::uint64_t>(std::llround(
      p_.survival_ratio * static_cast<double>(victim.bytes + o_bytes)));
  if (into_last) {
    // Live data for this key range plus bounded garbage slack; anything
    // beyond is dropped as obsolete versions.
    double live = static_cast<double>(hi - lo) / static_cast<double>(kSpan) *
                  static_cast<double>(kv_.dataset_bytes());
    auto cap = static_cast<std::uint64_t>(
        std::llround((1.0 + p_.last_level_slack) * live));
    out_bytes = std::min(out_bytes, cap);
  }

  std::vector<SstFile> outputs;
  emit_outputs(i + 1, lo, hi, out_bytes, outputs);

  // Swap inputs for outputs, keeping the level sorted by range.
  part_.delete_file(victim.file);
  up.files.erase(up.files.begin() + static_cast<long>(vi));
  up.bytes -= victim.bytes;

  for (std::size_t j = o_begin; j < o_end; ++j)
    part_.delete_file(down.files[j].file);
  down.files.erase(down.files.begin() + static_cast<long>(o_begin),
                   down.files.begin() + static_cast<long>(o_end));
  down.files.insert(down.files.begin() + static_cast<long>(o_begin),
                    outputs.begin(), outputs.end());
  down.bytes = down.bytes - o_bytes + out_bytes;
}

StepStats LsmEngine::step(std::uint32_t ops) {
  StepStats st;
  Device& dev = part_.device();
  const std::uint64_t kv = kv_.kv_bytes();
  for (std::uint32_t i = 0; i < ops; ++i) {
    bool is_write = kv_.write_fraction >= 1.0 ||
                    rng_.next_double() < kv_.write_fraction;
    if (is_write) {
      memtable_fill_ += kv;
      st.app_bytes += kv;
      ++st.writes;
      cpu_debt_us_ += p_.per_op_cpu_us;
      if (p_.wal) wal_append();
      if (memtable_fill_ >= p_.memtable_bytes) flush_memtable();
      // Background writers make progress alongside foreground traffic.
      pump_chunk();
    } else {
      dev.read_pages(1);
      cpu_debt_us_ += p_.per_op_cpu_us;
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
