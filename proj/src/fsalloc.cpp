#include "ssdlab/fsalloc.hpp"

#include <algorithm>
#include <string>

namespace ssdlab {

Partition::Partition(Device& dev, Lba start, std::uint64_t length_pages,
                     AllocPolicy policy, bool discard_on_delete)
    : dev_(dev),
      start_(start),
      length_(length_pages),
      policy_(policy),
      discard_(discard_on_delete),
      free_pages_(length_pages),
      cursor_(start) {
  if (length_pages == 0)
    throw ConfigError("fsalloc: empty partition");
  if (static_cast<std::uint64_t>(start) + length_pages >
      dev.profile().logical_pages())
    throw ConfigError("fsalloc: partition exceeds device capacity");
  free_.push_back({start, length_pages});
}

// Takes up to `want` pages from free_[free_idx], from its low end, and
// appends the taken range to `out`. Returns how many pages were taken.
std::uint64_t Partition::take_from(std::size_t free_idx, std::uint64_t want,
                                   std::vector<Extent>& out) {
  Extent& e = free_[free_idx];
  std::uint64_t take = std::min(want, e.length);
  if (!out.empty() && out.back().start + out.back().length == e.start) {
    out.back().length += take;
  } else {
    out.push_back({e.start, take});
  }
  e.start += static_cast<Lba>(take);
  e.length -= take;
  free_pages_ -= take;
  return take;
}

FileId Partition::create_file(std::uint64_t size_pages) {
  if (size_pages == 0)
    throw ConfigError("fsalloc: zero-sized file");
  if (size_pages > free_pages_)
    throw OutOfSpaceError("fsalloc: need " + std::to_string(size_pages) +
                          " pages, " + std::to_string(free_pages_) +
                          " free");

  std::vector<Extent> got;
  std::uint64_t want = size_pages;

  std::size_t begin = 0;
  if (policy_ == AllocPolicy::kNextFit) {
    // Resume scanning at the first free extent at or past the cursor.
    begin = static_cast<std::size_t>(
        std::lower_bound(free_.begin(), free_.end(), cursor_,
                         [](const Extent& e, Lba c) {
                           return e.start + e.length <= c;
                         }) -
        free_.begin());
    if (begin < free_.size() && free_[begin].start < cursor_ &&
        free_[begin].start + free_[begin].length > cursor_) {
      // The cursor lands inside this extent; take its tail first.
      Extent& e = free_[begin];
      std::uint64_t tail = e.start + e.length - cursor_;
      std::uint64_t take = std::min(want, tail);
      if (take == e.length) {
        want -= take_from(begin, take, got);
      } else {
        // Split: keep the head, consume from the cursor up.
        got.push_back({cursor_, take});
        std::uint64_t head = cursor_ - e.start;
        std::uint64_t rest = e.length - head - take;
        e.length = head;
        if (rest > 0)
          free_.insert(free_.begin() + static_cast<long>(begin) + 1,
                       {static_cast<Lba>(cursor_ + take), rest});
        free_pages_ -= take;
        want -= take;
      }
      ++begin;
    }
  }

  for (std::size_t i = begin; want > 0 && i < free_.size(); ++i)
    want -= take_from(i, want, got);
  for (std::size_t i = 0; want > 0 && i < begin && i < free_.size(); ++i)
    want -= take_from(i, want, got);
  internal_check(want == 0, "fsalloc: free accounting drifted");

  std::erase_if(free_, [](const Extent& e) { return e.length == 0; });
  if (policy_ == AllocPolicy::kNextFit && !got.empty())
    cursor_ = got.back().start + static_cast<Lba>(got.back().length);
  high_water_ = std::max(high_water_, live_pages());

  FileId id = static_cast<FileId>(files_.size());
  files_.push_back(std::move(got));
  return id;
}

void Partition::delete_file(FileId id) {
  if (id >= files_.size() || !files_[id])
    throw AddressError("fsalloc: no such file: " + std::to_string(id));
  for (const Extent& e : *files_[id]) {
    if (discard_) dev_.trim(e.start, e.length);
    free_pages_ += e.length;
    auto pos = std::lower_bound(
        free_.begin(), free_.end(), e,
        [](const Extent& a, const Extent& b) { return a.start < b.start; });
    pos = free_.insert(pos, e);
    // Coalesce with neighbours.
    if (pos != free_.begin()) {
      auto prev = pos - 1;
      if (prev->start + prev->length == pos->start) {
        prev->length += pos->length;
        pos = free_.erase(pos) - 1;
      }
    }
    auto next = pos + 1;
    if (next != free_.end() && pos->start + pos->length == next->start) {
      pos->length += next->length;
      free_.erase(next);
    }
  }
  files_[id].reset();
}

const std::vector<Extent>& Partition::file_extents(FileId id) const {
  if (id >= files_.size() || !files_[id])
    throw AddressError("fsalloc: no such file: " + std::to_string(id));
  return *files_[id];
}

std::uint64_t Partition::file_size_pages(FileId id) const {
  std::uint64_t n = 0;
  for (const Extent& e : file_extents(id)) n += e.length;
  return n;
}

void Partition::map_range(FileId id, std::uint64_t offset, std::uint64_t count,
                          std::vector<Lba>& out) const {
  std::uint64_t skip = offset;
  for (const Extent& e : file_extents(id)) {
    if (count == 0) break;
    if (skip >= e.length) {
      skip -= e.length;
      continue;
    }
    std::uint64_t off = skip;
    skip = 0;
    std::uint64_t n = std::min(count, e.length - off);
    for (std::uint64_t i = 0; i < n; ++i)
      out.push_back(e.start + static_cast<Lba>(off + i));
    count -= n;
  }
  if (count != 0)
    throw AddressError("fsalloc: file range out of bounds");
}

ServiceReport Partition::write_file(FileId id, std::uint64_t offset,
                                    std::uint64_t count) {
  ServiceReport total;
  std::uint64_t skip = offset;
  for (const Extent& e : file_extents(id)) {
    if (count == 0) break;
    if (skip >= e.length) {
      skip -= e.length;
      continue;
    }
    std::uint64_t off = skip;
    skip = 0;
    std::uint64_t n = std::min(count, e.length - off);
    total += dev_.write_run(e.start + static_cast<Lba>(off), n);
    count -= n;
  }
  if (count != 0)
    throw AddressError("fsalloc: file range out of bounds");
  return total;
}

void Partition::check_tiling() const {
  std::vector<Extent> all = free_;
  for (const auto& f : files_)
    if (f) all.insert(all.end(), f->begin(), f->end());
  std::sort(all.begin(), all.end(),
            [](const Extent& a, const Extent& b) { return a.start < b.start; });
  Lba at = start_;
  for (const Extent& e : all) {
    internal_check(e.start == at, "fsalloc: tiling gap or overlap");
    at = e.start + static_cast<Lba>(e.length);
  }
  internal_check(at == start_ + length_, "fsalloc: tiling does not cover");
}

}  // namespace ssdlab
