#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ssdlab/device.hpp"
#include "ssdlab/types.hpp"

namespace ssdlab {

using FileId = std::uint32_t;

struct Extent {
  Lba start;
  std::uint64_t length;  // pages

  friend bool operator==(const Extent&, const Extent&) = default;
};

enum class AllocPolicy : std::uint8_t {
  kFirstFit,  // always scan from the lowest address
  kNextFit,   // first-fit scan resuming at a rotating cursor
};

// A flat extent allocator standing in for a filesystem: it hands out page
// ranges inside one partition and forwards file I/O to the device.
//
// Files are allocated greedily from free extents in scan order, splitting
// as needed, so one file may span several extents. Deleting a file returns
// its extents to the free pool; whether the device learns about the dead
// pages depends on discard_on_delete (mount -o discard vs nodiscard).
// Without discard, the device keeps treating the pages as valid until
// their LBAs are rewritten, which is exactly the pathology worth studying.
class Partition {
 public:
  Partition(Device& dev, Lba start, std::uint64_t length_pages,
            AllocPolicy policy, bool discard_on_delete);

  FileId create_file(std::uint64_t size_pages);  // throws OutOfSpaceError
  void delete_file(FileId id);

  const std::vector<Extent>& file_extents(FileId id) const;
  std::uint64_t file_size_pages(FileId id) const;

  // Maps [offset, offset+count) of a file onto device LBAs.
  void map_range(FileId id, std::uint64_t offset, std::uint64_t count,
                 std::vector<Lba>& out) const;

  // Writes [offset, offset+count) of a file through to the device as
  // maximal contiguous runs.
  ServiceReport write_file(FileId id, std::uint64_t offset,
                           std::uint64_t count);

  Device& device() { return dev_; }
  Lba lba_begin() const { return start_; }
  std::uint64_t size_pages() const { return length_; }
  std::uint64_t free_pages() const { return free_pages_; }
  std::uint64_t live_pages() const { return length_ - free_pages_; }
  std::uint64_t live_bytes() const {
    return live_pages() * dev_.profile().page_bytes;
  }
  // Running maximum of live_pages, so transient compaction peaks count.
  std::uint64_t high_water_pages() const { return high_water_; }
  const std::vector<Extent>& free_extents() const { return free_; }

  // Verifies that live extents and free extents tile the partition
  // exactly, with no overlap or gap. Throws InternalError otherwise.
  void check_tiling() const;

 private:
  std::uint64_t take_from(std::size_t free_idx, std::uint64_t want,
                          std::vector<Extent>& out);

  Device& dev_;
  Lba start_;
  std::uint64_t length_;
  AllocPolicy policy_;
  bool discard_;
  std::vector<Extent> free_;  // sorted by start, coalesced
  std::vector<std::optional<std::vector<Extent>>> files_;
  std::uint64_t free_pages_;
  std::uint64_t high_water_ = 0;
  Lba cursor_;  // next-fit resume point
};

}  // namespace ssdlab
