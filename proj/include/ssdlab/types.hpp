#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ssdlab {

// Addresses are page-granular throughout: an Lba names one logical page,
// a Ppa one physical page. 32 bits cover 16 TiB of 4 KiB pages.
using Lba = std::uint32_t;
using Ppa = std::uint32_t;
using BlockId = std::uint32_t;

inline constexpr Ppa kNoPpa = 0xffffffffu;
inline constexpr Lba kNoLba = 0xffffffffu;

// Bad user input (config files, CLI flags, malformed specs). Exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An address outside the device or partition range.
class AddressError : public std::runtime_error {
 public:
  explicit AddressError(const std::string& what) : std::runtime_error(what) {}
};

// Allocation failed because the partition is full. A first-class run
// outcome, not a crash. Exit code 3 when it ends a run.
class OutOfSpaceError : public std::runtime_error {
 public:
  explicit OutOfSpaceError(const std::string& what)
      : std::runtime_error(what) {}
};

// A broken internal invariant; always a bug. Exit code 4.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void internal_check(bool ok, const char* msg) {
  if (!ok) throw InternalError(msg);
}

inline constexpr std::uint64_t kKiB = 1024ull;
inline constexpr std::uint64_t kMiB = 1024ull * 1024;
inline constexpr std::uint64_t kGiB = 1024ull * 1024 * 1024;

inline constexpr std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return (a + b - 1) / b;
}

}  // namespace ssdlab
