#pragma once

#include <cstdint>
#include <filesystem>

#include "tocadv/domain.hpp"

namespace tocadv {

struct BenchConfig {
  std::size_t block_size = 8192;    // bytes per read I/O (page-sized)
  std::size_t record_size = 256;    // bytes per written row
  std::size_t ops_per_worker = 2048;
  std::size_t working_set_bytes = 32ull << 20;  // per worker
  /// Random-write time is the measured read-modify-write time minus the
  /// random-read share; a noisy baseline can push it negative, in which case
  /// it is clamped here and flagged.
  double rw_floor_ms = 1e-6;
  /// Random-read ms/IO to subtract for RW runs; measured internally when
  /// negative.
  double rr_baseline_ms = -1.0;
  bool use_direct_io = true;  // attempted for block reads, silent fallback
  std::uint64_t seed = 1;
};

struct BenchResult {
  IoType io = IoType::SR;
  int concurrency = 0;
  std::uint64_t operations = 0;
  double elapsed_ms = 0.0;  // time attributed to this I/O type
  double per_io_ms = 0.0;   // elapsed_ms / operations
  bool anomaly = false;     // RW subtraction went below the floor
  bool direct_io = false;   // block reads bypassed the page cache
};

/// Serializes benchmark runs per target directory; bench_storage holds one
/// for the duration of a run and refuses to start while another run owns the
/// same target.
class TargetLock {
public:
  explicit TargetLock(const std::filesystem::path& target);
  ~TargetLock();
  TargetLock(const TargetLock&) = delete;
  TargetLock& operator=(const TargetLock&) = delete;

private:
  std::string key_;
};

/// Runs `concurrency` workers, each driving its own file under `target`:
/// SR reads blocks in order, RR reads blocks at random offsets, SW appends
/// fixed-size records, RW rewrites records at random offsets and reports the
/// write share after subtracting the random-read time.
BenchResult bench_storage(const std::filesystem::path& target, IoType io,
                          int concurrency, const BenchConfig& config = {});

}  // namespace tocadv
