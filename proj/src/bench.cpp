#include "tocadv/bench.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstring>
#include <latch>
#include <mutex>
#include <random>
#include <set>
#include <thread>
#include <vector>

namespace tocadv {

namespace {

std::mutex g_targets_mutex;
std::set<std::string>& active_targets() {
  static std::set<std::string> targets;
  return targets;
}

std::string canonical_key(const std::filesystem::path& target) {
  std::error_code ec;
  auto canonical = std::filesystem::weakly_canonical(target, ec);
  return ec ? target.string() : canonical.string();
}

struct Fd {
  int fd = -1;
  ~Fd() {
    if (fd >= 0) ::close(fd);
  }
};

struct AlignedBuffer {
  void* data = nullptr;
  explicit AlignedBuffer(std::size_t size) {
    if (posix_memalign(&data, 4096, size) != 0)
      throw BenchError("cannot allocate aligned I/O buffer");
  }
  ~AlignedBuffer() { free(data); }
};

void fill_file(const std::filesystem::path& path, std::size_t size,
               std::uint64_t seed) {
  Fd fd;
  fd.fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd.fd < 0)
    throw BenchError("cannot create bench file " + path.string() + ": " +
                     std::strerror(errno));
  std::vector<char> chunk(64 * 1024);
  std::mt19937_64 rng(seed);
  for (auto& c : chunk) c = static_cast<char>(rng());
  std::size_t written = 0;
  while (written < size) {
    std::size_t n = std::min(chunk.size(), size - written);
    if (::write(fd.fd, chunk.data(), n) != static_cast<ssize_t>(n))
      throw BenchError("short write preparing " + path.string());
    written += n;
  }
  ::fsync(fd.fd);
}

int open_for_read(const std::filesystem::path& path, bool want_direct,
                  bool& got_direct) {
  got_direct = false;
#ifdef O_DIRECT
  if (want_direct) {
    int fd = ::open(path.c_str(), O_RDONLY | O_DIRECT);
    if (fd >= 0) {
      got_direct = true;
      return fd;
    }
  }
#endif
  int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0)
    throw BenchError("cannot open " + path.string() + ": " +
                     std::strerror(errno));
  return fd;
}

struct MeasuredRun {
  std::uint64_t operations = 0;
  double elapsed_ms = 0.0;
  bool direct_io = false;
};

MeasuredRun run_workers(const std::filesystem::path& target, IoType io,
                        int concurrency, const BenchConfig& cfg) {
  std::size_t block = std::max<std::size_t>(cfg.block_size, 512);
  std::size_t record = std::max<std::size_t>(cfg.record_size, 1);
  std::size_t read_set =
      std::max<std::size_t>(cfg.working_set_bytes / block, 1) * block;
  std::size_t write_set =
      std::max<std::size_t>(cfg.working_set_bytes / record, 1) * record;
  bool reads = io == IoType::SR || io == IoType::RR;
  // Direct I/O needs sector-aligned transfers; fall back silently otherwise.
  bool want_direct = cfg.use_direct_io && reads && block % 4096 == 0;

  std::vector<std::filesystem::path> files;
  for (int w = 0; w < concurrency; ++w)
    files.push_back(target / ("tocadv_bench_w" + std::to_string(w) + ".dat"));

  // Workers that read or rewrite need prepared data.
  if (io != IoType::SW) {
    for (int w = 0; w < concurrency; ++w)
      fill_file(files[w], reads ? read_set : write_set,
                cfg.seed + 17 * w);
  }

  std::latch ready(concurrency);
  std::latch go(1);
  std::vector<std::thread> threads;
  std::vector<std::string> errors(concurrency);
  std::vector<char> worker_direct(concurrency, 0);

  for (int w = 0; w < concurrency; ++w) {
    threads.emplace_back([&, w] {
      bool ready_signaled = false;
      auto signal_ready = [&] {
        ready.count_down();
        ready_signaled = true;
      };
      try {
        std::mt19937_64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * (w + 1)));
        if (io == IoType::SR || io == IoType::RR) {
          bool got_direct = false;
          Fd fd;
          fd.fd = open_for_read(files[w], want_direct, got_direct);
          worker_direct[w] = got_direct ? 1 : 0;
          AlignedBuffer buf(block);
          std::size_t blocks = read_set / block;
          std::uniform_int_distribution<std::size_t> pick(0, blocks - 1);
          signal_ready();
          go.wait();
          std::size_t next = 0;
          for (std::size_t n = 0; n < cfg.ops_per_worker; ++n) {
            std::size_t idx = io == IoType::SR ? next : pick(rng);
            if (io == IoType::SR && ++next == blocks) next = 0;
            ssize_t got = ::pread(fd.fd, buf.data, block,
                                  static_cast<off_t>(idx * block));
            if (got != static_cast<ssize_t>(block))
              throw BenchError("short read on " + files[w].string());
          }
        } else if (io == IoType::SW) {
          Fd fd;
          fd.fd = ::open(files[w].c_str(), O_WRONLY | O_CREAT | O_TRUNC,
                         0644);
          if (fd.fd < 0)
            throw BenchError("cannot create " + files[w].string() + ": " +
                             std::strerror(errno));
          std::vector<char> row(record, 'r');
          signal_ready();
          go.wait();
          for (std::size_t n = 0; n < cfg.ops_per_worker; ++n) {
            if (::write(fd.fd, row.data(), record) !=
                static_cast<ssize_t>(record))
              throw BenchError("short write on " + files[w].string());
          }
        } else {  // RW: read a row at a random offset, change it, write back
          Fd fd;
          fd.fd = ::open(files[w].c_str(), O_RDWR);
          if (fd.fd < 0)
            throw BenchError("cannot open " + files[w].string() + ": " +
                             std::strerror(errno));
          std::vector<char> row(record);
          std::size_t rows = write_set / record;
          std::uniform_int_distribution<std::size_t> pick(0, rows - 1);
          signal_ready();
          go.wait();
          for (std::size_t n = 0; n < cfg.ops_per_worker; ++n) {
            off_t off = static_cast<off_t>(pick(rng) * record);
            if (::pread(fd.fd, row.data(), record, off) !=
                static_cast<ssize_t>(record))
              throw BenchError("short read on " + files[w].string());
            row[0] = static_cast<char>(row[0] + 1);
            if (::pwrite(fd.fd, row.data(), record, off) !=
                static_cast<ssize_t>(record))
              throw BenchError("short write on " + files[w].string());
          }
        }
      } catch (const std::exception& e) {
        errors[w] = e.what();
        if (!ready_signaled) ready.count_down();  // never strand the launcher
      }
    });
  }

  ready.wait();
  auto t0 = std::chrono::steady_clock::now();
  go.count_down();
  for (auto& t : threads) t.join();
  auto t1 = std::chrono::steady_clock::now();

  for (const auto& f : files) {
    std::error_code ec;
    std::filesystem::remove(f, ec);
  }
  for (const auto& err : errors)
    if (!err.empty()) throw BenchError(err);

  MeasuredRun run;
  run.operations =
      static_cast<std::uint64_t>(concurrency) * cfg.ops_per_worker;
  run.elapsed_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  run.direct_io = !worker_direct.empty() &&
                  std::all_of(worker_direct.begin(), worker_direct.end(),
                              [](char c) { return c != 0; });
  return run;
}

BenchResult measure(const std::filesystem::path& target, IoType io,
                    int concurrency, const BenchConfig& cfg) {
  MeasuredRun run = run_workers(target, io, concurrency, cfg);
  if (run.operations == 0)
    throw BenchError("no operations completed on " + target.string());

  BenchResult result;
  result.io = io;
  result.concurrency = concurrency;
  result.operations = run.operations;
  result.direct_io = run.direct_io;
  result.elapsed_ms = run.elapsed_ms;

  if (io == IoType::RW) {
    double rr_ms = cfg.rr_baseline_ms;
    if (rr_ms < 0.0) rr_ms = measure(target, IoType::RR, concurrency, cfg)
                                 .per_io_ms;
    double write_share =
        run.elapsed_ms - rr_ms * static_cast<double>(run.operations);
    double floor_total =
        cfg.rw_floor_ms * static_cast<double>(run.operations);
    if (write_share < floor_total) {
      result.anomaly = true;
      write_share = floor_total;
    }
    result.elapsed_ms = write_share;
  }
  result.per_io_ms =
      result.elapsed_ms / static_cast<double>(result.operations);
  return result;
}

}  // namespace

TargetLock::TargetLock(const std::filesystem::path& target)
    : key_(canonical_key(target)) {
  std::lock_guard<std::mutex> lock(g_targets_mutex);
  if (!active_targets().insert(key_).second)
    throw BenchError("a benchmark run is already active on " + key_);
}

TargetLock::~TargetLock() {
  std::lock_guard<std::mutex> lock(g_targets_mutex);
  active_targets().erase(key_);
}

BenchResult bench_storage(const std::filesystem::path& target, IoType io,
                          int concurrency, const BenchConfig& config) {
  if (concurrency < 1)
    throw ValidationError("bench concurrency must be at least 1");
  if (config.ops_per_worker == 0)
    throw ValidationError("bench requires a positive operation count");
  std::error_code ec;
  if (!std::filesystem::is_directory(target, ec))
    throw BenchError("bench target " + target.string() +
                     " is not a directory");
  TargetLock lock(target);
  return measure(target, io, concurrency, config);
}

}  // namespace tocadv
