#pragma once

#include <filesystem>

#include <json.hpp>

#include "tocadv/bench.hpp"
#include "tocadv/domain.hpp"
#include "tocadv/profiling.hpp"

namespace tocadv {

/// A parsed and validated problem description: storage classes, database
/// objects and the workload. See docs in the README for the schema.
struct ProblemConfig {
  std::vector<StorageClass> classes;
  std::vector<DataObject> objects;
  WorkloadSpec workload;
};

/// Bundled device profile table; overridable with TOCADV_FIXTURE_PATH.
std::filesystem::path default_fixture_path();

/// Loads a latency fixture: a list of fully specified storage classes.
std::vector<StorageClass> load_fixture(const std::filesystem::path& path);

/// Loads a config file. Class entries may reference a fixture class by id
/// ("fixture": "HDD") to pull its price and latency table.
ProblemConfig load_config(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& fixture_path = std::nullopt);

struct ProfileFile {
  bool plan_invariant = false;
  std::vector<ProfileRecord> records;
};

ProfileFile load_profile_file(const std::filesystem::path& path);

/// Loads and validates a profile against a config in one step.
WorkloadProfile load_profile(const std::filesystem::path& path,
                             const ProblemConfig& config);

nlohmann::ordered_json profile_to_json(const WorkloadProfile& profile);
void save_profile(const std::filesystem::path& path,
                  const WorkloadProfile& profile);

nlohmann::ordered_json fixture_to_json(
    const std::vector<StorageClass>& classes);
void save_fixture(const std::filesystem::path& path,
                  const std::vector<StorageClass>& classes);

/// Writes a config with all classes inlined (fixture references are resolved
/// at load time, so a loaded config saves losslessly).
nlohmann::ordered_json config_to_json(const ProblemConfig& config);
void save_config(const std::filesystem::path& path,
                 const ProblemConfig& config);

/// Merges measured latencies into a fixture-format file, creating the class
/// entry (price and capacity required then) or the concurrency level as
/// needed. Partial levels are allowed on disk; completeness is checked when
/// a config uses the class.
void append_bench_to_fixture(const std::filesystem::path& path,
                             const std::string& class_id,
                             std::optional<double> price_cents_per_gb_hour,
                             std::optional<double> capacity_gb,
                             const std::vector<BenchResult>& results);

/// dump(2) with a trailing newline; reports and profiles are written with
/// this so identical inputs produce byte-identical files.
std::string canonical_dump(const nlohmann::ordered_json& j);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace tocadv
