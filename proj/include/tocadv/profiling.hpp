#pragma once

#include <cstdint>

#include "tocadv/domain.hpp"

namespace tocadv {

/// The uniform placements a profiling run has to cover: every vector in
/// D^K for the maximum group size K. A group smaller than K uses the leading
/// components of each vector.
struct BaselinePlan {
  std::vector<Placement> placements;
  std::size_t count() const { return placements.size(); }
};

BaselinePlan baseline_plan(const std::vector<StorageClass>& classes,
                           int max_group_size);

/// One row of an external profile file.
struct ProfileRecord {
  std::string query;
  std::string object;
  IoType io = IoType::SR;
  std::vector<std::string> placement;  // empty when the profile is
                                       // plan-invariant
  double count = 0.0;
  std::size_t index = 0;  // position in the source file, for error messages
};

/// Validates records against the declared objects, classes and workload and
/// accumulates them into a profile. Duplicate keys sum (multiple runs
/// accumulate).
WorkloadProfile ingest_profile(const std::vector<ProfileRecord>& records,
                               bool plan_invariant,
                               const std::vector<DataObject>& objects,
                               const std::vector<StorageClass>& classes,
                               const WorkloadSpec& workload);

/// Scenario-driven profile synthesis. Scenarios:
///   seq-scan-only  plan-invariant sequential reads on tables only.
///   plan-switch    a group placed entirely on the most expensive class is
///                  accessed with random reads on table and indices; any
///                  other placement falls back to a sequential scan of the
///                  table alone.
///   random         per-placement counts with mostly-stable plans and an
///                  occasional switching group.
struct GeneratorSpec {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<std::string> query_ids;
};

WorkloadProfile synthesize_profile(const std::vector<DataObject>& objects,
                                   const std::vector<ObjectGroup>& groups,
                                   const std::vector<StorageClass>& classes,
                                   const GeneratorSpec& spec);

/// A full self-consistent instance for desk-scale experiments: classes with
/// price-correlated latencies, grouped objects, a workload and a profile.
struct SyntheticInstance {
  std::vector<StorageClass> classes;
  std::vector<DataObject> objects;
  WorkloadSpec workload;
  WorkloadProfile profile;
};

struct RandomInstanceParams {
  int num_classes = 3;
  int num_tables = 2;
  int max_indices_per_table = 1;
  int num_other_objects = 0;
  int num_queries = 3;
  int num_streams = 1;
  MetricMode metric_mode = MetricMode::per_query_response_time;
  /// When true, one of the cheaper classes gets a capacity below the total
  /// database size. The most expensive class always fits everything.
  bool tight_capacity = false;
};

SyntheticInstance random_instance(const RandomInstanceParams& params,
                                  std::uint64_t seed);

}  // namespace tocadv
