#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tocadv {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input or invariant violation; maps to CLI exit code 3.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Exhaustive search refused because the layout space exceeds the budget;
/// maps to CLI exit code 4.
class BudgetError : public Error {
public:
  BudgetError(const std::string& msg, std::uint64_t count)
      : Error(msg), layout_count(count) {}
  std::uint64_t layout_count;
};

class BenchError : public Error {
public:
  using Error::Error;
};

/// The four I/O access patterns the cost estimator distinguishes.
enum class IoType : int { SR = 0, RR = 1, SW = 2, RW = 3 };

inline constexpr std::array<IoType, 4> kAllIoTypes{IoType::SR, IoType::RR,
                                                   IoType::SW, IoType::RW};

const char* to_string(IoType io);
IoType io_type_from_string(std::string_view name);

/// A purchasable storage tier: price per GB-hour, capacity, and a latency
/// table per I/O type keyed by concurrency level (number of client threads).
struct StorageClass {
  std::string id;
  double price_cents_per_gb_hour = 0.0;
  double capacity_gb = 0.0;
  /// concurrency level -> latency in ms per I/O, indexed by IoType.
  std::map<int, std::array<double, 4>> latency_ms;

  bool has_concurrency(int level) const {
    return latency_ms.count(level) != 0;
  }
  /// Latency lookup; throws naming the gap if the level is not profiled.
  double latency(IoType io, int concurrency) const;
};

enum class ObjectKind { table, index, other };

const char* to_string(ObjectKind kind);
ObjectKind object_kind_from_string(std::string_view name);

/// A database object to place: a table, an index, or something standalone
/// (log, temp space). Indices carry the id of their parent table.
struct DataObject {
  std::string id;
  double size_gb = 0.0;
  ObjectKind kind = ObjectKind::table;
  std::optional<std::string> parent;  // set iff kind == index
};

/// A table together with its indices (or a standalone object by itself).
/// Member order is canonical: head object first, indices sorted by id.
struct ObjectGroup {
  std::vector<std::string> members;

  const std::string& id() const { return members.front(); }
  std::size_t size() const { return members.size(); }
};

/// Assignment of one storage class per group member, aligned with
/// ObjectGroup::members.
struct Placement {
  std::vector<std::string> classes;

  bool operator==(const Placement& other) const = default;
  auto operator<=>(const Placement& other) const = default;
};

/// A full mapping of objects to storage classes plus the per-class space it
/// consumes. Build through make_layout so usage stays consistent.
struct Layout {
  std::map<std::string, std::string> mapping;  // object id -> class id
  std::map<std::string, double> usage_gb;      // class id -> occupied GB
};

/// A candidate relocation of one group, scored for the greedy search.
struct Move {
  std::string group_id;
  Placement placement;
  double score = 0.0;                     // time penalty per unit cost saving
  double time_penalty_ms = 0.0;           // estimated I/O slowdown vs baseline
  double cost_saving_cents_per_hour = 0.0;
};

enum class MetricMode { per_query_response_time, throughput };

const char* to_string(MetricMode mode);
MetricMode metric_mode_from_string(std::string_view name);

/// Workload model: one query-id sequence per concurrent client stream,
/// per-query CPU time, and which performance metric the SLA constrains.
struct WorkloadSpec {
  std::vector<std::vector<std::string>> streams;
  int concurrency = 0;  // must equal streams.size()
  std::map<std::string, double> cpu_time_ms;
  MetricMode metric_mode = MetricMode::per_query_response_time;

  /// Sorted unique query ids referenced by any stream.
  std::vector<std::string> query_ids() const;
  /// Number of query executions across all streams.
  std::uint64_t total_tasks() const;
};

/// Resolved SLA: per-query response-time caps or a workload throughput floor,
/// derived from a ratio relative to the all-premium baseline.
struct PerformanceConstraint {
  double relative_sla = 1.0;
  MetricMode mode = MetricMode::per_query_response_time;
  std::map<std::string, double> per_query_cap_ms;
  double throughput_floor_per_hour = 0.0;
};

/// Per-query, per-object I/O counts keyed by the placement of the object's
/// group. Missing entries read as zero. A plan-invariant profile stores one
/// set of counts and serves them for every placement.
class WorkloadProfile {
public:
  WorkloadProfile() = default;
  explicit WorkloadProfile(bool plan_invariant)
      : plan_invariant_(plan_invariant) {}

  /// Accumulates (repeated adds for the same key sum up).
  void add(const std::string& query, const std::string& object, IoType io,
           const std::vector<std::string>& placement, double count);

  double count(const std::string& query, const std::string& object, IoType io,
               const std::vector<std::string>& placement) const;

  bool plan_invariant() const { return plan_invariant_; }
  const std::set<std::string>& queries() const { return queries_; }
  std::size_t entry_count() const { return entries_.size(); }

  struct Entry {
    std::string query;
    std::string object;
    IoType io;
    std::vector<std::string> placement;
    double count;
  };
  /// Entries in canonical (sorted) order.
  std::vector<Entry> entries_sorted() const;

private:
  using Key = std::tuple<std::string, std::string, int,
                         std::vector<std::string>>;
  std::map<Key, double> entries_;
  std::set<std::string> queries_;
  bool plan_invariant_ = false;
};

/// A named set of storage classes to provision against (one server "box").
struct StorageConfiguration {
  std::string id;
  std::vector<StorageClass> classes;
};

void validate_classes(const std::vector<StorageClass>& classes);
void validate_objects(const std::vector<DataObject>& objects);
void validate_workload(const WorkloadSpec& workload);
void validate_configuration(const StorageConfiguration& configuration);

/// Partitions objects into groups: each table with its indices, standalone
/// objects as singletons. Groups ordered by head id, indices sorted by id.
std::vector<ObjectGroup> grouping(const std::vector<DataObject>& objects);

struct CapacityReport {
  bool valid = false;
  std::map<std::string, double> usage_gb;
  std::vector<std::string> violated;  // ids of classes with usage >= capacity
};

/// Strict capacity check: a class is violated when usage >= capacity.
CapacityReport validate_layout(const Layout& layout,
                               const std::vector<StorageClass>& classes);

/// Builds a layout and derives per-class usage. Every declared object must be
/// mapped to a declared class, exactly once.
Layout make_layout(const std::map<std::string, std::string>& mapping,
                   const std::vector<DataObject>& objects,
                   const std::vector<StorageClass>& classes);

/// All objects on one class.
Layout uniform_layout(const std::string& class_id,
                      const std::vector<DataObject>& objects,
                      const std::vector<StorageClass>& classes);

/// The baseline class: highest price per GB-hour, ties broken by id order.
const StorageClass& most_expensive_class(
    const std::vector<StorageClass>& classes);

double total_size_gb(const std::vector<DataObject>& objects);

}  // namespace tocadv
