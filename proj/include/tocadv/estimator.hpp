#pragma once

#include <utility>

#include "tocadv/cost_model.hpp"
#include "tocadv/domain.hpp"

namespace tocadv {

/// Workload timing under one layout: per-query response time (CPU + I/O),
/// total wall time (concurrent streams run in parallel, so the total is the
/// slowest stream), and the resulting task throughput.
struct TimeEstimate {
  std::map<std::string, double> per_query_ms;
  double total_hours = 0.0;
  double throughput_per_hour = 0.0;  // tasks / total_hours (0 when total is 0)
};

/// Accumulated estimated I/O time of a group under a placement, in ms:
/// for each member and each I/O type, profiled count times the per-I/O
/// latency of the class the placement assigns, summed over all profiled
/// queries.
double io_time_share(const ObjectGroup& group, const Placement& placement,
                     const WorkloadProfile& profile,
                     const std::vector<StorageClass>& classes,
                     int concurrency);

/// Per-query slice of the same sum, aligned with `query_ids` (sorted).
/// Shared by the workload estimator and the search engines so both see
/// identical numbers for identical placements.
std::vector<double> per_query_group_io_ms(
    const std::vector<std::string>& member_ids,
    const std::vector<std::string>& member_classes,
    const WorkloadProfile& profile,
    const std::vector<StorageClass>& classes, int concurrency,
    const std::vector<std::string>& query_ids);

TimeEstimate estimate_workload_time(const Layout& layout,
                                    const WorkloadSpec& workload,
                                    const WorkloadProfile& profile,
                                    const std::vector<StorageClass>& classes,
                                    const std::vector<ObjectGroup>& groups);

/// TOC in cents for one workload execution plus the estimate it came from.
std::pair<double, TimeEstimate> estimate_toc(
    const WorkloadSpec& workload, const Layout& layout,
    const WorkloadProfile& profile, const std::vector<StorageClass>& classes,
    const std::vector<ObjectGroup>& groups, const CostModelConfig& cost);

/// Turns a relative SLA ratio into absolute caps. Per-query mode divides each
/// baseline response time by the ratio; throughput mode multiplies the
/// baseline throughput by it. The baseline estimate must come from the
/// all-most-expensive layout.
PerformanceConstraint resolve_constraints(double relative_sla,
                                          const TimeEstimate& baseline,
                                          MetricMode mode);

struct FeasibilityReport {
  bool ok = false;
  std::vector<std::string> violations;
};

/// Capacity and SLA verdict for a layout under an estimate.
FeasibilityReport feasible(const Layout& layout,
                           const std::vector<StorageClass>& classes,
                           const TimeEstimate& estimate,
                           const PerformanceConstraint& constraints);

/// I/O slowdown of placing `group` at `placement` instead of leaving it on
/// the most expensive class, in ms. Negative when the move is faster.
double performance_penalty(const ObjectGroup& group, const Placement& placement,
                           const WorkloadProfile& profile,
                           const std::vector<StorageClass>& classes,
                           int concurrency);

/// Hourly cost reduction of relocating `group` to `placement`, measured
/// against the baseline layout that holds everything on the most expensive
/// class. Negative when the relocation costs more.
double cost_saving(const ObjectGroup& group, const Placement& placement,
                   const std::vector<DataObject>& objects,
                   const std::vector<StorageClass>& classes,
                   const CostModelConfig& cost);

/// Move priority: time penalty per unit of cost saving (lower is better).
/// Moves that save nothing get no score and are excluded from the search.
std::optional<double> priority_score(double time_penalty_ms,
                                     double cost_saving_cents_per_hour);

inline constexpr double kMsPerHour = 3'600'000.0;

}  // namespace tocadv
