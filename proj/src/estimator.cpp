#include "tocadv/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace tocadv {

namespace {

const StorageClass& class_by_id(const std::vector<StorageClass>& classes,
                                const std::string& id) {
  for (const auto& cls : classes)
    if (cls.id == id) return cls;
  throw ValidationError("unknown storage class '" + id + "'");
}

}  // namespace

std::vector<double> per_query_group_io_ms(
    const std::vector<std::string>& member_ids,
    const std::vector<std::string>& member_classes,
    const WorkloadProfile& profile,
    const std::vector<StorageClass>& classes, int concurrency,
    const std::vector<std::string>& query_ids) {
  if (member_ids.size() != member_classes.size())
    throw ValidationError("placement length (" +
                          std::to_string(member_classes.size()) +
                          ") does not match group size (" +
                          std::to_string(member_ids.size()) + ")");

  std::vector<double> out(query_ids.size(), 0.0);
  for (std::size_t k = 0; k < member_ids.size(); ++k) {
    const StorageClass& cls = class_by_id(classes, member_classes[k]);
    for (IoType io : kAllIoTypes) {
      double lat = cls.latency(io, concurrency);
      for (std::size_t q = 0; q < query_ids.size(); ++q) {
        double n = profile.count(query_ids[q], member_ids[k], io,
                                 member_classes);
        if (n != 0.0) out[q] += n * lat;
      }
    }
  }
  return out;
}

double io_time_share(const ObjectGroup& group, const Placement& placement,
                     const WorkloadProfile& profile,
                     const std::vector<StorageClass>& classes,
                     int concurrency) {
  std::vector<std::string> qids(profile.queries().begin(),
                                profile.queries().end());
  std::vector<double> per_query =
      per_query_group_io_ms(group.members, placement.classes, profile,
                            classes, concurrency, qids);
  double total = 0.0;
  for (double ms : per_query) total += ms;
  return total;
}

TimeEstimate estimate_workload_time(const Layout& layout,
                                    const WorkloadSpec& workload,
                                    const WorkloadProfile& profile,
                                    const std::vector<StorageClass>& classes,
                                    const std::vector<ObjectGroup>& groups) {
  validate_workload(workload);
  std::vector<std::string> qids = workload.query_ids();

  std::vector<double> io_ms(qids.size(), 0.0);
  for (const auto& group : groups) {
    std::vector<std::string> member_classes;
    member_classes.reserve(group.members.size());
    for (const auto& member : group.members) {
      auto it = layout.mapping.find(member);
      if (it == layout.mapping.end())
        throw ValidationError("layout does not map object '" + member + "'");
      member_classes.push_back(it->second);
    }
    std::vector<double> part =
        per_query_group_io_ms(group.members, member_classes, profile, classes,
                              workload.concurrency, qids);
    for (std::size_t q = 0; q < qids.size(); ++q) io_ms[q] += part[q];
  }

  TimeEstimate est;
  std::unordered_map<std::string, double> per_query;
  per_query.reserve(qids.size());
  for (std::size_t q = 0; q < qids.size(); ++q) {
    double cpu = workload.cpu_time_ms.at(qids[q]);
    double ms = cpu + io_ms[q];
    per_query.emplace(qids[q], ms);
    est.per_query_ms.emplace(qids[q], ms);
  }

  // Streams run concurrently; the workload finishes when the slowest stream
  // does. A single sequential stream degenerates to a plain sum.
  double slowest_ms = 0.0;
  for (const auto& stream : workload.streams) {
    double stream_ms = 0.0;
    for (const auto& q : stream) stream_ms += per_query.at(q);
    slowest_ms = std::max(slowest_ms, stream_ms);
  }
  est.total_hours = slowest_ms / kMsPerHour;
  est.throughput_per_hour =
      est.total_hours > 0.0
          ? static_cast<double>(workload.total_tasks()) / est.total_hours
          : 0.0;
  return est;
}

std::pair<double, TimeEstimate> estimate_toc(
    const WorkloadSpec& workload, const Layout& layout,
    const WorkloadProfile& profile, const std::vector<StorageClass>& classes,
    const std::vector<ObjectGroup>& groups, const CostModelConfig& cost) {
  TimeEstimate est =
      estimate_workload_time(layout, workload, profile, classes, groups);
  double toc = workload_toc(layout_cost(layout, classes, cost),
                            est.total_hours);
  return {toc, est};
}

PerformanceConstraint resolve_constraints(double relative_sla,
                                          const TimeEstimate& baseline,
                                          MetricMode mode) {
  if (!(relative_sla > 0.0 && relative_sla <= 1.0))
    throw ValidationError("relative SLA must be in (0,1]");
  PerformanceConstraint c;
  c.relative_sla = relative_sla;
  c.mode = mode;
  if (mode == MetricMode::per_query_response_time) {
    for (const auto& [q, ms] : baseline.per_query_ms)
      c.per_query_cap_ms[q] = ms / relative_sla;
  } else {
    c.throughput_floor_per_hour =
        baseline.throughput_per_hour * relative_sla;
  }
  return c;
}

FeasibilityReport feasible(const Layout& layout,
                           const std::vector<StorageClass>& classes,
                           const TimeEstimate& estimate,
                           const PerformanceConstraint& constraints) {
  FeasibilityReport report;
  CapacityReport capacity = validate_layout(layout, classes);
  for (const auto& id : capacity.violated) {
    report.violations.push_back(
        "class " + id + ": usage " + std::to_string(capacity.usage_gb.at(id)) +
        " GB >= capacity " +
        std::to_string(class_by_id(classes, id).capacity_gb) + " GB");
  }
  if (constraints.mode == MetricMode::per_query_response_time) {
    for (const auto& [q, cap] : constraints.per_query_cap_ms) {
      auto it = estimate.per_query_ms.find(q);
      if (it == estimate.per_query_ms.end()) {
        report.violations.push_back("query " + q + ": no estimate available");
        continue;
      }
      if (!(it->second <= cap)) {
        report.violations.push_back("query " + q + ": estimated " +
                                    std::to_string(it->second) + " ms > cap " +
                                    std::to_string(cap) + " ms");
      }
    }
  } else {
    if (!(estimate.throughput_per_hour >=
          constraints.throughput_floor_per_hour)) {
      report.violations.push_back(
          "throughput " + std::to_string(estimate.throughput_per_hour) +
          " tasks/h < floor " +
          std::to_string(constraints.throughput_floor_per_hour) + " tasks/h");
    }
  }
  report.ok = report.violations.empty();
  return report;
}

double performance_penalty(const ObjectGroup& group,
                           const Placement& placement,
                           const WorkloadProfile& profile,
                           const std::vector<StorageClass>& classes,
                           int concurrency) {
  const StorageClass& premium = most_expensive_class(classes);
  Placement baseline;
  baseline.classes.assign(group.members.size(), premium.id);
  return io_time_share(group, placement, profile, classes, concurrency) -
         io_time_share(group, baseline, profile, classes, concurrency);
}

double cost_saving(const ObjectGroup& group, const Placement& placement,
                   const std::vector<DataObject>& objects,
                   const std::vector<StorageClass>& classes,
                   const CostModelConfig& cost) {
  if (placement.classes.size() != group.members.size())
    throw ValidationError("placement length does not match group size");
  const StorageClass& premium = most_expensive_class(classes);

  std::unordered_map<std::string, std::size_t> class_idx;
  for (std::size_t j = 0; j < classes.size(); ++j)
    class_idx.emplace(classes[j].id, j);
  std::unordered_map<std::string, std::size_t> member_idx;
  for (std::size_t k = 0; k < group.members.size(); ++k)
    member_idx.emplace(group.members[k], k);

  std::vector<double> before(classes.size(), 0.0);
  std::vector<double> after(classes.size(), 0.0);
  std::size_t premium_idx = class_idx.at(premium.id);
  for (const auto& obj : objects) {
    before[premium_idx] += obj.size_gb;
    auto member = member_idx.find(obj.id);
    if (member == member_idx.end()) {
      after[premium_idx] += obj.size_gb;
    } else {
      auto target = class_idx.find(placement.classes[member->second]);
      if (target == class_idx.end())
        throw ValidationError("placement names unknown storage class '" +
                              placement.classes[member->second] + "'");
      after[target->second] += obj.size_gb;
    }
  }
  // The baseline may exceed a class cap; the saving is still well defined.
  return cost_from_usage(before, classes, cost, /*enforce_capacity=*/false) -
         cost_from_usage(after, classes, cost, /*enforce_capacity=*/false);
}

std::optional<double> priority_score(double time_penalty_ms,
                                     double cost_saving_cents_per_hour) {
  if (!(cost_saving_cents_per_hour > 0.0)) return std::nullopt;
  return time_penalty_ms / cost_saving_cents_per_hour;
}

}  // namespace tocadv
