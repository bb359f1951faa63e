#include "tocadv/report.hpp"

#include <cinttypes>
#include <cstdio>

namespace tocadv {

using nlohmann::ordered_json;

double psr_percent(const TimeEstimate& estimate,
                   const PerformanceConstraint& constraints) {
  if (constraints.mode == MetricMode::throughput) {
    return estimate.throughput_per_hour >=
                   constraints.throughput_floor_per_hour
               ? 100.0
               : 0.0;
  }
  if (constraints.per_query_cap_ms.empty()) return 100.0;
  std::size_t met = 0;
  for (const auto& [q, cap] : constraints.per_query_cap_ms) {
    auto it = estimate.per_query_ms.find(q);
    if (it != estimate.per_query_ms.end() && it->second <= cap) ++met;
  }
  return 100.0 * static_cast<double>(met) /
         static_cast<double>(constraints.per_query_cap_ms.size());
}

AdviceReport build_advice_report(
    const std::string& engine, const std::vector<DataObject>& objects,
    const std::vector<StorageClass>& classes, const WorkloadSpec& workload,
    const WorkloadProfile& profile, const OptimizationResult& result,
    const std::vector<std::pair<std::string, CostModelConfig>>&
        cost_variants) {
  AdviceReport report;
  report.engine = engine;
  report.status =
      result.status == OptStatus::feasible ? "feasible" : "infeasible";
  report.relative_sla = result.constraints.relative_sla;
  report.metric = workload.metric_mode;
  if (!cost_variants.empty()) report.cost_used = cost_variants.front().second;
  report.layouts_examined = result.layouts_examined;
  report.profile_plan_invariant = profile.plan_invariant();
  report.infeasibility = result.infeasibility;

  // Infeasible searches report the baseline layout so its violations and PSR
  // can still be inspected.
  const Layout& layout = result.layout ? *result.layout
                                       : result.baseline_layout;
  const TimeEstimate& estimate =
      result.estimate ? *result.estimate : result.baseline_estimate;
  report.layout = layout.mapping;
  report.time_hours = estimate.total_hours;
  report.throughput_per_hour = estimate.throughput_per_hour;
  report.toc_cents = result.toc_cents ? *result.toc_cents : 0.0;

  std::vector<double> usage(classes.size(), 0.0);
  for (std::size_t j = 0; j < classes.size(); ++j) {
    auto it = layout.usage_gb.find(classes[j].id);
    if (it != layout.usage_gb.end()) usage[j] = it->second;
  }
  for (const auto& [name, cost] : cost_variants) {
    report.layout_cost_cents_per_hour[name] =
        cost_from_usage(usage, classes, cost, /*enforce_capacity=*/false);
  }
  if (!result.toc_cents && !cost_variants.empty()) {
    report.toc_cents =
        report.layout_cost_cents_per_hour.at(cost_variants.front().first) *
        estimate.total_hours;
  }

  if (workload.metric_mode == MetricMode::per_query_response_time) {
    for (const auto& [q, cap] : result.constraints.per_query_cap_ms) {
      AdviceReport::QueryRow row;
      auto it = estimate.per_query_ms.find(q);
      row.estimated_ms = it == estimate.per_query_ms.end() ? 0.0 : it->second;
      row.cap_ms = cap;
      row.meets = row.estimated_ms <= cap;
      report.per_query.emplace(q, row);
    }
  } else {
    report.throughput_floor_per_hour =
        result.constraints.throughput_floor_per_hour;
  }
  report.psr = psr_percent(estimate, result.constraints);
  return report;
}

ordered_json report_to_json(const AdviceReport& report) {
  ordered_json j;
  j["version"] = 1;
  j["engine"] = report.engine;
  j["status"] = report.status;
  j["relative_sla"] = report.relative_sla;
  j["metric"] = to_string(report.metric);
  ordered_json cost;
  cost["variant"] = to_string(report.cost_used.variant);
  if (report.cost_used.variant == CostVariant::discrete) {
    cost["alpha"] = report.cost_used.alpha;
    cost["discrete_counts_empty_classes"] =
        report.cost_used.discrete_counts_empty_classes;
  }
  j["cost_model"] = std::move(cost);
  j["layout"] = report.layout;
  j["layout_cost_cents_per_hour"] = report.layout_cost_cents_per_hour;
  j["estimated_time_hours"] = report.time_hours;
  j["estimated_throughput_per_hour"] = report.throughput_per_hour;
  j["toc_cents"] = report.toc_cents;
  if (report.metric == MetricMode::per_query_response_time) {
    ordered_json per_query = ordered_json::object();
    for (const auto& [q, row] : report.per_query) {
      ordered_json r;
      r["estimated_ms"] = row.estimated_ms;
      r["cap_ms"] = row.cap_ms;
      r["meets"] = row.meets;
      per_query[q] = std::move(r);
    }
    j["per_query_ms"] = std::move(per_query);
  } else {
    j["throughput_floor_per_hour"] = report.throughput_floor_per_hour
                                         ? ordered_json(
                                               *report.throughput_floor_per_hour)
                                         : ordered_json(nullptr);
  }
  j["psr_percent"] = report.psr;
  j["layouts_examined"] = report.layouts_examined;
  j["profile_plan_invariant"] = report.profile_plan_invariant;
  j["infeasibility"] = report.infeasibility;
  return j;
}

std::string render_summary(const AdviceReport& report) {
  char buf[256];
  std::string out;
  out += "engine: " + report.engine + "\n";
  out += "status: " + report.status + "\n";
  std::snprintf(buf, sizeof buf, "relative SLA: %g (%s)\n",
                report.relative_sla, to_string(report.metric));
  out += buf;
  for (const auto& [name, cost] : report.layout_cost_cents_per_hour) {
    std::snprintf(buf, sizeof buf, "layout cost (%s): %.9g cents/hour\n",
                  name.c_str(), cost);
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "estimated time: %.9g hours   throughput: %.9g tasks/hour\n",
                report.time_hours, report.throughput_per_hour);
  out += buf;
  std::snprintf(buf, sizeof buf, "TOC: %.9g cents\n", report.toc_cents);
  out += buf;
  std::snprintf(buf, sizeof buf, "PSR: %.1f%%\n", report.psr);
  out += buf;
  std::snprintf(buf, sizeof buf, "layouts examined: %" PRIu64 "\n",
                report.layouts_examined);
  out += buf;
  if (!report.per_query.empty()) {
    out += "per-query estimate vs cap (ms):\n";
    for (const auto& [q, row] : report.per_query) {
      std::snprintf(buf, sizeof buf, "  %-12s %12.3f / %-12.3f %s\n",
                    q.c_str(), row.estimated_ms, row.cap_ms,
                    row.meets ? "ok" : "VIOLATED");
      out += buf;
    }
  }
  if (report.throughput_floor_per_hour) {
    std::snprintf(buf, sizeof buf, "throughput floor: %.9g tasks/hour\n",
                  *report.throughput_floor_per_hour);
    out += buf;
  }
  out += "layout:\n";
  for (const auto& [obj, cls] : report.layout) {
    std::snprintf(buf, sizeof buf, "  %-20s -> %s\n", obj.c_str(),
                  cls.c_str());
    out += buf;
  }
  if (!report.infeasibility.empty()) {
    out += "infeasibility:\n";
    for (const auto& reason : report.infeasibility)
      out += "  - " + reason + "\n";
  }
  return out;
}

OptimizationResult evaluate_fixed_layout(
    const std::vector<DataObject>& objects,
    const std::vector<StorageClass>& classes, const WorkloadSpec& workload,
    const WorkloadProfile& profile, double relative_sla,
    const CostModelConfig& cost, const Layout& layout) {
  std::vector<ObjectGroup> groups = grouping(objects);
  OptimizationResult result;
  result.baseline_layout =
      uniform_layout(most_expensive_class(classes).id, objects, classes);
  result.baseline_estimate = estimate_workload_time(
      result.baseline_layout, workload, profile, classes, groups);
  result.constraints = resolve_constraints(
      relative_sla, result.baseline_estimate, workload.metric_mode);
  result.layouts_examined = 1;

  TimeEstimate estimate =
      estimate_workload_time(layout, workload, profile, classes, groups);
  FeasibilityReport verdict =
      feasible(layout, classes, estimate, result.constraints);
  result.layout = layout;
  result.estimate = estimate;
  std::vector<double> usage(classes.size(), 0.0);
  for (std::size_t j = 0; j < classes.size(); ++j) {
    auto it = layout.usage_gb.find(classes[j].id);
    if (it != layout.usage_gb.end()) usage[j] = it->second;
  }
  result.toc_cents =
      cost_from_usage(usage, classes, cost, /*enforce_capacity=*/false) *
      estimate.total_hours;
  if (verdict.ok) {
    result.status = OptStatus::feasible;
  } else {
    result.status = OptStatus::infeasible;
    result.infeasibility = verdict.violations;
  }
  return result;
}

}  // namespace tocadv
