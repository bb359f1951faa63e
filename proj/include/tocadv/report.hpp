#pragma once

#include <json.hpp>

#include "tocadv/io.hpp"
#include "tocadv/optimizer.hpp"

namespace tocadv {

/// Percentage of workload queries whose estimated time meets its cap. In
/// throughput mode the workload is a single unit of work, so the ratio is
/// all-or-nothing.
double psr_percent(const TimeEstimate& estimate,
                   const PerformanceConstraint& constraints);

/// Everything cmd_advise emits. When the search is infeasible the report
/// still describes the baseline layout so the violations can be inspected;
/// PSR keeps its diagnostic value for SLA-violating layouts.
struct AdviceReport {
  std::string engine;
  std::string status;  // "feasible" | "infeasible"
  double relative_sla = 1.0;
  MetricMode metric = MetricMode::per_query_response_time;
  CostModelConfig cost_used;
  std::map<std::string, std::string> layout;
  /// Keyed by variant name; the variant not used for optimization shows up
  /// only on request.
  std::map<std::string, double> layout_cost_cents_per_hour;
  double time_hours = 0.0;
  double throughput_per_hour = 0.0;
  double toc_cents = 0.0;
  struct QueryRow {
    double estimated_ms = 0.0;
    double cap_ms = 0.0;
    bool meets = false;
  };
  std::map<std::string, QueryRow> per_query;
  std::optional<double> throughput_floor_per_hour;
  double psr = 0.0;
  std::uint64_t layouts_examined = 0;
  bool profile_plan_invariant = false;
  std::vector<std::string> infeasibility;
};

/// Assembles the report for an optimization result. `cost_variants` lists the
/// cost models to evaluate the chosen layout under (name -> config); the
/// first one is the model the search optimized.
AdviceReport build_advice_report(
    const std::string& engine, const std::vector<DataObject>& objects,
    const std::vector<StorageClass>& classes, const WorkloadSpec& workload,
    const WorkloadProfile& profile, const OptimizationResult& result,
    const std::vector<std::pair<std::string, CostModelConfig>>& cost_variants);

nlohmann::ordered_json report_to_json(const AdviceReport& report);
std::string render_summary(const AdviceReport& report);

/// Evaluates one fixed layout (a preset or an externally proposed layout)
/// under the same estimator and constraint resolution the engines use.
OptimizationResult evaluate_fixed_layout(
    const std::vector<DataObject>& objects,
    const std::vector<StorageClass>& classes, const WorkloadSpec& workload,
    const WorkloadProfile& profile, double relative_sla,
    const CostModelConfig& cost, const Layout& layout);

}  // namespace tocadv
