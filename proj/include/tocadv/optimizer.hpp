#pragma once

#include "tocadv/estimator.hpp"

namespace tocadv {

enum class OptStatus { feasible, infeasible };

struct MoveTrace {
  Move move;
  bool accepted = false;
  std::optional<double> toc_cents;  // present when the candidate fit capacity
};

struct OptimizationResult {
  OptStatus status = OptStatus::infeasible;
  std::optional<Layout> layout;        // best feasible layout found
  std::optional<double> toc_cents;     // its TOC
  std::optional<TimeEstimate> estimate;
  Layout baseline_layout;              // everything on the most expensive class
  TimeEstimate baseline_estimate;
  PerformanceConstraint constraints;
  std::uint64_t layouts_examined = 0;
  std::vector<MoveTrace> trace;        // filled when tracing is requested
  std::vector<std::string> infeasibility;  // why nothing was found
};

/// Scored relocation candidates for every group and every placement of that
/// group over the declared classes. Candidates that save no cost are dropped;
/// the rest are sorted by ascending score. Ties break on larger saving, then
/// group id, then placement, so runs are reproducible.
std::vector<Move> enumerate_moves(const std::vector<DataObject>& objects,
                                  const std::vector<ObjectGroup>& groups,
                                  const std::vector<StorageClass>& classes,
                                  const WorkloadProfile& profile,
                                  const CostModelConfig& cost,
                                  int concurrency);

/// Greedy search: start from the all-most-expensive layout, apply the scored
/// moves in order to the evolving layout, keep each step only if it stays
/// capacity- and SLA-feasible, and return the feasible candidate with the
/// lowest estimated TOC. May report infeasible even when a feasible layout
/// exists (the move list is generated once and never re-scored).
OptimizationResult dot_optimize(const std::vector<DataObject>& objects,
                                const std::vector<StorageClass>& classes,
                                const WorkloadSpec& workload,
                                const WorkloadProfile& profile,
                                double relative_sla,
                                const CostModelConfig& cost,
                                bool want_trace = false);

inline constexpr std::uint64_t kDefaultExhaustiveBudget = 1'000'000;

/// Number of layouts an exhaustive run would visit (M^N), saturating at
/// uint64 max.
std::uint64_t exhaustive_layout_count(std::size_t num_classes,
                                      std::size_t num_objects);

/// Evaluates every possible layout with the same estimator the greedy search
/// uses and returns the global TOC minimum among feasible ones. Refuses with
/// BudgetError when M^N exceeds the budget.
OptimizationResult exhaustive_search(
    const std::vector<DataObject>& objects,
    const std::vector<StorageClass>& classes, const WorkloadSpec& workload,
    const WorkloadProfile& profile, double relative_sla,
    const CostModelConfig& cost,
    std::uint64_t budget = kDefaultExhaustiveBudget);

struct ProvisioningChoice {
  std::string configuration_id;  // empty when no configuration was feasible
  OptimizationResult result;
};

/// Runs the greedy search once per candidate configuration (each with its own
/// profile) and picks the feasible result with the lowest TOC. Ties keep the
/// earliest configuration in the list.
ProvisioningChoice provision_configurations(
    const std::vector<StorageConfiguration>& configurations,
    const std::vector<DataObject>& objects, const WorkloadSpec& workload,
    const std::map<std::string, WorkloadProfile>& profiles_by_configuration,
    double relative_sla, const CostModelConfig& cost);

}  // namespace tocadv
