#include "tocadv/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace tocadv {

namespace {

/// Indexed view of one problem instance plus a memo of per-query I/O times
/// for every (group, placement) the search touches. Both engines evaluate
/// layouts through this context, so a layout gets the same numbers no matter
/// which engine visits it.
struct EngineContext {
  const std::vector<DataObject>& objects;
  const std::vector<StorageClass>& classes;
  const WorkloadSpec& workload;
  const WorkloadProfile& profile;
  CostModelConfig cost;

  std::vector<ObjectGroup> groups;
  std::size_t class_count = 0;
  std::size_t object_count = 0;
  std::unordered_map<std::string, int> class_idx;
  std::unordered_map<std::string, int> object_idx;
  std::vector<double> sizes;                // by object index
  std::vector<std::vector<int>> members;    // group -> object indices
  int premium = 0;                          // most expensive class index
  std::vector<std::string> qids;            // sorted workload query ids
  std::vector<double> cpu_ms;               // by query index
  std::vector<std::vector<int>> streams;    // stream -> query indices
  // memo: group -> placement code -> per-query io ms
  mutable std::vector<std::vector<std::optional<std::vector<double>>>> memo;

  EngineContext(const std::vector<DataObject>& objects_,
                const std::vector<StorageClass>& classes_,
                const WorkloadSpec& workload_,
                const WorkloadProfile& profile_, const CostModelConfig& cost_)
      : objects(objects_),
        classes(classes_),
        workload(workload_),
        profile(profile_),
        cost(cost_) {
    if (classes.empty()) throw ValidationError("no storage classes declared");
    if (objects.empty()) throw ValidationError("no data objects declared");
    validate_classes(classes);
    validate_workload(workload);
    validate(cost);
    groups = grouping(objects);

    class_count = classes.size();
    object_count = objects.size();
    for (std::size_t j = 0; j < classes.size(); ++j)
      class_idx.emplace(classes[j].id, static_cast<int>(j));
    sizes.reserve(objects.size());
    for (std::size_t i = 0; i < objects.size(); ++i) {
      object_idx.emplace(objects[i].id, static_cast<int>(i));
      sizes.push_back(objects[i].size_gb);
    }
    members.reserve(groups.size());
    for (const auto& g : groups) {
      std::vector<int> idx;
      idx.reserve(g.members.size());
      for (const auto& m : g.members) idx.push_back(object_idx.at(m));
      members.push_back(std::move(idx));
    }
    premium = class_idx.at(most_expensive_class(classes).id);

    qids = workload.query_ids();
    for (const auto& q : profile.queries()) {
      if (!std::binary_search(qids.begin(), qids.end(), q))
        throw ValidationError("profile references query '" + q +
                              "' which is not part of the workload");
    }
    cpu_ms.reserve(qids.size());
    std::unordered_map<std::string, int> qidx;
    for (std::size_t q = 0; q < qids.size(); ++q) {
      qidx.emplace(qids[q], static_cast<int>(q));
      cpu_ms.push_back(workload.cpu_time_ms.at(qids[q]));
    }
    streams.reserve(workload.streams.size());
    for (const auto& stream : workload.streams) {
      std::vector<int> s;
      s.reserve(stream.size());
      for (const auto& q : stream) s.push_back(qidx.at(q));
      streams.push_back(std::move(s));
    }

    memo.resize(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::size_t codes = 1;
      for (std::size_t k = 0; k < groups[g].size(); ++k) codes *= class_count;
      memo[g].resize(codes);
    }
  }

  std::size_t encode(std::size_t g,
                     const std::vector<int>& object_class) const {
    std::size_t code = 0;
    for (int obj : members[g])
      code = code * class_count + static_cast<std::size_t>(object_class[obj]);
    return code;
  }

  const std::vector<double>& group_io(std::size_t g, std::size_t code) const {
    auto& slot = memo[g][code];
    if (!slot) {
      std::vector<std::string> member_classes(members[g].size());
      std::size_t rest = code;
      for (std::size_t k = members[g].size(); k-- > 0;) {
        member_classes[k] = classes[rest % class_count].id;
        rest /= class_count;
      }
      slot = per_query_group_io_ms(groups[g].members, member_classes, profile,
                                   classes, workload.concurrency, qids);
    }
    return *slot;
  }

  struct Evaluation {
    bool capacity_ok = false;
    bool feasible = false;
    std::vector<double> usage;
    TimeEstimate estimate;
    double cost_per_hour = 0.0;
    double toc = 0.0;
  };

  Evaluation evaluate(const std::vector<int>& object_class,
                      const PerformanceConstraint& constraints) const {
    Evaluation ev;
    ev.usage.assign(class_count, 0.0);
    for (std::size_t i = 0; i < object_count; ++i)
      ev.usage[object_class[i]] += sizes[i];
    ev.capacity_ok = true;
    for (std::size_t j = 0; j < class_count; ++j) {
      if (!(ev.usage[j] < classes[j].capacity_gb)) {
        ev.capacity_ok = false;
        break;
      }
    }
    if (!ev.capacity_ok) return ev;

    ev.estimate = estimate(object_class);
    bool caps_ok = true;
    if (constraints.mode == MetricMode::per_query_response_time) {
      for (std::size_t q = 0; q < qids.size(); ++q) {
        auto cap = constraints.per_query_cap_ms.find(qids[q]);
        if (cap != constraints.per_query_cap_ms.end() &&
            !(ev.estimate.per_query_ms.at(qids[q]) <= cap->second)) {
          caps_ok = false;
          break;
        }
      }
    } else {
      caps_ok = ev.estimate.throughput_per_hour >=
                constraints.throughput_floor_per_hour;
    }
    ev.cost_per_hour =
        cost_from_usage(ev.usage, classes, cost, /*enforce_capacity=*/false);
    ev.toc = ev.cost_per_hour * ev.estimate.total_hours;
    ev.feasible = caps_ok;
    return ev;
  }

  TimeEstimate estimate(const std::vector<int>& object_class) const {
    std::vector<double> io_ms(qids.size(), 0.0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const std::vector<double>& row = group_io(g, encode(g, object_class));
      for (std::size_t q = 0; q < qids.size(); ++q) io_ms[q] += row[q];
    }
    TimeEstimate est;
    std::vector<double> per_query(qids.size());
    for (std::size_t q = 0; q < qids.size(); ++q) {
      per_query[q] = cpu_ms[q] + io_ms[q];
      est.per_query_ms.emplace(qids[q], per_query[q]);
    }
    double slowest_ms = 0.0;
    for (const auto& stream : streams) {
      double stream_ms = 0.0;
      for (int q : stream) stream_ms += per_query[q];
      slowest_ms = std::max(slowest_ms, stream_ms);
    }
    est.total_hours = slowest_ms / kMsPerHour;
    est.throughput_per_hour =
        est.total_hours > 0.0
            ? static_cast<double>(workload.total_tasks()) / est.total_hours
            : 0.0;
    return est;
  }

  Layout to_layout(const std::vector<int>& object_class) const {
    std::map<std::string, std::string> mapping;
    for (std::size_t i = 0; i < object_count; ++i)
      mapping[objects[i].id] = classes[object_class[i]].id;
    return make_layout(mapping, objects, classes);
  }
};

}  // namespace

std::vector<Move> enumerate_moves(const std::vector<DataObject>& objects,
                                  const std::vector<ObjectGroup>& groups,
                                  const std::vector<StorageClass>& classes,
                                  const WorkloadProfile& profile,
                                  const CostModelConfig& cost,
                                  int concurrency) {
  validate_classes(classes);
  validate(cost);

  std::vector<Move> moves;
  for (const auto& group : groups) {
    std::size_t codes = 1;
    for (std::size_t k = 0; k < group.size(); ++k) codes *= classes.size();
    for (std::size_t code = 0; code < codes; ++code) {
      Placement placement;
      placement.classes.resize(group.size());
      std::size_t rest = code;
      for (std::size_t k = group.size(); k-- > 0;) {
        placement.classes[k] = classes[rest % classes.size()].id;
        rest /= classes.size();
      }
      double penalty =
          performance_penalty(group, placement, profile, classes, concurrency);
      double saving = cost_saving(group, placement, objects, classes, cost);
      std::optional<double> score = priority_score(penalty, saving);
      if (!score) continue;
      Move move;
      move.group_id = group.id();
      move.placement = std::move(placement);
      move.time_penalty_ms = penalty;
      move.cost_saving_cents_per_hour = saving;
      move.score = *score;
      moves.push_back(std::move(move));
    }
  }

  std::sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.cost_saving_cents_per_hour != b.cost_saving_cents_per_hour)
      return a.cost_saving_cents_per_hour > b.cost_saving_cents_per_hour;
    if (a.group_id != b.group_id) return a.group_id < b.group_id;
    return a.placement < b.placement;
  });
  return moves;
}

OptimizationResult dot_optimize(const std::vector<DataObject>& objects,
                                const std::vector<StorageClass>& classes,
                                const WorkloadSpec& workload,
                                const WorkloadProfile& profile,
                                double relative_sla,
                                const CostModelConfig& cost,
                                bool want_trace) {
  EngineContext ctx(objects, classes, workload, profile, cost);

  std::vector<int> current(ctx.object_count, ctx.premium);
  OptimizationResult result;
  result.baseline_layout = ctx.to_layout(current);
  result.baseline_estimate = ctx.estimate(current);
  result.constraints = resolve_constraints(
      relative_sla, result.baseline_estimate, workload.metric_mode);

  std::vector<int> best;
  double best_toc = std::numeric_limits<double>::infinity();
  bool have_best = false;
  std::optional<TimeEstimate> best_estimate;

  EngineContext::Evaluation base = ctx.evaluate(current, result.constraints);
  result.layouts_examined = 1;
  if (base.capacity_ok && base.feasible) {
    best = current;
    best_toc = base.toc;
    best_estimate = base.estimate;
    have_best = true;
  } else {
    result.infeasibility.push_back(
        "baseline layout (all objects on class '" +
        ctx.classes[ctx.premium].id + "') is not feasible");
  }

  std::vector<Move> moves =
      enumerate_moves(objects, ctx.groups, classes, profile, cost,
                      workload.concurrency);

  std::unordered_map<std::string, std::size_t> group_by_id;
  for (std::size_t g = 0; g < ctx.groups.size(); ++g)
    group_by_id.emplace(ctx.groups[g].id(), g);

  for (const Move& move : moves) {
    std::size_t g = group_by_id.at(move.group_id);
    std::vector<int> candidate = current;
    for (std::size_t k = 0; k < ctx.members[g].size(); ++k)
      candidate[ctx.members[g][k]] =
          ctx.class_idx.at(move.placement.classes[k]);

    EngineContext::Evaluation ev =
        ctx.evaluate(candidate, result.constraints);
    ++result.layouts_examined;

    bool accepted = ev.capacity_ok && ev.feasible;
    if (accepted) {
      current = std::move(candidate);
      if (ev.toc < best_toc || !have_best) {
        best = current;
        best_toc = ev.toc;
        best_estimate = ev.estimate;
        have_best = true;
      }
    }
    if (want_trace) {
      MoveTrace t;
      t.move = move;
      t.accepted = accepted;
      if (ev.capacity_ok) t.toc_cents = ev.toc;
      result.trace.push_back(std::move(t));
    }
  }

  if (have_best) {
    result.status = OptStatus::feasible;
    result.layout = ctx.to_layout(best);
    result.toc_cents = best_toc;
    result.estimate = std::move(best_estimate);
    result.infeasibility.clear();
  } else {
    result.status = OptStatus::infeasible;
    result.infeasibility.push_back(
        "none of " + std::to_string(moves.size()) +
        " candidate moves produced a capacity- and SLA-feasible layout");
  }
  return result;
}

std::uint64_t exhaustive_layout_count(std::size_t num_classes,
                                      std::size_t num_objects) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < num_objects; ++i) {
    if (num_classes != 0 &&
        count > std::numeric_limits<std::uint64_t>::max() / num_classes)
      return std::numeric_limits<std::uint64_t>::max();
    count *= num_classes;
  }
  return count;
}

OptimizationResult exhaustive_search(
    const std::vector<DataObject>& objects,
    const std::vector<StorageClass>& classes, const WorkloadSpec& workload,
    const WorkloadProfile& profile, double relative_sla,
    const CostModelConfig& cost, std::uint64_t budget) {
  std::uint64_t count = exhaustive_layout_count(classes.size(),
                                                objects.size());
  if (count > budget) {
    throw BudgetError(
        "exhaustive search refused: " + std::to_string(classes.size()) + "^" +
            std::to_string(objects.size()) + " = " + std::to_string(count) +
            " layouts exceeds the budget of " + std::to_string(budget),
        count);
  }

  EngineContext ctx(objects, classes, workload, profile, cost);
  std::vector<int> baseline(ctx.object_count, ctx.premium);
  OptimizationResult result;
  result.baseline_layout = ctx.to_layout(baseline);
  result.baseline_estimate = ctx.estimate(baseline);
  result.constraints = resolve_constraints(
      relative_sla, result.baseline_estimate, workload.metric_mode);

  std::vector<int> current(ctx.object_count, 0);
  std::vector<int> best;
  double best_toc = std::numeric_limits<double>::infinity();
  bool have_best = false;
  std::optional<TimeEstimate> best_estimate;

  // Odometer enumeration; the first minimum encountered wins ties, which is
  // the lexicographically smallest layout.
  std::uint64_t examined = 0;
  bool done = false;
  while (!done) {
    EngineContext::Evaluation ev = ctx.evaluate(current, result.constraints);
    ++examined;
    if (ev.capacity_ok && ev.feasible && (!have_best || ev.toc < best_toc)) {
      best = current;
      best_toc = ev.toc;
      best_estimate = ev.estimate;
      have_best = true;
    }
    std::size_t k = ctx.object_count;
    while (true) {
      if (k == 0) {
        done = true;
        break;
      }
      --k;
      if (++current[k] < static_cast<int>(ctx.class_count)) break;
      current[k] = 0;
    }
  }
  result.layouts_examined = examined;

  if (have_best) {
    result.status = OptStatus::feasible;
    result.layout = ctx.to_layout(best);
    result.toc_cents = best_toc;
    result.estimate = std::move(best_estimate);
  } else {
    result.status = OptStatus::infeasible;
    result.infeasibility.push_back(
        "no layout out of " + std::to_string(count) +
        " satisfies the capacity and SLA constraints");
  }
  return result;
}

ProvisioningChoice provision_configurations(
    const std::vector<StorageConfiguration>& configurations,
    const std::vector<DataObject>& objects, const WorkloadSpec& workload,
    const std::map<std::string, WorkloadProfile>& profiles_by_configuration,
    double relative_sla, const CostModelConfig& cost) {
  if (configurations.empty())
    throw ValidationError("no storage configurations to provision against");

  ProvisioningChoice choice;
  bool have_feasible = false;
  bool have_diagnostic = false;
  std::vector<std::string> notes;
  for (const auto& configuration : configurations) {
    validate_configuration(configuration);
    auto profile = profiles_by_configuration.find(configuration.id);
    if (profile == profiles_by_configuration.end())
      throw ValidationError("no workload profile for configuration '" +
                            configuration.id + "'");
    OptimizationResult result =
        dot_optimize(objects, configuration.classes, workload,
                     profile->second, relative_sla, cost);
    if (result.status == OptStatus::feasible) {
      if (!have_feasible || *result.toc_cents < *choice.result.toc_cents) {
        choice.configuration_id = configuration.id;
        choice.result = std::move(result);
        have_feasible = true;
      }
    } else {
      notes.push_back("configuration '" + configuration.id +
                      "' is infeasible");
      if (!have_feasible && !have_diagnostic) {
        choice.result = std::move(result);
        have_diagnostic = true;
      }
    }
  }
  if (!have_feasible) {
    choice.configuration_id.clear();
    choice.result.status = OptStatus::infeasible;
    for (auto& n : notes) choice.result.infeasibility.push_back(std::move(n));
  }
  return choice;
}

}  // namespace tocadv
