#include "tocadv/profiling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace tocadv {

BaselinePlan baseline_plan(const std::vector<StorageClass>& classes,
                           int max_group_size) {
  if (max_group_size < 1)
    throw ValidationError("maximum group size must be at least 1");
  validate_classes(classes);

  std::size_t m = classes.size();
  std::size_t count = 1;
  for (int k = 0; k < max_group_size; ++k) count *= m;

  BaselinePlan plan;
  plan.placements.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    Placement p;
    p.classes.resize(max_group_size);
    std::size_t rest = code;
    for (int k = max_group_size; k-- > 0;) {
      p.classes[k] = classes[rest % m].id;
      rest /= m;
    }
    plan.placements.push_back(std::move(p));
  }
  return plan;
}

WorkloadProfile ingest_profile(const std::vector<ProfileRecord>& records,
                               bool plan_invariant,
                               const std::vector<DataObject>& objects,
                               const std::vector<StorageClass>& classes,
                               const WorkloadSpec& workload) {
  validate_classes(classes);
  validate_workload(workload);
  std::vector<ObjectGroup> groups = grouping(objects);

  std::unordered_map<std::string, std::size_t> group_size_by_object;
  for (const auto& g : groups)
    for (const auto& member : g.members)
      group_size_by_object.emplace(member, g.size());
  std::unordered_set<std::string> class_ids;
  for (const auto& cls : classes) class_ids.insert(cls.id);
  std::vector<std::string> qids = workload.query_ids();

  auto where = [](const ProfileRecord& r) {
    return "profile record #" + std::to_string(r.index + 1);
  };

  WorkloadProfile profile(plan_invariant);
  for (const auto& r : records) {
    if (!(r.count >= 0.0) || !std::isfinite(r.count))
      throw ValidationError(where(r) + ": count must be finite and >= 0");
    auto gsize = group_size_by_object.find(r.object);
    if (gsize == group_size_by_object.end())
      throw ValidationError(where(r) + ": unknown object '" + r.object + "'");
    if (!std::binary_search(qids.begin(), qids.end(), r.query))
      throw ValidationError(where(r) + ": query '" + r.query +
                            "' is not part of the workload");
    if (!plan_invariant) {
      if (r.placement.size() != gsize->second)
        throw ValidationError(
            where(r) + ": placement has " +
            std::to_string(r.placement.size()) + " entries but the group of '" +
            r.object + "' has " + std::to_string(gsize->second) + " members");
      for (const auto& cls : r.placement) {
        if (!class_ids.count(cls))
          throw ValidationError(where(r) + ": unknown storage class '" + cls +
                                "' in placement");
      }
    }
    profile.add(r.query, r.object, r.io, r.placement, r.count);
  }
  return profile;
}

namespace {

double jitter(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Enumerates every placement of `group_size` members over `classes`,
/// invoking fn(placement, all_on_premium).
template <typename Fn>
void for_each_placement(const std::vector<StorageClass>& classes,
                        std::size_t group_size, const std::string& premium_id,
                        Fn&& fn) {
  std::size_t m = classes.size();
  std::size_t count = 1;
  for (std::size_t k = 0; k < group_size; ++k) count *= m;
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<std::string> placement(group_size);
    std::size_t rest = code;
    for (std::size_t k = group_size; k-- > 0;) {
      placement[k] = classes[rest % m].id;
      rest /= m;
    }
    bool all_premium = std::all_of(
        placement.begin(), placement.end(),
        [&](const std::string& id) { return id == premium_id; });
    fn(placement, all_premium);
  }
}

void synthesize_seq_scan_only(const std::vector<DataObject>& objects,
                              const GeneratorSpec& spec,
                              WorkloadProfile& profile) {
  std::mt19937_64 rng(spec.seed);
  for (const auto& q : spec.query_ids) {
    for (const auto& obj : objects) {
      if (obj.kind == ObjectKind::index) continue;
      bool touched = jitter(rng, 0.0, 1.0) < 0.7;
      double count = std::floor(jitter(rng, 5000.0, 50000.0));
      if (touched) profile.add(q, obj.id, IoType::SR, {}, count);
    }
  }
}

void synthesize_plan_switch(const std::vector<ObjectGroup>& groups,
                            const std::vector<StorageClass>& classes,
                            const GeneratorSpec& spec,
                            WorkloadProfile& profile) {
  std::mt19937_64 rng(spec.seed);
  const std::string premium = most_expensive_class(classes).id;
  for (const auto& group : groups) {
    for_each_placement(
        classes, group.size(), premium,
        [&](const std::vector<std::string>& placement, bool all_premium) {
          for (const auto& q : spec.query_ids) {
            if (all_premium) {
              // Index-assisted plan: random reads on the table and every
              // index, far fewer pages touched than a full scan.
              for (std::size_t k = 0; k < group.members.size(); ++k) {
                double base = k == 0 ? 2000.0 : 500.0;
                profile.add(q, group.members[k], IoType::RR, placement,
                            std::floor(base * jitter(rng, 0.9, 1.1)));
              }
            } else {
              // Scan plan: the whole table sequentially, indices untouched.
              profile.add(q, group.members.front(), IoType::SR, placement,
                          std::floor(50000.0 * jitter(rng, 0.9, 1.1)));
            }
          }
        });
  }
}

void synthesize_random(const std::vector<ObjectGroup>& groups,
                       const std::vector<StorageClass>& classes,
                       const GeneratorSpec& spec, WorkloadProfile& profile) {
  std::mt19937_64 rng(spec.seed);
  const std::string premium = most_expensive_class(classes).id;

  for (const auto& group : groups) {
    bool stable = jitter(rng, 0.0, 1.0) < 0.7;

    // Base counts drawn once per (query, member, io); placements then apply
    // a mild plan-dependent jitter, so plans are mostly stable across
    // placements the way real optimizers behave.
    std::map<std::tuple<std::size_t, std::size_t, int>, double> base;
    for (std::size_t qi = 0; qi < spec.query_ids.size(); ++qi) {
      for (std::size_t k = 0; k < group.members.size(); ++k) {
        struct {
          IoType io;
          double presence;
          double lo, hi;
        } draws[] = {
            {IoType::SR, k == 0 ? 0.55 : 0.30, 1000.0, 40000.0},
            {IoType::RR, 0.35, 100.0, 6000.0},
            {IoType::SW, 0.15, 50.0, 3000.0},
            {IoType::RW, 0.12, 20.0, 1500.0},
        };
        for (const auto& d : draws) {
          bool present = jitter(rng, 0.0, 1.0) < d.presence;
          double count = std::floor(jitter(rng, d.lo, d.hi));
          if (present)
            base[{qi, k, static_cast<int>(d.io)}] = count;
        }
      }
    }

    for_each_placement(
        classes, group.size(), premium,
        [&](const std::vector<std::string>& placement, bool all_premium) {
          for (std::size_t qi = 0; qi < spec.query_ids.size(); ++qi) {
            for (std::size_t k = 0; k < group.members.size(); ++k) {
              for (IoType io : kAllIoTypes) {
                auto it = base.find({qi, k, static_cast<int>(io)});
                double scale = jitter(rng, 0.75, 1.3);
                if (it == base.end()) continue;
                double count = it->second;
                if (!stable) {
                  // Switching group: preferring random reads only when the
                  // whole group sits on the premium class.
                  if (io == IoType::RR && !all_premium) continue;
                  if (io == IoType::SR) {
                    if (all_premium) continue;
                    if (k != 0) continue;
                    count *= 4.0;
                  }
                }
                profile.add(spec.query_ids[qi], group.members[k], io,
                            placement, std::floor(count * scale));
              }
            }
          }
        });
  }
}

}  // namespace

WorkloadProfile synthesize_profile(const std::vector<DataObject>& objects,
                                   const std::vector<ObjectGroup>& groups,
                                   const std::vector<StorageClass>& classes,
                                   const GeneratorSpec& spec) {
  validate_classes(classes);
  if (spec.query_ids.empty())
    throw ValidationError("profile synthesis needs at least one query id");

  if (spec.scenario == "seq-scan-only") {
    WorkloadProfile profile(/*plan_invariant=*/true);
    synthesize_seq_scan_only(objects, spec, profile);
    return profile;
  }
  if (spec.scenario == "plan-switch") {
    WorkloadProfile profile(/*plan_invariant=*/false);
    synthesize_plan_switch(groups, classes, spec, profile);
    return profile;
  }
  if (spec.scenario == "random") {
    WorkloadProfile profile(/*plan_invariant=*/false);
    synthesize_random(groups, classes, spec, profile);
    return profile;
  }
  throw ValidationError("unknown scenario '" + spec.scenario +
                        "' (expected seq-scan-only, plan-switch or random)");
}

SyntheticInstance random_instance(const RandomInstanceParams& params,
                                  std::uint64_t seed) {
  if (params.num_classes < 1 || params.num_tables < 1 ||
      params.num_queries < 1 || params.num_streams < 1 ||
      params.max_indices_per_table < 0 || params.num_other_objects < 0)
    throw ValidationError("invalid random instance parameters");

  std::mt19937_64 rng(seed);
  SyntheticInstance inst;

  // Classes: descending prices spanning a few orders of magnitude, with
  // latencies that improve as the price climbs.
  constexpr std::array<double, 4> kBaseLatencyMs{0.016, 0.09, 0.009, 0.8};
  double price = jitter(rng, 0.08, 0.2);
  std::vector<double> prices;
  for (int j = 0; j < params.num_classes; ++j) {
    prices.push_back(price);
    price /= jitter(rng, 4.0, 30.0);
  }
  for (int j = 0; j < params.num_classes; ++j) {
    StorageClass cls;
    cls.id = "c" + std::to_string(j);
    cls.price_cents_per_gb_hour = prices[j];
    double slowdown = std::pow(prices.front() / prices[j], 0.75);
    std::array<double, 4> lat{};
    for (IoType io : kAllIoTypes)
      lat[static_cast<int>(io)] = kBaseLatencyMs[static_cast<int>(io)] *
                                  slowdown * jitter(rng, 0.85, 1.25);
    cls.latency_ms[params.num_streams] = lat;
    cls.capacity_gb = 1.0;  // patched below once sizes are known
    inst.classes.push_back(std::move(cls));
  }

  for (int t = 0; t < params.num_tables; ++t) {
    DataObject table;
    table.id = "t" + std::to_string(t);
    table.size_gb = jitter(rng, 2.0, 30.0);
    table.kind = ObjectKind::table;
    inst.objects.push_back(table);
    int indices = params.max_indices_per_table > 0
                      ? static_cast<int>(rng() %
                            (params.max_indices_per_table + 1))
                      : 0;
    for (int i = 0; i < indices; ++i) {
      DataObject idx;
      idx.id = table.id + "_i" + std::to_string(i);
      idx.size_gb = table.size_gb * jitter(rng, 0.05, 0.3);
      idx.kind = ObjectKind::index;
      idx.parent = table.id;
      inst.objects.push_back(std::move(idx));
    }
  }
  for (int a = 0; a < params.num_other_objects; ++a) {
    DataObject aux;
    aux.id = "aux" + std::to_string(a);
    aux.size_gb = jitter(rng, 0.5, 3.0);
    aux.kind = ObjectKind::other;
    inst.objects.push_back(std::move(aux));
  }

  double total = total_size_gb(inst.objects);
  for (std::size_t j = 0; j < inst.classes.size(); ++j)
    inst.classes[j].capacity_gb = total * jitter(rng, j == 0 ? 1.3 : 1.2,
                                                 j == 0 ? 2.0 : 2.5);
  if (params.tight_capacity && inst.classes.size() > 1) {
    std::size_t victim = 1 + rng() % (inst.classes.size() - 1);
    inst.classes[victim].capacity_gb = total * jitter(rng, 0.35, 0.9);
  }

  // Workload: every query shows up in at least one stream.
  std::vector<std::string> qids;
  for (int q = 0; q < params.num_queries; ++q) {
    std::string id = "q" + std::string(q < 10 ? "0" : "") + std::to_string(q);
    qids.push_back(id);
    inst.workload.cpu_time_ms[id] =
        jitter(rng, 0.0, 1.0) < 0.3 ? 0.0 : jitter(rng, 0.5, 10.0);
  }
  inst.workload.streams.resize(params.num_streams);
  inst.workload.concurrency = params.num_streams;
  for (std::size_t q = 0; q < qids.size(); ++q)
    inst.workload.streams[q % params.num_streams].push_back(qids[q]);
  for (auto& stream : inst.workload.streams) {
    std::size_t target = std::max<std::size_t>(2, stream.size() + rng() % 3);
    while (stream.size() < target)
      stream.push_back(qids[rng() % qids.size()]);
  }
  inst.workload.metric_mode = params.metric_mode;

  GeneratorSpec spec;
  spec.scenario = "random";
  spec.seed = rng();
  spec.query_ids = qids;
  inst.profile = synthesize_profile(inst.objects, grouping(inst.objects),
                                    inst.classes, spec);
  return inst;
}

}  // namespace tocadv
