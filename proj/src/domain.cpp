#include "tocadv/domain.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace tocadv {

const char* to_string(IoType io) {
  switch (io) {
    case IoType::SR: return "SR";
    case IoType::RR: return "RR";
    case IoType::SW: return "SW";
    case IoType::RW: return "RW";
  }
  return "?";
}

IoType io_type_from_string(std::string_view name) {
  if (name == "SR" || name == "sr") return IoType::SR;
  if (name == "RR" || name == "rr") return IoType::RR;
  if (name == "SW" || name == "sw") return IoType::SW;
  if (name == "RW" || name == "rw") return IoType::RW;
  throw ValidationError("unknown I/O type '" + std::string(name) +
                        "' (expected SR, RR, SW or RW)");
}

const char* to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::table: return "table";
    case ObjectKind::index: return "index";
    case ObjectKind::other: return "other";
  }
  return "?";
}

ObjectKind object_kind_from_string(std::string_view name) {
  if (name == "table") return ObjectKind::table;
  if (name == "index") return ObjectKind::index;
  if (name == "other") return ObjectKind::other;
  throw ValidationError("unknown object kind '" + std::string(name) +
                        "' (expected table, index or other)");
}

const char* to_string(MetricMode mode) {
  return mode == MetricMode::per_query_response_time ? "per_query"
                                                     : "throughput";
}

MetricMode metric_mode_from_string(std::string_view name) {
  if (name == "per_query" || name == "per_query_response_time")
    return MetricMode::per_query_response_time;
  if (name == "throughput") return MetricMode::throughput;
  throw ValidationError("unknown metric mode '" + std::string(name) +
                        "' (expected per_query or throughput)");
}

double StorageClass::latency(IoType io, int concurrency) const {
  auto it = latency_ms.find(concurrency);
  if (it == latency_ms.end()) {
    throw ValidationError("storage class '" + id +
                          "' has no latency profile at concurrency " +
                          std::to_string(concurrency) + " (" +
                          to_string(io) + " lookup)");
  }
  return it->second[static_cast<int>(io)];
}

std::vector<std::string> WorkloadSpec::query_ids() const {
  std::set<std::string> ids;
  for (const auto& stream : streams)
    for (const auto& q : stream) ids.insert(q);
  return {ids.begin(), ids.end()};
}

std::uint64_t WorkloadSpec::total_tasks() const {
  std::uint64_t n = 0;
  for (const auto& stream : streams) n += stream.size();
  return n;
}

void WorkloadProfile::add(const std::string& query, const std::string& object,
                          IoType io, const std::vector<std::string>& placement,
                          double count) {
  if (!(count >= 0.0) || !std::isfinite(count)) {
    throw ValidationError("profile count for query '" + query +
                          "', object '" + object +
                          "' must be finite and >= 0");
  }
  Key key{query, object, static_cast<int>(io),
          plan_invariant_ ? std::vector<std::string>{} : placement};
  entries_[key] += count;
  queries_.insert(query);
}

double WorkloadProfile::count(const std::string& query,
                              const std::string& object, IoType io,
                              const std::vector<std::string>& placement) const {
  Key key{query, object, static_cast<int>(io),
          plan_invariant_ ? std::vector<std::string>{} : placement};
  auto it = entries_.find(key);
  return it == entries_.end() ? 0.0 : it->second;
}

std::vector<WorkloadProfile::Entry> WorkloadProfile::entries_sorted() const {
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& [key, count] : entries_) {
    out.push_back(Entry{std::get<0>(key), std::get<1>(key),
                        static_cast<IoType>(std::get<2>(key)),
                        std::get<3>(key), count});
  }
  return out;
}

void validate_classes(const std::vector<StorageClass>& classes) {
  std::unordered_set<std::string> seen;
  for (const auto& cls : classes) {
    if (cls.id.empty())
      throw ValidationError("storage class with empty id");
    if (!seen.insert(cls.id).second)
      throw ValidationError("duplicate storage class id '" + cls.id + "'");
    if (!(cls.price_cents_per_gb_hour > 0.0) ||
        !std::isfinite(cls.price_cents_per_gb_hour))
      throw ValidationError("storage class '" + cls.id +
                            "': price must be finite and > 0");
    if (!(cls.capacity_gb > 0.0) || !std::isfinite(cls.capacity_gb))
      throw ValidationError("storage class '" + cls.id +
                            "': capacity must be finite and > 0");
    for (const auto& [level, lat] : cls.latency_ms) {
      if (level <= 0)
        throw ValidationError("storage class '" + cls.id +
                              "': concurrency level must be positive");
      for (IoType io : kAllIoTypes) {
        double v = lat[static_cast<int>(io)];
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw ValidationError(
              "storage class '" + cls.id + "': latency for " + to_string(io) +
              " at concurrency " + std::to_string(level) +
              " must be finite and > 0");
        }
      }
    }
  }
}

void validate_objects(const std::vector<DataObject>& objects) {
  std::unordered_map<std::string, const DataObject*> by_id;
  for (const auto& obj : objects) {
    if (obj.id.empty()) throw ValidationError("data object with empty id");
    if (!by_id.emplace(obj.id, &obj).second)
      throw ValidationError("duplicate object id '" + obj.id + "'");
    if (!(obj.size_gb > 0.0) || !std::isfinite(obj.size_gb))
      throw ValidationError("object '" + obj.id +
                            "': size must be finite and > 0");
    if (obj.kind == ObjectKind::index) {
      if (!obj.parent)
        throw ValidationError("index '" + obj.id + "' has no parent table");
    } else if (obj.parent) {
      throw ValidationError("object '" + obj.id +
                            "' is not an index but declares a parent");
    }
  }
  for (const auto& obj : objects) {
    if (obj.kind != ObjectKind::index) continue;
    auto it = by_id.find(*obj.parent);
    if (it == by_id.end() || it->second->kind != ObjectKind::table) {
      throw ValidationError("index '" + obj.id + "' references parent '" +
                            *obj.parent + "' which is not a declared table");
    }
  }
}

void validate_workload(const WorkloadSpec& workload) {
  if (workload.streams.empty())
    throw ValidationError("workload has no streams");
  if (workload.concurrency != static_cast<int>(workload.streams.size()))
    throw ValidationError(
        "workload concurrency (" + std::to_string(workload.concurrency) +
        ") must equal the number of streams (" +
        std::to_string(workload.streams.size()) + ")");
  for (const auto& stream : workload.streams) {
    if (stream.empty()) throw ValidationError("workload stream is empty");
    for (const auto& q : stream) {
      if (!workload.cpu_time_ms.count(q))
        throw ValidationError("query '" + q +
                              "' has no cpu_time_ms entry (zero is allowed, "
                              "but the entry must exist)");
    }
  }
  for (const auto& [q, cpu] : workload.cpu_time_ms) {
    if (!(cpu >= 0.0) || !std::isfinite(cpu))
      throw ValidationError("query '" + q +
                            "': cpu time must be finite and >= 0");
  }
}

void validate_configuration(const StorageConfiguration& configuration) {
  if (configuration.id.empty())
    throw ValidationError("storage configuration with empty id");
  if (configuration.classes.empty())
    throw ValidationError("storage configuration '" + configuration.id +
                          "' declares no classes");
  validate_classes(configuration.classes);
}

std::vector<ObjectGroup> grouping(const std::vector<DataObject>& objects) {
  validate_objects(objects);

  // head id -> sorted index ids
  std::map<std::string, std::vector<std::string>> by_head;
  for (const auto& obj : objects) {
    if (obj.kind != ObjectKind::index) by_head[obj.id];
  }
  for (const auto& obj : objects) {
    if (obj.kind == ObjectKind::index) by_head[*obj.parent].push_back(obj.id);
  }

  std::vector<ObjectGroup> groups;
  groups.reserve(by_head.size());
  for (auto& [head, indices] : by_head) {
    std::sort(indices.begin(), indices.end());
    ObjectGroup g;
    g.members.reserve(indices.size() + 1);
    g.members.push_back(head);
    g.members.insert(g.members.end(), indices.begin(), indices.end());
    groups.push_back(std::move(g));
  }
  return groups;
}

Layout make_layout(const std::map<std::string, std::string>& mapping,
                   const std::vector<DataObject>& objects,
                   const std::vector<StorageClass>& classes) {
  std::unordered_map<std::string, const StorageClass*> class_by_id;
  for (const auto& cls : classes) class_by_id.emplace(cls.id, &cls);

  if (mapping.size() != objects.size())
    throw ValidationError("layout must map every declared object exactly (" +
                          std::to_string(mapping.size()) + " mapped, " +
                          std::to_string(objects.size()) + " declared)");

  Layout layout;
  layout.mapping = mapping;
  for (const auto& cls : classes) layout.usage_gb[cls.id] = 0.0;
  // Usage accumulates in object declaration order so repeated builds of the
  // same assignment produce identical sums.
  for (const auto& obj : objects) {
    auto it = mapping.find(obj.id);
    if (it == mapping.end())
      throw ValidationError("layout does not map object '" + obj.id + "'");
    if (!class_by_id.count(it->second))
      throw ValidationError("layout maps object '" + obj.id +
                            "' to unknown storage class '" + it->second + "'");
    layout.usage_gb[it->second] += obj.size_gb;
  }
  return layout;
}

Layout uniform_layout(const std::string& class_id,
                      const std::vector<DataObject>& objects,
                      const std::vector<StorageClass>& classes) {
  std::map<std::string, std::string> mapping;
  for (const auto& obj : objects) mapping[obj.id] = class_id;
  return make_layout(mapping, objects, classes);
}

CapacityReport validate_layout(const Layout& layout,
                               const std::vector<StorageClass>& classes) {
  std::unordered_map<std::string, const StorageClass*> class_by_id;
  for (const auto& cls : classes) class_by_id.emplace(cls.id, &cls);
  for (const auto& [obj, cls] : layout.mapping) {
    if (!class_by_id.count(cls))
      throw ValidationError("layout maps object '" + obj +
                            "' to unknown storage class '" + cls + "'");
  }

  CapacityReport report;
  report.usage_gb = layout.usage_gb;
  report.valid = true;
  for (const auto& cls : classes) {
    auto it = layout.usage_gb.find(cls.id);
    double used = it == layout.usage_gb.end() ? 0.0 : it->second;
    if (!(used < cls.capacity_gb)) {  // strict: usage == capacity violates
      report.valid = false;
      report.violated.push_back(cls.id);
    }
  }
  return report;
}

const StorageClass& most_expensive_class(
    const std::vector<StorageClass>& classes) {
  if (classes.empty())
    throw ValidationError("no storage classes declared");
  const StorageClass* best = &classes.front();
  for (const auto& cls : classes) {
    if (cls.price_cents_per_gb_hour > best->price_cents_per_gb_hour ||
        (cls.price_cents_per_gb_hour == best->price_cents_per_gb_hour &&
         cls.id < best->id)) {
      best = &cls;
    }
  }
  return *best;
}

double total_size_gb(const std::vector<DataObject>& objects) {
  double total = 0.0;
  for (const auto& obj : objects) total += obj.size_gb;
  return total;
}

}  // namespace tocadv
