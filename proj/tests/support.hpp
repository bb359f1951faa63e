#pragma once

// Shared builders for test instances. Values mirror the bundled device
// profile fixture where realism matters.

#include <cmath>
#include <string>
#include <vector>

#include "tocadv/domain.hpp"

namespace testsupport {

using namespace tocadv;

inline bool approx_rel(double a, double b, double rel = 1e-9) {
  if (a == b) return true;
  double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= rel * scale;
}

inline StorageClass make_class(std::string id, double price, double capacity,
                               std::array<double, 4> latency,
                               int concurrency = 1) {
  StorageClass cls;
  cls.id = std::move(id);
  cls.price_cents_per_gb_hour = price;
  cls.capacity_gb = capacity;
  cls.latency_ms[concurrency] = latency;
  return cls;
}

/// HDD and H-SSD rows of the bundled fixture at concurrency 1.
inline std::vector<StorageClass> hdd_hssd_classes(double hdd_cap = 500.0,
                                                  double hssd_cap = 500.0) {
  return {
      make_class("HDD", 0.000347, hdd_cap, {0.072, 13.32, 0.012, 10.15}),
      make_class("H-SSD", 0.169, hssd_cap, {0.016, 0.091, 0.009, 0.928}),
  };
}

inline DataObject table(std::string id, double size_gb) {
  DataObject o;
  o.id = std::move(id);
  o.size_gb = size_gb;
  o.kind = ObjectKind::table;
  return o;
}

inline DataObject index(std::string id, std::string parent, double size_gb) {
  DataObject o;
  o.id = std::move(id);
  o.size_gb = size_gb;
  o.kind = ObjectKind::index;
  o.parent = std::move(parent);
  return o;
}

inline DataObject other(std::string id, double size_gb) {
  DataObject o;
  o.id = std::move(id);
  o.size_gb = size_gb;
  o.kind = ObjectKind::other;
  return o;
}

/// Single-stream workload over the given query ids, all CPU times zero.
inline WorkloadSpec single_stream(std::vector<std::string> queries) {
  WorkloadSpec w;
  w.streams.push_back(queries);
  w.concurrency = 1;
  for (auto& q : queries) w.cpu_time_ms[q] = 0.0;
  return w;
}

}  // namespace testsupport
