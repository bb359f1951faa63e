#include "tocadv/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tocadv {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void require_version(const json& j, const std::string& where) {
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != 1)
    throw ValidationError(where + ": missing or unsupported \"version\" "
                          "(expected 1)");
}

double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number())
    throw ValidationError(where + ": missing numeric field \"" + key + "\"");
  return j[key].get<double>();
}

std::string get_string(const json& j, const char* key,
                       const std::string& where) {
  if (!j.contains(key) || !j[key].is_string())
    throw ValidationError(where + ": missing string field \"" + key + "\"");
  return j[key].get<std::string>();
}

std::map<int, std::array<double, 4>> parse_latency_table(
    const json& j, const std::string& where) {
  if (!j.is_object())
    throw ValidationError(where + ": \"latency_ms\" must be an object keyed "
                          "by concurrency level");
  std::map<int, std::array<double, 4>> table;
  for (const auto& [level_key, row] : j.items()) {
    int level = 0;
    try {
      std::size_t pos = 0;
      level = std::stoi(level_key, &pos);
      if (pos != level_key.size()) throw std::invalid_argument(level_key);
    } catch (const std::exception&) {
      throw ValidationError(where + ": concurrency level '" + level_key +
                            "' is not an integer");
    }
    std::array<double, 4> lat{};
    for (IoType io : kAllIoTypes) {
      const char* name = to_string(io);
      if (!row.contains(name) || !row[name].is_number())
        throw ValidationError(where + ": latency table at concurrency " +
                              level_key + " is missing \"" +
                              std::string(name) + "\"");
      lat[static_cast<int>(io)] = row[name].get<double>();
    }
    table[level] = lat;
  }
  return table;
}

StorageClass parse_class(const json& j, const std::string& where) {
  StorageClass cls;
  cls.id = get_string(j, "id", where);
  cls.price_cents_per_gb_hour =
      get_number(j, "price_cents_per_gb_hour", where);
  cls.capacity_gb = get_number(j, "capacity_gb", where);
  if (!j.contains("latency_ms"))
    throw ValidationError(where + ": class '" + cls.id +
                          "' has no \"latency_ms\" table");
  cls.latency_ms = parse_latency_table(j["latency_ms"], where);
  return cls;
}

ordered_json latency_table_to_json(
    const std::map<int, std::array<double, 4>>& table) {
  ordered_json out = ordered_json::object();
  for (const auto& [level, lat] : table) {
    ordered_json row = ordered_json::object();
    for (IoType io : kAllIoTypes)
      row[to_string(io)] = lat[static_cast<int>(io)];
    out[std::to_string(level)] = row;
  }
  return out;
}

}  // namespace

std::filesystem::path default_fixture_path() {
  if (const char* env = std::getenv("TOCADV_FIXTURE_PATH"); env && *env)
    return env;
#ifdef TOCADV_DEFAULT_FIXTURE
  return TOCADV_DEFAULT_FIXTURE;
#else
  return "data/device_profiles.json";
#endif
}

std::vector<StorageClass> load_fixture(const std::filesystem::path& path) {
  json j = load_json(path);
  std::string where = path.string();
  require_version(j, where);
  if (!j.contains("classes") || !j["classes"].is_array())
    throw ValidationError(where + ": missing \"classes\" array");
  std::vector<StorageClass> classes;
  std::size_t n = 0;
  for (const auto& entry : j["classes"]) {
    classes.push_back(
        parse_class(entry, where + ": classes[" + std::to_string(n) + "]"));
    ++n;
  }
  validate_classes(classes);
  return classes;
}

ProblemConfig load_config(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& fixture_path) {
  json j = load_json(path);
  std::string where = path.string();
  require_version(j, where);

  ProblemConfig config;

  if (!j.contains("classes") || !j["classes"].is_array() ||
      j["classes"].empty())
    throw ValidationError(where + ": missing non-empty \"classes\" array");
  // The fixture is scanned as raw JSON and only referenced entries get
  // parsed, so a half-benched class in the fixture cannot break configs
  // that never use it.
  std::optional<json> fixture;
  std::filesystem::path fixture_file =
      fixture_path ? *fixture_path : default_fixture_path();
  std::size_t n = 0;
  for (const auto& entry : j["classes"]) {
    std::string entry_where = where + ": classes[" + std::to_string(n) + "]";
    ++n;
    if (entry.contains("fixture")) {
      if (entry.contains("latency_ms"))
        throw ValidationError(entry_where +
                              ": a class cannot both reference a fixture and "
                              "define \"latency_ms\"");
      if (!fixture) {
        fixture = load_json(fixture_file);
        require_version(*fixture, fixture_file.string());
        if (!fixture->contains("classes") || !(*fixture)["classes"].is_array())
          throw ValidationError(fixture_file.string() +
                                ": missing \"classes\" array");
      }
      std::string ref = get_string(entry, "fixture", entry_where);
      const json* found = nullptr;
      for (const auto& fc : (*fixture)["classes"])
        if (fc.contains("id") && fc["id"] == ref) found = &fc;
      if (!found)
        throw ValidationError(entry_where + ": fixture " +
                              fixture_file.string() + " has no class '" +
                              ref + "'");
      StorageClass cls =
          parse_class(*found, fixture_file.string() + ": class '" + ref + "'");
      if (entry.contains("id")) cls.id = get_string(entry, "id", entry_where);
      if (entry.contains("price_cents_per_gb_hour"))
        cls.price_cents_per_gb_hour =
            get_number(entry, "price_cents_per_gb_hour", entry_where);
      if (entry.contains("capacity_gb"))
        cls.capacity_gb = get_number(entry, "capacity_gb", entry_where);
      config.classes.push_back(std::move(cls));
    } else {
      config.classes.push_back(parse_class(entry, entry_where));
    }
  }
  validate_classes(config.classes);

  if (!j.contains("objects") || !j["objects"].is_array() ||
      j["objects"].empty())
    throw ValidationError(where + ": missing non-empty \"objects\" array");
  n = 0;
  for (const auto& entry : j["objects"]) {
    std::string entry_where = where + ": objects[" + std::to_string(n) + "]";
    ++n;
    DataObject obj;
    obj.id = get_string(entry, "id", entry_where);
    obj.size_gb = get_number(entry, "size_gb", entry_where);
    obj.kind = object_kind_from_string(
        entry.contains("kind") ? get_string(entry, "kind", entry_where)
                               : "table");
    if (entry.contains("parent"))
      obj.parent = get_string(entry, "parent", entry_where);
    config.objects.push_back(std::move(obj));
  }
  validate_objects(config.objects);

  if (!j.contains("workload") || !j["workload"].is_object())
    throw ValidationError(where + ": missing \"workload\" object");
  const json& w = j["workload"];
  std::string wl_where = where + ": workload";
  config.workload.metric_mode = metric_mode_from_string(
      w.contains("metric") ? get_string(w, "metric", wl_where) : "per_query");
  if (!w.contains("streams") || !w["streams"].is_array() ||
      w["streams"].empty())
    throw ValidationError(wl_where + ": missing non-empty \"streams\" array");
  for (const auto& stream : w["streams"]) {
    if (!stream.is_array())
      throw ValidationError(wl_where + ": each stream must be an array of "
                            "query ids");
    std::vector<std::string> s;
    for (const auto& q : stream) {
      if (!q.is_string())
        throw ValidationError(wl_where + ": query ids must be strings");
      s.push_back(q.get<std::string>());
    }
    config.workload.streams.push_back(std::move(s));
  }
  config.workload.concurrency =
      static_cast<int>(config.workload.streams.size());
  if (w.contains("cpu_time_ms")) {
    if (!w["cpu_time_ms"].is_object())
      throw ValidationError(wl_where + ": \"cpu_time_ms\" must be an object");
    for (const auto& [q, v] : w["cpu_time_ms"].items()) {
      if (!v.is_number())
        throw ValidationError(wl_where + ": cpu_time_ms[\"" + q +
                              "\"] must be a number");
      config.workload.cpu_time_ms[q] = v.get<double>();
    }
  }
  validate_workload(config.workload);
  return config;
}

ProfileFile load_profile_file(const std::filesystem::path& path) {
  json j = load_json(path);
  std::string where = path.string();
  require_version(j, where);
  ProfileFile file;
  if (j.contains("plan_invariant")) {
    if (!j["plan_invariant"].is_boolean())
      throw ValidationError(where + ": \"plan_invariant\" must be a boolean");
    file.plan_invariant = j["plan_invariant"].get<bool>();
  }
  if (!j.contains("records") || !j["records"].is_array())
    throw ValidationError(where + ": missing \"records\" array");
  std::size_t n = 0;
  for (const auto& entry : j["records"]) {
    std::string entry_where = where + ": records[" + std::to_string(n) + "]";
    ProfileRecord r;
    r.index = n++;
    r.query = get_string(entry, "query", entry_where);
    r.object = get_string(entry, "object", entry_where);
    r.io = io_type_from_string(get_string(entry, "io", entry_where));
    r.count = get_number(entry, "count", entry_where);
    if (entry.contains("placement")) {
      if (!entry["placement"].is_array())
        throw ValidationError(entry_where +
                              ": \"placement\" must be an array");
      for (const auto& cls : entry["placement"]) {
        if (!cls.is_string())
          throw ValidationError(entry_where +
                                ": placement entries must be class id "
                                "strings");
        r.placement.push_back(cls.get<std::string>());
      }
    }
    if (!file.plan_invariant && r.placement.empty())
      throw ValidationError(entry_where +
                            ": record needs a \"placement\" (the profile is "
                            "not plan-invariant)");
    if (file.plan_invariant) r.placement.clear();
    file.records.push_back(std::move(r));
  }
  return file;
}

WorkloadProfile load_profile(const std::filesystem::path& path,
                             const ProblemConfig& config) {
  ProfileFile file = load_profile_file(path);
  return ingest_profile(file.records, file.plan_invariant, config.objects,
                        config.classes, config.workload);
}

ordered_json profile_to_json(const WorkloadProfile& profile) {
  ordered_json j;
  j["version"] = 1;
  j["plan_invariant"] = profile.plan_invariant();
  ordered_json records = ordered_json::array();
  for (const auto& e : profile.entries_sorted()) {
    ordered_json r;
    r["query"] = e.query;
    r["object"] = e.object;
    r["io"] = to_string(e.io);
    if (!profile.plan_invariant()) r["placement"] = e.placement;
    r["count"] = e.count;
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  return j;
}

void save_profile(const std::filesystem::path& path,
                  const WorkloadProfile& profile) {
  write_text_file(path, canonical_dump(profile_to_json(profile)));
}

ordered_json fixture_to_json(const std::vector<StorageClass>& classes) {
  ordered_json j;
  j["version"] = 1;
  ordered_json list = ordered_json::array();
  for (const auto& cls : classes) {
    ordered_json entry;
    entry["id"] = cls.id;
    entry["price_cents_per_gb_hour"] = cls.price_cents_per_gb_hour;
    entry["capacity_gb"] = cls.capacity_gb;
    entry["latency_ms"] = latency_table_to_json(cls.latency_ms);
    list.push_back(std::move(entry));
  }
  j["classes"] = std::move(list);
  return j;
}

void save_fixture(const std::filesystem::path& path,
                  const std::vector<StorageClass>& classes) {
  write_text_file(path, canonical_dump(fixture_to_json(classes)));
}

ordered_json config_to_json(const ProblemConfig& config) {
  ordered_json j = fixture_to_json(config.classes);
  ordered_json objects = ordered_json::array();
  for (const auto& obj : config.objects) {
    ordered_json entry;
    entry["id"] = obj.id;
    entry["size_gb"] = obj.size_gb;
    entry["kind"] = to_string(obj.kind);
    if (obj.parent) entry["parent"] = *obj.parent;
    objects.push_back(std::move(entry));
  }
  j["objects"] = std::move(objects);
  ordered_json workload;
  workload["metric"] = to_string(config.workload.metric_mode);
  workload["streams"] = config.workload.streams;
  workload["cpu_time_ms"] = config.workload.cpu_time_ms;
  j["workload"] = std::move(workload);
  return j;
}

void save_config(const std::filesystem::path& path,
                 const ProblemConfig& config) {
  write_text_file(path, canonical_dump(config_to_json(config)));
}

void append_bench_to_fixture(const std::filesystem::path& path,
                             const std::string& class_id,
                             std::optional<double> price_cents_per_gb_hour,
                             std::optional<double> capacity_gb,
                             const std::vector<BenchResult>& results) {
  ordered_json j;
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    try {
      j = ordered_json::parse(in);
    } catch (const json::exception& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
  } else {
    j["version"] = 1;
    j["classes"] = ordered_json::array();
  }
  if (!j.contains("classes") || !j["classes"].is_array())
    throw ValidationError(path.string() + ": missing \"classes\" array");

  ordered_json* entry = nullptr;
  for (auto& cls : j["classes"]) {
    if (cls.contains("id") && cls["id"] == class_id) {
      entry = &cls;
      break;
    }
  }
  if (!entry) {
    if (!price_cents_per_gb_hour || !capacity_gb)
      throw ValidationError(
          "fixture " + path.string() + " has no class '" + class_id +
          "'; creating it requires a price and a capacity");
    ordered_json cls;
    cls["id"] = class_id;
    cls["price_cents_per_gb_hour"] = *price_cents_per_gb_hour;
    cls["capacity_gb"] = *capacity_gb;
    cls["latency_ms"] = ordered_json::object();
    j["classes"].push_back(std::move(cls));
    entry = &j["classes"].back();
  } else {
    if (price_cents_per_gb_hour)
      (*entry)["price_cents_per_gb_hour"] = *price_cents_per_gb_hour;
    if (capacity_gb) (*entry)["capacity_gb"] = *capacity_gb;
    if (!entry->contains("latency_ms"))
      (*entry)["latency_ms"] = ordered_json::object();
  }
  for (const auto& r : results) {
    std::string level = std::to_string(r.concurrency);
    if (!(*entry)["latency_ms"].contains(level))
      (*entry)["latency_ms"][level] = ordered_json::object();
    (*entry)["latency_ms"][level][to_string(r.io)] = r.per_io_ms;
  }
  write_text_file(path, canonical_dump(j));
}

std::string canonical_dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << content;
  if (!out) throw ValidationError("write to " + path.string() + " failed");
}

}  // namespace tocadv
