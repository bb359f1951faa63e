// Command-line surface for the storage placement advisor.
//
// Exit codes: 0 result is feasible / command succeeded, 2 no feasible layout,
// 3 input or environment error, 4 exhaustive-search budget refusal.

#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "tocadv/io.hpp"
#include "tocadv/report.hpp"

namespace {

using namespace tocadv;
using nlohmann::ordered_json;

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInputError = 3;
constexpr int kExitBudget = 4;

struct CostOptions {
  std::string variant = "linear";
  double alpha = 0.5;
  bool alpha_given = false;
  bool discrete_empty = false;
  bool both_variants = false;

  CostModelConfig active() const {
    CostModelConfig cfg;
    cfg.variant = cost_variant_from_string(variant);
    cfg.alpha = cfg.variant == CostVariant::discrete ? alpha : 0.0;
    cfg.discrete_counts_empty_classes = discrete_empty;
    validate(cfg);
    return cfg;
  }

  /// Cost models to evaluate the chosen layout under; the first entry is the
  /// one the search optimizes.
  std::vector<std::pair<std::string, CostModelConfig>> report_variants()
      const {
    CostModelConfig active_cfg = active();
    std::vector<std::pair<std::string, CostModelConfig>> out;
    out.emplace_back(to_string(active_cfg.variant), active_cfg);
    if (both_variants) {
      CostModelConfig other;
      if (active_cfg.variant == CostVariant::linear) {
        other.variant = CostVariant::discrete;
        other.alpha = alpha;
        other.discrete_counts_empty_classes = discrete_empty;
      } else {
        other.variant = CostVariant::linear;
      }
      validate(other);
      out.emplace_back(to_string(other.variant), other);
    }
    return out;
  }
};

void add_cost_options(CLI::App* cmd, CostOptions& cost) {
  cmd->add_option("--cost-model", cost.variant,
                  "Cost model variant: linear or discrete")
      ->check(CLI::IsMember({"linear", "discrete"}));
  cmd->add_option("--alpha", cost.alpha,
                  "Weight of the fixed per-device cost (discrete model)");
  cmd->add_flag("--discrete-empty", cost.discrete_empty,
                "Charge the fixed device cost even for empty classes");
  cmd->add_flag("--both-cost-models", cost.both_variants,
                "Report the layout cost under both cost model variants");
}

Layout preset_layout(const std::string& spec, const ProblemConfig& config) {
  auto fail = [&] {
    throw ValidationError(
        "unknown layout preset '" + spec +
        "' (expected all:<class> or split:<index-class>:<data-class>)");
  };
  std::map<std::string, std::string> mapping;
  if (spec.rfind("all:", 0) == 0) {
    std::string cls = spec.substr(4);
    for (const auto& obj : config.objects) mapping[obj.id] = cls;
  } else if (spec.rfind("split:", 0) == 0) {
    std::string rest = spec.substr(6);
    auto colon = rest.find(':');
    if (colon == std::string::npos) fail();
    std::string index_class = rest.substr(0, colon);
    std::string data_class = rest.substr(colon + 1);
    for (const auto& obj : config.objects)
      mapping[obj.id] =
          obj.kind == ObjectKind::index ? index_class : data_class;
  } else {
    fail();
  }
  return make_layout(mapping, config.objects, config.classes);
}

int finish_advice(const AdviceReport& report, const std::string& out_path,
                  const OptimizationResult& result, bool trace) {
  if (!out_path.empty())
    write_text_file(out_path, canonical_dump(report_to_json(report)));
  std::cout << render_summary(report);
  if (trace) {
    for (const auto& t : result.trace) {
      std::string placement;
      for (const auto& cls : t.move.placement.classes) {
        if (!placement.empty()) placement += ",";
        placement += cls;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6g", t.move.score);
      std::cout << (t.accepted ? "accepted" : "rejected") << " group="
                << t.move.group_id << " placement=[" << placement
                << "] score=" << buf;
      if (t.toc_cents) {
        std::snprintf(buf, sizeof buf, "%.9g", *t.toc_cents);
        std::cout << " toc=" << buf;
      }
      std::cout << "\n";
    }
  }
  return report.status == "feasible" ? kExitFeasible : kExitInfeasible;
}

int run_advise(const std::string& config_path, const std::string& profile_path,
               double sla, const std::string& engine,
               const CostOptions& cost, std::uint64_t es_budget,
               const std::string& out_path, const std::string& preset,
               const std::string& fixture, bool trace) {
  std::optional<std::filesystem::path> fixture_path;
  if (!fixture.empty()) fixture_path = fixture;
  ProblemConfig config = load_config(config_path, fixture_path);
  WorkloadProfile profile = load_profile(profile_path, config);

  OptimizationResult result;
  std::string engine_label = engine;
  if (!preset.empty()) {
    engine_label = "preset:" + preset;
    result = evaluate_fixed_layout(config.objects, config.classes,
                                   config.workload, profile, sla,
                                   cost.active(), preset_layout(preset,
                                                                config));
  } else if (engine == "dot") {
    result = dot_optimize(config.objects, config.classes, config.workload,
                          profile, sla, cost.active(), trace);
  } else {
    result = exhaustive_search(config.objects, config.classes,
                               config.workload, profile, sla, cost.active(),
                               es_budget);
  }
  AdviceReport report = build_advice_report(
      engine_label, config.objects, config.classes, config.workload, profile,
      result, cost.report_variants());
  return finish_advice(report, out_path, result, trace);
}

ordered_json advice_json(const std::string& engine,
                         const ProblemConfig& config,
                         const WorkloadProfile& profile,
                         const OptimizationResult& result,
                         const CostOptions& cost) {
  return report_to_json(build_advice_report(engine, config.objects,
                                            config.classes, config.workload,
                                            profile, result,
                                            cost.report_variants()));
}

int run_compare_single(const std::string& config_path,
                       const std::string& profile_path, double sla,
                       const CostOptions& cost, std::uint64_t es_budget,
                       const std::string& out_path,
                       const std::string& fixture) {
  std::optional<std::filesystem::path> fixture_path;
  if (!fixture.empty()) fixture_path = fixture;
  ProblemConfig config = load_config(config_path, fixture_path);
  WorkloadProfile profile = load_profile(profile_path, config);

  auto clock = [] { return std::chrono::steady_clock::now(); };
  auto t0 = clock();
  OptimizationResult dot = dot_optimize(config.objects, config.classes,
                                        config.workload, profile, sla,
                                        cost.active());
  auto t1 = clock();
  OptimizationResult es =
      exhaustive_search(config.objects, config.classes, config.workload,
                        profile, sla, cost.active(), es_budget);
  auto t2 = clock();

  ordered_json j;
  j["version"] = 1;
  j["mode"] = "single";
  j["dot"] = advice_json("dot", config, profile, dot, cost);
  j["es"] = advice_json("es", config, profile, es, cost);
  bool both = dot.status == OptStatus::feasible &&
              es.status == OptStatus::feasible;
  j["toc_ratio"] =
      both ? ordered_json(*dot.toc_cents / *es.toc_cents)
           : ordered_json(nullptr);
  j["time_ratio"] = both ? ordered_json(dot.estimate->total_hours /
                                        es.estimate->total_hours)
                         : ordered_json(nullptr);
  ordered_json wall;
  wall["dot"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  wall["es"] = std::chrono::duration<double, std::milli>(t2 - t1).count();
  j["wall_ms"] = std::move(wall);

  if (!out_path.empty()) write_text_file(out_path, canonical_dump(j));
  std::printf("dot: %s toc=%.9g examined=%llu\n",
              dot.status == OptStatus::feasible ? "feasible" : "infeasible",
              dot.toc_cents ? *dot.toc_cents : 0.0,
              static_cast<unsigned long long>(dot.layouts_examined));
  std::printf("es:  %s toc=%.9g examined=%llu\n",
              es.status == OptStatus::feasible ? "feasible" : "infeasible",
              es.toc_cents ? *es.toc_cents : 0.0,
              static_cast<unsigned long long>(es.layouts_examined));
  if (both)
    std::printf("toc ratio (dot/es): %.6f\n", *dot.toc_cents / *es.toc_cents);
  return es.status == OptStatus::feasible ? kExitFeasible : kExitInfeasible;
}

int run_compare_batch(int batch, std::uint64_t seed, double sla,
                      bool sla_given, const CostOptions& cost,
                      std::uint64_t es_budget, const std::string& out_path) {
  const double sla_cycle[] = {0.5, 0.25, 0.125};
  std::vector<double> ratios;
  int dot_feasible = 0, es_feasible = 0, both_feasible = 0;

  for (int i = 0; i < batch; ++i) {
    RandomInstanceParams params;
    params.num_classes = 3;
    params.num_tables = 2 + static_cast<int>((seed + i) % 2);
    params.max_indices_per_table = 1;
    params.num_other_objects = static_cast<int>((seed + i) % 3 == 0);
    params.num_queries = 2 + static_cast<int>((seed + i) % 3);
    params.num_streams = 1 + static_cast<int>((seed + i) % 2);
    params.tight_capacity = (seed + i) % 10 < 3;
    SyntheticInstance inst = random_instance(params, seed + i);
    double instance_sla = sla_given ? sla : sla_cycle[i % 3];

    OptimizationResult dot =
        dot_optimize(inst.objects, inst.classes, inst.workload, inst.profile,
                     instance_sla, cost.active());
    OptimizationResult es =
        exhaustive_search(inst.objects, inst.classes, inst.workload,
                          inst.profile, instance_sla, cost.active(),
                          es_budget);
    if (dot.status == OptStatus::feasible) ++dot_feasible;
    if (es.status == OptStatus::feasible) ++es_feasible;
    if (dot.status == OptStatus::feasible &&
        es.status == OptStatus::feasible) {
      ++both_feasible;
      ratios.push_back(*dot.toc_cents / *es.toc_cents);
    }
  }

  std::sort(ratios.begin(), ratios.end());
  auto quantile = [&](double p) {
    if (ratios.empty()) return 0.0;
    std::size_t idx = static_cast<std::size_t>(p * (ratios.size() - 1));
    return ratios[idx];
  };
  double mean = 0.0;
  for (double r : ratios) mean += r;
  if (!ratios.empty()) mean /= static_cast<double>(ratios.size());
  std::size_t within = 0;
  for (double r : ratios)
    if (r <= 1.25) ++within;

  ordered_json j;
  j["version"] = 1;
  j["mode"] = "batch";
  j["instances"] = batch;
  j["seed"] = seed;
  j["dot_feasible"] = dot_feasible;
  j["es_feasible"] = es_feasible;
  j["both_feasible"] = both_feasible;
  ordered_json dist;
  dist["min"] = ratios.empty() ? 0.0 : ratios.front();
  dist["p50"] = quantile(0.5);
  dist["p90"] = quantile(0.9);
  dist["max"] = ratios.empty() ? 0.0 : ratios.back();
  dist["mean"] = mean;
  j["toc_ratio"] = std::move(dist);
  j["within_1.25"] =
      ratios.empty()
          ? 0.0
          : static_cast<double>(within) / static_cast<double>(ratios.size());

  if (!out_path.empty()) write_text_file(out_path, canonical_dump(j));
  std::cout << j.dump(2) << "\n";
  return kExitFeasible;
}

int run_bench(const std::string& target, const std::string& io_arg,
              int concurrency, BenchConfig cfg, const std::string& append_to,
              const std::string& class_id, std::optional<double> price,
              std::optional<double> capacity) {
  std::vector<IoType> kinds;
  if (io_arg == "all") {
    kinds = {IoType::SR, IoType::RR, IoType::SW, IoType::RW};
  } else {
    kinds = {io_type_from_string(io_arg)};
  }

  std::vector<BenchResult> results;
  double measured_rr = -1.0;
  for (IoType io : kinds) {
    BenchConfig one = cfg;
    if (io == IoType::RW && one.rr_baseline_ms < 0.0 && measured_rr >= 0.0)
      one.rr_baseline_ms = measured_rr;  // reuse the RR run from --io all
    BenchResult r = bench_storage(target, io, concurrency, one);
    if (io == IoType::RR) measured_rr = r.per_io_ms;
    results.push_back(r);
    std::printf(
        "io=%s concurrency=%d operations=%llu elapsed_ms=%.6f "
        "per_io_ms=%.6f direct_io=%s anomaly=%s\n",
        to_string(r.io), r.concurrency,
        static_cast<unsigned long long>(r.operations), r.elapsed_ms,
        r.per_io_ms, r.direct_io ? "yes" : "no", r.anomaly ? "yes" : "no");
  }
  if (!append_to.empty()) {
    if (class_id.empty())
      throw ValidationError("--append-to requires --class-id");
    append_bench_to_fixture(append_to, class_id, price, capacity, results);
  }
  return kExitFeasible;
}

int run_synth(const std::string& config_path, const std::string& scenario,
              std::uint64_t seed, const std::string& out_path,
              const std::string& fixture) {
  std::optional<std::filesystem::path> fixture_path;
  if (!fixture.empty()) fixture_path = fixture;
  ProblemConfig config = load_config(config_path, fixture_path);
  GeneratorSpec spec;
  spec.scenario = scenario;
  spec.seed = seed;
  spec.query_ids = config.workload.query_ids();
  WorkloadProfile profile = synthesize_profile(
      config.objects, grouping(config.objects), config.classes, spec);
  save_profile(out_path, profile);
  std::cout << "wrote " << profile.entry_count() << " profile entries to "
            << out_path << "\n";
  return kExitFeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tocadv - cost-aware storage placement advisor"};
  app.require_subcommand(1);

  // advise
  auto* advise = app.add_subcommand(
      "advise", "Recommend a layout minimizing the total operating cost");
  std::string config_path, profile_path, out_path, engine = "dot";
  std::string preset, fixture;
  double sla = 0.0;
  bool trace = false;
  std::uint64_t es_budget = kDefaultExhaustiveBudget;
  CostOptions cost;
  advise->add_option("--config", config_path, "Problem config file")
      ->required();
  advise->add_option("--profile", profile_path, "Workload profile file")
      ->required();
  advise->add_option("--sla", sla, "Relative SLA in (0,1]")->required();
  auto* engine_opt = advise->add_option("--engine", engine,
                                        "Search engine: dot or es")
                         ->check(CLI::IsMember({"dot", "es"}));
  advise->add_option("--es-budget", es_budget,
                     "Maximum layout count the es engine accepts");
  advise->add_option("--out", out_path, "Write the report to this file");
  advise->add_option("--layout-preset", preset,
                     "Evaluate a fixed layout instead of searching "
                     "(all:<class> or split:<index-class>:<data-class>)")
      ->excludes(engine_opt);
  advise->add_option("--fixture", fixture,
                     "Device profile fixture overriding the default");
  advise->add_flag("--trace", trace, "Print the per-move search trace");
  add_cost_options(advise, cost);

  // compare
  auto* compare = app.add_subcommand(
      "compare", "Run dot and es side by side and report their gap");
  std::string cmp_config, cmp_profile, cmp_out, cmp_fixture;
  double cmp_sla = 0.0;
  int batch = 0;
  std::uint64_t cmp_seed = 1;
  std::uint64_t cmp_budget = kDefaultExhaustiveBudget;
  CostOptions cmp_cost;
  auto* cmp_config_opt =
      compare->add_option("--config", cmp_config, "Problem config file");
  compare->add_option("--profile", cmp_profile, "Workload profile file")
      ->needs(cmp_config_opt);
  auto* cmp_sla_opt =
      compare->add_option("--sla", cmp_sla, "Relative SLA in (0,1]");
  compare->add_option("--batch", batch,
                      "Generate this many seeded random instances instead of "
                      "reading files");
  compare->add_option("--seed", cmp_seed, "Base seed for --batch");
  compare->add_option("--es-budget", cmp_budget,
                      "Maximum layout count the es engine accepts");
  compare->add_option("--out", cmp_out, "Write the comparison to this file");
  compare->add_option("--fixture", cmp_fixture,
                      "Device profile fixture overriding the default");
  add_cost_options(compare, cmp_cost);

  // bench
  auto* bench = app.add_subcommand(
      "bench", "Measure per-I/O latency of a storage target");
  std::string target, io_arg = "all", append_to, class_id;
  int concurrency = 1;
  BenchConfig bench_cfg;
  double working_set_mb = 32.0;
  bool no_direct = false;
  double price_arg = -1.0, capacity_arg = -1.0;
  bench->add_option("--target", target, "Directory on the device under test")
      ->required();
  bench->add_option("--io", io_arg, "I/O type: sr, rr, sw, rw or all")
      ->check(CLI::IsMember({"sr", "rr", "sw", "rw", "all",
                             "SR", "RR", "SW", "RW"}));
  bench->add_option("--concurrency", concurrency, "Concurrent workers");
  bench->add_option("--block-size", bench_cfg.block_size,
                    "Read block size in bytes");
  bench->add_option("--record-size", bench_cfg.record_size,
                    "Written row size in bytes");
  bench->add_option("--ops", bench_cfg.ops_per_worker,
                    "Operations per worker");
  bench->add_option("--working-set-mb", working_set_mb,
                    "Per-worker file size in MiB");
  bench->add_option("--seed", bench_cfg.seed, "Offset sequence seed");
  bench->add_option("--rr-baseline-ms", bench_cfg.rr_baseline_ms,
                    "Random-read ms/IO subtracted from rw runs (measured "
                    "when negative)");
  bench->add_flag("--no-direct", no_direct, "Do not attempt direct I/O");
  bench->add_option("--append-to", append_to,
                    "Merge results into this fixture file");
  bench->add_option("--class-id", class_id,
                    "Storage class id for --append-to");
  bench->add_option("--price", price_arg,
                    "Price (cents/GB/hour) when creating a fixture class");
  bench->add_option("--capacity", capacity_arg,
                    "Capacity (GB) when creating a fixture class");

  // synth
  auto* synth = app.add_subcommand(
      "synth", "Synthesize a deterministic workload profile");
  std::string synth_config, synth_scenario, synth_out, synth_fixture;
  std::uint64_t synth_seed = 0;
  synth->add_option("--config", synth_config, "Problem config file")
      ->required();
  synth->add_option("--scenario", synth_scenario,
                    "seq-scan-only, plan-switch or random")
      ->required();
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--out", synth_out, "Profile file to write")->required();
  synth->add_option("--fixture", synth_fixture,
                    "Device profile fixture overriding the default");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(advise)) {
      if (!(sla > 0.0 && sla <= 1.0))
        throw ValidationError("relative SLA must be in (0,1]");
      return run_advise(config_path, profile_path, sla, engine, cost,
                        es_budget, out_path, preset, fixture, trace);
    }
    if (app.got_subcommand(compare)) {
      if (batch > 0) {
        bool sla_given = cmp_sla_opt->count() > 0;
        if (sla_given && !(cmp_sla > 0.0 && cmp_sla <= 1.0))
          throw ValidationError("relative SLA must be in (0,1]");
        return run_compare_batch(batch, cmp_seed, cmp_sla, sla_given,
                                 cmp_cost, cmp_budget, cmp_out);
      }
      if (cmp_config.empty() || cmp_profile.empty())
        throw ValidationError(
            "compare needs either --batch or --config/--profile");
      if (!(cmp_sla > 0.0 && cmp_sla <= 1.0))
        throw ValidationError("relative SLA must be in (0,1]");
      return run_compare_single(cmp_config, cmp_profile, cmp_sla, cmp_cost,
                                cmp_budget, cmp_out, cmp_fixture);
    }
    if (app.got_subcommand(bench)) {
      bench_cfg.working_set_bytes =
          static_cast<std::size_t>(working_set_mb * 1024.0 * 1024.0);
      bench_cfg.use_direct_io = !no_direct;
      std::optional<double> price, capacity;
      if (price_arg >= 0.0) price = price_arg;
      if (capacity_arg >= 0.0) capacity = capacity_arg;
      return run_bench(target, io_arg, concurrency, bench_cfg, append_to,
                       class_id, price, capacity);
    }
    if (app.got_subcommand(synth)) {
      return run_synth(synth_config, synth_scenario, synth_seed, synth_out,
                       synth_fixture);
    }
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
