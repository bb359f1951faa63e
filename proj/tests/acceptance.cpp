// Acceptance suite: one criterion per numbered check, each printed as a
// PASS/FAIL line. Run with no arguments for all criteria, or with a number
// to run one (plus --cli <path> to point at the command-line binary).

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tocadv/bench.hpp"
#include "tocadv/io.hpp"
#include "tocadv/optimizer.hpp"
#include "tocadv/profiling.hpp"
#include "tocadv/report.hpp"

namespace {

using namespace tocadv;
namespace fs = std::filesystem;

std::string g_cli_path;

struct Checker {
  int fails = 0;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++fails;
    std::cout << "    check failed: " << what << "\n";
  }
};

bool approx_rel(double a, double b, double rel) {
  if (a == b) return true;
  double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= rel * scale;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

const CostModelConfig kLinear{};

RandomInstanceParams single_group_params(std::uint64_t seed) {
  RandomInstanceParams p;
  p.num_classes = 2 + static_cast<int>(seed % 3);       // M in 2..4
  p.num_tables = 1;                                     // G = 1
  p.max_indices_per_table = static_cast<int>(seed % 3); // K in 1..3
  p.num_other_objects = 0;
  p.num_queries = 1 + static_cast<int>(seed % 3);
  p.num_streams = 1;
  p.tight_capacity = seed % 4 == 0;
  return p;
}

RandomInstanceParams multi_group_params(std::uint64_t seed) {
  RandomInstanceParams p;
  p.num_classes = 3;
  p.num_tables = 2 + static_cast<int>(seed % 2);        // N <= 7
  p.max_indices_per_table = 1;                          // K <= 2
  p.num_other_objects = static_cast<int>(seed % 3 == 0);
  p.num_queries = 2 + static_cast<int>(seed % 3);
  p.num_streams = 1 + static_cast<int>(seed % 2);
  p.tight_capacity = seed % 10 < 3;
  return p;
}

// ---------------------------------------------------------------------------
// 1. Oracle equivalence on single-group instances: the greedy search explores
//    that group's entire placement space, so its TOC must equal the
//    exhaustive optimum bit for bit.
bool criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  Checker c;
  const double slas[] = {1.0, 0.5, 0.25, 0.125};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto inst = random_instance(single_group_params(seed), seed);
    double sla = slas[seed % 4];
    auto dot = dot_optimize(inst.objects, inst.classes, inst.workload,
                            inst.profile, sla, kLinear);
    auto es = exhaustive_search(inst.objects, inst.classes, inst.workload,
                                inst.profile, sla, kLinear);
    c.expect(dot.status == es.status,
             "status mismatch at seed " + std::to_string(seed));
    if (dot.status == OptStatus::feasible &&
        es.status == OptStatus::feasible) {
      c.expect(*dot.toc_cents == *es.toc_cents,
               "TOC differs at seed " + std::to_string(seed) + ": dot=" +
                   std::to_string(*dot.toc_cents) + " es=" +
                   std::to_string(*es.toc_cents));
    }
  }
  double elapsed = seconds_since(t0);
  c.expect(elapsed < 10.0,
           "runtime " + std::to_string(elapsed) + "s exceeds 10s");
  return c.fails == 0;
}

// ---------------------------------------------------------------------------
// 2. Oracle proximity on multi-group instances: greedy stays feasible and
//    lands within 25% of the exhaustive optimum at least 90% of the time.
bool criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  Checker c;
  const double slas[] = {0.125, 0.25, 0.5};
  int both_feasible = 0;
  int within = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto inst = random_instance(multi_group_params(seed), seed * 7919);
    double sla = slas[seed % 3];
    auto dot = dot_optimize(inst.objects, inst.classes, inst.workload,
                            inst.profile, sla, kLinear);
    auto es = exhaustive_search(inst.objects, inst.classes, inst.workload,
                                inst.profile, sla, kLinear);
    c.expect(dot.status == OptStatus::feasible,
             "dot infeasible at seed " + std::to_string(seed));
    if (dot.status == OptStatus::feasible &&
        es.status == OptStatus::feasible) {
      ++both_feasible;
      double ratio = *dot.toc_cents / *es.toc_cents;
      c.expect(ratio >= 1.0 - 1e-12,
               "dot beat the exhaustive optimum at seed " +
                   std::to_string(seed));
      if (ratio <= 1.25) ++within;
    }
  }
  std::printf("    within 1.25x of the optimum: %d / %d\n", within,
              both_feasible);
  c.expect(both_feasible > 0, "no instance had both engines feasible");
  c.expect(10 * within >= 9 * both_feasible,
           "fewer than 90% of instances within 1.25x");
  double elapsed = seconds_since(t0);
  c.expect(elapsed < 60.0,
           "runtime " + std::to_string(elapsed) + "s exceeds 60s");
  return c.fails == 0;
}

// ---------------------------------------------------------------------------
// 3. Search-size bounds: greedy examines at most G*M^K + 1 layouts, the
//    exhaustive engine exactly M^N, and it refuses 3^16 under the default
//    budget, reporting the count.
bool criterion3() {
  Checker c;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto inst = random_instance(multi_group_params(seed), seed);
    auto dot = dot_optimize(inst.objects, inst.classes, inst.workload,
                            inst.profile, 0.25, kLinear);
    auto groups = grouping(inst.objects);
    std::size_t k_max = 0;
    for (const auto& g : groups) k_max = std::max(k_max, g.size());
    std::uint64_t per_group = 1;
    for (std::size_t i = 0; i < k_max; ++i) per_group *= inst.classes.size();
    c.expect(dot.layouts_examined <= groups.size() * per_group + 1,
             "greedy examined too many layouts at seed " +
                 std::to_string(seed));

    auto es = exhaustive_search(inst.objects, inst.classes, inst.workload,
                                inst.profile, 0.25, kLinear);
    c.expect(es.layouts_examined ==
                 exhaustive_layout_count(inst.classes.size(),
                                         inst.objects.size()),
             "exhaustive count mismatch at seed " + std::to_string(seed));
  }

  RandomInstanceParams big;
  big.num_classes = 3;
  big.num_tables = 16;
  big.max_indices_per_table = 0;
  big.num_queries = 2;
  auto inst = random_instance(big, 5);
  bool refused = false;
  try {
    exhaustive_search(inst.objects, inst.classes, inst.workload, inst.profile,
                      0.5, kLinear);
  } catch (const BudgetError& e) {
    refused = true;
    c.expect(e.layout_count == 43046721ULL,
             "refusal reported " + std::to_string(e.layout_count));
    c.expect(std::string(e.what()).find("43046721") != std::string::npos,
             "refusal message does not cite the layout count");
  }
  c.expect(refused, "3^16 instance was not refused under the default budget");
  return c.fails == 0;
}

// ---------------------------------------------------------------------------
// 4. Cost model laws: discrete(alpha=0) == linear exactly, prices scale the
//    cost homogeneously, and uniform price scaling leaves the move order
//    unchanged.
bool criterion4() {
  Checker c;
  CostModelConfig discrete0;
  discrete0.variant = CostVariant::discrete;
  discrete0.alpha = 0.0;

  int layouts_checked = 0;
  std::mt19937_64 rng(4242);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    RandomInstanceParams p;
    p.num_classes = 3 + static_cast<int>(seed % 2);
    p.num_tables = 3;
    p.max_indices_per_table = 2;
    auto inst = random_instance(p, seed);
    for (int trial = 0; trial < 20; ++trial) {
      std::map<std::string, std::string> mapping;
      for (const auto& obj : inst.objects)
        mapping[obj.id] = inst.classes[rng() % inst.classes.size()].id;
      auto layout = make_layout(mapping, inst.objects, inst.classes);
      double lin = layout_cost(layout, inst.classes, kLinear);
      double disc = layout_cost(layout, inst.classes, discrete0);
      if (lin != disc) {
        c.expect(false, "alpha=0 mismatch at seed " + std::to_string(seed));
      }
      ++layouts_checked;

      double k = 0.25 + static_cast<double>(rng() % 100);
      auto scaled = inst.classes;
      for (auto& cls : scaled) cls.price_cents_per_gb_hour *= k;
      if (!approx_rel(layout_cost(layout, scaled, kLinear), k * lin, 1e-12))
        c.expect(false, "homogeneity violated at seed " +
                            std::to_string(seed));
    }
  }
  c.expect(layouts_checked == 1000, "expected 1000 random layouts");

  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto inst = random_instance(multi_group_params(seed), seed + 31);
    auto groups = grouping(inst.objects);
    auto moves = enumerate_moves(inst.objects, groups, inst.classes,
                                 inst.profile, kLinear,
                                 inst.workload.concurrency);
    double k = seed % 2 == 0 ? 3.5 : 0.2;
    auto scaled = inst.classes;
    for (auto& cls : scaled) cls.price_cents_per_gb_hour *= k;
    auto scaled_moves = enumerate_moves(inst.objects, groups, scaled,
                                        inst.profile, kLinear,
                                        inst.workload.concurrency);
    bool same = moves.size() == scaled_moves.size();
    for (std::size_t i = 0; same && i < moves.size(); ++i) {
      same = moves[i].group_id == scaled_moves[i].group_id &&
             moves[i].placement == scaled_moves[i].placement;
    }
    c.expect(same, "move order changed under price scaling at seed " +
                       std::to_string(seed));
  }
  return c.fails == 0;
}

// ---------------------------------------------------------------------------
// 5. Worked examples against the bundled device profiles, to one part in a
//    billion.
bool criterion5() {
  Checker c;
  auto fixture = load_fixture(default_fixture_path());
  std::vector<StorageClass> classes;
  for (const auto& cls : fixture)
    if (cls.id == "HDD" || cls.id == "H-SSD") classes.push_back(cls);
  c.expect(classes.size() == 2, "fixture is missing HDD or H-SSD");

  std::vector<DataObject> objects;
  {
    DataObject a;
    a.id = "A";
    a.size_gb = 9.0;
    a.kind = ObjectKind::table;
    objects.push_back(a);
    DataObject pk;
    pk.id = "A_pk";
    pk.size_gb = 1.0;
    pk.kind = ObjectKind::index;
    pk.parent = "A";
    objects.push_back(pk);
  }
  auto groups = grouping(objects);
  WorkloadProfile profile(/*plan_invariant=*/true);
  profile.add("q1", "A", IoType::SR, {}, 1000.0);

  double hdd_ms = io_time_share(groups[0], Placement{{"HDD", "HDD"}}, profile,
                                classes, 1);
  c.expect(approx_rel(hdd_ms, 72.0, 1e-9),
           "1000 sequential reads on HDD: " + std::to_string(hdd_ms));
  double mixed_ms = io_time_share(groups[0], Placement{{"H-SSD", "HDD"}},
                                  profile, classes, 1);
  c.expect(approx_rel(mixed_ms, 16.0, 1e-9),
           "table on H-SSD: " + std::to_string(mixed_ms));
  WorkloadProfile empty;
  c.expect(io_time_share(groups[0], Placement{{"HDD", "HDD"}}, empty, classes,
                         1) == 0.0,
           "zero counts must give zero time");

  double penalty = performance_penalty(groups[0], Placement{{"HDD", "HDD"}},
                                       profile, classes, 1);
  c.expect(approx_rel(penalty, 56.0, 1e-9),
           "penalty: " + std::to_string(penalty));
  double saving = cost_saving(groups[0], Placement{{"HDD", "HDD"}}, objects,
                              classes, kLinear);
  c.expect(approx_rel(saving, 1.68653, 1e-9),
           "saving: " + std::to_string(saving));
  auto score = priority_score(penalty, saving);
  c.expect(score && approx_rel(*score, 56.0 / 1.68653, 1e-9),
           "score: " + std::to_string(score ? *score : -1.0));

  // layout cost and TOC arithmetic on the same fixture prices
  DataObject big;
  big.id = "D";
  big.size_gb = 30.0;
  big.kind = ObjectKind::table;
  auto cost_layout = uniform_layout("H-SSD", {big}, classes);
  double cost = layout_cost(cost_layout, classes, kLinear);
  c.expect(approx_rel(cost, 5.07, 1e-9), "30 GB on H-SSD costs " +
                                             std::to_string(cost));
  c.expect(approx_rel(workload_toc(cost, 0.5), 2.535, 1e-9),
           "TOC of half an hour");
  return c.fails == 0;
}

// ---------------------------------------------------------------------------
// 6. Relaxing the SLA never makes the exhaustive optimum worse, and the
//    greedy engine never mislabels an infeasible layout as feasible.
bool criterion6() {
  Checker c;
  const double levels[] = {1.0, 0.5, 0.25, 0.125};
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    RandomInstanceParams p;
    p.num_classes = 3;
    p.num_tables = 2;
    p.max_indices_per_table = 1;
    p.num_queries = 2 + static_cast<int>(seed % 2);
    p.tight_capacity = seed % 3 == 0;
    auto inst = random_instance(p, seed * 131);
    auto groups = grouping(inst.objects);

    bool es_was_feasible = false;
    double prev_toc = 0.0;
    for (double sla : levels) {
      auto es = exhaustive_search(inst.objects, inst.classes, inst.workload,
                                  inst.profile, sla, kLinear);
      if (es.status == OptStatus::feasible) {
        if (es_was_feasible) {
          c.expect(*es.toc_cents <= prev_toc + 1e-15 * prev_toc,
                   "ES TOC increased when relaxing the SLA at seed " +
                       std::to_string(seed));
        }
        es_was_feasible = true;
        prev_toc = *es.toc_cents;
      } else {
        c.expect(!es_was_feasible,
                 "ES lost feasibility when relaxing the SLA at seed " +
                     std::to_string(seed));
      }

      auto dot = dot_optimize(inst.objects, inst.classes, inst.workload,
                              inst.profile, sla, kLinear);
      if (dot.status == OptStatus::feasible) {
        // independently re-verify the verdict through the public estimator
        auto estimate = estimate_workload_time(*dot.layout, inst.workload,
                                               inst.profile, inst.classes,
                                               groups);
        auto verdict = feasible(*dot.layout, inst.classes, estimate,
                                dot.constraints);
        c.expect(verdict.ok,
                 "greedy returned a layout that fails verification at seed " +
                     std::to_string(seed));
      }
      // a feasible ES with an infeasible greedy result is an allowed false
      // negative; the reverse would be a bug caught by the check above
    }
  }
  return c.fails == 0;
}

// ---------------------------------------------------------------------------
// 7. Plan-switch scenario: under a tight SLA the advisor keeps the group on
//    the fast class; once the SLA is loose it moves the whole group to the
//    cheap class. Exhaustive search agrees on both.
bool criterion7() {
  Checker c;
  auto fixture = load_fixture(default_fixture_path());
  std::vector<StorageClass> classes;
  for (const auto& cls : fixture)
    if (cls.id == "HDD" || cls.id == "H-SSD") classes.push_back(cls);

  std::vector<DataObject> objects;
  DataObject t;
  t.id = "orders";
  t.size_gb = 20.0;
  t.kind = ObjectKind::table;
  objects.push_back(t);
  DataObject i;
  i.id = "orders_pk";
  i.size_gb = 4.0;
  i.kind = ObjectKind::index;
  i.parent = "orders";
  objects.push_back(i);

  GeneratorSpec spec;
  spec.scenario = "plan-switch";
  spec.seed = 2024;
  spec.query_ids = {"q1", "q2"};
  auto profile =
      synthesize_profile(objects, grouping(objects), classes, spec);

  WorkloadSpec workload;
  workload.streams = {{"q1", "q2"}};
  workload.concurrency = 1;
  workload.cpu_time_ms = {{"q1", 0.0}, {"q2", 0.0}};

  auto expect_layout = [&](const OptimizationResult& r, const char* cls,
                           const std::string& what) {
    if (r.status != OptStatus::feasible) {
      c.expect(false, what + ": infeasible");
      return;
    }
    c.expect(r.layout->mapping.at("orders") == cls &&
                 r.layout->mapping.at("orders_pk") == cls,
             what + ": expected both objects on " + cls);
  };

  auto dot_tight = dot_optimize(objects, classes, workload, profile, 1.0,
                                kLinear);
  auto es_tight = exhaustive_search(objects, classes, workload, profile, 1.0,
                                    kLinear);
  expect_layout(dot_tight, "H-SSD", "greedy, tight SLA");
  expect_layout(es_tight, "H-SSD", "exhaustive, tight SLA");

  auto dot_loose = dot_optimize(objects, classes, workload, profile, 0.05,
                                kLinear);
  auto es_loose = exhaustive_search(objects, classes, workload, profile, 0.05,
                                    kLinear);
  expect_layout(dot_loose, "HDD", "greedy, loose SLA");
  expect_layout(es_loose, "HDD", "exhaustive, loose SLA");

  if (dot_tight.status == OptStatus::feasible &&
      dot_loose.status == OptStatus::feasible) {
    c.expect(*dot_loose.toc_cents < *dot_tight.toc_cents,
             "loosening the SLA did not reduce the TOC");
  }
  return c.fails == 0;
}

// ---------------------------------------------------------------------------
// 8. Capacity stress: halving caps on the cheap class never breaks the
//    returned layouts and never improves the exhaustive optimum.
bool criterion8() {
  Checker c;
  std::vector<DataObject> objects;
  auto add = [&](const char* id, double size, ObjectKind kind,
                 const char* parent) {
    DataObject o;
    o.id = id;
    o.size_gb = size;
    o.kind = kind;
    if (parent) o.parent = parent;
    objects.push_back(o);
  };
  add("A", 16.0, ObjectKind::table, nullptr);
  add("A_pk", 3.0, ObjectKind::index, "A");
  add("B", 6.0, ObjectKind::table, nullptr);
  add("B_pk", 2.0, ObjectKind::index, "B");  // 27 GB total

  auto fixture = load_fixture(default_fixture_path());
  std::vector<StorageClass> base;
  for (const auto& cls : fixture)
    if (cls.id == "HDD" || cls.id == "H-SSD") base.push_back(cls);

  WorkloadSpec workload;
  workload.streams = {{"q1", "q2", "q3"}};
  workload.concurrency = 1;
  workload.cpu_time_ms = {{"q1", 0.0}, {"q2", 0.0}, {"q3", 0.0}};
  GeneratorSpec spec;
  spec.scenario = "random";
  spec.seed = 88;
  spec.query_ids = {"q1", "q2", "q3"};
  auto profile = synthesize_profile(objects, grouping(objects), base, spec);

  double prev_es_toc = -1.0;
  for (double cap : {24.0, 12.0, 6.0}) {
    auto classes = base;
    for (auto& cls : classes)
      if (cls.id == "HDD") cls.capacity_gb = cap;

    auto dot = dot_optimize(objects, classes, workload, profile, 0.5,
                            kLinear);
    auto es = exhaustive_search(objects, classes, workload, profile, 0.5,
                                kLinear);
    for (const auto* result : {&dot, &es}) {
      if (result->status != OptStatus::feasible) continue;
      auto capacity = validate_layout(*result->layout, classes);
      c.expect(capacity.valid,
               "returned layout violates the " + std::to_string(cap) +
                   " GB cap");
    }
    c.expect(es.status == OptStatus::feasible,
             "exhaustive search infeasible at cap " + std::to_string(cap));
    if (es.status == OptStatus::feasible) {
      if (prev_es_toc >= 0.0) {
        c.expect(*es.toc_cents >= prev_es_toc - 1e-15 * prev_es_toc,
                 "tightening the cap lowered the exhaustive TOC");
      }
      prev_es_toc = *es.toc_cents;
    }
  }
  return c.fails == 0;
}

// ---------------------------------------------------------------------------
// 9. Bench accounting: every I/O type completes at both concurrency levels
//    with per_io * operations == elapsed, and the write-share clamp engages
//    on a mocked too-fast target.
bool criterion9() {
  Checker c;
  fs::path dir = fs::temp_directory_path() /
                 ("tocadv_acceptance_bench_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  BenchConfig cfg;
  cfg.ops_per_worker = 128;
  cfg.working_set_bytes = 1 << 20;
  for (IoType io : kAllIoTypes) {
    for (int k : {1, 4}) {
      try {
        auto r = bench_storage(dir, io, k, cfg);
        c.expect(r.per_io_ms > 0.0, std::string(to_string(io)) +
                                        " per-I/O time not positive");
        c.expect(r.operations ==
                     static_cast<std::uint64_t>(k) * cfg.ops_per_worker,
                 "operation count mismatch");
        c.expect(approx_rel(r.per_io_ms * static_cast<double>(r.operations),
                            r.elapsed_ms, 1e-9),
                 "per_io * operations != elapsed");
      } catch (const std::exception& e) {
        c.expect(false, std::string(to_string(io)) + " at concurrency " +
                            std::to_string(k) + " failed: " + e.what());
      }
    }
  }

  BenchConfig mocked = cfg;
  mocked.rr_baseline_ms = 1e9;  // target "faster" than its own read baseline
  auto rw = bench_storage(dir, IoType::RW, 1, mocked);
  c.expect(rw.anomaly, "anomaly flag not raised");
  c.expect(rw.per_io_ms == mocked.rw_floor_ms, "write share not clamped");
  c.expect(approx_rel(rw.per_io_ms * static_cast<double>(rw.operations),
                      rw.elapsed_ms, 1e-9),
           "clamped run broke the accounting identity");

  std::error_code ec;
  fs::remove_all(dir, ec);
  return c.fails == 0;
}

// ---------------------------------------------------------------------------
// 10. CLI determinism and exit codes.
struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run_cli(const std::string& args, const fs::path& dir) {
  CliRun run;
  fs::path out = dir / "stdout.txt";
  fs::path err = dir / "stderr.txt";
  std::string cmd = g_cli_path + " " + args + " > " + out.string() + " 2> " +
                    err.string();
  int rc = std::system(cmd.c_str());
  run.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  run.out = slurp(out);
  run.err = slurp(err);
  return run;
}

bool criterion10() {
  Checker c;
  if (g_cli_path.empty() || !fs::exists(g_cli_path)) {
    c.expect(false, "CLI binary not found (pass --cli <path>)");
    return false;
  }
  fs::path dir = fs::temp_directory_path() /
                 ("tocadv_acceptance_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  write_text_file(dir / "config.json", R"({
    "version": 1,
    "classes": [{"fixture": "HDD"}, {"fixture": "H-SSD"}],
    "objects": [
      {"id": "orders", "size_gb": 20, "kind": "table"},
      {"id": "orders_pk", "size_gb": 4, "kind": "index", "parent": "orders"}
    ],
    "workload": {
      "metric": "per_query",
      "streams": [["q1", "q2"]],
      "cpu_time_ms": {"q1": 0.0, "q2": 0.0}
    }
  })");

  auto synth = run_cli("synth --config " + (dir / "config.json").string() +
                           " --scenario plan-switch --seed 5 --out " +
                           (dir / "profile.json").string(),
                       dir);
  c.expect(synth.code == 0, "synth exited with " + std::to_string(synth.code));

  std::string advise_args = "advise --config " +
                            (dir / "config.json").string() + " --profile " +
                            (dir / "profile.json").string() +
                            " --sla 0.5 --engine dot --both-cost-models "
                            "--alpha 0.3";
  auto first = run_cli(advise_args + " --out " + (dir / "r1.json").string(),
                       dir);
  auto second = run_cli(advise_args + " --out " + (dir / "r2.json").string(),
                        dir);
  c.expect(first.code == 0,
           "feasible advise exited with " + std::to_string(first.code));
  c.expect(first.out == second.out, "advise stdout differs between runs");
  c.expect(slurp(dir / "r1.json") == slurp(dir / "r2.json"),
           "advise reports are not byte-identical");
  c.expect(!slurp(dir / "r1.json").empty(), "advise report is empty");

  // exhaustive engine agrees end to end on this instance
  auto es = run_cli("advise --config " + (dir / "config.json").string() +
                        " --profile " + (dir / "profile.json").string() +
                        " --sla 0.5 --engine es --out " +
                        (dir / "es.json").string(),
                    dir);
  c.expect(es.code == 0, "es advise exited with " + std::to_string(es.code));

  // a preset layout evaluation stays on exit 0/2 semantics
  auto preset = run_cli("advise --config " + (dir / "config.json").string() +
                            " --profile " + (dir / "profile.json").string() +
                            " --sla 1.0 --layout-preset all:HDD",
                        dir);
  c.expect(preset.code == 2,
           "SLA-violating preset exited with " + std::to_string(preset.code));

  // infeasible: a single table too large for every class
  write_text_file(dir / "big.json", R"({
    "version": 1,
    "classes": [{"fixture": "HDD"}, {"fixture": "H-SSD"}],
    "objects": [{"id": "huge", "size_gb": 600, "kind": "table"}],
    "workload": {"streams": [["q1"]], "cpu_time_ms": {"q1": 1.0}}
  })");
  auto synth2 = run_cli("synth --config " + (dir / "big.json").string() +
                            " --scenario seq-scan-only --seed 1 --out " +
                            (dir / "big_profile.json").string(),
                        dir);
  c.expect(synth2.code == 0, "synth on big config failed");
  auto infeasible = run_cli(
      "advise --config " + (dir / "big.json").string() + " --profile " +
          (dir / "big_profile.json").string() + " --sla 0.5",
      dir);
  c.expect(infeasible.code == 2,
           "infeasible advise exited with " + std::to_string(infeasible.code));

  // input error: SLA outside (0,1]
  auto bad_sla = run_cli(
      "advise --config " + (dir / "config.json").string() + " --profile " +
          (dir / "profile.json").string() + " --sla 1.5",
      dir);
  c.expect(bad_sla.code == 3,
           "SLA 1.5 exited with " + std::to_string(bad_sla.code));
  c.expect(bad_sla.err.find("(0,1]") != std::string::npos,
           "SLA error message missing");

  // budget refusal: 3 classes, 16 objects
  {
    std::string objects;
    for (int i = 0; i < 16; ++i) {
      if (i) objects += ",";
      objects += "{\"id\": \"t" + std::to_string(i) +
                 "\", \"size_gb\": 1, \"kind\": \"table\"}";
    }
    write_text_file(dir / "wide.json",
                    "{\"version\":1,\"classes\":[{\"fixture\":\"HDD\"},"
                    "{\"fixture\":\"L-SSD\"},{\"fixture\":\"H-SSD\"}],"
                    "\"objects\":[" +
                        objects +
                        "],\"workload\":{\"streams\":[[\"q1\"]],"
                        "\"cpu_time_ms\":{\"q1\":1.0}}}");
    auto synth3 = run_cli("synth --config " + (dir / "wide.json").string() +
                              " --scenario seq-scan-only --seed 2 --out " +
                              (dir / "wide_profile.json").string(),
                          dir);
    c.expect(synth3.code == 0, "synth on wide config failed");
    auto refused = run_cli(
        "advise --config " + (dir / "wide.json").string() + " --profile " +
            (dir / "wide_profile.json").string() + " --sla 0.5 --engine es",
        dir);
    c.expect(refused.code == 4,
             "over-budget es exited with " + std::to_string(refused.code));
    c.expect(refused.err.find("43046721") != std::string::npos,
             "refusal does not cite the layout count");

    // compare inherits the refusal, code and count included
    auto cmp_refused = run_cli(
        "compare --config " + (dir / "wide.json").string() + " --profile " +
            (dir / "wide_profile.json").string() + " --sla 0.5",
        dir);
    c.expect(cmp_refused.code == 4, "compare refusal exited with " +
                                        std::to_string(cmp_refused.code));
    c.expect(cmp_refused.err.find("43046721") != std::string::npos,
             "compare refusal does not cite the layout count");
  }

  // compare and bench smoke runs share the same exit-code contract
  auto compare = run_cli("compare --config " + (dir / "config.json").string() +
                             " --profile " + (dir / "profile.json").string() +
                             " --sla 0.5 --out " + (dir / "cmp.json").string(),
                         dir);
  c.expect(compare.code == 0,
           "compare exited with " + std::to_string(compare.code));
  auto batch = run_cli("compare --batch 20 --seed 3 --out " +
                           (dir / "batch.json").string(),
                       dir);
  c.expect(batch.code == 0,
           "batch compare exited with " + std::to_string(batch.code));
  c.expect(slurp(dir / "batch.json").find("\"within_1.25\"") !=
               std::string::npos,
           "batch summary lacks the ratio distribution");
  fs::create_directories(dir / "benchdir");
  auto bench = run_cli("bench --target " + (dir / "benchdir").string() +
                           " --io sr --concurrency 1 --ops 32 "
                           "--working-set-mb 1",
                       dir);
  c.expect(bench.code == 0, "bench exited with " + std::to_string(bench.code));

  std::error_code ec;
  fs::remove_all(dir, ec);
  return c.fails == 0;
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool()> run;
};

const Criterion kCriteria[] = {
    {1, "oracle equivalence on single-group instances", criterion1},
    {2, "oracle proximity on multi-group instances", criterion2},
    {3, "search-size bounds and budget refusal", criterion3},
    {4, "cost model laws", criterion4},
    {5, "worked examples against the bundled device profiles", criterion5},
    {6, "SLA monotonicity and honest feasibility labels", criterion6},
    {7, "plan-switch scenario inversion", criterion7},
    {8, "capacity stress under cap halving", criterion8},
    {9, "bench harness accounting", criterion9},
    {10, "CLI determinism and exit codes", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      g_cli_path = argv[++i];
    } else {
      only = std::atoi(arg.c_str());
    }
  }
  if (g_cli_path.empty()) {
    if (const char* env = std::getenv("TOCADV_CLI"); env && *env) {
      g_cli_path = env;
    } else {
      // default: ../tools/tocadv next to this binary (the build layout)
      std::error_code ec;
      auto self = fs::read_symlink("/proc/self/exe", ec);
      if (!ec) {
        auto guess = self.parent_path().parent_path() / "tools" / "tocadv";
        if (fs::exists(guess)) g_cli_path = guess.string();
      }
    }
  }

  int failures = 0;
  for (const auto& criterion : kCriteria) {
    if (only != 0 && criterion.id != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criterion.run();
    } catch (const std::exception& e) {
      std::cout << "    unexpected exception: " << e.what() << "\n";
    }
    std::printf("[%s] criterion %2d: %s (%.2fs)\n", ok ? "PASS" : "FAIL",
                criterion.id, criterion.title, seconds_since(t0));
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
