// Copyright 2026 The kubeopt Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// kubeopt command-line tool: generate | baseline | optimize | bench.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kubeopt/baseline.hpp"
#include "kubeopt/bench.hpp"
#include "kubeopt/generator.hpp"
#include "kubeopt/io.hpp"
#include "kubeopt/optimizer.hpp"

namespace fs = std::filesystem;
using namespace kubeopt;

namespace {

Json phase_to_json(const PhaseReport& p) {
  return {{"status", status_name(p.status)},
          {"value", p.value},
          {"seconds", p.seconds},
          {"timeout", p.timeout},
          {"nodes_explored", p.nodes}};
}

Json plan_to_json(const Instance& inst, const Allocation& current,
                  const Plan& plan) {
  Json moves = Json::array();
  for (const Move& m : plan.moves) {
    moves.push_back({{"pod", m.pod},
                     {"pod_name", inst.pod(m.pod).name},
                     {"from", m.from},
                     {"to", m.to}});
  }
  Json tiers = Json::array();
  for (const TierReport& t : plan.tiers) {
    Json jt = {{"tier", t.tier}, {"skipped", t.skipped}};
    if (!t.skipped) {
      jt["phase1"] = phase_to_json(t.phase1);
      jt["phase2"] = phase_to_json(t.phase2);
    }
    tiers.push_back(jt);
  }
  return {
      {"final_allocation", allocation_to_json(plan.final_allocation)},
      {"moves", moves},
      {"evictions", plan.evictions},
      {"newly_placed", plan.newly_placed},
      {"tiers", tiers},
      {"proven_optimal", plan.proven_optimal},
      {"failed", plan.failed},
      {"placement_before", placement_vector(inst, current).counts},
      {"placement_after", placement_vector(inst, plan.final_allocation).counts},
      {"wall_seconds", plan.wall_seconds}};
}

int run_generate(const GenerationParams& params, int count,
                 const fs::path& out_dir, int max_attempts) {
  const Dataset ds = generate_dataset(params, count, max_attempts);
  fs::create_directories(out_dir);
  Json files = Json::array();
  for (size_t k = 0; k < ds.instances.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "instance_%04zu.json", k);
    write_json_file(out_dir / name, instance_to_json(ds.instances[k]));
    files.push_back(name);
  }
  write_json_file(out_dir / "manifest.json",
                  {{"params", generation_to_json(params)},
                   {"count", count},
                   {"files", files},
                   {"kept_seeds", ds.kept_seeds},
                   {"attempts", ds.attempts},
                   {"acceptance_rate", ds.acceptance_rate()}});
  std::cout << "kept " << ds.instances.size() << " of " << ds.attempts
            << " generated instances (acceptance rate " << ds.acceptance_rate()
            << ")\n";
  return 0;
}

int run_baseline(const fs::path& instance_path, const fs::path& out,
                 const std::optional<fs::path>& trace_path) {
  const Instance inst = load_instance(instance_path);
  const ScheduleResult result = schedule_trace(inst);
  write_json_file(out, allocation_to_json(result.allocation));
  if (trace_path) {
    std::string lines;
    for (const SchedulingEvent& e : result.events) {
      const bool bound = e.result == SchedulingEvent::Result::kBound;
      Json j = {{"pod", e.pod_id},
                {"pod_name", inst.pod(e.pod_id).name},
                {"result", bound ? "BOUND" : "PENDING"},
                {"node", e.node_id}};
      if (bound) j["node_name"] = inst.node(e.node_id).name;
      lines += j.dump() + "\n";
    }
    write_text_file(*trace_path, lines);
  }
  std::cout << "placed " << result.allocation.num_placed() << " of "
            << inst.num_pods() << " pods, " << result.num_pending()
            << " pending\n";
  return 0;
}

int run_optimize(const fs::path& instance_path, const fs::path& current_path,
                 const OptimizeParams& params, const fs::path& out,
                 const std::optional<fs::path>& dump_dir) {
  const Instance inst = load_instance(instance_path);
  const Allocation current = load_allocation(current_path);
  OptimizeParams p = params;
  if (dump_dir) {
    fs::create_directories(*dump_dir);
    p.on_model = [&](int tier, int phase, const Model& model) {
      write_text_file(*dump_dir / ("tier" + std::to_string(tier) + "_phase" +
                                   std::to_string(phase) + ".lp"),
                      model.to_lp_string());
    };
  }
  const Plan plan = optimize(inst, current, p);
  write_json_file(out, plan_to_json(inst, current, plan));
  std::cout << (plan.failed
                    ? "no solution within the time limit"
                    : "placed " +
                          std::to_string(plan.final_allocation.num_placed()) +
                          " of " + std::to_string(inst.num_pods()) + " pods")
            << ", " << plan.moves.size() << " moves, " << plan.evictions.size()
            << " evictions" << (plan.proven_optimal ? ", proven optimal" : "")
            << "\n";
  return 0;
}

int run_bench(const std::vector<std::string>& datasets, ExperimentParams params,
              const fs::path& out_dir, bool plots) {
  std::vector<DatasetEntry> entries;
  for (const std::string& d : datasets) {
    std::vector<DatasetEntry> more = load_dataset(d);
    for (auto& e : more) entries.push_back(std::move(e));
  }
  if (entries.empty()) {
    std::cerr << "no instances found\n";
    return 1;
  }
  fs::create_directories(out_dir);
  // Crash-safe journal: rows are appended as they complete, then the whole
  // report is rewritten at the end.
  std::ofstream outcomes(out_dir / "outcomes.csv", std::ios::trunc);
  std::ofstream timings(out_dir / "timings.csv", std::ios::trunc);
  if (!outcomes || !timings) {
    std::cerr << "cannot write to " << out_dir << "\n";
    return 1;
  }
  outcomes << kOutcomesHeader << "\n" << std::flush;
  timings << kTimingsHeader << "\n" << std::flush;
  int errors = 0;
  params.on_record = [&](const OutcomeRecord& r) {
    outcomes << outcome_csv_row(r) << std::flush;
    timings << timing_csv_row(r) << std::flush;
    if (!r.error.empty()) {
      ++errors;
      std::cerr << r.instance_id << " @ " << r.timeout << "s: " << r.error
                << "\n";
    }
  };
  const std::vector<OutcomeRecord> records = run_experiment(entries, params);
  outcomes.close();
  timings.close();
  emit_report(records, out_dir,
              {.six_category = params.six_category,
               .workers = params.workers,
               .concurrent_instances = 1},
              plots);
  std::cout << records.size() << " records written to " << out_dir.string()
            << (errors ? ", " + std::to_string(errors) + " failed" : "")
            << "\n";
  return errors == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster scheduling baseline, optimizer and benchmark tool"};
  app.require_subcommand(1);

  // generate
  GenerationParams gen;
  int count = 1;
  int max_attempts = 100;
  std::string gen_out;
  auto* generate = app.add_subcommand(
      "generate", "Generate instances the default scheduler cannot solve");
  generate->add_option("--nodes", gen.num_nodes, "Number of nodes")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--ppn", gen.pods_per_node, "Pods per node")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--tiers", gen.priority_tiers, "Priority tiers")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  generate
      ->add_option("--usage", gen.usage_target,
                   "Total demand as a percentage of capacity")
      ->default_val(100)
      ->check(CLI::PositiveNumber);
  generate->add_option("--count", count, "Instances to keep")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "First seed")->default_val(0);
  generate->add_option("--out-dir", gen_out, "Output directory")->required();
  generate->add_flag("--priority-per-pod", gen.priority_per_pod,
                     "Draw a priority per pod instead of per ReplicaSet");
  generate
      ->add_option("--max-attempts", max_attempts,
                   "Seeds to try per kept instance before giving up")
      ->default_val(100)
      ->check(CLI::PositiveNumber);

  // baseline
  std::string base_instance, base_out, base_trace;
  auto* baseline =
      app.add_subcommand("baseline", "Run the default scheduler emulation");
  baseline->add_option("--instance", base_instance, "Instance JSON")
      ->required()
      ->check(CLI::ExistingFile);
  baseline->add_option("--out", base_out, "Allocation JSON to write")
      ->required();
  baseline->add_option("--trace", base_trace,
                       "Scheduling events as JSON lines");

  // optimize
  std::string opt_instance, opt_current, opt_out, opt_dump;
  double timeout = 10.0;
  OptimizeParams opt;
  int64_t node_limit = 0;
  auto* optimize_cmd = app.add_subcommand(
      "optimize", "Re-plan an allocation tier by tier under a time limit");
  optimize_cmd->add_option("--instance", opt_instance, "Instance JSON")
      ->required()
      ->check(CLI::ExistingFile);
  optimize_cmd->add_option("--current", opt_current, "Current allocation JSON")
      ->required()
      ->check(CLI::ExistingFile);
  optimize_cmd->add_option("--timeout", timeout, "Total seconds")
      ->default_val(10.0)
      ->check(CLI::PositiveNumber);
  optimize_cmd->add_option("--alpha", opt.alpha, "Evenly split budget share")
      ->default_val(0.8)
      ->check(CLI::Range(0.0, 1.0));
  optimize_cmd->add_option("--seed", opt.seed, "Solver seed")->default_val(0);
  optimize_cmd->add_option("--workers", opt.workers, "Solver threads")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  optimize_cmd
      ->add_option("--node-limit", node_limit,
                   "Search nodes per solve (0 = unlimited)")
      ->default_val(0);
  optimize_cmd->add_flag("--line18-literal", opt.line18_literal,
                         "Carry '<=' after an unproven disruption solve");
  optimize_cmd->add_flag("--symmetry-breaking", opt.symmetry_breaking,
                         "Skip interchangeable nodes while branching");
  optimize_cmd->add_option("--dump-models", opt_dump,
                           "Directory for LP dumps of every solved model");
  optimize_cmd->add_option("--out", opt_out, "Plan JSON to write")->required();

  // bench
  std::vector<std::string> bench_datasets;
  std::string bench_out;
  std::vector<double> timeouts{1.0, 10.0, 20.0};
  ExperimentParams bench_params;
  int64_t bench_node_limit = 0;
  bool no_plots = false;
  auto* bench = app.add_subcommand(
      "bench", "Baseline then optimizer over datasets; writes reports");
  bench
      ->add_option("--dataset", bench_datasets,
                   "Dataset directory (repeatable)")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench->add_option("--timeouts", timeouts, "Comma-separated seconds")
      ->delimiter(',')
      ->default_str("1,10,20")
      ->check(CLI::PositiveNumber);
  bench->add_option("--alpha", bench_params.alpha, "Evenly split budget share")
      ->default_val(0.8)
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--workers", bench_params.workers, "Solver threads")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_params.seed, "Solver seed")->default_val(0);
  bench
      ->add_option("--node-limit", bench_node_limit,
                   "Search nodes per solve (0 = unlimited)")
      ->default_val(0);
  bench->add_flag("--six-category", bench_params.six_category,
                  "Report unproven, unimproved runs as UNIMPROVED");
  bench->add_flag("--line18-literal", bench_params.line18_literal,
                  "Carry '<=' after an unproven disruption solve");
  bench->add_flag("--no-plots", no_plots, "Skip SVG charts");
  bench->add_option("--out", bench_out, "Report directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return run_generate(gen, count, gen_out, max_attempts);
    if (*baseline) {
      return run_baseline(base_instance, base_out,
                          base_trace.empty()
                              ? std::nullopt
                              : std::optional<fs::path>(base_trace));
    }
    if (*optimize_cmd) {
      opt.t_total = Seconds(timeout);
      if (node_limit > 0) opt.node_limit = node_limit;
      return run_optimize(
          opt_instance, opt_current, opt, opt_out,
          opt_dump.empty() ? std::nullopt : std::optional<fs::path>(opt_dump));
    }
    if (*bench) {
      bench_params.timeouts = timeouts;
      if (bench_node_limit > 0) bench_params.node_limit = bench_node_limit;
      return run_bench(bench_datasets, bench_params, bench_out, !no_plots);
    }
  } catch (const DatasetGenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
