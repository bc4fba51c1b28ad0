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

#include "kubeopt/bench.hpp"

#include <filesystem>
#include <random>

#include "gtest/gtest.h"
#include "kubeopt/generator.hpp"
#include "test_util.hpp"

namespace kubeopt {
namespace {

namespace fs = std::filesystem;
using testing::stranded_pod_instance;

DatasetEntry entry(Instance inst, std::string id) {
  DatasetEntry e;
  e.dataset = "hand";
  e.instance_id = std::move(id);
  e.instance = std::move(inst);
  return e;
}

OutcomeRecord record_with(Category c, double timeout = 10,
                          std::string dataset = "d") {
  OutcomeRecord r;
  r.dataset = std::move(dataset);
  r.instance_id = "i";
  r.num_nodes = 4;
  r.timeout = timeout;
  r.category = c;
  return r;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("kubeopt_bench_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(ClassifyOutcomeTest, StrandedPodIsBetterAndOptimal) {
  const Instance inst = stranded_pod_instance();
  const Allocation base = schedule_trace(inst).allocation;
  const Plan plan = optimize(inst, base, {.t_total = Seconds(1)});
  EXPECT_EQ(classify_outcome(inst, base, &plan), Category::kBetterAndOptimal);
}

TEST(ClassifyOutcomeTest, Rules) {
  const Instance inst = stranded_pod_instance();
  const Allocation base{{1, 2, 0}};
  EXPECT_EQ(classify_outcome(inst, Allocation{{1, 1, 2}}, nullptr),
            Category::kNoCalls);
  EXPECT_EQ(classify_outcome(inst, base, nullptr), Category::kFailure);

  Plan plan;
  plan.failed = true;
  EXPECT_EQ(classify_outcome(inst, base, &plan), Category::kFailure);

  plan.failed = false;
  plan.final_allocation = Allocation{{1, 1, 2}};
  plan.proven_optimal = false;
  EXPECT_EQ(classify_outcome(inst, base, &plan), Category::kBetter);

  plan.final_allocation = base;
  plan.proven_optimal = true;
  EXPECT_EQ(classify_outcome(inst, base, &plan), Category::kKwokOptimal);
  plan.proven_optimal = false;
  EXPECT_EQ(classify_outcome(inst, base, &plan), Category::kFailure);
  EXPECT_EQ(classify_outcome(inst, base, &plan, true), Category::kUnimproved);

  plan.final_allocation = Allocation{{1, 0, 0}};
  EXPECT_THROW(classify_outcome(inst, base, &plan), std::logic_error);
}

TEST(ClassifyOutcomeTest, ProvenBaselineIsKwokOptimal) {
  // Aggregate capacity holds only two of the three equal pods, and the
  // baseline already places two.
  const Instance inst = make_instance(
      {{0, "a", {10, 10}}, {0, "b", {10, 10}}},
      {{0, "p", {6, 6}, 0, 0}, {0, "q", {6, 6}, 0, 1}, {0, "r", {6, 6}, 0, 2}});
  const Allocation base = schedule_trace(inst).allocation;
  const Plan plan = optimize(inst, base, {.t_total = Seconds(1)});
  EXPECT_EQ(classify_outcome(inst, base, &plan), Category::kKwokOptimal);
}

TEST(CategoryRankTest, Order) {
  EXPECT_LT(category_rank(Category::kFailure),
            category_rank(Category::kBetter));
  EXPECT_LT(category_rank(Category::kBetter),
            category_rank(Category::kBetterAndOptimal));
  EXPECT_LT(category_rank(Category::kFailure),
            category_rank(Category::kKwokOptimal));
  for (Category c : kReportedCategories) {
    EXPECT_EQ(category_from_name(category_name(c)), c);
  }
  EXPECT_EQ(category_from_name("nope"), std::nullopt);
}

TEST(RunExperimentTest, StrandedPodDataset) {
  std::vector<OutcomeRecord> seen;
  ExperimentParams params;
  params.timeouts = {1.0};
  params.on_record = [&](const OutcomeRecord& r) { seen.push_back(r); };
  const auto records =
      run_experiment({entry(stranded_pod_instance(), "stranded")}, params);
  ASSERT_EQ(records.size(), 1u);
  ASSERT_EQ(seen.size(), 1u);
  const OutcomeRecord& r = records[0];
  EXPECT_EQ(r.category, Category::kBetterAndOptimal);
  EXPECT_DOUBLE_EQ(r.delta_mem_util, 37.5);
  EXPECT_DOUBLE_EQ(r.delta_cpu_util, 5.0);
  EXPECT_EQ(r.baseline_vector.counts, std::vector<int>{2});
  EXPECT_EQ(r.optimizer_vector->counts, std::vector<int>{3});
  EXPECT_EQ(r.moves, 1);
  EXPECT_EQ(r.evictions, 0);
  EXPECT_GT(r.solver_duration, 0.0);
  EXPECT_LT(r.solver_duration, 1.1);
  EXPECT_TRUE(r.error.empty());
}

TEST(RunExperimentTest, SolvableInstancesAreNoCalls) {
  std::vector<DatasetEntry> entries;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = generate_instance({4, 4, 2, 60, seed, false});
    if (schedule_trace(inst).num_pending() == 0) {
      entries.push_back(entry(inst, "s" + std::to_string(seed)));
    }
  }
  ASSERT_FALSE(entries.empty());
  ExperimentParams params;
  params.timeouts = {1.0, 10.0};
  const auto records = run_experiment(entries, params);
  EXPECT_EQ(records.size(), 2 * entries.size());
  for (const OutcomeRecord& r : records) {
    EXPECT_EQ(r.category, Category::kNoCalls);
    EXPECT_EQ(r.solver_duration, 0.0);
    EXPECT_FALSE(r.optimizer_vector);
  }
}

TEST(RunExperimentTest, BrokenEntryIsRecordedAndRunContinues) {
  DatasetEntry broken;
  broken.dataset = "hand";
  broken.instance_id = "broken";
  broken.load_error = "cannot open";
  ExperimentParams params;
  params.timeouts = {1.0};
  const auto records = run_experiment(
      {broken, entry(stranded_pod_instance(), "stranded")}, params);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].error, "cannot open");
  EXPECT_EQ(records[0].category, Category::kFailure);
  EXPECT_EQ(records[1].category, Category::kBetterAndOptimal);
}

TEST(RunExperimentTest, LongerTimeoutNeverRanksWorse) {
  const Dataset ds = generate_dataset({4, 4, 2, 100, 0, false}, 8);
  std::vector<DatasetEntry> entries;
  for (size_t k = 0; k < ds.instances.size(); ++k) {
    entries.push_back(entry(ds.instances[k], std::to_string(k)));
  }
  ExperimentParams params;
  params.timeouts = {0.2, 0.5};
  const auto records = run_experiment(entries, params);
  for (size_t k = 0; k + 1 < records.size(); k += 2) {
    EXPECT_LE(category_rank(records[k].category),
              category_rank(records[k + 1].category))
        << records[k].instance_id;
    if (records[k].optimizer_vector) {
      EXPECT_TRUE(compare_lex(*records[k].optimizer_vector,
                              records[k].baseline_vector) >= 0);
    }
  }
}

TEST(SummaryTest, CountsToPercentages) {
  std::vector<OutcomeRecord> records = {
      record_with(Category::kBetterAndOptimal),
      record_with(Category::kBetterAndOptimal),
      record_with(Category::kKwokOptimal), record_with(Category::kFailure)};
  const auto summary = summarize(records);
  ASSERT_EQ(summary["configurations"].size(), 1u);
  const auto& pct = summary["configurations"][0]["percentages"];
  std::vector<double> values;
  std::vector<std::string> keys;
  for (const auto& [k, v] : pct.items()) {
    keys.push_back(k);
    values.push_back(v.get<double>());
  }
  EXPECT_EQ(keys,
            (std::vector<std::string>{"BETTER_AND_OPTIMAL", "BETTER",
                                      "KWOK_OPTIMAL", "NO_CALLS", "FAILURE"}));
  EXPECT_EQ(values, (std::vector<double>{50, 0, 25, 0, 25}));
}

TEST(SummaryTest, PercentagesSumToHundredPerConfiguration) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cat(0, 4), timeout(0, 2);
  std::vector<OutcomeRecord> records;
  for (int k = 0; k < 500; ++k) {
    records.push_back(
        record_with(kReportedCategories[cat(rng)], 1.0 + 10 * timeout(rng)));
  }
  const auto summary = summarize(records);
  EXPECT_EQ(summary["configurations"].size(), 3u);
  for (const auto& c : summary["configurations"]) {
    double total = 0;
    for (const auto& [k, v] : c["percentages"].items())
      total += v.get<double>();
    EXPECT_NEAR(total, 100.0, 0.1);
  }
}

TEST(SummaryTest, MissingCategoriesReportZero) {
  const auto summary =
      summarize({record_with(Category::kNoCalls)}, {.six_category = true});
  const auto& pct = summary["configurations"][0]["percentages"];
  EXPECT_EQ(pct["NO_CALLS"], 100.0);
  EXPECT_EQ(pct["BETTER"], 0.0);
  EXPECT_EQ(pct["UNIMPROVED"], 0.0);
  EXPECT_EQ(summary["configurations"][0]["mean_solver_duration"], 0.0);
}

TEST(CsvTest, RoundTrip) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> small(0, 9), cat(0, 5);
  std::uniform_real_distribution<double> real(-50, 50);
  const std::vector<std::string> awkward = {
      "plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  std::vector<OutcomeRecord> records;
  for (int k = 0; k < 300; ++k) {
    OutcomeRecord r;
    r.dataset = awkward[small(rng) % awkward.size()];
    r.instance_id = "instance_" + std::to_string(k);
    r.num_nodes = small(rng);
    r.num_pods = small(rng);
    r.timeout = real(rng);
    r.category = static_cast<Category>(cat(rng));
    const int tiers = 1 + small(rng) % 4;
    for (int t = 0; t < tiers; ++t) {
      r.baseline_vector.counts.push_back(small(rng));
      TierReport tr;
      tr.tier = t;
      tr.skipped = small(rng) == 0;
      if (!tr.skipped) {
        tr.phase1.status = static_cast<SolveStatus>(small(rng) % 3);
        tr.phase1.value = small(rng);
        tr.phase2.status = static_cast<SolveStatus>(small(rng) % 3);
        tr.phase2.value = small(rng) * 3;
      }
      r.tiers.push_back(tr);
    }
    if (small(rng) > 2) r.optimizer_vector = r.baseline_vector;
    r.proven_optimal = small(rng) % 2;
    r.moves = small(rng);
    r.evictions = small(rng);
    r.newly_placed = small(rng);
    r.delta_cpu_util = real(rng);
    r.delta_mem_util = real(rng);
    r.error = small(rng) == 0 ? awkward[small(rng) % awkward.size()] : "";
    records.push_back(r);
  }
  const std::string csv = outcomes_to_csv(records);
  const auto parsed = outcomes_from_csv(csv);
  ASSERT_EQ(parsed.size(), records.size());
  for (size_t k = 0; k < records.size(); ++k) {
    const OutcomeRecord& a = records[k];
    const OutcomeRecord& b = parsed[k];
    EXPECT_EQ(a.dataset, b.dataset);
    EXPECT_EQ(a.instance_id, b.instance_id);
    EXPECT_EQ(a.num_nodes, b.num_nodes);
    EXPECT_EQ(a.num_pods, b.num_pods);
    EXPECT_EQ(a.timeout, b.timeout);
    EXPECT_EQ(a.category, b.category);
    EXPECT_EQ(a.baseline_vector, b.baseline_vector);
    EXPECT_EQ(a.optimizer_vector, b.optimizer_vector);
    EXPECT_EQ(a.proven_optimal, b.proven_optimal);
    EXPECT_EQ(a.moves, b.moves);
    EXPECT_EQ(a.evictions, b.evictions);
    EXPECT_EQ(a.newly_placed, b.newly_placed);
    EXPECT_EQ(a.delta_cpu_util, b.delta_cpu_util);
    EXPECT_EQ(a.delta_mem_util, b.delta_mem_util);
    EXPECT_EQ(a.error, b.error);
    ASSERT_EQ(a.tiers.size(), b.tiers.size());
    for (size_t t = 0; t < a.tiers.size(); ++t) {
      EXPECT_EQ(a.tiers[t].skipped, b.tiers[t].skipped);
      if (a.tiers[t].skipped) continue;
      EXPECT_EQ(a.tiers[t].phase1.status, b.tiers[t].phase1.status);
      EXPECT_EQ(a.tiers[t].phase1.value, b.tiers[t].phase1.value);
      EXPECT_EQ(a.tiers[t].phase2.status, b.tiers[t].phase2.status);
      EXPECT_EQ(a.tiers[t].phase2.value, b.tiers[t].phase2.value);
    }
  }
  // Re-emitting the parsed records gives the same bytes.
  EXPECT_EQ(outcomes_to_csv(parsed), csv);
}

TEST(CsvTest, RejectsGarbage) {
  EXPECT_THROW(outcomes_from_csv(""), FormatError);
  EXPECT_THROW(outcomes_from_csv("a,b\n1,2\n"), FormatError);
  EXPECT_THROW(outcomes_from_csv(std::string(kOutcomesHeader) + "\n1,2\n"),
               FormatError);
}

TEST(EmitReportTest, WritesAllArtifacts) {
  const fs::path dir = scratch_dir("emit");
  ExperimentParams params;
  params.timeouts = {1.0};
  const auto records =
      run_experiment({entry(stranded_pod_instance(), "stranded")}, params);
  emit_report(records, dir);
  for (const char* f : {"outcomes.csv", "timings.csv", "summary.json",
                        "plots/categories.svg"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const Json summary = read_json_file(dir / "summary.json");
  EXPECT_EQ(summary["configurations"][0]["percentages"]["BETTER_AND_OPTIMAL"],
            100.0);
  EXPECT_THROW(emit_report({}, dir), std::invalid_argument);
  fs::remove_all(dir);
}

TEST(LoadDatasetTest, ReadsInstancesAndFlagsBadFiles) {
  const fs::path dir = scratch_dir("load");
  fs::create_directories(dir);
  write_json_file(dir / "instance_0000.json",
                  instance_to_json(stranded_pod_instance()));
  write_json_file(
      dir / "instance_0001.json",
      instance_to_json(generate_instance({4, 4, 2, 100, 1, false})));
  write_text_file(dir / "instance_0002.json", "{not json");
  write_json_file(dir / "manifest.json", Json::object());
  const auto entries = load_dataset(dir);
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0].instance_id, "instance_0000");
  EXPECT_EQ(entries[0].dataset, "kubeopt_bench_load");
  EXPECT_EQ(entries[1].dataset, "n4_ppn4_t2_u100");
  EXPECT_FALSE(entries[2].instance);
  EXPECT_FALSE(entries[2].load_error.empty());
  fs::remove_all(dir);
}

}  // namespace
}  // namespace kubeopt
