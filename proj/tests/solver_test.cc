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

#include "kubeopt/solver.hpp"

#include <chrono>
#include <random>

#include "gtest/gtest.h"
#include "kubeopt/brute_force.hpp"
#include "kubeopt/generator.hpp"
#include "kubeopt/optimizer.hpp"
#include "test_util.hpp"

namespace kubeopt {
namespace {

using namespace std::chrono_literals;

Model placement_model(const Instance& inst, int tier) {
  Model m(inst.num_pods(), inst.num_nodes());
  m.add_constraints(bin_packing_constraints(inst, tier));
  m.set_objective(placement_metric(inst, tier));
  return m;
}

TEST(SolveMaxTest, StrandedPodPlacesAllThreePods) {
  const Model m = placement_model(testing::stranded_pod_instance(), 0);
  const Solution sol = solve_max(m, {.deadline = 1s});
  EXPECT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(sol.objective_value, 3);
  EXPECT_EQ(sol.best_bound, 3);
  EXPECT_TRUE(m.is_satisfied(sol.where));
}

TEST(SolveMaxTest, ZeroPods) {
  Model m(0, 3);
  const Solution sol = solve_max(m);
  EXPECT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(sol.objective_value, 0);
}

TEST(SolveMaxTest, ContradictoryConstantRowIsInfeasible) {
  Model m(2, 2);
  LinearConstraint row;
  row.relation = Relation::kGe;
  row.bound = 1;  // 0 >= 1
  m.add_constraint(row);
  const Solution sol = solve_max(m);
  EXPECT_EQ(sol.status, SolveStatus::kUnknown);
  EXPECT_TRUE(sol.infeasible);
  EXPECT_EQ(sol.best_bound, kNegativeInfinity);
}

TEST(SolveMaxTest, ExhaustedWithoutSolutionIsInfeasible) {
  // x00 + x01 >= 1 and x00 + x01 <= 0 on the only pod.
  Model m(2, 1);
  LinearConstraint ge, le;
  ge.relation = Relation::kGe;
  ge.bound = 1;
  le.relation = Relation::kLe;
  le.bound = 0;
  for (int i = 0; i < 2; ++i) {
    ge.expr.add({i, 1}, 1);
    le.expr.add({i, 1}, 1);
  }
  m.add_constraint(ge);
  m.add_constraint(le);
  const Solution sol = solve_max(m);
  EXPECT_EQ(sol.status, SolveStatus::kUnknown);
  EXPECT_TRUE(sol.infeasible);
}

TEST(SolveMaxTest, UnknownVariableIsRejected) {
  Model m(2, 2);
  LinearConstraint row;
  row.expr.add({2, 1}, 1);
  EXPECT_THROW(m.add_constraint(row), std::out_of_range);
  LinearExpression objective;
  objective.add({0, 3}, 1);
  EXPECT_THROW(m.set_objective(objective), std::out_of_range);
}

TEST(SolveMaxTest, RejectsBadParams) {
  Model m(1, 1);
  EXPECT_THROW(solve_max(m, {.deadline = 0s}), std::invalid_argument);
  EXPECT_THROW(solve_max(m, {.hint = std::vector<int>{0, 0}}),
               std::invalid_argument);
  EXPECT_THROW(solve_max(m, {.hint = std::vector<int>{2}}),
               std::invalid_argument);
  EXPECT_THROW(solve_max(m, {.workers = 0}), std::invalid_argument);
}

TEST(SolveMaxTest, RandomThreeNodeEightPodInstanceMatchesOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = testing::random_small_instance(rng, 3, 8, 1);
    const Model m = placement_model(inst, 0);
    const OracleResult oracle = brute_force_oracle(m);
    const Solution sol = solve_max(m, {.deadline = 10s});
    ASSERT_TRUE(oracle.objective);
    EXPECT_EQ(sol.status, SolveStatus::kOptimal);
    EXPECT_EQ(sol.objective_value, *oracle.objective);
  }
}

TEST(BruteForceOracleTest, Examples) {
  EXPECT_EQ(
      brute_force_oracle(placement_model(testing::stranded_pod_instance(), 0))
          .objective,
      3);
  // Every variable forced to zero.
  const Instance inst = testing::stranded_pod_instance();
  Model m(inst.num_pods(), inst.num_nodes());
  LinearConstraint zero;
  zero.relation = Relation::kLe;
  zero.bound = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 1; j <= 2; ++j) zero.expr.add({i, j}, 1);
  }
  m.add_constraint(zero);
  m.set_objective(placement_metric(inst, 0));
  EXPECT_EQ(brute_force_oracle(m).objective, 0);
}

TEST(BruteForceOracleTest, RefusesHugeModels) {
  EXPECT_THROW(brute_force_oracle(Model(12, 3)), TooLargeForEnumeration);
  EXPECT_NO_THROW(brute_force_oracle(Model(11, 3)));  // 4^11 < 10^7
}

// Soundness, oracle equivalence and bound validity.
TEST(SolverPropertyTest, AgreesWithBruteForce) {
  std::mt19937_64 rng(99);
  int optimal = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const Model m = testing::random_model(rng);
    const OracleResult oracle = brute_force_oracle(m);
    const Solution sol = solve_max(m, {.deadline = 5s});
    if (!oracle.objective) {
      EXPECT_EQ(sol.status, SolveStatus::kUnknown) << "trial " << trial;
      EXPECT_TRUE(sol.infeasible);
      continue;
    }
    ASSERT_TRUE(sol.has_incumbent()) << "trial " << trial;
    EXPECT_TRUE(m.is_satisfied(sol.where)) << "trial " << trial;
    EXPECT_EQ(m.objective().value(sol.where), sol.objective_value);
    EXPECT_GE(sol.best_bound, *oracle.objective);
    if (sol.status == SolveStatus::kOptimal) {
      ++optimal;
      EXPECT_EQ(sol.objective_value, *oracle.objective) << "trial " << trial;
    }
  }
  EXPECT_GT(optimal, 0);
}

TEST(SolverPropertyTest, SymmetryBreakingKeepsOptimum) {
  std::mt19937_64 rng(100);
  for (int trial = 0; trial < 1000; ++trial) {
    const Model m = testing::random_model(rng);
    const OracleResult oracle = brute_force_oracle(m);
    const Solution sol =
        solve_max(m, {.deadline = 5s, .symmetry_breaking = true});
    if (!oracle.objective) {
      EXPECT_FALSE(sol.has_incumbent());
      continue;
    }
    ASSERT_EQ(sol.status, SolveStatus::kOptimal);
    EXPECT_EQ(sol.objective_value, *oracle.objective) << "trial " << trial;
  }
  // Identical nodes: placement models are symmetric.
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = testing::random_small_instance(rng, 3, 7, 2);
    const Model m = placement_model(inst, 1);
    const Solution sol =
        solve_max(m, {.deadline = 5s, .symmetry_breaking = true});
    EXPECT_EQ(sol.objective_value, *brute_force_oracle(m).objective);
  }
}

TEST(SolverPropertyTest, InterchangeablePodsKeepOptimum) {
  std::mt19937_64 rng(102);
  int proven = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const Model m = testing::random_model(rng, 1 + trial % 3);
    const OracleResult oracle = brute_force_oracle(m);
    for (bool symmetry : {false, true}) {
      const Solution sol =
          solve_max(m, {.deadline = 5s, .symmetry_breaking = symmetry});
      if (!oracle.objective) {
        EXPECT_FALSE(sol.has_incumbent()) << "trial " << trial;
        continue;
      }
      ASSERT_EQ(sol.status, SolveStatus::kOptimal) << "trial " << trial;
      EXPECT_TRUE(m.is_satisfied(sol.where));
      EXPECT_EQ(sol.objective_value, *oracle.objective) << "trial " << trial;
      ++proven;
    }
  }
  EXPECT_GT(proven, 1000);
}

TEST(SolverPropertyTest, IncumbentIsMonotone) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const Model m = testing::random_model(rng);
    const Solution sol = solve_max(m, {.deadline = 5s});
    const auto& events = sol.stats.incumbents;
    for (size_t k = 1; k < events.size(); ++k) {
      EXPECT_GT(events[k].objective, events[k - 1].objective);
      EXPECT_GE(events[k].nodes, events[k - 1].nodes);
    }
    if (sol.has_incumbent()) {
      ASSERT_FALSE(events.empty());
      EXPECT_EQ(events.back().objective, sol.objective_value);
    }
  }
}

TEST(SolverPropertyTest, FeasibleHintBecomesIncumbent) {
  std::mt19937_64 rng(102);
  int feasible_hints = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const Model m = testing::random_model(rng);
    const std::vector<int> hint = testing::random_assignment(rng, m);
    // A one-node budget leaves no room to search beyond the hint.
    const Solution sol =
        solve_max(m, {.deadline = 5s, .hint = hint, .node_limit = 1});
    if (m.is_satisfied(hint)) {
      ++feasible_hints;
      EXPECT_TRUE(sol.stats.hint_accepted);
      ASSERT_TRUE(sol.has_incumbent());
      ASSERT_FALSE(sol.stats.incumbents.empty());
      EXPECT_EQ(sol.stats.incumbents.front().objective,
                m.objective().value(hint));
      EXPECT_GE(sol.objective_value, m.objective().value(hint));
    }
    if (sol.has_incumbent()) {
      EXPECT_TRUE(m.is_satisfied(sol.where));
    }
  }
  EXPECT_GT(feasible_hints, 100);
}

TEST(SolverTest, InfeasibleHintIsRepaired) {
  const Instance inst = testing::stranded_pod_instance();
  const Model m = placement_model(inst, 0);
  // All three pods on node 1 overflows ram; repair unplaces one of them.
  const Solution sol =
      solve_max(m, {.hint = std::vector<int>{1, 1, 1}, .node_limit = 1});
  EXPECT_TRUE(sol.stats.hint_accepted);
  ASSERT_TRUE(sol.has_incumbent());
  EXPECT_TRUE(m.is_satisfied(sol.where));
}

TEST(SolverTest, DeterministicWithOneWorker) {
  const Instance inst = generate_instance({8, 4, 2, 100, 17, false});
  const Model m = placement_model(inst, 1);
  const Solution a = solve_max(m, {.deadline = 30s, .node_limit = 20000});
  const Solution b = solve_max(m, {.deadline = 30s, .node_limit = 20000});
  EXPECT_EQ(a.where, b.where);
  EXPECT_EQ(a.objective_value, b.objective_value);
  EXPECT_EQ(a.stats.nodes_explored, b.stats.nodes_explored);
}

TEST(SolverTest, PortfolioFindsSameOptimum) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = testing::random_small_instance(rng, 3, 7, 1);
    const Model m = placement_model(inst, 0);
    const Solution sol = solve_max(m, {.deadline = 10s, .workers = 3});
    EXPECT_EQ(sol.status, SolveStatus::kOptimal);
    EXPECT_EQ(sol.objective_value, *brute_force_oracle(m).objective);
  }
}

TEST(SolverTest, RespectsDeadline) {
  const Instance inst = generate_instance({32, 8, 1, 100, 5, false});
  const Model m = placement_model(inst, 0);
  const auto start = std::chrono::steady_clock::now();
  const Solution sol = solve_max(m, {.deadline = 100ms});
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  EXPECT_LE(wall, 0.15);
  EXPECT_LE(sol.stats.wall_time, 0.15);
}

TEST(ModelTest, FreezeRowsAreReplacedNotAccumulated) {
  const Instance inst = make_instance(
      {{0, "n", {10, 10}}}, {{0, "a", {1, 1}, 0, 0}, {0, "b", {1, 1}, 1, 0}});
  Model m(2, 1);
  m.add_constraints(bin_packing_constraints(inst, 0));
  EXPECT_EQ(m.freeze_rows().size(), 1u);
  m.clear_freeze();
  m.add_constraints(bin_packing_constraints(inst, 1));
  EXPECT_TRUE(m.freeze_rows().empty());
  EXPECT_TRUE(m.is_satisfied({1, 1}));
}

TEST(ModelTest, LpDumpMentionsEveryRow) {
  const Model m = placement_model(testing::stranded_pod_instance(), 0);
  const std::string lp = m.to_lp_string();
  EXPECT_NE(lp.find("Maximize"), std::string::npos);
  EXPECT_NE(lp.find("ram_t0_n1: 2048 x_0_1 + 2048 x_1_1 + 3072 x_2_1 <= 4096"),
            std::string::npos);
  EXPECT_NE(lp.find("amo_t0_p2"), std::string::npos);
}

}  // namespace
}  // namespace kubeopt
