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

// Priority-tiered placement optimizer.
//
// One model is grown across priority tiers, highest priority first. For each
// tier the solver runs twice:
//   1. maximize the number of placed pods with priority <= tier;
//   2. maximize sum(x[i][*]) + 2 * x[i][where_i] over pods that were running
//      before optimization (stay = 3, move = 1, eviction = 0).
// After each solve the achieved value is carried forward as a constraint:
// equality when the solve was proven optimal, a lower bound otherwise. The
// whole run shares one wall-clock budget.

#ifndef KUBEOPT_OPTIMIZER_HPP_
#define KUBEOPT_OPTIMIZER_HPP_

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kubeopt/cluster.hpp"
#include "kubeopt/model.hpp"
#include "kubeopt/solver.hpp"

namespace kubeopt {

using Seconds = std::chrono::duration<double>;

inline Var assignment_var(int pod, int node) { return Var{pod, node}; }

// Capacity rows per node and resource plus at-most-one rows, for pods with
// priority <= tier. Pods above the tier get freeze rows (sum_j x[i][j] = 0).
inline std::vector<LinearConstraint> bin_packing_constraints(
    const Instance& instance, int tier) {
  if (tier < 0 || tier > instance.pr_max()) {
    throw std::out_of_range("tier outside [0, pr_max]");
  }
  std::vector<LinearConstraint> rows;
  for (const Node& n : instance.nodes()) {
    LinearConstraint cpu, ram;
    cpu.relation = ram.relation = Relation::kLe;
    cpu.bound = n.capacity.cpu;
    ram.bound = n.capacity.ram;
    cpu.tag = {RowRole::kCapacity, 0, n.id};
    ram.tag = {RowRole::kCapacity, 1, n.id};
    cpu.name = "cpu_t" + std::to_string(tier) + "_n" + std::to_string(n.id);
    ram.name = "ram_t" + std::to_string(tier) + "_n" + std::to_string(n.id);
    for (const Pod& p : instance.pods()) {
      if (p.priority > tier) continue;
      cpu.expr.add(assignment_var(p.id, n.id), p.request.cpu);
      ram.expr.add(assignment_var(p.id, n.id), p.request.ram);
    }
    rows.push_back(std::move(ram));
    rows.push_back(std::move(cpu));
  }
  for (const Pod& p : instance.pods()) {
    LinearConstraint row;
    for (const Node& n : instance.nodes()) {
      row.expr.add(assignment_var(p.id, n.id), 1);
    }
    if (p.priority <= tier) {
      row.relation = Relation::kLe;
      row.bound = 1;
      row.tag = {RowRole::kAtMostOne, -1, 0};
      row.name = "amo_t" + std::to_string(tier) + "_p" + std::to_string(p.id);
    } else {
      row.relation = Relation::kEq;
      row.bound = 0;
      row.tag = {RowRole::kFreeze, -1, 0};
      row.name = "freeze_p" + std::to_string(p.id);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Number of placed pods with priority <= tier.
inline LinearExpression placement_metric(const Instance& instance, int tier) {
  LinearExpression metric;
  for (const Pod& p : instance.pods()) {
    if (p.priority > tier) continue;
    for (const Node& n : instance.nodes()) {
      metric.add(assignment_var(p.id, n.id), 1);
    }
  }
  return metric;
}

// Disruption metric over pods with priority <= tier that are placed in
// `current`: each contributes sum_j x[i][j] + 2 x[i][where_i].
inline LinearExpression move_metric(const Instance& instance, int tier,
                                    const Allocation& current) {
  check_allocation_shape(instance, current);
  LinearExpression metric;
  for (const Pod& p : instance.pods()) {
    const int home = current.where[p.id];
    if (p.priority > tier || home == kUnplaced) continue;
    for (const Node& n : instance.nodes()) {
      metric.add(assignment_var(p.id, n.id), n.id == home ? 3 : 1);
    }
  }
  return metric;
}

// Wall-clock budget split across solver calls.
//
// Every call is granted alpha * T / (2 * num_tiers) plus a pool holding the
// (1 - alpha) * T slack and whatever earlier calls were granted but did not
// use. Skipped calls donate their share to the pool. The sum of all recorded
// usage can therefore never exceed T as long as no call overruns its grant.
class TimeBudget {
 public:
  TimeBudget(Seconds total, double alpha, int num_tiers)
      : total_(total),
        per_call_(alpha * total.count() / (2.0 * num_tiers)),
        pool_((1.0 - alpha) * total.count()) {
    if (total.count() <= 0) throw std::invalid_argument("t_total must be > 0");
    if (alpha < 0.0 || alpha > 1.0) {
      throw std::invalid_argument("alpha must lie in [0, 1]");
    }
    if (num_tiers < 1) throw std::invalid_argument("num_tiers must be >= 1");
  }

  // The timeout for the next solver call. Call record() once it returns.
  Seconds next_timeout() {
    const double grant =
        std::min(per_call_.count() + std::max(pool_.count(), 0.0),
                 std::max(total_.count() - consumed_.count(), 0.0));
    pool_ = Seconds(0);
    granted_ += Seconds(grant);
    last_grant_ = Seconds(grant);
    return last_grant_;
  }

  void record(Seconds used) {
    consumed_ += used;
    pool_ += last_grant_ - used;
    last_grant_ = Seconds(0);
  }

  void skip_call() { pool_ += per_call_; }

  Seconds consumed() const { return consumed_; }
  Seconds granted() const { return granted_; }
  Seconds pool() const { return pool_; }
  Seconds total() const { return total_; }

 private:
  Seconds total_;
  Seconds per_call_;
  Seconds pool_;
  Seconds consumed_{0};
  Seconds granted_{0};
  Seconds last_grant_{0};
};

struct OptimizeParams {
  Seconds t_total{10.0};
  double alpha = 0.8;
  uint64_t seed = 0;
  int workers = 1;
  // Carry "metric <= value" after a non-optimal disruption solve, exactly as
  // the original pseudocode is written, instead of ">=".
  bool line18_literal = false;
  bool symmetry_breaking = false;
  // Optional per-solve deterministic work cap.
  std::optional<int64_t> node_limit;
  // Called with every model right before it is solved.
  std::function<void(int tier, int phase, const Model&)> on_model;
};

struct PhaseReport {
  SolveStatus status = SolveStatus::kUnknown;
  int64_t value = 0;  // placed count (phase 1) or move metric (phase 2)
  double seconds = 0.0;
  double timeout = 0.0;
  int64_t nodes = 0;
};

struct TierReport {
  int tier = 0;
  bool skipped = false;  // no pod at this priority
  PhaseReport phase1;
  PhaseReport phase2;
};

struct Move {
  int pod = 0;
  int from = 0;
  int to = 0;
  friend bool operator==(const Move&, const Move&) = default;
};

struct Plan {
  Allocation final_allocation;
  std::vector<Move> moves;
  std::vector<int> evictions;
  std::vector<int> newly_placed;
  std::vector<TierReport> tiers;
  bool proven_optimal = false;
  bool failed = false;  // no incumbent at the first solve
  double wall_seconds = 0.0;
};

// Labels every pod whose node changed between `before` and `after`.
inline void extract_changes(const Allocation& before, const Allocation& after,
                            Plan& plan) {
  plan.moves.clear();
  plan.evictions.clear();
  plan.newly_placed.clear();
  for (size_t i = 0; i < before.where.size(); ++i) {
    const int from = before.where[i];
    const int to = after.where[i];
    if (from == to) continue;
    const int pod = static_cast<int>(i);
    if (from != kUnplaced && to != kUnplaced) {
      plan.moves.push_back({pod, from, to});
    } else if (from != kUnplaced) {
      plan.evictions.push_back(pod);
    } else {
      plan.newly_placed.push_back(pod);
    }
  }
}

namespace optimizer_internal {

// Priority first, then the pod's largest request-to-capacity ratio
// (descending), then id.
inline std::vector<int> branching_order(const Instance& instance) {
  ResourceVector cap;
  for (const Node& n : instance.nodes()) {
    cap.cpu = std::max(cap.cpu, n.capacity.cpu);
    cap.ram = std::max(cap.ram, n.capacity.ram);
  }
  std::vector<double> hardness(instance.num_pods(), 0.0);
  for (const Pod& p : instance.pods()) {
    if (cap.cpu > 0 && cap.ram > 0) {
      hardness[p.id] = std::max(
          static_cast<double>(p.request.cpu) / static_cast<double>(cap.cpu),
          static_cast<double>(p.request.ram) / static_cast<double>(cap.ram));
    }
  }
  std::vector<int> order(instance.num_pods());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const int pa = instance.pod(a).priority;
    const int pb = instance.pod(b).priority;
    if (pa != pb) return pa < pb;
    return hardness[a] > hardness[b];
  });
  return order;
}

// `base` plus pods of exactly `tier`, each on its current node when it still
// fits there, else on the feasible node with the most free ram.
inline std::vector<int> extend_with_tier(const Instance& instance,
                                         const std::vector<int>& base,
                                         const Allocation& current, int tier) {
  std::vector<int> where = base;
  std::vector<ResourceVector> load(instance.num_nodes() + 1);
  for (const Pod& p : instance.pods()) {
    if (where[p.id] != kUnplaced) load[where[p.id]] += p.request;
  }
  auto fits = [&](int pod, int node) {
    return (load[node] + instance.pod(pod).request)
        .fits_within(instance.node(node).capacity);
  };
  for (const Pod& p : instance.pods()) {
    if (p.priority != tier || where[p.id] != kUnplaced) continue;
    const int home = current.where[p.id];
    int target = kUnplaced;
    if (home != kUnplaced && fits(p.id, home)) {
      target = home;
    } else {
      for (const Node& n : instance.nodes()) {
        if (!fits(p.id, n.id)) continue;
        if (target == kUnplaced ||
            instance.node(n.id).capacity.ram - load[n.id].ram >
                instance.node(target).capacity.ram - load[target].ram) {
          target = n.id;
        }
      }
    }
    if (target != kUnplaced) {
      where[p.id] = target;
      load[target] += p.request;
    }
  }
  return where;
}

inline std::vector<int> restrict_to_tier(const Instance& instance,
                                         const Allocation& current, int tier) {
  std::vector<int> where = current.where;
  for (const Pod& p : instance.pods()) {
    if (p.priority > tier) where[p.id] = kUnplaced;
  }
  return where;
}

// The candidate with the largest objective among those satisfying the model;
// earlier candidates win ties.
inline std::optional<std::vector<int>> best_hint(
    const Model& model, const std::vector<std::vector<int>>& candidates) {
  std::optional<std::vector<int>> best;
  int64_t best_value = 0;
  for (const auto& c : candidates) {
    if (!model.is_satisfied(c)) continue;
    const int64_t v = model.objective().value(c);
    if (!best || v > best_value) {
      best = c;
      best_value = v;
    }
  }
  return best;
}

}  // namespace optimizer_internal

inline Plan optimize(const Instance& instance, const Allocation& current,
                     const OptimizeParams& params = {}) {
  using namespace optimizer_internal;
  using Clock = std::chrono::steady_clock;
  const Clock::time_point start = Clock::now();

  check_allocation_shape(instance, current);
  if (!feasibility_check(instance, current)) {
    throw std::invalid_argument("current allocation exceeds node capacity");
  }
  TimeBudget budget(params.t_total, params.alpha, instance.num_tiers());

  Plan plan;
  plan.final_allocation = current;
  plan.proven_optimal = true;

  Model model(instance.num_pods(), instance.num_nodes());
  model.set_branching_order(branching_order(instance));
  const std::vector<int> tier_sizes = instance.tier_sizes();

  std::vector<int> best = restrict_to_tier(instance, current, -1);
  bool have_incumbent = false;

  // Largest presolve cost seen so far; a solve that cannot even finish its
  // setup in the time left is skipped in favour of its (feasible) hint.
  double setup_estimate = 0.0;
  auto run_solve = [&](int tier, int phase,
                       std::optional<std::vector<int>> hint,
                       PhaseReport& report) {
    if (params.on_model) params.on_model(tier, phase, model);
    const Clock::time_point issued = Clock::now();
    const double remaining =
        params.t_total.count() - Seconds(issued - start).count();
    const double timeout =
        std::max(std::min(budget.next_timeout().count(), remaining), 1e-6);
    if (!params.node_limit && hint && remaining < 2.0 * setup_estimate &&
        model.is_satisfied(*hint)) {
      Solution kept;
      kept.status = SolveStatus::kFeasible;
      kept.where = std::move(*hint);
      kept.objective_value = model.objective().value(kept.where);
      kept.best_bound = std::numeric_limits<int64_t>::max();
      budget.record(Seconds(0));
      report.status = kept.status;
      report.value = kept.objective_value;
      report.timeout = timeout;
      return kept;
    }
    SolveParams sp;
    sp.deadline =
        std::chrono::duration_cast<std::chrono::nanoseconds>(Seconds(timeout));
    sp.hint = std::move(hint);
    sp.seed = params.seed;
    sp.workers = params.workers;
    sp.symmetry_breaking = params.symmetry_breaking;
    sp.node_limit = params.node_limit;
    Solution sol = solve_max(model, sp);
    setup_estimate = std::max(setup_estimate, sol.stats.setup_time);
    const Seconds used = Clock::now() - issued;
    budget.record(used);
    report.status = sol.status;
    report.value = sol.objective_value;
    report.seconds = used.count();
    report.timeout = timeout;
    report.nodes = sol.stats.nodes_explored;
    return sol;
  };

  auto carry = [&](const LinearExpression& metric, const Solution& sol,
                   Relation when_unproven, const std::string& name) {
    LinearConstraint row;
    row.expr = metric;
    row.bound = sol.objective_value;
    row.relation =
        sol.status == SolveStatus::kOptimal ? Relation::kEq : when_unproven;
    row.tag = {RowRole::kObjective, -1, 0};
    row.name = name;
    model.add_constraint(std::move(row));
  };

  for (int tier = 0; tier <= instance.pr_max(); ++tier) {
    TierReport report;
    report.tier = tier;
    if (tier_sizes[tier] == 0) {
      report.skipped = true;
      budget.skip_call();
      budget.skip_call();
      plan.tiers.push_back(report);
      continue;
    }
    model.clear_freeze();
    model.add_constraints(bin_packing_constraints(instance, tier));

    // Phase 1: place as many pods of priority <= tier as possible.
    const LinearExpression placed = placement_metric(instance, tier);
    model.set_objective(placed);
    const std::optional<std::vector<int>> hint1 =
        best_hint(model, {restrict_to_tier(instance, current, tier),
                          extend_with_tier(instance, best, current, tier)});
    const Solution s1 = run_solve(tier, 1, hint1, report.phase1);
    if (!s1.has_incumbent()) {
      plan.proven_optimal = false;
      if (!have_incumbent) {
        plan.failed = true;
        plan.tiers.push_back(report);
        break;
      }
      plan.tiers.push_back(report);
      continue;
    }
    have_incumbent = true;
    if (s1.status != SolveStatus::kOptimal) plan.proven_optimal = false;
    best = s1.where;
    carry(placed, s1, Relation::kGe, "placed_t" + std::to_string(tier));

    // Phase 2: keep already-running pods where they are.
    const LinearExpression moves = move_metric(instance, tier, current);
    model.set_objective(moves);
    const std::optional<std::vector<int>> hint2 =
        best_hint(model, {restrict_to_tier(instance, current, tier), best});
    const Solution s2 =
        run_solve(tier, 2, hint2 ? hint2 : std::optional(best), report.phase2);
    if (s2.has_incumbent()) {
      best = s2.where;
      carry(moves, s2, params.line18_literal ? Relation::kLe : Relation::kGe,
            "moves_t" + std::to_string(tier));
    }
    plan.tiers.push_back(report);
  }

  if (have_incumbent && !plan.failed) {
    plan.final_allocation = Allocation{best};
  } else {
    plan.proven_optimal = false;
  }
  extract_changes(current, plan.final_allocation, plan);
  plan.wall_seconds = Seconds(Clock::now() - start).count();
  return plan;
}

}  // namespace kubeopt

#endif  // KUBEOPT_OPTIMIZER_HPP_
