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

// Anytime exact solver for Model: depth-first branch-and-bound over pod
// decisions (one of the nodes, or unplaced).
//
// At every search node the solver
//   * forward-checks every undecided pod against all rows it appears in,
//     using the sum of the other undecided pods' smallest (resp. largest)
//     possible contributions, and drops options that cannot be completed;
//   * bounds the objective from above with a surrogate fractional knapsack per
//     resource: capacity rows of one resource are summed into a single
//     knapsack and each pod is relaxed to "free part + fractional upgrade";
//   * branches on the first undecided pod of a static order, trying the
//     incumbent's (or hint's) value first, then higher objective gain, then
//     larger residual capacity.
//
// The search is exact: it returns OPTIMAL only after exhausting the tree or
// meeting the root bound. All arithmetic is integral.

#ifndef KUBEOPT_SOLVER_HPP_
#define KUBEOPT_SOLVER_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "kubeopt/model.hpp"

namespace kubeopt {

enum class SolveStatus { kOptimal, kFeasible, kUnknown };

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "OPTIMAL";
    case SolveStatus::kFeasible:
      return "FEASIBLE";
    case SolveStatus::kUnknown:
      return "UNKNOWN";
  }
  return "?";
}

struct SolveParams {
  std::chrono::nanoseconds deadline = std::chrono::seconds(10);
  // Full assignment (`where` form). Need not be feasible: infeasible hints are
  // repaired by unplacing pods, or dropped if repair fails.
  std::optional<std::vector<int>> hint;
  uint64_t seed = 0;
  int workers = 1;
  // Skip values that are interchangeable with an already explored node.
  bool symmetry_breaking = false;
  // Deterministic work cap, in search nodes. Unlimited when empty.
  std::optional<int64_t> node_limit;
};

struct IncumbentEvent {
  int64_t objective = 0;
  int64_t nodes = 0;
  double seconds = 0.0;
};

struct SolveStats {
  int64_t nodes_explored = 0;
  double wall_time = 0.0;  // seconds
  bool hint_accepted = false;
  double setup_time = 0.0;  // presolve, hint repair and root bound; seconds
  std::vector<IncumbentEvent> incumbents;  // in discovery order
};

inline constexpr int64_t kNegativeInfinity =
    std::numeric_limits<int64_t>::min();

struct Solution {
  SolveStatus status = SolveStatus::kUnknown;
  std::vector<int> where;       // empty iff kUnknown
  int64_t objective_value = 0;  // meaningful unless kUnknown
  int64_t best_bound = kNegativeInfinity;
  bool infeasible = false;  // proven: no assignment satisfies the rows
  SolveStats stats;

  bool has_incumbent() const { return status != SolveStatus::kUnknown; }
  int64_t value(Var v) const { return where.at(v.pod) == v.node ? 1 : 0; }
};

namespace solver_internal {

using Clock = std::chrono::steady_clock;

struct RowInfo {
  Relation relation;
  int64_t bound;
  RowTag tag;
  bool nonneg = true;
};

// (row, coefficient) for one option of one pod.
struct Touch {
  int row;
  int64_t coef;
  int64_t minc;  // the pod's smallest contribution to `row`
  int64_t maxc;  // the pod's largest contribution to `row`
};

struct PodRow {
  int row;
  int64_t minc;
  int64_t maxc;
};

// A row on which every option of the pod must be checked, including those
// with a zero coefficient.
struct DenseRow {
  int row;
  int64_t minc;
  int64_t maxc;
  std::vector<int64_t> coef;  // per option
};

inline bool satisfies(Relation rel, int64_t lhs, int64_t bound) {
  switch (rel) {
    case Relation::kLe:
      return lhs <= bound;
    case Relation::kEq:
      return lhs == bound;
    case Relation::kGe:
      return lhs >= bound;
  }
  return false;
}

inline bool has_upper(Relation r) { return r != Relation::kGe; }
inline bool has_lower(Relation r) { return r != Relation::kLe; }

// The model after presolve, in per-pod form.
struct Compiled {
  int num_pods = 0;
  int num_nodes = 0;
  int num_options = 0;  // num_nodes + 1
  bool trivially_infeasible = false;

  std::vector<RowInfo> rows;
  std::vector<std::vector<uint8_t>> domain;  // [pod][option]
  std::vector<std::vector<PodRow>> pod_rows;
  std::vector<std::vector<std::vector<Touch>>> touch;  // [pod][option]
  std::vector<std::vector<DenseRow>> dense;
  std::vector<std::vector<int64_t>> gain;  // [pod][option]
  std::vector<int> order;                  // static branching order

  // Surrogate knapsacks: summed nonnegative capacity rows of one resource.
  struct Surrogate {
    std::vector<int> rows;
    std::vector<std::vector<int64_t>> weight;  // [pod][option]
  };
  std::vector<Surrogate> surrogates;

  // Interchangeable pods (identical domain, gain and coefficients in every
  // row), chained in id order. Some optimal solution assigns each chain
  // non-decreasing options, so the search only explores those.
  std::vector<int> prev_pod, next_pod;  // -1 = none

  // Symmetry: static twins and the row pairing that swaps two columns.
  std::vector<std::vector<uint8_t>> twin;  // [node][node], 1-based
  // For each node, the tagged rows of that node keyed by (role, resource,
  // occurrence), in a fixed key order so two twin nodes align index-wise.
  std::vector<std::vector<int>> node_rows;
};

inline Compiled compile(const Model& model, bool want_symmetry) {
  Compiled c;
  c.num_pods = model.num_pods();
  c.num_nodes = model.num_nodes();
  c.num_options = c.num_nodes + 1;
  const int P = c.num_pods;
  const int O = c.num_options;

  c.domain.assign(P, std::vector<uint8_t>(O, 1));
  c.gain.assign(P, std::vector<int64_t>(O, 0));
  for (const Term& t : model.objective().terms()) {
    c.gain[t.var.pod][t.var.node] += t.coef;
  }

  // Aggregate each row into per-pod coefficient blocks: `pods` is sorted and
  // block k of `flat` holds the per-option coefficients of pods[k].
  struct RawRow {
    RowInfo info;
    std::vector<int> pods;
    std::vector<int64_t> flat;
    size_t size() const { return pods.size(); }
    const int64_t* coef(size_t k) const { return flat.data() + k * O_; }
    int find(int pod) const {
      auto it = std::lower_bound(pods.begin(), pods.end(), pod);
      return it != pods.end() && *it == pod
                 ? static_cast<int>(it - pods.begin())
                 : -1;
    }
    int O_;
  };
  std::vector<RawRow> raw;
  std::vector<int> slot(P, -1);  // pod -> block in the row being built
  for (const LinearConstraint* lc : model.active_rows()) {
    RawRow r{{lc->relation, lc->bound, lc->tag, true}, {}, {}, O};
    for (const Term& t : lc->expr.terms()) {
      if (slot[t.var.pod] < 0) {
        slot[t.var.pod] = 0;
        r.pods.push_back(t.var.pod);
      }
    }
    std::sort(r.pods.begin(), r.pods.end());
    for (size_t k = 0; k < r.pods.size(); ++k)
      slot[r.pods[k]] = static_cast<int>(k);
    r.flat.assign(r.pods.size() * O, 0);
    for (const Term& t : lc->expr.terms()) {
      r.flat[slot[t.var.pod] * O + t.var.node] += t.coef;
    }
    for (int pod : r.pods) slot[pod] = -1;
    // Drop all-zero blocks, compacting in place.
    size_t kept = 0;
    for (size_t k = 0; k < r.pods.size(); ++k) {
      const int64_t* c = r.coef(k);
      bool all_zero = true;
      for (int o = 0; o < O; ++o) {
        all_zero = all_zero && c[o] == 0;
        r.info.nonneg = r.info.nonneg && c[o] >= 0;
      }
      if (all_zero) continue;
      if (kept != k) {
        r.pods[kept] = r.pods[k];
        std::copy(c, c + O, r.flat.begin() + kept * O);
      }
      ++kept;
    }
    r.pods.resize(kept);
    r.flat.resize(kept * O);
    raw.push_back(std::move(r));
  }

  // Constant rows decide feasibility outright; single-pod rows become domain
  // reductions.
  std::vector<uint8_t> keep(raw.size(), 1);
  for (size_t r = 0; r < raw.size(); ++r) {
    const RawRow& row = raw[r];
    if (row.size() == 0) {
      if (!satisfies(row.info.relation, 0, row.info.bound)) {
        c.trivially_infeasible = true;
      }
      keep[r] = 0;
    } else if (row.size() == 1) {
      const int pod = row.pods[0];
      const int64_t* coef = row.coef(0);
      for (int o = 0; o < O; ++o) {
        if (!satisfies(row.info.relation, coef[o], row.info.bound)) {
          c.domain[pod][o] = 0;
        }
      }
      keep[r] = 0;
    }
  }

  // Capacity-style rows (nonnegative, <=) that carry the same tag: drop a row
  // when another row has a tighter bound and pointwise larger coefficients.
  std::map<std::tuple<int, int, int>, std::vector<int>> by_tag;
  for (size_t r = 0; r < raw.size(); ++r) {
    const RowInfo& info = raw[r].info;
    if (!keep[r] || info.tag.role == RowRole::kGeneral ||
        info.relation != Relation::kLe || !info.nonneg) {
      continue;
    }
    by_tag[{static_cast<int>(info.tag.role), info.tag.resource, info.tag.node}]
        .push_back(static_cast<int>(r));
  }
  auto dominates = [&](int b, int a) {
    // Does row b imply row a?
    if (raw[b].info.bound > raw[a].info.bound) return false;
    if (raw[b].size() < raw[a].size()) return false;
    for (size_t k = 0; k < raw[a].size(); ++k) {
      const int kb = raw[b].find(raw[a].pods[k]);
      if (kb < 0) return false;
      const int64_t* ca = raw[a].coef(k);
      const int64_t* cb = raw[b].coef(kb);
      for (int o = 0; o < O; ++o) {
        if (cb[o] < ca[o]) return false;
      }
    }
    return true;
  };
  for (auto& [key, members] : by_tag) {
    for (int a : members) {
      for (int b : members) {
        if (a == b || !keep[b]) continue;
        // Of two identical rows keep the later one.
        if (dominates(b, a) && (!dominates(a, b) || b > a)) {
          keep[a] = 0;
          break;
        }
      }
    }
  }

  std::vector<int> row_index(raw.size(), -1);
  for (size_t r = 0; r < raw.size(); ++r) {
    if (!keep[r]) continue;
    row_index[r] = static_cast<int>(c.rows.size());
    c.rows.push_back(raw[r].info);
  }

  c.pod_rows.assign(P, {});
  c.touch.assign(P, std::vector<std::vector<Touch>>(O));
  c.dense.assign(P, {});
  {
    // Size every touch list up front; they are filled row by row below.
    std::vector<std::vector<int>> count(P, std::vector<int>(O, 0));
    std::vector<int> rows_of(P, 0);
    for (size_t r = 0; r < raw.size(); ++r) {
      if (!keep[r]) continue;
      for (size_t k = 0; k < raw[r].size(); ++k) {
        const int64_t* coef = raw[r].coef(k);
        ++rows_of[raw[r].pods[k]];
        for (int o = 1; o < O; ++o) count[raw[r].pods[k]][o] += coef[o] != 0;
      }
    }
    for (int i = 0; i < P; ++i) {
      c.pod_rows[i].reserve(rows_of[i]);
      for (int o = 1; o < O; ++o) c.touch[i][o].reserve(count[i][o]);
    }
  }
  for (size_t r = 0; r < raw.size(); ++r) {
    if (!keep[r]) continue;
    const int ri = row_index[r];
    const RowInfo& info = c.rows[ri];
    for (size_t k = 0; k < raw[r].size(); ++k) {
      const int pod = raw[r].pods[k];
      const int64_t* coef = raw[r].coef(k);
      int64_t lo = std::numeric_limits<int64_t>::max();
      int64_t hi = std::numeric_limits<int64_t>::min();
      for (int o = 0; o < O; ++o) {
        if (!c.domain[pod][o]) continue;
        lo = std::min(lo, coef[o]);
        hi = std::max(hi, coef[o]);
      }
      if (lo > hi) lo = hi = 0;  // empty domain; caught at the root
      c.pod_rows[pod].push_back({ri, lo, hi});
      for (int o = 1; o < O; ++o) {
        if (coef[o] != 0) c.touch[pod][o].push_back({ri, coef[o], lo, hi});
      }
      if ((has_upper(info.relation) && lo < 0) ||
          (has_lower(info.relation) && hi > 0)) {
        c.dense[pod].push_back({ri, lo, hi, {coef, coef + O}});
      }
    }
  }

  // Surrogates: one per capacity resource.
  std::map<int, int> surrogate_of_resource;
  for (size_t r = 0; r < raw.size(); ++r) {
    if (!keep[r]) continue;
    const RowInfo& info = raw[r].info;
    if (info.tag.role != RowRole::kCapacity || info.relation != Relation::kLe ||
        !info.nonneg) {
      continue;
    }
    auto [it, inserted] = surrogate_of_resource.try_emplace(
        info.tag.resource, static_cast<int>(c.surrogates.size()));
    if (inserted) {
      c.surrogates.push_back(
          {{}, std::vector<std::vector<int64_t>>(P, std::vector<int64_t>(O))});
    }
    Compiled::Surrogate& s = c.surrogates[it->second];
    s.rows.push_back(row_index[r]);
    for (size_t k = 0; k < raw[r].size(); ++k) {
      const int64_t* coef = raw[r].coef(k);
      for (int o = 0; o < O; ++o) s.weight[raw[r].pods[k]][o] += coef[o];
    }
  }

  // Static branching order.
  if (model.branching_order()) {
    c.order = *model.branching_order();
  } else {
    c.order.resize(P);
    std::iota(c.order.begin(), c.order.end(), 0);
    std::vector<int64_t> best_gain(P, 0), heaviest(P, 0);
    for (int i = 0; i < P; ++i) {
      for (int o = 0; o < O; ++o)
        best_gain[i] = std::max(best_gain[i], c.gain[i][o]);
      for (const auto& s : c.surrogates) {
        for (int o = 0; o < O; ++o)
          heaviest[i] = std::max(heaviest[i], s.weight[i][o]);
      }
    }
    std::stable_sort(c.order.begin(), c.order.end(), [&](int a, int b) {
      return std::tie(best_gain[b], heaviest[b]) <
             std::tie(best_gain[a], heaviest[a]);
    });
  }

  // Pod chains: group pods by their full column signature.
  c.prev_pod.assign(P, -1);
  c.next_pod.assign(P, -1);
  {
    std::vector<std::vector<int64_t>> sig(P);
    for (int i = 0; i < P; ++i) {
      sig[i].insert(sig[i].end(), c.gain[i].begin(), c.gain[i].end());
      sig[i].insert(sig[i].end(), c.domain[i].begin(), c.domain[i].end());
    }
    for (size_t r = 0; r < raw.size(); ++r) {
      if (!keep[r]) continue;
      for (size_t k = 0; k < raw[r].size(); ++k) {
        const int pod = raw[r].pods[k];
        sig[pod].push_back(-static_cast<int64_t>(r) - 1);  // row marker
        sig[pod].insert(sig[pod].end(), raw[r].coef(k), raw[r].coef(k) + O);
      }
    }
    std::map<std::vector<int64_t>, int> last;
    for (int i = 0; i < P; ++i) {
      auto [it, inserted] = last.try_emplace(std::move(sig[i]), i);
      if (!inserted) {
        c.prev_pod[i] = it->second;
        c.next_pod[it->second] = i;
        it->second = i;
      }
    }
  }

  if (!want_symmetry) return c;

  // Nodes j and k are static twins when swapping their columns maps the
  // model onto itself: node-tagged capacity rows pair up by (resource,
  // occurrence), and every other row and the objective see identical
  // coefficients on both columns for every pod.
  const int N = c.num_nodes;
  c.twin.assign(N + 1, std::vector<uint8_t>(N + 1, 0));
  c.node_rows.assign(N + 1, {});
  std::vector<uint8_t> node_ok(N + 1, 1);
  std::vector<std::map<std::pair<int, int>, int>> occurrence(N + 1);
  std::vector<std::vector<std::tuple<int, int, int>>> node_keys(N + 1);
  for (size_t r = 0; r < raw.size(); ++r) {
    if (!keep[r] || raw[r].info.tag.role != RowRole::kCapacity) continue;
    const int j = raw[r].info.tag.node;
    if (j < 1 || j > N) continue;
    // A capacity row must only touch its own column.
    for (size_t k = 0; k < raw[r].size(); ++k) {
      const int64_t* coef = raw[r].coef(k);
      for (int o = 0; o < O; ++o) {
        if (o != j && coef[o] != 0) node_ok[j] = 0;
      }
    }
    const int occ = occurrence[j][{raw[r].info.tag.resource, 0}]++;
    node_keys[j].push_back({raw[r].info.tag.resource, occ, row_index[r]});
  }
  for (int j = 1; j <= N; ++j) {
    std::sort(node_keys[j].begin(), node_keys[j].end());
    for (const auto& [res, occ, ri] : node_keys[j])
      c.node_rows[j].push_back(ri);
  }
  auto column_equal = [&](int j, int k) {
    if (!node_ok[j] || !node_ok[k]) return false;
    if (node_keys[j].size() != node_keys[k].size()) return false;
    for (int i = 0; i < P; ++i) {
      if (c.domain[i][j] != c.domain[i][k] || c.gain[i][j] != c.gain[i][k]) {
        return false;
      }
    }
    // Untagged (non-capacity) rows: identical column coefficients.
    for (size_t r = 0; r < raw.size(); ++r) {
      if (!keep[r] || raw[r].info.tag.role == RowRole::kCapacity) continue;
      for (size_t q = 0; q < raw[r].size(); ++q) {
        const int64_t* coef = raw[r].coef(q);
        if (coef[j] != coef[k]) return false;
      }
    }
    // Paired capacity rows: same key, bound and coefficients.
    for (size_t q = 0; q < node_keys[j].size(); ++q) {
      const auto& [rj_res, rj_occ, rj] = node_keys[j][q];
      const auto& [rk_res, rk_occ, rk] = node_keys[k][q];
      if (rj_res != rk_res || rj_occ != rk_occ) return false;
      if (c.rows[rj].bound != c.rows[rk].bound ||
          c.rows[rj].relation != c.rows[rk].relation) {
        return false;
      }
      for (int i = 0; i < P; ++i) {
        int64_t cj = 0, ck = 0;
        for (const Touch& t : c.touch[i][j]) {
          if (t.row == rj) cj = t.coef;
        }
        for (const Touch& t : c.touch[i][k]) {
          if (t.row == rk) ck = t.coef;
        }
        if (cj != ck) return false;
      }
    }
    return true;
  };
  for (int j = 1; j <= N; ++j) {
    for (int k = j + 1; k <= N; ++k) {
      c.twin[j][k] = c.twin[k][j] = column_equal(j, k) ? 1 : 0;
    }
  }
  return c;
}

// State shared by all workers of one solve.
struct Shared {
  std::mutex mu;
  std::atomic<int64_t> best{kNegativeInfinity};
  std::atomic<bool> stop{false};
  std::atomic<int64_t> nodes{0};
  std::vector<int> best_where;
  std::vector<IncumbentEvent> events;
  Clock::time_point start;
  Clock::time_point deadline;
  std::optional<int64_t> node_limit;
  int64_t root_bound = std::numeric_limits<int64_t>::max();

  bool offer(const std::vector<int>& where, int64_t objective) {
    std::lock_guard<std::mutex> lock(mu);
    if (objective <= best.load()) return false;
    best.store(objective);
    best_where = where;
    events.push_back(
        {objective, nodes.load(),
         std::chrono::duration<double>(Clock::now() - start).count()});
    return true;
  }
};

class Search {
 public:
  Search(const Compiled& c, Shared& shared, int worker, uint64_t seed,
         bool symmetry)
      : c_(c),
        shared_(shared),
        worker_(worker),
        rng_(seed + static_cast<uint64_t>(worker) * 0x9E3779B97F4A7C15ull),
        symmetry_(symmetry) {
    const int R = static_cast<int>(c.rows.size());
    fixed_.assign(R, 0);
    umin_.assign(R, 0);
    umax_.assign(R, 0);
    where_.assign(c.num_pods, -1);
    for (int i = 0; i < c.num_pods; ++i) {
      for (const PodRow& pr : c.pod_rows[i]) {
        umin_[pr.row] += pr.minc;
        umax_[pr.row] += pr.maxc;
      }
    }
    viable_.assign(c.num_pods, std::vector<uint8_t>(c.num_options, 0));
    // Pods with a single admissible option are decided once, at the root.
    for (int i = 0; i < c.num_pods; ++i) {
      int count = 0, last = 0;
      for (int o = 0; o < c.num_options; ++o) {
        if (c.domain[i][o]) {
          ++count;
          last = o;
        }
      }
      if (count == 1) apply(i, last);
    }
  }

  void set_guide(const std::vector<int>& guide) { guide_ = guide; }

  // Returns false if the root is infeasible.
  bool rows_consistent() const {
    for (size_t r = 0; r < c_.rows.size(); ++r) {
      if (!row_ok(static_cast<int>(r))) return false;
    }
    return true;
  }

  // Root bound, or nullopt when the root is infeasible.
  std::optional<int64_t> root_bound() {
    if (!rows_consistent()) return std::nullopt;
    if (!compute_viable()) return std::nullopt;
    return bound();
  }

  // Runs the search. Returns true when the tree was exhausted.
  bool run() {
    if (!rows_consistent()) return true;
    return dfs(0) != Outcome::kStopped;
  }

 private:
  enum class Outcome { kDone, kStopped };

  bool row_ok(int r) const {
    const RowInfo& info = c_.rows[r];
    if (has_upper(info.relation) && fixed_[r] + umin_[r] > info.bound) {
      return false;
    }
    if (has_lower(info.relation) && fixed_[r] + umax_[r] < info.bound) {
      return false;
    }
    return true;
  }

  bool option_viable(int i, int o) const {
    if (!c_.domain[i][o]) return false;
    if (!symmetry_) {
      // Nearest decided chain neighbours bound the option from both sides.
      for (int p = c_.prev_pod[i]; p >= 0; p = c_.prev_pod[p]) {
        if (where_[p] < 0) continue;
        if (o < where_[p]) return false;
        break;
      }
      for (int q = c_.next_pod[i]; q >= 0; q = c_.next_pod[q]) {
        if (where_[q] < 0) continue;
        if (o > where_[q]) return false;
        break;
      }
    }
    if (o > 0) {
      for (const Touch& t : c_.touch[i][o]) {
        const RowInfo& info = c_.rows[t.row];
        if (has_upper(info.relation) &&
            fixed_[t.row] + umin_[t.row] - t.minc + t.coef > info.bound) {
          return false;
        }
        if (has_lower(info.relation) &&
            fixed_[t.row] + umax_[t.row] - t.maxc + t.coef < info.bound) {
          return false;
        }
      }
    }
    for (const DenseRow& d : c_.dense[i]) {
      const RowInfo& info = c_.rows[d.row];
      const int64_t coef = d.coef[o];
      if (has_upper(info.relation) &&
          fixed_[d.row] + umin_[d.row] - d.minc + coef > info.bound) {
        return false;
      }
      if (has_lower(info.relation) &&
          fixed_[d.row] + umax_[d.row] - d.maxc + coef < info.bound) {
        return false;
      }
    }
    return true;
  }

  // Fills viable_ for undecided pods; false if some pod has no option left.
  bool compute_viable() {
    for (int i = 0; i < c_.num_pods; ++i) {
      if (where_[i] >= 0) continue;
      bool any = false;
      for (int o = 0; o < c_.num_options; ++o) {
        const bool ok = option_viable(i, o);
        viable_[i][o] = ok;
        any = any || ok;
      }
      if (!any) return false;
    }
    return true;
  }

  int64_t bound() const {
    const int O = c_.num_options;
    int64_t simple = fixed_obj_;
    for (int i = 0; i < c_.num_pods; ++i) {
      if (where_[i] >= 0) continue;
      int64_t g = std::numeric_limits<int64_t>::min();
      for (int o = 0; o < O; ++o) {
        if (viable_[i][o]) g = std::max(g, c_.gain[i][o]);
      }
      simple += g;
    }
    int64_t best = simple;

    struct Item {
      int64_t gain;
      int64_t weight;
    };
    std::vector<Item> items;
    for (const Compiled::Surrogate& s : c_.surrogates) {
      int64_t residual = 0;
      for (int r : s.rows) residual += c_.rows[r].bound - fixed_[r];
      int64_t value = fixed_obj_;
      items.clear();
      for (int i = 0; i < c_.num_pods; ++i) {
        if (where_[i] >= 0) continue;
        const auto& w = s.weight[i];
        const auto& g = c_.gain[i];
        int64_t wmin = std::numeric_limits<int64_t>::max();
        int64_t gmax = std::numeric_limits<int64_t>::min();
        for (int o = 0; o < O; ++o) {
          if (!viable_[i][o]) continue;
          wmin = std::min(wmin, w[o]);
          gmax = std::max(gmax, g[o]);
        }
        int64_t g0 = std::numeric_limits<int64_t>::min();
        for (int o = 0; o < O; ++o) {
          if (viable_[i][o] && w[o] == wmin) g0 = std::max(g0, g[o]);
        }
        residual -= wmin;
        value += g0;
        if (gmax > g0) {
          int64_t wup = std::numeric_limits<int64_t>::max();
          for (int o = 0; o < O; ++o) {
            if (viable_[i][o] && g[o] > g0) wup = std::min(wup, w[o]);
          }
          items.push_back({gmax - g0, wup - wmin});
        }
      }
      if (residual < 0) return kNegativeInfinity;
      std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        // Higher gain per unit of weight first; exact cross-multiplication.
        return static_cast<__int128>(a.gain) * b.weight >
               static_cast<__int128>(b.gain) * a.weight;
      });
      for (const Item& it : items) {
        if (it.weight <= residual) {
          value += it.gain;
          residual -= it.weight;
        } else {
          value += static_cast<int64_t>(static_cast<__int128>(it.gain) *
                                        residual / it.weight);
          break;
        }
      }
      best = std::min(best, value);
    }
    return best;
  }

  void apply(int i, int o) {
    where_[i] = o;
    for (const PodRow& pr : c_.pod_rows[i]) {
      umin_[pr.row] -= pr.minc;
      umax_[pr.row] -= pr.maxc;
    }
    if (o > 0) {
      for (const Touch& t : c_.touch[i][o]) fixed_[t.row] += t.coef;
    }
    fixed_obj_ += c_.gain[i][o];
  }

  void undo(int i, int o) {
    fixed_obj_ -= c_.gain[i][o];
    if (o > 0) {
      for (const Touch& t : c_.touch[i][o]) fixed_[t.row] -= t.coef;
    }
    for (const PodRow& pr : c_.pod_rows[i]) {
      umin_[pr.row] += pr.minc;
      umax_[pr.row] += pr.maxc;
    }
    where_[i] = -1;
  }

  bool out_of_budget() {
    const int64_t n = shared_.nodes.fetch_add(1) + 1;
    if (shared_.stop.load(std::memory_order_relaxed)) return true;
    if (shared_.node_limit && n > *shared_.node_limit) {
      shared_.stop = true;
      return true;
    }
    ++local_nodes_;
    if (Clock::now() >= shared_.deadline) {
      shared_.stop = true;
      return true;
    }
    return false;
  }

  // Smallest normalized slack left on the option's capacity rows.
  double residual_score(int i, int o) const {
    double score = 1.0;
    for (const Touch& t : c_.touch[i][o]) {
      const RowInfo& info = c_.rows[t.row];
      if (info.tag.role != RowRole::kCapacity || info.bound <= 0) continue;
      const double left =
          static_cast<double>(info.bound - fixed_[t.row] - t.coef) /
          static_cast<double>(info.bound);
      score = std::min(score, left);
    }
    return score;
  }

  bool dynamic_twin(int j, int k) const {
    if (j == 0 || k == 0 || !c_.twin[j][k]) return false;
    const auto& rj = c_.node_rows[j];
    const auto& rk = c_.node_rows[k];
    for (size_t q = 0; q < rj.size(); ++q) {
      if (fixed_[rj[q]] != fixed_[rk[q]]) return false;
    }
    return true;
  }

  Outcome dfs(int depth) {
    if (out_of_budget()) return Outcome::kStopped;
    if (!compute_viable()) return Outcome::kDone;

    const int64_t ub = bound();
    if (ub <= shared_.best.load()) return Outcome::kDone;

    // Forced pods first, then the static order.
    int pick = -1;
    for (int i : c_.order) {
      if (where_[i] >= 0) continue;
      int count = 0;
      for (int o = 0; o < c_.num_options; ++o) count += viable_[i][o];
      if (count == 1) {
        pick = i;
        break;
      }
      if (pick < 0) pick = i;
    }
    if (pick < 0) {
      if (shared_.offer(where_, fixed_obj_) && worker_ == 0) guide_ = where_;
      if (fixed_obj_ >= shared_.root_bound) {
        shared_.stop = true;  // matches the root bound: proven optimal
        proven_by_bound_ = true;
        return Outcome::kStopped;
      }
      return Outcome::kDone;
    }

    std::vector<int> options;
    for (int o = 0; o < c_.num_options; ++o) {
      if (viable_[pick][o]) options.push_back(o);
    }
    std::vector<double> residual(c_.num_options, 0.0);
    for (int o : options) residual[o] = o > 0 ? residual_score(pick, o) : -1.0;
    const auto& gain = c_.gain[pick];
    if (worker_ > 0) std::shuffle(options.begin(), options.end(), rng_);
    std::stable_sort(options.begin(), options.end(), [&](int a, int b) {
      if (gain[a] != gain[b]) return gain[a] > gain[b];
      if (worker_ > 0) return false;
      return residual[a] > residual[b];
    });
    if (!guide_.empty()) {
      auto it = std::find(options.begin(), options.end(), guide_[pick]);
      if (it != options.end()) std::rotate(options.begin(), it, it + 1);
    }

    std::vector<int> tried;
    for (int o : options) {
      if (symmetry_) {
        bool skip = false;
        for (int t : tried) skip = skip || dynamic_twin(t, o);
        if (skip) continue;
      }
      tried.push_back(o);
      apply(pick, o);
      const Outcome out = dfs(depth + 1);
      undo(pick, o);
      if (out == Outcome::kStopped) return out;
      if (shared_.best.load() >= ub) return Outcome::kDone;
    }
    return Outcome::kDone;
  }

 public:
  bool proven_by_bound() const { return proven_by_bound_; }
  int64_t local_nodes() const { return local_nodes_; }

 private:
  const Compiled& c_;
  Shared& shared_;
  int worker_;
  std::mt19937_64 rng_;
  bool symmetry_;
  std::vector<int64_t> fixed_, umin_, umax_;
  int64_t fixed_obj_ = 0;
  std::vector<int> where_;  // -1 = undecided
  std::vector<std::vector<uint8_t>> viable_;
  std::vector<int> guide_;
  int64_t local_nodes_ = 0;
  bool proven_by_bound_ = false;
};

// Unplaces pods until every upper-bounded row holds, choosing at each step
// the pod with the smallest objective gain. Returns nullopt if the repaired
// assignment still violates the model.
inline std::optional<std::vector<int>> repair_hint(const Model& model,
                                                   const Compiled& c,
                                                   std::vector<int> where) {
  for (int i = 0; i < c.num_pods; ++i) {
    if (!c.domain[i][where[i]] && c.domain[i][0]) where[i] = 0;
  }
  const std::vector<const LinearConstraint*> rows = model.active_rows();
  for (int guard = 0; guard <= c.num_pods; ++guard) {
    const LinearConstraint* violated = nullptr;
    for (const LinearConstraint* r : rows) {
      if (has_upper(r->relation) && r->expr.value(where) > r->bound) {
        violated = r;
        break;
      }
    }
    if (!violated) break;
    int victim = -1;
    for (const Term& t : violated->expr.terms()) {
      const int i = t.var.pod;
      if (where[i] != t.var.node || t.coef <= 0 || !c.domain[i][0]) continue;
      if (victim < 0 ||
          std::make_pair(c.gain[i][where[i]], -i) <
              std::make_pair(c.gain[victim][where[victim]], -victim)) {
        victim = i;
      }
    }
    if (victim < 0) break;
    where[victim] = 0;
  }
  if (!model.is_satisfied(where)) return std::nullopt;
  return where;
}

}  // namespace solver_internal

// Maximizes model.objective() subject to every active row.
inline Solution solve_max(const Model& model, const SolveParams& params = {}) {
  using namespace solver_internal;
  if (params.deadline <= std::chrono::nanoseconds::zero()) {
    throw std::invalid_argument("solve deadline must be positive");
  }
  if (params.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (params.hint && !model.is_well_formed_assignment(*params.hint)) {
    throw std::invalid_argument("hint must assign every pod to [0, num_nodes]");
  }

  Shared shared;
  shared.start = Clock::now();
  shared.deadline = shared.start + params.deadline;
  shared.node_limit = params.node_limit;

  Solution sol;
  auto finish = [&](Solution& s) {
    s.stats.nodes_explored = shared.nodes.load();
    s.stats.wall_time =
        std::chrono::duration<double>(Clock::now() - shared.start).count();
    s.stats.incumbents = shared.events;
    return s;
  };

  const Compiled compiled = compile(model, params.symmetry_breaking);
  if (compiled.trivially_infeasible) {
    sol.infeasible = true;
    return finish(sol);
  }

  std::vector<int> guide;
  if (params.hint) {
    if (auto repaired = repair_hint(model, compiled, *params.hint)) {
      shared.offer(*repaired, model.objective().value(*repaired));
      sol.stats.hint_accepted = true;
      guide = *repaired;
    } else {
      guide = *params.hint;
    }
  }

  Search root(compiled, shared, 0, params.seed, params.symmetry_breaking);
  const std::optional<int64_t> root_bound = root.root_bound();
  if (!root_bound) {
    sol.infeasible = !sol.stats.hint_accepted;
    if (sol.infeasible) return finish(sol);
  }
  shared.root_bound = root_bound.value_or(shared.best.load());
  sol.stats.setup_time =
      std::chrono::duration<double>(Clock::now() - shared.start).count();

  bool exhausted = false;
  if (shared.best.load() >= shared.root_bound) {
    exhausted = true;  // hint already meets the root bound
  } else if (Clock::now() < shared.deadline) {
    std::vector<Search> searches;
    searches.reserve(params.workers);
    for (int w = 0; w < params.workers; ++w) {
      searches.emplace_back(compiled, shared, w, params.seed,
                            params.symmetry_breaking);
      searches.back().set_guide(guide);
    }
    std::atomic<bool> any_exhausted{false};
    auto work = [&](int w) {
      // A worker that finishes without being stopped has covered its whole
      // tree against the shared incumbent.
      if (searches[w].run() || searches[w].proven_by_bound()) {
        any_exhausted = true;
        shared.stop = true;
      }
    };
    if (params.workers == 1) {
      const bool done = searches[0].run();
      exhausted = done || searches[0].proven_by_bound();
    } else {
      std::vector<std::thread> threads;
      for (int w = 0; w < params.workers; ++w) threads.emplace_back(work, w);
      for (auto& t : threads) t.join();
      exhausted = any_exhausted.load();
    }
  }

  {
    std::lock_guard<std::mutex> lock(shared.mu);
    if (shared.best_where.empty() && shared.best.load() == kNegativeInfinity) {
      sol.status = SolveStatus::kUnknown;
      sol.infeasible = exhausted;
      sol.best_bound = exhausted ? kNegativeInfinity : shared.root_bound;
      return finish(sol);
    }
    sol.where = shared.best_where;
    sol.objective_value = shared.best.load();
  }
  if (exhausted) {
    sol.status = SolveStatus::kOptimal;
    sol.best_bound = sol.objective_value;
  } else {
    sol.status = SolveStatus::kFeasible;
    sol.best_bound = std::max(shared.root_bound, sol.objective_value);
  }
  return finish(sol);
}

}  // namespace kubeopt

#endif  // KUBEOPT_SOLVER_HPP_
