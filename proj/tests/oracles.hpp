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

// Exhaustive reference for the tiered optimizer. Walks every feasible
// allocation of a small instance; no bounds, no heuristics.

#ifndef KUBEOPT_TESTS_ORACLES_HPP_
#define KUBEOPT_TESTS_ORACLES_HPP_

#include <algorithm>
#include <map>
#include <vector>

#include "kubeopt/cluster.hpp"

namespace kubeopt::testing {

struct TieredOptimum {
  // Lexicographically largest placement vector.
  PlacementVector best_vector;
  // Fewest moves + evictions (relative to `current`) over all allocations
  // with that placement vector, ignoring how the moves spread over tiers.
  int min_disruption = 0;
  // Fewest moves + evictions over the allocations that are optimal in the
  // tier-by-tier order: same placement vector and same per-tier move scores.
  int min_disruption_tiered = 0;
  // Per tier t: the largest "stay 3, move 1" score over pods of priority
  // <= t, maximized tier by tier after the placement vector.
  std::vector<int64_t> best_move_scores;
};

inline TieredOptimum tiered_oracle(const Instance& inst,
                                   const Allocation& current) {
  const int P = inst.num_pods();
  const int N = inst.num_nodes();
  const int T = inst.num_tiers();
  std::vector<int> where(P, kUnplaced);
  std::vector<ResourceVector> load(N + 1);

  TieredOptimum best;
  bool have = false;
  // Lexicographic key of the best allocation so far: per tier, placed count
  // then move score.
  std::vector<int64_t> best_key;
  std::map<std::vector<int>, int> disruption_by_vector;

  auto evaluate = [&] {
    PlacementVector v = placement_vector(inst, Allocation{where});
    int disruption = 0;
    std::vector<int64_t> score(T, 0);
    for (int i = 0; i < P; ++i) {
      const int home = current.where[i];
      if (home == kUnplaced) continue;
      if (where[i] != home) ++disruption;
      const int s = where[i] == home ? 3 : (where[i] != kUnplaced ? 1 : 0);
      for (int t = inst.pod(i).priority; t < T; ++t) score[t] += s;
    }
    auto it = disruption_by_vector.find(v.counts);
    if (it == disruption_by_vector.end()) {
      disruption_by_vector.emplace(v.counts, disruption);
    } else {
      it->second = std::min(it->second, disruption);
    }
    std::vector<int64_t> key;
    for (int t = 0; t < T; ++t) {
      key.push_back(v.counts[t]);
      key.push_back(score[t]);
    }
    if (!have || key > best_key) {
      have = true;
      best_key = key;
      best.best_vector = v;
      best.best_move_scores = score;
      best.min_disruption_tiered = disruption;
    } else if (key == best_key) {
      best.min_disruption_tiered =
          std::min(best.min_disruption_tiered, disruption);
    }
  };

  auto rec = [&](auto&& self, int i) -> void {
    if (i == P) {
      evaluate();
      return;
    }
    where[i] = kUnplaced;
    self(self, i + 1);
    for (int j = 1; j <= N; ++j) {
      const ResourceVector next = load[j] + inst.pod(i).request;
      if (!next.fits_within(inst.node(j).capacity)) continue;
      const ResourceVector saved = load[j];
      load[j] = next;
      where[i] = j;
      self(self, i + 1);
      load[j] = saved;
    }
    where[i] = kUnplaced;
  };
  rec(rec, 0);
  best.min_disruption = disruption_by_vector.at(best.best_vector.counts);
  return best;
}

}  // namespace kubeopt::testing

#endif  // KUBEOPT_TESTS_ORACLES_HPP_
