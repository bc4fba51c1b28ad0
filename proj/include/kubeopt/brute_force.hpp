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

// Exhaustive reference optimizer for small models. Enumerates all
// (num_nodes + 1)^num_pods assignments without any pruning; used as the test
// oracle for the branch-and-bound solver.

#ifndef KUBEOPT_BRUTE_FORCE_HPP_
#define KUBEOPT_BRUTE_FORCE_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kubeopt/model.hpp"

namespace kubeopt {

inline constexpr uint64_t kMaxEnumeratedAssignments = 10'000'000;

class TooLargeForEnumeration : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Number of assignments, saturating just above the enumeration limit.
inline uint64_t enumeration_size(int num_pods, int num_nodes) {
  uint64_t size = 1;
  for (int i = 0; i < num_pods; ++i) {
    size *= static_cast<uint64_t>(num_nodes) + 1;
    if (size > kMaxEnumeratedAssignments) return kMaxEnumeratedAssignments + 1;
  }
  return size;
}

struct OracleResult {
  // Empty when no assignment satisfies the constraints.
  std::optional<int64_t> objective;
  std::vector<int> where;
};

inline OracleResult brute_force_oracle(const Model& model) {
  const int num_pods = model.num_pods();
  const int num_nodes = model.num_nodes();
  if (enumeration_size(num_pods, num_nodes) > kMaxEnumeratedAssignments) {
    throw TooLargeForEnumeration("(" + std::to_string(num_nodes) + "+1)^" +
                                 std::to_string(num_pods) +
                                 " assignments exceed the enumeration limit");
  }

  const std::vector<const LinearConstraint*> rows = model.active_rows();
  // delta[i][o]: (row, coef) pairs for x[i][o] = 1.
  struct Delta {
    int row;
    int64_t coef;
  };
  std::vector<std::vector<std::vector<Delta>>> delta(
      num_pods, std::vector<std::vector<Delta>>(num_nodes + 1));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (const Term& t : rows[r]->expr.terms()) {
      delta[t.var.pod][t.var.node].push_back({static_cast<int>(r), t.coef});
    }
  }
  std::vector<std::vector<int64_t>> gain(num_pods,
                                         std::vector<int64_t>(num_nodes + 1));
  for (const Term& t : model.objective().terms()) {
    gain[t.var.pod][t.var.node] += t.coef;
  }

  std::vector<int64_t> lhs(rows.size(), 0);
  std::vector<int> where(num_pods, 0);
  OracleResult best;
  int64_t objective = 0;

  auto all_rows_hold = [&] {
    for (size_t r = 0; r < rows.size(); ++r) {
      const int64_t b = rows[r]->bound;
      switch (rows[r]->relation) {
        case Relation::kLe:
          if (lhs[r] > b) return false;
          break;
        case Relation::kEq:
          if (lhs[r] != b) return false;
          break;
        case Relation::kGe:
          if (lhs[r] < b) return false;
          break;
      }
    }
    return true;
  };

  auto visit = [&](auto&& self, int pod) -> void {
    if (pod == num_pods) {
      if (all_rows_hold() && (!best.objective || objective > *best.objective)) {
        best.objective = objective;
        best.where = where;
      }
      return;
    }
    for (int o = 0; o <= num_nodes; ++o) {
      where[pod] = o;
      for (const Delta& d : delta[pod][o]) lhs[d.row] += d.coef;
      objective += gain[pod][o];
      self(self, pod + 1);
      objective -= gain[pod][o];
      for (const Delta& d : delta[pod][o]) lhs[d.row] -= d.coef;
    }
    where[pod] = 0;
  };
  visit(visit, 0);
  return best;
}

}  // namespace kubeopt

#endif  // KUBEOPT_BRUTE_FORCE_HPP_
