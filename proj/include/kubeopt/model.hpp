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

// Linear pseudo-boolean models over a pod x node grid of assignment
// variables x[i][j].
//
// The grid is an assignment structure: every pod takes at most one node, so a
// full assignment is a vector `where` with where[i] in [0, num_nodes] and
// x[i][j] = (where[i] == j). Constraints and objectives are ordinary linear
// expressions over the x variables.

#ifndef KUBEOPT_MODEL_HPP_
#define KUBEOPT_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kubeopt {

struct Var {
  int pod = 0;
  int node = 1;  // 1-based
  friend bool operator==(Var, Var) = default;
};

struct Term {
  Var var;
  int64_t coef = 0;
};

class LinearExpression {
 public:
  LinearExpression() = default;

  LinearExpression& add(Var v, int64_t coef) {
    if (coef != 0) terms_.push_back({v, coef});
    return *this;
  }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  int64_t value(const std::vector<int>& where) const {
    int64_t sum = 0;
    for (const Term& t : terms_) {
      if (where[t.var.pod] == t.var.node) sum += t.coef;
    }
    return sum;
  }

 private:
  std::vector<Term> terms_;
};

enum class Relation { kLe, kEq, kGe };

inline const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::kLe:
      return "<=";
    case Relation::kEq:
      return "=";
    case Relation::kGe:
      return ">=";
  }
  return "?";
}

// What a row is for. Only used for diagnostics, presolve and symmetry
// detection; the solver never relies on a tag for correctness.
enum class RowRole {
  kGeneral,
  kCapacity,   // resource capacity of a single node
  kAtMostOne,  // a pod sits on at most one node
  kFreeze,     // pins a pod's variables to 0 for the current tier
  kObjective,  // carried objective value from an earlier solve
};

struct RowTag {
  RowRole role = RowRole::kGeneral;
  int resource = -1;  // kCapacity only: 0 = cpu, 1 = ram
  int node = 0;       // kCapacity only
};

struct LinearConstraint {
  LinearExpression expr;
  Relation relation = Relation::kLe;
  int64_t bound = 0;
  RowTag tag;
  std::string name;

  bool satisfied_by(const std::vector<int>& where) const {
    const int64_t lhs = expr.value(where);
    switch (relation) {
      case Relation::kLe:
        return lhs <= bound;
      case Relation::kEq:
        return lhs == bound;
      case Relation::kGe:
        return lhs >= bound;
    }
    return false;
  }
};

class Model {
 public:
  Model(int num_pods, int num_nodes)
      : num_pods_(num_pods), num_nodes_(num_nodes) {
    if (num_pods < 0 || num_nodes < 0) {
      throw std::invalid_argument("model dimensions must be non-negative");
    }
  }

  int num_pods() const { return num_pods_; }
  int num_nodes() const { return num_nodes_; }
  int num_vars() const { return num_pods_ * num_nodes_; }

  // Rows are append-only, except that kFreeze rows describe the current
  // priority cutoff: adding a batch that contains freeze rows replaces every
  // earlier freeze row.
  void add_constraint(LinearConstraint c) {
    validate(c.expr);
    if (c.tag.role == RowRole::kFreeze) {
      freeze_.push_back(std::move(c));
    } else {
      rows_.push_back(std::move(c));
    }
  }

  void add_constraints(std::vector<LinearConstraint> batch) {
    for (const LinearConstraint& c : batch) validate(c.expr);
    bool has_freeze = false;
    for (const LinearConstraint& c : batch) {
      has_freeze = has_freeze || c.tag.role == RowRole::kFreeze;
    }
    if (has_freeze) freeze_.clear();
    for (LinearConstraint& c : batch) add_constraint(std::move(c));
  }

  // Drops every freeze row, e.g. for a batch that freezes nothing.
  void clear_freeze() { freeze_.clear(); }

  void set_objective(LinearExpression objective) {
    validate(objective);
    objective_ = std::move(objective);
  }
  const LinearExpression& objective() const { return objective_; }

  // Optional static branching order (a permutation of pod ids).
  void set_branching_order(std::vector<int> order) {
    if (static_cast<int>(order.size()) != num_pods_) {
      throw std::invalid_argument("branching order must list every pod");
    }
    std::vector<bool> seen(num_pods_, false);
    for (int p : order) {
      if (p < 0 || p >= num_pods_ || seen[p]) {
        throw std::invalid_argument("branching order is not a permutation");
      }
      seen[p] = true;
    }
    branching_order_ = std::move(order);
  }
  const std::optional<std::vector<int>>& branching_order() const {
    return branching_order_;
  }

  const std::vector<LinearConstraint>& permanent_rows() const { return rows_; }
  const std::vector<LinearConstraint>& freeze_rows() const { return freeze_; }

  // Every active row: permanent rows followed by the current freeze rows.
  std::vector<const LinearConstraint*> active_rows() const {
    std::vector<const LinearConstraint*> all;
    all.reserve(rows_.size() + freeze_.size());
    for (const auto& c : rows_) all.push_back(&c);
    for (const auto& c : freeze_) all.push_back(&c);
    return all;
  }
  size_t num_rows() const { return rows_.size() + freeze_.size(); }

  bool is_well_formed_assignment(const std::vector<int>& where) const {
    if (static_cast<int>(where.size()) != num_pods_) return false;
    for (int w : where) {
      if (w < 0 || w > num_nodes_) return false;
    }
    return true;
  }

  bool is_satisfied(const std::vector<int>& where) const {
    if (!is_well_formed_assignment(where)) return false;
    for (const LinearConstraint* c : active_rows()) {
      if (!c->satisfied_by(where)) return false;
    }
    return true;
  }

  // Plain-text dump in an LP-like syntax, for debugging.
  std::string to_lp_string() const {
    std::ostringstream out;
    auto expr = [&](const LinearExpression& e) {
      if (e.empty()) {
        out << "0";
        return;
      }
      bool first = true;
      for (const Term& t : e.terms()) {
        if (!first || t.coef < 0) out << (t.coef < 0 ? " - " : " + ");
        const int64_t mag = t.coef < 0 ? -t.coef : t.coef;
        if (mag != 1) out << mag << " ";
        out << "x_" << t.var.pod << "_" << t.var.node;
        first = false;
      }
    };
    out << "\\ pods=" << num_pods_ << " nodes=" << num_nodes_ << "\n";
    out << "Maximize\n obj: ";
    expr(objective_);
    out << "\nSubject To\n";
    int index = 0;
    for (const LinearConstraint* c : active_rows()) {
      out << " " << (c->name.empty() ? "r" + std::to_string(index) : c->name)
          << ": ";
      expr(c->expr);
      out << " " << relation_symbol(c->relation) << " " << c->bound << "\n";
      ++index;
    }
    out << "Binary\n all x_i_j\nEnd\n";
    return out.str();
  }

 private:
  void validate(const LinearExpression& e) const {
    for (const Term& t : e.terms()) {
      if (t.var.pod < 0 || t.var.pod >= num_pods_ || t.var.node < 1 ||
          t.var.node > num_nodes_) {
        throw std::out_of_range("unknown variable x_" +
                                std::to_string(t.var.pod) + "_" +
                                std::to_string(t.var.node));
      }
    }
  }

  int num_pods_;
  int num_nodes_;
  std::vector<LinearConstraint> rows_;
  std::vector<LinearConstraint> freeze_;
  LinearExpression objective_;
  std::optional<std::vector<int>> branching_order_;
};

}  // namespace kubeopt

#endif  // KUBEOPT_MODEL_HPP_
