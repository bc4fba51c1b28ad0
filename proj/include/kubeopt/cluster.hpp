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

// Core cluster types: nodes, pods, instances and allocations, plus the
// allocation arithmetic every other component relies on.

#ifndef KUBEOPT_CLUSTER_HPP_
#define KUBEOPT_CLUSTER_HPP_

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace kubeopt {

// Node index 0 means "not scheduled"; real nodes are numbered 1..|N|.
inline constexpr int kUnplaced = 0;

struct ResourceVector {
  int64_t cpu = 0;
  int64_t ram = 0;

  friend constexpr ResourceVector operator+(ResourceVector a,
                                            ResourceVector b) {
    return {a.cpu + b.cpu, a.ram + b.ram};
  }
  friend constexpr ResourceVector operator-(ResourceVector a,
                                            ResourceVector b) {
    return {a.cpu - b.cpu, a.ram - b.ram};
  }
  constexpr ResourceVector& operator+=(ResourceVector o) {
    cpu += o.cpu;
    ram += o.ram;
    return *this;
  }
  constexpr ResourceVector& operator-=(ResourceVector o) {
    cpu -= o.cpu;
    ram -= o.ram;
    return *this;
  }
  friend constexpr bool operator==(ResourceVector, ResourceVector) = default;

  // Componentwise <=.
  constexpr bool fits_within(ResourceVector capacity) const {
    return cpu <= capacity.cpu && ram <= capacity.ram;
  }
};

struct Node {
  int id = 0;  // 1-based
  std::string name;
  ResourceVector capacity;
};

struct Pod {
  int id = 0;  // 0-based
  std::string name;
  ResourceVector request;
  int priority = 0;  // lower value = higher priority
  int replicaset = 0;
};

// Provenance of generated instances. Hand-written instances leave it empty.
struct GenerationParams {
  int num_nodes = 4;
  int pods_per_node = 4;
  int priority_tiers = 1;
  int usage_target = 100;  // percent
  uint64_t seed = 0;
  bool priority_per_pod = false;

  friend bool operator==(const GenerationParams&,
                         const GenerationParams&) = default;
};

// Immutable problem description. Use make_instance() to build one; it
// assigns dense ids and validates every invariant.
class Instance {
 public:
  Instance() = default;

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Pod>& pods() const { return pods_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_pods() const { return static_cast<int>(pods_.size()); }
  int pr_max() const { return pr_max_; }
  int num_tiers() const { return pr_max_ + 1; }
  const std::optional<GenerationParams>& generation() const {
    return generation_;
  }

  // `id` is 1-based.
  const Node& node(int id) const { return nodes_.at(id - 1); }
  const Pod& pod(int id) const { return pods_.at(id); }

  ResourceVector total_capacity() const {
    ResourceVector total;
    for (const Node& n : nodes_) total += n.capacity;
    return total;
  }

  // Number of pods at each priority, indexed 0..pr_max.
  std::vector<int> tier_sizes() const {
    std::vector<int> sizes(num_tiers(), 0);
    for (const Pod& p : pods_) ++sizes[p.priority];
    return sizes;
  }

 private:
  friend Instance make_instance(std::vector<Node>, std::vector<Pod>,
                                std::optional<int>,
                                std::optional<GenerationParams>);

  std::vector<Node> nodes_;
  std::vector<Pod> pods_;
  int pr_max_ = 0;
  std::optional<GenerationParams> generation_;
};

// Builds a validated Instance. Node ids are set to 1..|N| and pod ids to
// 0..|P|-1 in the given order. When `pr_max` is omitted it is the largest pod
// priority present (0 for an empty pod list).
inline Instance make_instance(
    std::vector<Node> nodes, std::vector<Pod> pods,
    std::optional<int> pr_max = std::nullopt,
    std::optional<GenerationParams> generation = std::nullopt) {
  int max_priority = 0;
  for (const Pod& p : pods) max_priority = std::max(max_priority, p.priority);
  const int effective_pr_max = pr_max.value_or(max_priority);
  if (effective_pr_max < 0) {
    throw std::invalid_argument("pr_max must be non-negative");
  }

  std::unordered_set<std::string> names;
  for (size_t j = 0; j < nodes.size(); ++j) {
    Node& n = nodes[j];
    n.id = static_cast<int>(j) + 1;
    if (n.capacity.cpu <= 0 || n.capacity.ram <= 0) {
      throw std::invalid_argument("node '" + n.name +
                                  "' must have positive cpu and ram capacity");
    }
    if (!names.insert(n.name).second) {
      throw std::invalid_argument("duplicate node name '" + n.name + "'");
    }
  }
  for (size_t i = 0; i < pods.size(); ++i) {
    Pod& p = pods[i];
    p.id = static_cast<int>(i);
    if (p.request.cpu < 1 || p.request.ram < 1) {
      throw std::invalid_argument("pod '" + p.name +
                                  "' must request at least 1 cpu and 1 ram");
    }
    if (p.priority < 0 || p.priority > effective_pr_max) {
      throw std::invalid_argument("pod '" + p.name + "' priority " +
                                  std::to_string(p.priority) +
                                  " outside [0, pr_max]");
    }
  }

  Instance instance;
  instance.nodes_ = std::move(nodes);
  instance.pods_ = std::move(pods);
  instance.pr_max_ = effective_pr_max;
  instance.generation_ = std::move(generation);
  return instance;
}

// A total map pod -> node id, with kUnplaced for pending pods.
struct Allocation {
  std::vector<int> where;

  static Allocation empty(int num_pods) {
    return Allocation{std::vector<int>(num_pods, kUnplaced)};
  }
  bool is_placed(int pod) const { return where[pod] != kUnplaced; }
  int num_placed() const {
    int count = 0;
    for (int w : where) count += (w != kUnplaced);
    return count;
  }
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

class MalformedAllocation : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Throws MalformedAllocation unless `alloc` has one entry per pod, each in
// [0, |N|].
inline void check_allocation_shape(const Instance& instance,
                                   const Allocation& alloc) {
  if (static_cast<int>(alloc.where.size()) != instance.num_pods()) {
    throw MalformedAllocation("allocation has " +
                              std::to_string(alloc.where.size()) +
                              " entries, instance has " +
                              std::to_string(instance.num_pods()) + " pods");
  }
  for (size_t i = 0; i < alloc.where.size(); ++i) {
    const int w = alloc.where[i];
    if (w < 0 || w > instance.num_nodes()) {
      throw MalformedAllocation("pod " + std::to_string(i) +
                                " assigned to unknown node " +
                                std::to_string(w));
    }
  }
}

// Per-node load, indexed by node id (entry 0 is unused).
inline std::vector<ResourceVector> node_loads(const Instance& instance,
                                              const Allocation& alloc) {
  check_allocation_shape(instance, alloc);
  std::vector<ResourceVector> load(instance.num_nodes() + 1);
  for (const Pod& p : instance.pods()) {
    const int w = alloc.where[p.id];
    if (w != kUnplaced) load[w] += p.request;
  }
  return load;
}

inline bool feasibility_check(const Instance& instance,
                              const Allocation& alloc) {
  const std::vector<ResourceVector> load = node_loads(instance, alloc);
  for (const Node& n : instance.nodes()) {
    if (!load[n.id].fits_within(n.capacity)) return false;
  }
  return true;
}

// counts[t] = number of placed pods with priority t.
struct PlacementVector {
  std::vector<int> counts;

  int total() const {
    int sum = 0;
    for (int c : counts) sum += c;
    return sum;
  }
  friend bool operator==(const PlacementVector&,
                         const PlacementVector&) = default;
};

inline PlacementVector placement_vector(const Instance& instance,
                                        const Allocation& alloc) {
  check_allocation_shape(instance, alloc);
  PlacementVector v{std::vector<int>(instance.num_tiers(), 0)};
  for (const Pod& p : instance.pods()) {
    if (alloc.is_placed(p.id)) ++v.counts[p.priority];
  }
  return v;
}

// Lexicographic comparison starting at the highest priority (index 0).
inline std::strong_ordering compare_lex(const PlacementVector& a,
                                        const PlacementVector& b) {
  if (a.counts.size() != b.counts.size()) {
    throw std::invalid_argument("placement vectors differ in length");
  }
  for (size_t t = 0; t < a.counts.size(); ++t) {
    if (auto c = a.counts[t] <=> b.counts[t]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

struct Utilization {
  double cpu_pct = 0.0;
  double ram_pct = 0.0;
};

// Requested resources of placed pods as a percentage of total capacity.
inline Utilization utilization(const Instance& instance,
                               const Allocation& alloc) {
  check_allocation_shape(instance, alloc);
  const ResourceVector capacity = instance.total_capacity();
  if (capacity.cpu <= 0 || capacity.ram <= 0) {
    throw std::domain_error("utilization of a cluster with zero capacity");
  }
  ResourceVector used;
  for (const Pod& p : instance.pods()) {
    if (alloc.is_placed(p.id)) used += p.request;
  }
  return {
      100.0 * static_cast<double>(used.cpu) / static_cast<double>(capacity.cpu),
      100.0 * static_cast<double>(used.ram) /
          static_cast<double>(capacity.ram)};
}

}  // namespace kubeopt

#endif  // KUBEOPT_CLUSTER_HPP_
