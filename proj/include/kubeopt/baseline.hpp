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

// Deterministic emulation of the default kube-scheduler as run inside a
// simulator with parallelism=1, preemption disabled and a score plugin that
// breaks ties by node name. What remains of the plugin pipeline is queue
// sort, filter and a LeastAllocated score.

#ifndef KUBEOPT_BASELINE_HPP_
#define KUBEOPT_BASELINE_HPP_

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "kubeopt/cluster.hpp"

namespace kubeopt {

struct SchedulingEvent {
  enum class Result { kBound, kPending };

  int pod_id = 0;
  Result result = Result::kPending;
  int node_id = kUnplaced;  // valid iff kBound

  friend bool operator==(const SchedulingEvent&,
                         const SchedulingEvent&) = default;
};

// Pods ordered by priority (highest first, i.e. ascending value), then
// ReplicaSet id, then pod id.
inline std::vector<int> queue_order(const Instance& instance) {
  std::vector<int> order(instance.num_pods());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Pod& pa = instance.pod(a);
    const Pod& pb = instance.pod(b);
    return std::tie(pa.priority, pa.replicaset, pa.id) <
           std::tie(pb.priority, pb.replicaset, pb.id);
  });
  return order;
}

// Nodes whose free capacity admits the pod, ascending by id.
inline std::vector<int> filter_nodes(const Instance& instance,
                                     const Allocation& alloc, int pod_id) {
  const std::vector<ResourceVector> load = node_loads(instance, alloc);
  const ResourceVector request = instance.pod(pod_id).request;
  std::vector<int> feasible;
  for (const Node& n : instance.nodes()) {
    if ((load[n.id] + request).fits_within(n.capacity)) {
      feasible.push_back(n.id);
    }
  }
  return feasible;
}

// Exact LeastAllocated score: mean over cpu and ram of the free fraction left
// after placing the pod, times 100. Stored as the rational
//   50 * (free_cpu * cap_ram + free_ram * cap_cpu) / (cap_cpu * cap_ram)
// so that ranking never depends on floating-point rounding.
class NodeScore {
 public:
  NodeScore(ResourceVector free_after, ResourceVector capacity)
      : numerator_(static_cast<__int128>(free_after.cpu) * capacity.ram +
                   static_cast<__int128>(free_after.ram) * capacity.cpu),
        denominator_(static_cast<__int128>(capacity.cpu) * capacity.ram) {}

  double value() const {
    return 50.0 * static_cast<double>(numerator_) /
           static_cast<double>(denominator_);
  }

  friend std::strong_ordering operator<=>(const NodeScore& a,
                                          const NodeScore& b) {
    const __int128 lhs = a.numerator_ * b.denominator_;
    const __int128 rhs = b.numerator_ * a.denominator_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const NodeScore& a, const NodeScore& b) {
    return (a <=> b) == 0;
  }

 private:
  __int128 numerator_;
  __int128 denominator_;
};

inline NodeScore least_allocated_score(const Instance& instance,
                                       const Allocation& alloc, int pod_id,
                                       int node_id) {
  const std::vector<ResourceVector> load = node_loads(instance, alloc);
  const Node& node = instance.node(node_id);
  return NodeScore(node.capacity - load[node_id] - instance.pod(pod_id).request,
                   node.capacity);
}

inline double score_least_allocated(const Instance& instance,
                                    const Allocation& alloc, int pod_id,
                                    int node_id) {
  return least_allocated_score(instance, alloc, pod_id, node_id).value();
}

struct ScheduleResult {
  Allocation allocation;
  std::vector<SchedulingEvent> events;  // in queue order

  int num_pending() const {
    return static_cast<int>(
        std::count_if(events.begin(), events.end(), [](const auto& e) {
          return e.result == SchedulingEvent::Result::kPending;
        }));
  }
};

// One pass over the queue. A pod that fails filtering stays pending: with a
// single batch and no departures a retry could never succeed.
inline ScheduleResult schedule_trace(const Instance& instance) {
  ScheduleResult out{Allocation::empty(instance.num_pods()), {}};
  std::vector<ResourceVector> load(instance.num_nodes() + 1);

  for (int pod_id : queue_order(instance)) {
    const ResourceVector request = instance.pod(pod_id).request;
    int best = kUnplaced;
    std::optional<NodeScore> best_score;
    for (const Node& n : instance.nodes()) {
      if (!(load[n.id] + request).fits_within(n.capacity)) continue;
      NodeScore score(n.capacity - load[n.id] - request, n.capacity);
      const bool better =
          !best_score || score > *best_score ||
          (score == *best_score && n.name < instance.node(best).name);
      if (better) {
        best = n.id;
        best_score = score;
      }
    }
    if (best == kUnplaced) {
      out.events.push_back(
          {pod_id, SchedulingEvent::Result::kPending, kUnplaced});
    } else {
      load[best] += request;
      out.allocation.where[pod_id] = best;
      out.events.push_back({pod_id, SchedulingEvent::Result::kBound, best});
    }
  }
  return out;
}

}  // namespace kubeopt

#endif  // KUBEOPT_BASELINE_HPP_
