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

// Random cluster scenarios built from ReplicaSets.
//
// Random numbers come from std::mt19937_64 seeded with the instance seed; its
// output sequence is fixed by the C++ standard. Integers in [lo, hi] are drawn
// by rejection sampling on the raw 64-bit outputs (no standard distribution
// objects, whose algorithms vary between library vendors), so a (params,
// seed) pair yields the same instance on every platform.
//
// Draw order, per ReplicaSet: replicas in [1, 4], cpu in [100, 1000], ram in
// [100, 1000], then priority in [0, tiers - 1]. With per-pod priorities the
// last draw is repeated once per replica instead.

#ifndef KUBEOPT_GENERATOR_HPP_
#define KUBEOPT_GENERATOR_HPP_

#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "kubeopt/baseline.hpp"
#include "kubeopt/cluster.hpp"

namespace kubeopt {

inline constexpr int64_t kMinRequest = 100;
inline constexpr int64_t kMaxRequest = 1000;
inline constexpr int kMinReplicas = 1;
inline constexpr int kMaxReplicas = 4;

// Unbiased integer in [lo, hi].
inline int64_t uniform_int(std::mt19937_64& rng, int64_t lo, int64_t hi) {
  const uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
  const uint64_t limit =
      std::numeric_limits<uint64_t>::max() -
      (std::numeric_limits<uint64_t>::max() % range + 1) % range;
  uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return lo + static_cast<int64_t>(x % range);
}

inline void validate(const GenerationParams& p) {
  if (p.num_nodes < 1 || p.pods_per_node < 1 || p.priority_tiers < 1 ||
      p.usage_target < 1) {
    throw std::invalid_argument(
        "generation parameters must all be positive integers");
  }
}

inline Instance generate_instance(const GenerationParams& params) {
  validate(params);
  std::mt19937_64 rng(params.seed);
  const int target = params.num_nodes * params.pods_per_node;

  std::vector<Pod> pods;
  ResourceVector demand;
  for (int rs = 0; static_cast<int>(pods.size()) < target; ++rs) {
    const int replicas =
        static_cast<int>(uniform_int(rng, kMinReplicas, kMaxReplicas));
    const ResourceVector request{uniform_int(rng, kMinRequest, kMaxRequest),
                                 uniform_int(rng, kMinRequest, kMaxRequest)};
    int priority = 0;
    if (!params.priority_per_pod) {
      priority =
          static_cast<int>(uniform_int(rng, 0, params.priority_tiers - 1));
    }
    for (int r = 0; r < replicas; ++r) {
      if (params.priority_per_pod) {
        priority =
            static_cast<int>(uniform_int(rng, 0, params.priority_tiers - 1));
      }
      char name[48];
      std::snprintf(name, sizeof(name), "rs-%04d-%d", rs, r);
      pods.push_back({0, name, request, priority, rs});
      demand += request;
    }
  }

  // capacity = ceil(demand / (nodes * usage / 100)).
  const int64_t denom =
      static_cast<int64_t>(params.num_nodes) * params.usage_target;
  auto per_node = [&](int64_t total) {
    return (total * 100 + denom - 1) / denom;
  };
  const ResourceVector capacity{per_node(demand.cpu), per_node(demand.ram)};

  const int width = params.num_nodes < 100 ? 2 : 4;
  std::vector<Node> nodes;
  for (int j = 0; j < params.num_nodes; ++j) {
    char name[32];
    std::snprintf(name, sizeof(name), "node-%0*d", width, j);
    nodes.push_back({0, name, capacity});
  }
  return make_instance(std::move(nodes), std::move(pods),
                       params.priority_tiers - 1, params);
}

class DatasetGenerationError : public std::runtime_error {
 public:
  DatasetGenerationError(const std::string& what, double acceptance_rate)
      : std::runtime_error(what), acceptance_rate_(acceptance_rate) {}
  double acceptance_rate() const { return acceptance_rate_; }

 private:
  double acceptance_rate_;
};

struct Dataset {
  GenerationParams params;  // seed = first seed tried
  std::vector<Instance> instances;
  std::vector<uint64_t> kept_seeds;
  int attempts = 0;
  double acceptance_rate() const {
    return attempts == 0 ? 0.0
                         : static_cast<double>(instances.size()) / attempts;
  }
};

// Keeps the first `count` instances (seeds seed, seed+1, ...) that the
// baseline scheduler cannot fully place. Gives up after
// `max_attempts_per_instance * count` seeds.
inline Dataset generate_dataset(const GenerationParams& params, int count,
                                int max_attempts_per_instance = 100) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  validate(params);
  Dataset ds;
  ds.params = params;
  const int64_t cap = static_cast<int64_t>(max_attempts_per_instance) * count;
  for (uint64_t seed = params.seed;
       static_cast<int>(ds.instances.size()) < count; ++seed) {
    if (ds.attempts >= cap) {
      throw DatasetGenerationError(
          "gave up after " + std::to_string(ds.attempts) + " attempts with " +
              std::to_string(ds.instances.size()) + " of " +
              std::to_string(count) + " instances kept (acceptance rate " +
              std::to_string(ds.acceptance_rate()) + ")",
          ds.acceptance_rate());
    }
    ++ds.attempts;
    GenerationParams p = params;
    p.seed = seed;
    Instance inst = generate_instance(p);
    if (schedule_trace(inst).num_pending() > 0) {
      ds.instances.push_back(std::move(inst));
      ds.kept_seeds.push_back(seed);
    }
  }
  return ds;
}

}  // namespace kubeopt

#endif  // KUBEOPT_GENERATOR_HPP_
