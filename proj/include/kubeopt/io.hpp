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

// JSON encoding of instances and allocations.
//
//   instance:   {"nodes": [{"name", "cpu", "ram"}...],
//                "pods": [{"name", "cpu", "ram", "priority", "replicaset"}...],
//                "pr_max": int, "generation": {...}}   (generation optional)
//   allocation: {"where": [int...]}
//
// Field order is not significant. Unknown fields are rejected.

#ifndef KUBEOPT_IO_HPP_
#define KUBEOPT_IO_HPP_

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kubeopt/cluster.hpp"

namespace kubeopt {

using Json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io_internal {

inline void require_object(const Json& j, std::string_view what) {
  if (!j.is_object()) {
    throw FormatError(std::string(what) + " must be a JSON object");
  }
}

inline void reject_unknown(const Json& j, std::string_view what,
                           std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) {
      throw FormatError("unknown field '" + key + "' in " + std::string(what));
    }
  }
}

template <typename T>
T field(const Json& j, const char* key, std::string_view what) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError("missing field '" + std::string(key) + "' in " +
                      std::string(what));
  }
  try {
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!it->is_number_integer()) throw FormatError("");
    }
    return it->get<T>();
  } catch (const std::exception&) {
    throw FormatError("field '" + std::string(key) + "' in " +
                      std::string(what) + " has the wrong type");
  }
}

}  // namespace io_internal

inline Json generation_to_json(const GenerationParams& g) {
  Json j = {{"num_nodes", g.num_nodes},
            {"pods_per_node", g.pods_per_node},
            {"priority_tiers", g.priority_tiers},
            {"usage_target", g.usage_target},
            {"seed", g.seed}};
  if (g.priority_per_pod) j["priority_per_pod"] = true;
  return j;
}

inline GenerationParams generation_from_json(const Json& j) {
  using namespace io_internal;
  constexpr std::string_view kWhat = "generation";
  require_object(j, kWhat);
  reject_unknown(j, kWhat,
                 {"num_nodes", "pods_per_node", "priority_tiers",
                  "usage_target", "seed", "priority_per_pod"});
  GenerationParams g;
  g.num_nodes = field<int>(j, "num_nodes", kWhat);
  g.pods_per_node = field<int>(j, "pods_per_node", kWhat);
  g.priority_tiers = field<int>(j, "priority_tiers", kWhat);
  g.usage_target = field<int>(j, "usage_target", kWhat);
  g.seed = field<uint64_t>(j, "seed", kWhat);
  if (j.contains("priority_per_pod")) {
    g.priority_per_pod = field<bool>(j, "priority_per_pod", kWhat);
  }
  return g;
}

inline Json instance_to_json(const Instance& instance) {
  Json nodes = Json::array();
  for (const Node& n : instance.nodes()) {
    nodes.push_back(
        {{"name", n.name}, {"cpu", n.capacity.cpu}, {"ram", n.capacity.ram}});
  }
  Json pods = Json::array();
  for (const Pod& p : instance.pods()) {
    pods.push_back({{"name", p.name},
                    {"cpu", p.request.cpu},
                    {"ram", p.request.ram},
                    {"priority", p.priority},
                    {"replicaset", p.replicaset}});
  }
  Json j = {{"nodes", nodes}, {"pods", pods}, {"pr_max", instance.pr_max()}};
  if (instance.generation()) {
    j["generation"] = generation_to_json(*instance.generation());
  }
  return j;
}

inline Instance instance_from_json(const Json& j) {
  using namespace io_internal;
  require_object(j, "instance");
  reject_unknown(j, "instance", {"nodes", "pods", "pr_max", "generation"});

  if (!j.contains("nodes") || !j.contains("pods")) {
    throw FormatError("instance requires 'nodes' and 'pods'");
  }
  const Json& jn = j["nodes"];
  const Json& jp = j["pods"];
  if (!jn.is_array() || !jp.is_array()) {
    throw FormatError("instance 'nodes' and 'pods' must be arrays");
  }
  std::vector<Node> nodes;
  for (const Json& e : jn) {
    require_object(e, "node");
    reject_unknown(e, "node", {"name", "cpu", "ram"});
    nodes.push_back(
        {0,
         field<std::string>(e, "name", "node"),
         {field<int64_t>(e, "cpu", "node"), field<int64_t>(e, "ram", "node")}});
  }
  std::vector<Pod> pods;
  for (const Json& e : jp) {
    require_object(e, "pod");
    reject_unknown(e, "pod", {"name", "cpu", "ram", "priority", "replicaset"});
    pods.push_back(
        {0,
         field<std::string>(e, "name", "pod"),
         {field<int64_t>(e, "cpu", "pod"), field<int64_t>(e, "ram", "pod")},
         field<int>(e, "priority", "pod"),
         field<int>(e, "replicaset", "pod")});
  }
  std::optional<GenerationParams> generation;
  if (j.contains("generation") && !j["generation"].is_null()) {
    generation = generation_from_json(j["generation"]);
  }
  try {
    return make_instance(std::move(nodes), std::move(pods),
                         field<int>(j, "pr_max", "instance"), generation);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

inline Json allocation_to_json(const Allocation& alloc) {
  return Json{{"where", alloc.where}};
}

inline Allocation allocation_from_json(const Json& j) {
  using namespace io_internal;
  require_object(j, "allocation");
  reject_unknown(j, "allocation", {"where"});
  if (!j.contains("where")) throw FormatError("allocation requires 'where'");
  const Json& w = j["where"];
  if (!w.is_array()) throw FormatError("allocation 'where' must be an array");
  Allocation alloc;
  for (const Json& e : w) {
    if (!e.is_number_integer()) {
      throw FormatError("allocation entries must be integers");
    }
    alloc.where.push_back(e.get<int>());
  }
  return alloc;
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path,
                            std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

inline Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

inline Allocation load_allocation(const std::filesystem::path& path) {
  return allocation_from_json(read_json_file(path));
}

}  // namespace kubeopt

#endif  // KUBEOPT_IO_HPP_
