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

#include "kubeopt/io.hpp"

#include <random>

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace kubeopt {
namespace {

TEST(InstanceJsonTest, RoundTripPreservesEverything) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance a = testing::random_small_instance(rng, 3, 7, 3);
    const Instance b = instance_from_json(instance_to_json(a));
    EXPECT_EQ(instance_to_json(a), instance_to_json(b));
    ASSERT_EQ(a.num_pods(), b.num_pods());
    for (int i = 0; i < a.num_pods(); ++i) {
      EXPECT_EQ(a.pod(i).request, b.pod(i).request);
      EXPECT_EQ(a.pod(i).priority, b.pod(i).priority);
    }
  }
}

TEST(InstanceJsonTest, GenerationBlockSurvives) {
  GenerationParams g{8, 4, 2, 95, 1234, true};
  const Instance a = make_instance({{0, "n", {5, 5}}}, {}, 1, g);
  const Instance b = instance_from_json(instance_to_json(a));
  ASSERT_TRUE(b.generation());
  EXPECT_EQ(*b.generation(), g);
}

TEST(InstanceJsonTest, RejectsUnknownAndMissingFields) {
  Json j = instance_to_json(testing::stranded_pod_instance());
  Json extra = j;
  extra["zones"] = 3;
  EXPECT_THROW(instance_from_json(extra), FormatError);

  Json pod_extra = j;
  pod_extra["pods"][0]["affinity"] = "x";
  EXPECT_THROW(instance_from_json(pod_extra), FormatError);

  Json missing = j;
  missing["nodes"][0].erase("ram");
  EXPECT_THROW(instance_from_json(missing), FormatError);

  Json wrong_type = j;
  wrong_type["pods"][1]["cpu"] = "many";
  EXPECT_THROW(instance_from_json(wrong_type), FormatError);

  Json bad_priority = j;
  bad_priority["pods"][1]["priority"] = 4;
  EXPECT_THROW(instance_from_json(bad_priority), FormatError);
}

TEST(AllocationJsonTest, RoundTripAndErrors) {
  const Allocation a{{1, 0, 2}};
  EXPECT_EQ(allocation_from_json(allocation_to_json(a)), a);
  EXPECT_THROW(allocation_from_json(Json{{"where", {1}}, {"extra", 1}}),
               FormatError);
  EXPECT_THROW(allocation_from_json(Json{{"where", {1.5}}}), FormatError);
  EXPECT_THROW(allocation_from_json(Json::object()), FormatError);
}

}  // namespace
}  // namespace kubeopt
