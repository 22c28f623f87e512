// Copyright 2026 The ccap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ccap/model.hpp"

#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace ccap {
namespace {

using testing::toy_core;
using testing::toy_machine;

TEST(ValidateSpecTest, ToyMachineIsValid) {
  const auto report = validate_spec(toy_machine());
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(report.errors.empty());
  EXPECT_TRUE(report.warnings.empty());
}

TEST(ValidateSpecTest, UnresolvedRegisterFile) {
  auto spec = toy_machine();
  spec.core_groups[0].core.instructions.push_back(
      {"xor", {RegisterOperand{"v"}, RegisterOperand{"r"}}, 1});
  const auto report = validate_spec(spec);
  ASSERT_EQ(report.errors.size(), 1u);
  EXPECT_NE(report.errors[0].find("undeclared register file 'v'"), std::string::npos);
}

TEST(ValidateSpecTest, ThreadsMustMatchNarrowestStage) {
  auto spec = toy_machine();
  spec.core_groups[0].core.stage_throughputs = std::vector<std::int64_t>{4, 2, 3};
  spec.core_groups[0].core.threads = 3;
  const auto report = validate_spec(spec);
  ASSERT_EQ(report.errors.size(), 1u);
  EXPECT_NE(report.errors[0].find("narrowest pipeline stage"), std::string::npos);

  spec.core_groups[0].core.threads = 2;
  EXPECT_TRUE(validate_spec(spec).ok());
}

TEST(ValidateSpecTest, StructuralErrors) {
  MachineSpec empty{"m", {}, std::nullopt};
  EXPECT_EQ(validate_spec(empty).errors.size(), 1u);

  auto spec = toy_machine();
  auto& core = spec.core_groups[0].core;
  core.register_files.push_back({"r", 4});
  core.memory.levels[1].access_cycles = 0;
  core.instructions[0].execute_cycles = 0;
  spec.core_groups[0].count = 0;
  spec.clock_ghz = -1.0;
  EXPECT_EQ(validate_spec(spec).errors.size(), 5u);
}

TEST(ValidateSpecTest, EmptyHierarchyAndInstructionList) {
  CoreSpec core;
  core.register_files = {{"r", 2}};
  MachineSpec spec{"bare", {{core, 1}}, std::nullopt};
  const auto report = validate_spec(spec);
  EXPECT_EQ(report.errors.size(), 2u);  // no memory levels, no instructions
}

TEST(ValidateSpecTest, WarnsWhenNothingTouchesMemory) {
  auto spec = toy_machine();
  auto& instrs = spec.core_groups[0].core.instructions;
  instrs.erase(instrs.begin() + 1);
  const auto report = validate_spec(spec);
  EXPECT_TRUE(report.ok());
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("addresses memory"), std::string::npos);
}

TEST(ValidateSpecTest, IsPure) {
  auto spec = toy_machine();
  spec.core_groups[0].core.instructions.push_back({"bad", {RegisterOperand{"q"}}, 0});
  EXPECT_EQ(validate_spec(spec), validate_spec(spec));
}

TEST(DeriveThreadCountTest, Minimum) {
  EXPECT_EQ(derive_thread_count(std::vector<std::int64_t>{4, 2, 3}), 2);
  EXPECT_EQ(derive_thread_count(std::vector<std::int64_t>{1}), 1);
  EXPECT_EQ(derive_thread_count(std::vector<std::int64_t>{3, 3, 3}), 3);
}

TEST(DeriveThreadCountTest, EmptyIsAnError) {
  EXPECT_THROW(derive_thread_count(std::vector<std::int64_t>{}), Error);
}

TEST(DeriveThreadCountTest, AgreesWithValidSpecs) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> width(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::int64_t> stages(1 + trial % 6);
    for (auto& s : stages) s = width(rng);
    auto spec = toy_machine();
    spec.core_groups[0].core.stage_throughputs = stages;
    spec.core_groups[0].core.threads = derive_thread_count(stages);
    ASSERT_TRUE(validate_spec(spec).ok());
  }
}

}  // namespace
}  // namespace ccap
