// Copyright 2026 The npverify Authors
//
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

#include "npv/decisiveness.hpp"

#include <gtest/gtest.h>

#include <memory>

#include "npv/strategyproof.hpp"
#include "npv/verify.hpp"
#include "support.hpp"

namespace npv {
namespace {

// Voter i picks between a and b; everyone else is ignored.
Rule pairwise_dictator(DomainPtr d, int i, Alternative a, Alternative b) {
  std::vector<Alternative> values;
  for (const auto& p : d->profiles()) values.push_back(p.voter(i).prefers(a, b) ? a : b);
  return Rule::table(d, values);
}

Coalition all_voters(int n) { return Coalition((1u << n) - 1); }

TEST(Coalition, Formatting) {
  EXPECT_EQ(format_coalition(Coalition::of({0, 2})), "{1,3}");
  EXPECT_EQ(Coalition::of({1, 3}).size(), 2);
  EXPECT_TRUE(Coalition::of({1}).proper_subset_of(Coalition::of({1, 3})));
}

TEST(IsDecisive, Constant) {
  const auto d = enumerate_np(3, 3);
  const auto g = Rule::constant(d, kX);
  for (std::uint32_t mask = 1; mask < 7; ++mask) EXPECT_EQ(is_decisive(g, *d, Coalition(mask), kX, kY), Decisiveness::kDecisive);
  EXPECT_NPV_ERROR(is_decisive(g, *d, Coalition(1), kX, kX), ErrorKind::kInvalidPair);
}

TEST(IsDecisive, Dictator) {
  const auto d = enumerate_np(3, 3);
  for (int i = 0; i < 3; ++i) {
    const auto g = pairwise_dictator(d, i, kX, kY);
    ASSERT_FALSE(find_manipulation(g, *d));
    for (std::uint32_t mask = 1; mask < 7; ++mask) {
      const Coalition c(mask);
      EXPECT_EQ(is_decisive(g, *d, c, kX, kY), c.contains(i) ? Decisiveness::kDecisive : Decisiveness::kNotDecisive);
    }
  }
}

TEST(IsDecisive, GrandCoalitionVacuous) {
  const auto d = enumerate_np(4, 3);
  EXPECT_EQ(is_decisive(Rule::dictator(d, 0), *d, all_voters(4), kX, kY), Decisiveness::kVacuous);
}

TEST(MinimalFamilies, Dictator) {
  const auto d = enumerate_np(4, 3);
  for (int i = 0; i < 4; ++i) {
    const auto g = pairwise_dictator(d, i, kY, kZ);
    for (auto [a, b] : {std::pair{kY, kZ}, std::pair{kZ, kY}}) {
      const auto r = minimal_decisive_families(g, *d, a, b);
      ASSERT_EQ(r.minimal.size(), 1u);
      EXPECT_EQ(r.minimal[0], Coalition::of({i}));
      EXPECT_TRUE(r.monotone);
      EXPECT_FALSE(r.range_warning);
      EXPECT_EQ(r.entries.size(), 14u);
    }
  }
}

TEST(MinimalFamilies, CollapsedExample1) {
  const auto star = clone_collapse(std::make_shared<const Rule>(example1_rule(4)));
  const auto& d = star.domain();
  const auto xy = minimal_decisive_families(star, d, kX, kY);
  for (const auto& e : xy.entries) EXPECT_EQ(e.outcome, Decisiveness::kDecisive);
  const auto yx = minimal_decisive_families(star, d, kY, kX);
  EXPECT_TRUE(yx.decisive.empty());
  EXPECT_TRUE(yx.minimal.empty());
}

TEST(MinimalFamilies, MinimalHasNoDecisiveSubset) {
  const auto g = example1_rule(4);
  const auto r = minimal_decisive_families(g, g.domain(), kY, kX);
  for (const auto& c : r.minimal)
    for (const auto& e : r.decisive) EXPECT_FALSE(e.proper_subset_of(c));
  EXPECT_NE(format_report(r, 3).find("y>x"), std::string::npos);
}

TEST(MinimalFamilies, CoalitionCap) {
  const auto d = enumerate_np(3, 3);
  EXPECT_NPV_ERROR(minimal_decisive_families(Rule::dictator(d, 0), *d, kX, kY, {.coalition_cap = 2}),
                   ErrorKind::kCoalitionCap);
}

Scenario two_valued(int n) {
  Scenario s;
  s.name = "two_valued";
  s.n = n;
  s.expected = Expectation::kSat;
  s.domain = enumerate_np(n, 3);
  const auto all = all_indices(*s.domain);
  s.constraints = {RangeSubsetConstraint{{kX, kY}, all}, AttainsConstraint{kX, all}, AttainsConstraint{kY, all}};
  s.instances = {ScenarioInstance{"base", {}}};
  return s;
}

TEST(MinimalFamilies, SolverModelsAreMonotone) {
  for (const auto& g : enumerate_models(two_valued(3), 12)) {
    ASSERT_FALSE(find_manipulation(g, g.domain()));
    for (auto [a, b] : {std::pair{kX, kY}, std::pair{kY, kX}}) {
      const auto r = minimal_decisive_families(g, g.domain(), a, b);
      EXPECT_TRUE(r.monotone);
    }
  }
}

TEST(Transfer, DictatorClone) {
  const auto d = enumerate_np(4, 3);
  const auto g = std::make_shared<const Rule>(pairwise_dictator(d, 2, kY, kZ));
  const auto star = clone_collapse(g);
  EXPECT_EQ(is_decisive(star, star.domain(), Coalition::of({2}), kY, kZ), Decisiveness::kDecisive);
  EXPECT_EQ(is_decisive(*g, *np_star(*d), Coalition::of({2, 3}), kY, kZ), Decisiveness::kDecisive);
  for (std::uint32_t mask = 0; mask < 4; ++mask) EXPECT_TRUE(transfer_check(g, Coalition(mask), kY, kZ).all_hold());
}

TEST(Transfer, Constant) {
  const auto d = enumerate_np(4, 3);
  const auto g = std::make_shared<const Rule>(Rule::constant(d, kX));
  for (std::uint32_t mask = 0; mask < 4; ++mask) EXPECT_TRUE(transfer_check(g, Coalition(mask), kX, kY).all_hold());
}

TEST(Transfer, SolverModelsAtFour) {
  for (const auto& model : enumerate_models(two_valued(4), 4)) {
    const auto g = std::make_shared<const Rule>(model);
    for (std::uint32_t mask = 0; mask < 4; ++mask) {
      const auto r = transfer_check(g, Coalition(mask), kX, kY);
      for (const auto& item : r.items) EXPECT_TRUE(item.holds()) << "item " << item.item << " " << item.detail;
    }
  }
  EXPECT_NPV_ERROR(transfer_check(std::make_shared<const Rule>(example1_rule(4)), Coalition::of({3}), kX, kY),
                   ErrorKind::kInvalidArgument);
}

}  // namespace
}  // namespace npv
