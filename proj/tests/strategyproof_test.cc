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

#include "npv/strategyproof.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "support.hpp"

namespace npv {
namespace {

using testing::P;

TEST(FindManipulation, DictatorAbsentAgreesWithOracle) {
  const auto d = enumerate_np(3, 3);
  for (int i = 0; i < 3; ++i) {
    const auto g = Rule::dictator(d, i);
    EXPECT_FALSE(find_manipulation(g, *d));
    EXPECT_FALSE(oracle::manipulation(testing::to_oracle(*d), oracle::dictator(i)));
  }
}

TEST(FindManipulation, Example1Absent) {
  const auto g = example1_rule(4);
  EXPECT_FALSE(find_manipulation(g, g.domain()));
}

TEST(FindManipulation, FlippedDictatorHasWitness) {
  const auto d = enumerate_np(3, 3);
  const auto base = Rule::dictator(d, 0).materialize();
  for (std::size_t k = 0; k < d->size(); k += 17) {
    auto values = std::get<TableBody>(base.body()).values;
    values[k] = d->profile(k).voter(0).bottom();
    const auto g = Rule::table(d, values);
    const auto w = find_manipulation(g, *d);
    ASSERT_TRUE(w);
    EXPECT_TRUE(w->at == k || w->via == k);
    const auto& truth = d->profile(w->at).voter(w->voter);
    EXPECT_TRUE(truth.prefers(w->outcome_via, w->outcome_at));
    EXPECT_EQ(g.evaluate_at(w->at), w->outcome_at);
    EXPECT_EQ(g.evaluate_at(w->via), w->outcome_via);
    EXPECT_TRUE(oracle::manipulation(testing::to_oracle(*d), testing::as_fn(g)));
    EXPECT_NE(format_witness(*d, *w).find("manipulates at"), std::string::npos);
  }
}

TEST(FindManipulation, AgreesWithOracleOnRandomTables) {
  const auto d = enumerate_np(3, 3);
  const auto ref = testing::to_oracle(*d);
  std::uint64_t state = 12345;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Alternative> values;
    // Mostly a dictator with sparse noise, so both outcomes occur.
    for (std::size_t k = 0; k < d->size(); ++k) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      const bool noise = (state >> 33) % 97 < static_cast<unsigned>(trial % 3);
      values.push_back(noise ? Alternative{static_cast<int>((state >> 40) % 3)} : d->profile(k).voter(1).top());
    }
    const auto g = Rule::table(d, values);
    EXPECT_EQ(find_manipulation(g, *d).has_value(), oracle::manipulation(ref, testing::as_fn(g)).has_value());
  }
}

TEST(StandardSequence, Examples) {
  const auto d = enumerate_np(4, 3);
  const auto p = P("yxz|yxz|yzx|zxy", 4);
  const auto same = standard_sequence(*d, p, p);
  ASSERT_TRUE(same);
  EXPECT_TRUE(same->steps.empty());
  const auto q = P("yxz|yxz|zyx|zxy", 4);
  const auto one = standard_sequence(*d, q, p, {2});
  ASSERT_TRUE(one);
  ASSERT_EQ(one->steps.size(), 1u);
  EXPECT_EQ(one->steps[0].voter, 2);
  EXPECT_EQ(d->profile(one->steps[0].profile), p);
}

TEST(StandardSequence, BlockedByUnanimity) {
  // Voter 1 first would give xyz|xyz|xyz.
  const auto d = enumerate_np(3, 3);
  const auto from = P("zyx|xyz|xyz", 3);
  const auto to = P("xyz|zyx|xyz", 3);
  EXPECT_FALSE(standard_sequence(*d, from, to, {0, 1}));
  const auto other = standard_sequence(*d, from, to, {1, 0});
  ASSERT_TRUE(other);
  for (const auto& s : other->steps) EXPECT_TRUE(d->contains(d->profile(s.profile)));
}

TEST(StandardSequence, StepsChangeOneVoter) {
  const auto d = enumerate_np(3, 3);
  for (std::size_t i = 0; i < d->size(); i += 7) {
    for (std::size_t j = 0; j < d->size(); j += 11) {
      const auto path = standard_sequence(*d, d->profile(i), d->profile(j));
      if (!path) continue;
      Profile prev = d->profile(i);
      for (const auto& s : path->steps) {
        const auto& cur = d->profile(s.profile);
        EXPECT_EQ(oracle::single_difference(testing::to_oracle(prev), testing::to_oracle(cur)), s.voter);
        prev = cur;
      }
      EXPECT_EQ(prev, d->profile(j));
    }
  }
}

TEST(Propagation, EmptyIsFixedPoint) {
  const auto d = enumerate_np(3, 3);
  const auto r = forced_value_propagation(*d, {});
  EXPECT_TRUE(r.consistent());
  EXPECT_TRUE(r.assignments.empty());
}

TEST(Propagation, NpStarXConsistent) {
  const auto d = enumerate_np(4, 3);
  std::map<std::size_t, Alternative> a;
  const auto star = np_star(*d);
  for (const auto& p : star->profiles()) a[d->index_of(p)] = kX;
  const auto r = forced_value_propagation(*d, a);
  EXPECT_TRUE(r.consistent());
  for (auto [k, v] : a) EXPECT_EQ(r.assignments.at(k), v);
  // idempotent
  const auto again = propagate_candidates(*d, r.candidates);
  EXPECT_EQ(again.candidates, r.candidates);
}

TEST(Propagation, MonotoneAndDetectsContradiction) {
  const auto d = enumerate_np(3, 3);
  const auto p = d->index_of(P("xyz|zyx|xyz", 3));
  const auto r = forced_value_propagation(*d, {{p, kZ}});
  EXPECT_TRUE(r.consistent());
  EXPECT_EQ(r.candidates[p], AltSet(1u << 2));
  // voter 1 would move from z at p to x at q
  const auto q = d->variant_indices(p, 0).front();
  const auto& truth = d->profile(p).voter(0);
  const Alternative better = truth.top();
  const auto clash = forced_value_propagation(*d, {{p, truth.bottom()}, {q, better}});
  EXPECT_FALSE(clash.consistent());
}

}  // namespace
}  // namespace npv
