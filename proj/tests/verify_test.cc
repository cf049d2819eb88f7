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

#include "npv/verify.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "json.hpp"

#include "npv/strategyproof.hpp"
#include "support.hpp"

namespace npv {
namespace {

using testing::O;
using testing::P;

TEST(ListPart1, Tabulated) {
  const auto l3 = build_list_part1(3);
  EXPECT_EQ(l3[0], P("xyz|zyx|xyz", 3));
  EXPECT_EQ(l3[2].voter(2), O("zxy"));
  const auto l4 = build_list_part1(4);
  EXPECT_EQ(l4[1], P("zxy|xzy|yxz|xzy", 4));
  EXPECT_EQ(l4[1].voter(0), O("zxy"));
  EXPECT_EQ(l4[2], P("xzy|xzy|yxz|zxy", 4));
  EXPECT_NPV_ERROR(build_list_part1(2), ErrorKind::kUnsupportedParameters);
}

TEST(ListPart2, Tabulated) {
  const auto l = build_list_part2(6);
  EXPECT_EQ(l.base[0], P("yxz|yxz|yzx|yzx|yzx|zxy", 6));
  EXPECT_EQ(l.base[1], P("zyx|yxz|yzx|yzx|xyz|yxz", 6));
  EXPECT_EQ(l.base[2], P("yzx|yxz|yzx|yzx|xzy|yxz", 6));
  EXPECT_EQ(l.base[3], P("yxz|yxz|yzx|yzx|xyz|zyx", 6));
  EXPECT_EQ(l.double_star[3].voter(4), O("xzy"));
  for (int j = 0; j < 4; ++j) {
    EXPECT_EQ(l.star[static_cast<std::size_t>(j)], swap_yz(l.base[static_cast<std::size_t>(j)]));
    for (int i = 2; i < 4; ++i) EXPECT_EQ(l.double_star[static_cast<std::size_t>(j)].voter(i), O("yzx"));
  }
  EXPECT_NPV_ERROR(build_list_part2(3), ErrorKind::kUnsupportedParameters);
}

TEST(ListPart2, EmptyBlockAtFour) {
  const auto l = build_list_part2(4);
  EXPECT_EQ(l.base[0], P("yxz|yxz|yzx|zxy", 4));
  for (int j = 0; j < 4; ++j) EXPECT_EQ(l.double_star[static_cast<std::size_t>(j)], l.star[static_cast<std::size_t>(j)]);
}

TEST(Catalogue, NamesAndErrors) {
  const auto names = scenario_names();
  EXPECT_EQ(names.size(), 10u);
  EXPECT_NPV_ERROR(make_scenario("nope", 3), ErrorKind::kScenario);
  EXPECT_NPV_ERROR(make_scenario("lemma4_4", 3), ErrorKind::kUnsupportedParameters);
  EXPECT_NPV_ERROR(make_scenario("gs_np", 7), ErrorKind::kUnsupportedParameters);
  for (const auto& name : names) {
    const auto s = make_scenario(name, 4);
    EXPECT_FALSE(s.instances.empty()) << name;
    EXPECT_EQ(s.n, 4);
  }
}

TEST(Catalogue, InstancesIterateQualifyingProfiles) {
  const auto s = make_scenario("lemma4_2", 4);
  std::size_t expected = 0;
  for (const auto& p : s.domain->profiles()) expected += p.voter(0).top() == kX || p.voter(1).top() == kX;
  EXPECT_EQ(s.instances.size(), expected);
  const auto t = make_scenario("lemma4_3", 4);
  std::size_t bottoms = 0;
  for (const auto& p : t.domain->profiles()) bottoms += p.voter(0).bottom() == kY || p.voter(1).bottom() == kY;
  EXPECT_EQ(t.instances.size(), bottoms);
  EXPECT_EQ(make_scenario("lemma4_4", 4).instances.size(), 4u);
  EXPECT_EQ(make_scenario("lemma4_4", 5, 2).instances.size(), 1u);
  EXPECT_EQ(make_scenario("nrange_full", 3).instances.size(), 3u);
}

TEST(RunScenario, SmallCatalogue) {
  for (const auto& [name, status] :
       {std::pair{"gs_np", SolveStatus::kUnsat}, {"sanity_sat", SolveStatus::kSat}, {"nrange_part1", SolveStatus::kUnsat}}) {
    const auto r = run_scenario(make_scenario(name, 3));
    EXPECT_EQ(r.outcome(), status) << name;
    EXPECT_TRUE(r.expectation_met()) << name;
    EXPECT_EQ(r.domain_size, 102u);
    EXPECT_EQ(r.np_star_size, 6u);
  }
}

TEST(RunScenario, WitnessIsVerified) {
  const auto r = run_scenario(make_scenario("sanity_sat", 3));
  ASSERT_EQ(r.instances.size(), 1u);
  ASSERT_TRUE(r.instances[0].witness);
  EXPECT_TRUE(r.instances[0].witness_check.empty());
  const auto& g = *r.instances[0].witness;
  EXPECT_FALSE(oracle::manipulation(testing::to_oracle(g.domain()), testing::as_fn(g)));
  EXPECT_EQ(oracle::range(testing::to_oracle(g.domain()), testing::as_fn(g)), (std::set<int>{0, 1, 2}));
}

TEST(RunScenario, Example1AtThreeIsReported) {
  const auto s = make_scenario("example1_exists", 3);
  EXPECT_EQ(s.expected, Expectation::kReport);
  const auto r = run_scenario(s);
  EXPECT_TRUE(r.expectation_met());
  EXPECT_EQ(make_scenario("example1_exists", 4).expected, Expectation::kSat);
}

TEST(CheckWitness, RejectsBadRules) {
  const auto s = make_scenario("sanity_sat", 3);
  EXPECT_FALSE(check_witness(Rule::constant(s.domain, kX), s, s.instances[0]).empty());
  auto values = std::get<TableBody>(Rule::dictator(s.domain, 0).materialize().body()).values;
  values[3] = s.domain->profile(3).voter(0).bottom();
  EXPECT_FALSE(check_witness(Rule::table(s.domain, values), s, s.instances[0]).empty());
  EXPECT_TRUE(check_witness(Rule::dictator(s.domain, 2), s, s.instances[0]).empty());
}

TEST(EnumerateModels, DistinctAndVerified) {
  const auto s = make_scenario("sanity_sat", 3);
  const auto models = enumerate_models(s, 3);
  ASSERT_EQ(models.size(), 3u);
  std::set<std::vector<int>> tables;
  for (const auto& g : models) {
    EXPECT_FALSE(find_manipulation(g, g.domain()));
    std::vector<int> t;
    for (std::size_t k = 0; k < g.domain().size(); ++k) t.push_back(g.evaluate_at(k).index);
    tables.insert(t);
  }
  EXPECT_EQ(tables.size(), 3u);
  EXPECT_TRUE(enumerate_models(s, 0).empty());
  // Only the three dictators exist.
  EXPECT_EQ(enumerate_models(s, 10).size(), 3u);
}

TEST(Relabel, PreservesStatusSmall) {
  const std::vector<Alternative> yz{kX, kZ, kY};
  for (const auto& name : {"gs_np", "sanity_sat", "nrange_part1", "nrange_full"}) {
    const auto s = make_scenario(name, 3);
    EXPECT_EQ(run_scenario(relabel_scenario(s, yz)).outcome(), run_scenario(s).outcome()) << name;
  }
}

TEST(Report, TextAndJson) {
  const auto r = run_scenario(make_scenario("gs_np", 3));
  std::ostringstream out;
  write_report(r, out);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("scenario gs_np n=3 m=3 expected=UNSAT\n", 0), 0u);
  EXPECT_NE(text.find("domain |NP|=102 |NP*|=6 vars=306"), std::string::npos);
  EXPECT_NE(text.find("result UNSAT expectation met"), std::string::npos);
  const auto doc = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(doc["outcome"], "UNSAT");
  EXPECT_EQ(doc["expectation_met"], true);
  EXPECT_EQ(doc["domain_size"], 102);
}

TEST(Report, Cache) {
  const auto dir = std::filesystem::temp_directory_path() / "npv_cache_test";
  std::filesystem::remove_all(dir);
  RunOptions opts;
  opts.cache_dir = dir;
  const auto s = make_scenario("nrange_full", 3);
  const auto first = run_scenario(s, opts);
  EXPECT_FALSE(first.from_cache);
  const auto second = run_scenario(s, opts);
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(second.outcome(), first.outcome());
  ASSERT_EQ(second.instances.size(), first.instances.size());
  for (std::size_t k = 0; k < first.instances.size(); ++k)
    EXPECT_EQ(second.instances[k].stats.conflicts, first.instances[k].stats.conflicts);
  std::filesystem::remove_all(dir);
}

TEST(RunScenarios, KeepsOrder) {
  std::vector<Scenario> batch;
  for (const auto& name : {"sanity_sat", "gs_np", "nrange_part1"}) batch.push_back(make_scenario(name, 3));
  const auto reports = run_scenarios(batch, {}, 3);
  ASSERT_EQ(reports.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(reports[k].scenario, batch[k].name);
}

TEST(WriteScenarioDimacs, AssumptionLines) {
  const auto s = make_scenario("nrange_full", 3);
  std::ostringstream cnf, assume;
  write_scenario_dimacs(s, cnf, assume);
  EXPECT_EQ(cnf.str().rfind("p cnf 306 ", 0), 0u);
  const std::string a = assume.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(a.begin(), a.end(), '\n')), 3u);
  EXPECT_EQ(a.rfind("a ", 0), 0u);
}

}  // namespace
}  // namespace npv
