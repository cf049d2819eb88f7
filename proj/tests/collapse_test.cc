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

#include "npv/collapse.hpp"

#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

namespace npv {
namespace {

using testing::P;

const Alternative kA{0}, kB{1}, kC{2}, kD{3};

// Fuses the adjacent w,z block of r into x*.
Profile fuse(const Profile& r, const CollapseSpec& spec) {
  std::vector<Ordering> voters;
  for (const Ordering& o : r.voters()) {
    std::vector<int> ranked;
    for (Alternative a : o.ranked()) {
      const int s = spec.to_star(a).index;
      if (ranked.empty() || ranked.back() != s || s != spec.x_star().index) ranked.push_back(s);
    }
    voters.push_back(Ordering::from_ranked(ranked));
  }
  return Profile(voters);
}

std::vector<std::pair<Alternative, Alternative>> all_pairs(int m) {
  std::vector<std::pair<Alternative, Alternative>> out;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) out.push_back({Alternative{a}, Alternative{b}});
  return out;
}

TEST(Sigma, Examples) {
  // w y z x with w=a, y=b, z=c
  const auto one = sigma(P("abcd", 1, 4), kA, kC);
  EXPECT_EQ(one.per_voter, std::vector<int>{1});
  EXPECT_EQ(sigma(P("abcd", 1, 4), kA, kB).total, 0);
  const auto p = P("abcd|dcba|bdac", 3, 4);
  const auto s = sigma(p, kA, kD);
  EXPECT_EQ(s.per_voter, (std::vector<int>{2, 2, 0}));
  EXPECT_EQ(s.total, 4);
  EXPECT_EQ(s.total, oracle::sigma(testing::to_oracle(p), 0, 3));
  EXPECT_NPV_ERROR(sigma(p, kA, kA), ErrorKind::kInvalidPair);
}

TEST(ContiguousDomain, Membership) {
  const auto np = enumerate_np(3, 4);
  for (auto [w, z] : all_pairs(4)) {
    const auto wz = contiguous_domain(*np, w, z);
    EXPECT_EQ(wz->kind(), DomainKind::kNPWZ);
    EXPECT_GT(wz->size(), 0u);
    for (const auto& r : wz->profiles()) {
      EXPECT_TRUE(np->contains(r));
      EXPECT_EQ(sigma(r, w, z).total, 0);
    }
    std::size_t zero = 0;
    for (const auto& r : np->profiles()) zero += sigma(r, w, z).total == 0;
    EXPECT_EQ(zero, wz->size());
  }
  EXPECT_TRUE(contiguous_domain(3, 4, kA, kC)->contains(P("acbd|dbca|cadb", 3, 4)));
}

TEST(CollapseSpec, Errors) {
  EXPECT_NPV_ERROR(make_collapse_spec(3, 4, kB, kB), ErrorKind::kInvalidPair);
  EXPECT_NPV_ERROR(make_collapse_spec(3, 4, kA, Alternative{4}), ErrorKind::kInvalidAlternative);
  EXPECT_NPV_ERROR(make_collapse_spec(3, 2, kA, kB), ErrorKind::kInvalidArgument);
  const auto spec = make_collapse_spec(3, 4, kB, kD);
  EXPECT_EQ(spec.kept, (std::vector<Alternative>{kA, kC}));
  EXPECT_EQ(spec.x_star(), Alternative{2});
  EXPECT_EQ(spec.star_label(spec.x_star()), "x*");
  EXPECT_EQ(spec.target->m(), 3);
}

TEST(ExtendProfile, ConditionsHold) {
  const auto spec = make_collapse_spec(3, 4, kA, kC);
  for (const auto& p : spec.target->profiles()) {
    const auto ext = extend_profile(p, spec);
    ASSERT_FALSE(ext.extensions.empty()) << ext.diagnostic;
    for (const auto& r : ext.extensions) {
      EXPECT_TRUE(spec.source->contains(r));
      EXPECT_EQ(fuse(r, spec), p);
      for (int i = 0; i < 3; ++i) {
        const int at = position(p.voter(i), spec.x_star());
        EXPECT_EQ(std::min(position(r.voter(i), spec.w), position(r.voter(i), spec.z)), at);
      }
    }
  }
}

TEST(CollapseRule, DictatorsWellDefinedFullRange) {
  for (auto [w, z] : all_pairs(4)) {
    const auto spec = make_collapse_spec(3, 4, w, z);
    for (int i = 0; i < 3; ++i) {
      const auto res = collapse_rule(Rule::dictator(spec.source, i), spec);
      EXPECT_TRUE(res.well_defined());
      EXPECT_EQ(range_of(*res.rule, *spec.target).attained.size(), 3u);
      const auto dict = Rule::dictator(spec.target, i);
      for (std::size_t k = 0; k < spec.target->size(); ++k) EXPECT_EQ(res.rule->evaluate_at(k), dict.evaluate_at(k));
    }
  }
}

TEST(CollapseRule, Constant) {
  const auto spec = make_collapse_spec(3, 4, kA, kB);
  const auto res = collapse_rule(Rule::constant(spec.source, kD), spec);
  EXPECT_TRUE(res.well_defined());
  EXPECT_EQ(range_of(*res.rule, *spec.target).attained, std::vector<Alternative>{spec.to_star(kD)});
}

TEST(CollapseRule, ReportsDisagreement) {
  // Picks w or z depending on the block order; not strategy-proof.
  const auto spec = make_collapse_spec(3, 4, kA, kB);
  std::vector<Alternative> values;
  for (const auto& r : spec.source->profiles()) values.push_back(r.voter(0).prefers(kA, kB) ? kA : kC);
  const auto res = collapse_rule(Rule::table(spec.source, values), spec);
  EXPECT_FALSE(res.well_defined());
  EXPECT_FALSE(res.disagreements.empty());
}

TEST(ReduceSigmaStep, Trivial) {
  const auto np = enumerate_np(3, 4);
  const auto g = Rule::dictator(np, 0);
  const auto r = P("abcd|dcba|bdac", 3, 4);
  EXPECT_EQ(reduce_sigma_step(g, r, {1, kC, kB}).kind, StepKind::kCertifiedTrivial);
  EXPECT_NPV_ERROR(reduce_sigma_step(g, r, {1, kB, kC}), ErrorKind::kContract);
  // voter 1 picks a, which lies between d and b for voter 3
  EXPECT_NPV_ERROR(reduce_sigma_step(g, r, {2, kD, kC}), ErrorKind::kContract);
}

void check_step(const Rule& g, const Profile& r, const ReductionContext& ctx, const StepOutcome& out) {
  const int j = ctx.voter;
  const Ordering& before = r.voter(j);
  const Alternative x = g.evaluate(r);
  ASSERT_NE(out.kind, StepKind::kViolation) << out.detail;
  if (out.kind != StepKind::kFound) {
    // No single barriered move stays in the domain.
    const Alternative moved = ctx.part == StepPart::kRaiseLower ? ctx.b : ctx.a;
    const Alternative barrier = ctx.part == StepPart::kRaiseLower ? ctx.a : ctx.b;
    for (int t = before.rank_of(ctx.a) + 1; t < before.rank_of(ctx.b); ++t) {
      const Profile u = r.with_voter(j, apply_move(before, ShiftMove{moved, t + 1, barrier}));
      EXPECT_FALSE(g.domain().contains(u)) << encode_profile(r) << " -> " << encode_profile(u);
    }
    return;
  }
  ASSERT_TRUE(out.found);
  const Profile& u = *out.found;
  ASSERT_TRUE(g.domain().contains(u));
  EXPECT_EQ(g.evaluate(u), x);
  for (int i = 0; i < r.n(); ++i)
    if (i != j) { EXPECT_EQ(u.voter(i), r.voter(i)); }
  const Ordering& after = u.voter(j);
  const int ra = before.rank_of(ctx.a), rb = before.rank_of(ctx.b);
  for (int k = 0; k < r.m(); ++k)
    if (k < ra || k > rb) { EXPECT_EQ(after.at(k), before.at(k)); }
  EXPECT_LT(between(after, ctx.a, ctx.b).size(), between(before, ctx.a, ctx.b).size());
  EXPECT_TRUE(after.prefers(ctx.a, ctx.b));
  for (int c = 0; c < r.m(); ++c)
    if (after.prefers(Alternative{c}, x)) { EXPECT_TRUE(before.prefers(Alternative{c}, x)); }
  EXPECT_FALSE(out.moves.empty());
}

TEST(ReduceSigmaStep, DictatorOtherVoterExhaustive) {
  const auto np = enumerate_np(3, 4);
  const auto g = Rule::dictator(np, 0);
  std::size_t found = 0, certified = 0;
  for (const auto& r : np->profiles()) {
    const Alternative x = g.evaluate(r);
    for (int j = 1; j < 3; ++j) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          const Alternative A{a}, B{b};
          if (a == b || !r.voter(j).prefers(A, B)) continue;
          const auto ys = between(r.voter(j), A, B);
          if (ys.empty() || std::find(ys.begin(), ys.end(), x) != ys.end()) continue;
          for (StepPart part : {StepPart::kRaiseLower, StepPart::kLowerUpper}) {
            if (part == StepPart::kLowerUpper && x == A) continue;
            const ReductionContext ctx{j, A, B, part};
            const auto out = reduce_sigma_step(g, r, ctx);
            check_step(g, r, ctx, out);
            (out.kind == StepKind::kFound ? found : certified)++;
          }
        }
      }
    }
  }
  EXPECT_GT(found, 0u);
  EXPECT_GT(certified, 0u);
}

void check_descent(const Rule& g, const Profile& r, const CollapseSpec& spec, const DescentResult& res) {
  ASSERT_TRUE(res.ok) << res.failure;
  ASSERT_FALSE(res.path.empty());
  EXPECT_EQ(res.path.front().profile, r);
  EXPECT_EQ(res.path.front().move, "start");
  const Alternative x = g.evaluate(r);
  const bool in_block = x == spec.w || x == spec.z;
  for (std::size_t k = 0; k < res.path.size(); ++k) {
    const auto& s = res.path[k];
    EXPECT_TRUE(g.domain().contains(s.profile));
    EXPECT_EQ(s.sigma, sigma(s.profile, spec.w, spec.z).total);
    EXPECT_EQ(s.value, g.evaluate(s.profile));
    if (k) { EXPECT_LT(s.sigma, res.path[k - 1].sigma); }
    if (in_block) {
      EXPECT_TRUE(s.value == spec.w || s.value == spec.z);
    } else {
      EXPECT_EQ(s.value, x);
    }
  }
  EXPECT_EQ(res.path.back().sigma, 0);
}

TEST(ReduceToContiguous, AlreadyContiguous) {
  const auto spec = make_collapse_spec(3, 4, kA, kC);
  const auto rule = Rule::dictator(spec.source, 1);
  const auto r = P("acbd|dbca|cadb", 3, 4);
  const auto res = reduce_to_contiguous(rule, r, spec);
  ASSERT_TRUE(res.ok);
  ASSERT_EQ(res.path.size(), 1u);
  EXPECT_EQ(format_trace(res, 4), "σ=0 profile=acbd|dbca|cadb value=d move=start\n");
}

TEST(ReduceToContiguous, DictatorTwoExhaustive) {
  const auto spec = make_collapse_spec(3, 4, kB, kD);
  const auto g = Rule::dictator(spec.source, 1);
  const auto collapsed = collapse_rule(g, spec);
  ASSERT_TRUE(collapsed.well_defined());
  for (const auto& r : spec.source->profiles()) {
    const auto res = reduce_to_contiguous(g, r, spec);
    check_descent(g, r, spec, res);
    if (!res.ok) break;
    const Profile& last = res.path.back().profile;
    const Profile p = fuse(last, spec);
    EXPECT_EQ(collapsed.rule->evaluate(p), spec.to_star(res.path.back().value));
  }
}

TEST(ReduceToContiguous, TraceLines) {
  const auto spec = make_collapse_spec(3, 4, kA, kD);
  const auto g = Rule::dictator(spec.source, 0);
  const auto r = P("abcd|dcba|bdac", 3, 4);
  const auto res = reduce_to_contiguous(g, r, spec);
  ASSERT_TRUE(res.ok) << res.failure;
  const auto trace = format_trace(res, 4);
  EXPECT_EQ(static_cast<std::size_t>(std::count(trace.begin(), trace.end(), '\n')), res.path.size());
  EXPECT_EQ(trace.rfind("σ=4 profile=abcd|dcba|bdac value=a move=start", 0), 0u);
}

TEST(ReduceToContiguous, MuFallbackFires) {
  // Without the direct raise, some descents need the dictator fallback.
  const auto spec = make_collapse_spec(3, 4, kA, kB);
  const auto g = Rule::dictator(spec.source, 2);
  std::size_t fired = 0;
  for (const auto& r : spec.source->profiles()) {
    const auto res = reduce_to_contiguous(g, r, spec, {.skip_direct_raise = true});
    if (!res.ok) continue;
    check_descent(g, r, spec, res);
    for (const auto& s : res.path) fired += s.move.find(".mu[dictator") != std::string::npos;
  }
  EXPECT_GT(fired, 0u);
}

}  // namespace
}  // namespace npv
