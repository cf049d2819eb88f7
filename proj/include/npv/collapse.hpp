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

#ifndef NPV_COLLAPSE_HPP_
#define NPV_COLLAPSE_HPP_

// Fusing two alternatives w, z of an (m+1)-alternative rule into a fresh x*,
// the sigma statistic, the barriered moves that shrink it, and the descent
// that carries any profile to one where w and z are adjacent for everybody.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "npv/orders.hpp"
#include "npv/profiles.hpp"
#include "npv/rules.hpp"

namespace npv {

// X* numbering: the kept alternatives of X \ {w,z} in increasing order take
// 0..m-2 and x* is m-1.
struct CollapseSpec {
  Alternative w;
  Alternative z;
  DomainPtr source;  // NP(n, m+1)
  DomainPtr target;  // NP(n, m) over X*
  std::vector<Alternative> kept;  // X* index -> alternative of X (x* excluded)

  int n() const { return source->n(); }
  Alternative x_star() const { return Alternative{static_cast<int>(kept.size())}; }
  // w and z go to x*, every other alternative to its X* index.
  Alternative to_star(Alternative a) const;
  // Printable name of an X* alternative: the letter of its X counterpart, or "x*".
  std::string star_label(Alternative a) const;
};

// Throws kInvalidPair when w == z and kInvalidAlternative outside X. Pass
// `source` to reuse an enumerated NP(n, m_plus_1).
CollapseSpec make_collapse_spec(int n, int m_plus_1, Alternative w, Alternative z, DomainPtr source = nullptr);

struct SigmaStats {
  std::vector<int> per_voter;
  int total = 0;
};

// Alternatives strictly between a and b, per voter. Throws kInvalidPair if a == b.
SigmaStats sigma(const Profile& p, Alternative a, Alternative b);

// Members of NP(n, m_plus_1) in which w and z are adjacent for every voter.
DomainPtr contiguous_domain(int n, int m_plus_1, Alternative w, Alternative z);
DomainPtr contiguous_domain(const Domain& np, Alternative w, Alternative z);

struct ExtensionResult {
  std::vector<Profile> extensions;  // canonical order
  std::string diagnostic;           // set when there are none
};

// Every r in NP^wz that agrees with p off {w,z} and puts the (w,z) block where
// p has x*. Throws kMembership unless p is in the target domain.
ExtensionResult extend_profile(const Profile& p, const CollapseSpec& spec);

struct CollapseDisagreement {
  std::size_t target_index;
  std::vector<std::pair<Profile, Alternative>> values;  // extension, g value in X
};

struct CollapseResult {
  RulePtr rule;  // over spec.target
  std::vector<CollapseDisagreement> disagreements;
  std::vector<std::size_t> unextendable;  // target indices without extensions

  bool well_defined() const { return disagreements.empty() && unextendable.empty(); }
};

// g*(p) = image of g on the extensions of p. Inconsistent or unextendable
// profiles are reported; they receive the first extension's value, or x*.
CollapseResult collapse_rule(const Rule& g, const CollapseSpec& spec);

enum class StepPart { kRaiseLower, kLowerUpper };

// One barriered bracket step: voter j with a above b,
// either raising b toward a or lowering a toward b.
struct ReductionContext {
  int voter = 0;
  Alternative a;
  Alternative b;
  StepPart part = StepPart::kRaiseLower;
};

enum class StepKind {
  kFound,             // a smaller-sigma profile with the same value
  kCertified,         // unanimity condition holds for the other voters
  kCertifiedTrivial,  // nothing between a and b
  kViolation,         // a move that should keep the value did not
};

std::string_view to_string(StepKind k);

struct StepOutcome {
  StepKind kind = StepKind::kCertifiedTrivial;
  std::optional<Profile> found;
  std::vector<std::string> moves;  // sub-moves applied to reach `found`
  std::string detail;
};

// Throws kContract when a does not rank above b for the voter, or g(r) is in
// the bracket (or equals a when lowering a).
StepOutcome reduce_sigma_step(const Rule& g, const Profile& r, const ReductionContext& ctx);

struct DescentOptions {
  // Skip the one-swap shortcut before the three-alternative dictator argument.
  bool skip_direct_raise = false;
  std::size_t max_steps = 10'000;
};

struct DescentStep {
  Profile profile;
  int sigma = 0;
  Alternative value;
  std::string move;  // how this profile was reached; "start" for r0
};

struct DescentResult {
  bool ok = false;
  std::vector<DescentStep> path;
  std::string failure;  // full context when !ok
};

DescentResult reduce_to_contiguous(const Rule& g, const Profile& r, const CollapseSpec& spec,
                                   const DescentOptions& options = {});

// `σ=<k> profile=<enc> value=<letter> move=<desc>` per step.
std::string format_trace(const DescentResult& result, int m);

}  // namespace npv

#endif  // NPV_COLLAPSE_HPP_
