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

#ifndef NPV_RULES_HPP_
#define NPV_RULES_HPP_

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "npv/orders.hpp"
#include "npv/profiles.hpp"

namespace npv {

class Rule;
using RulePtr = std::shared_ptr<const Rule>;

// Voter's top alternative.
struct DictatorBody {
  int voter = 0;
};
struct ConstantBody {
  Alternative value;
};
// y iff every voter in 1..n-2 ranks y over x and at least one of n-1, n does;
// otherwise x.
struct Example1Body {};
// Duplicates voter n-1 of the (n-1)-voter profile as voter n and asks `inner`.
struct CloneCollapsedBody {
  RulePtr inner;
};
struct TableBody {
  std::vector<Alternative> values;  // aligned with the domain's canonical index
};

// A social choice rule: a total map from a materialized domain to alternatives.
class Rule {
 public:
  using Body = std::variant<TableBody, DictatorBody, ConstantBody, Example1Body, CloneCollapsedBody>;

  static Rule table(DomainPtr domain, std::vector<Alternative> values);
  static Rule dictator(DomainPtr domain, int voter);
  static Rule constant(DomainPtr domain, Alternative value);
  static Rule example1(DomainPtr domain);
  static Rule clone_collapsed(DomainPtr domain, RulePtr inner);

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const Body& body() const { return body_; }
  bool is_table() const { return std::holds_alternative<TableBody>(body_); }

  // Throws kMembership when p is outside the domain.
  Alternative evaluate(const Profile& p) const;
  Alternative evaluate_at(std::size_t index) const;

  Rule materialize() const;
  std::string describe() const;

 private:
  Rule(DomainPtr domain, Body body);
  Alternative evaluate_intensional(const Profile& p) const;

  DomainPtr domain_;
  Body body_;
};

Alternative evaluate(const Rule& g, const Profile& p);

// The example1 rule on NP(n,3); n must exceed 3.
Rule example1_rule(int n);
Rule example1_rule(DomainPtr np_domain);

struct RangeReport {
  std::vector<Alternative> attained;            // ascending
  std::map<Alternative, std::size_t> witnesses;  // alternative -> index in the queried domain

  bool contains(Alternative a) const { return witnesses.count(a) != 0; }
};

// Range of g over d (d must be a subset of g's domain).
RangeReport range_of(const Rule& g, const Domain& d);

struct DictatorReport {
  int voter = 0;
  // Singleton range: every voter is vacuously a dictator; voter 0 is reported.
  bool degenerate = false;
};

// Least voter whose top within Range(g|d) is always chosen on d.
std::optional<DictatorReport> is_dictatorial(const Rule& g, const Domain& d);

// The profile with voter n-1 duplicated as voter n.
Profile lift_clone(const Profile& u);

// Clone collapse of a rule on NP(n,m): a rule on NP(n-1,m). Pass `target` to
// reuse an already enumerated NP(n-1,m).
Rule clone_collapse(const RulePtr& g, DomainPtr target = nullptr);

// Text table: header `n=<n> m=<m> kind=NP`, then `<profile> -> <letter>` per line.
void write_rule_table(const Rule& g, std::ostream& out);
// Rebuilds NP(n,m) and requires every member exactly once.
Rule read_rule_table(std::istream& in);

}  // namespace npv

#endif  // NPV_RULES_HPP_
