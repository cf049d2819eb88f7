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

#include "npv/rules.hpp"

#include <algorithm>
#include <sstream>

#include "npv/error.hpp"

namespace npv {

Rule::Rule(DomainPtr domain, Body body) : domain_(std::move(domain)), body_(std::move(body)) {
  if (!domain_) fail(ErrorKind::kInvalidArgument, "rule without a domain");
}

Rule Rule::table(DomainPtr domain, std::vector<Alternative> values) {
  if (!domain) fail(ErrorKind::kInvalidArgument, "rule without a domain");
  if (values.size() != domain->size()) {
    fail(ErrorKind::kInvalidArgument, "table has " + std::to_string(values.size()) + " entries for a domain of " +
                                          std::to_string(domain->size()));
  }
  for (Alternative a : values) {
    if (a.index < 0 || a.index >= domain->m()) fail(ErrorKind::kInvalidAlternative, "table entry out of range");
  }
  return Rule(std::move(domain), TableBody{std::move(values)});
}

Rule Rule::dictator(DomainPtr domain, int voter) {
  if (!domain || voter < 0 || voter >= domain->n()) fail(ErrorKind::kInvalidArgument, "dictator voter out of range");
  return Rule(std::move(domain), DictatorBody{voter});
}

Rule Rule::constant(DomainPtr domain, Alternative value) {
  if (!domain || value.index < 0 || value.index >= domain->m()) {
    fail(ErrorKind::kInvalidAlternative, "constant value out of range");
  }
  return Rule(std::move(domain), ConstantBody{value});
}

Rule Rule::example1(DomainPtr domain) {
  if (!domain || domain->m() != 3 || domain->n() <= 3) {
    fail(ErrorKind::kUnsupportedParameters, "example1 is defined for m = 3 and n > 3");
  }
  return Rule(std::move(domain), Example1Body{});
}

Rule Rule::clone_collapsed(DomainPtr domain, RulePtr inner) {
  if (!domain || !inner || inner->domain().n() != domain->n() + 1 || inner->domain().m() != domain->m()) {
    fail(ErrorKind::kInvalidArgument, "clone collapse needs an inner rule on n+1 voters");
  }
  return Rule(std::move(domain), CloneCollapsedBody{std::move(inner)});
}

Alternative Rule::evaluate(const Profile& p) const {
  const auto index = domain_->find(p);
  if (!index) fail(ErrorKind::kMembership, "profile " + encode_profile(p) + " is not in the rule's domain");
  if (const auto* t = std::get_if<TableBody>(&body_)) return t->values[*index];
  return evaluate_intensional(p);
}

Alternative Rule::evaluate_at(std::size_t index) const {
  if (const auto* t = std::get_if<TableBody>(&body_)) return t->values[index];
  return evaluate_intensional(domain_->profile(index));
}

Alternative Rule::evaluate_intensional(const Profile& p) const {
  return std::visit(
      [&p](const auto& b) -> Alternative {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, DictatorBody>) {
          return p.voter(b.voter).top();
        } else if constexpr (std::is_same_v<T, ConstantBody>) {
          return b.value;
        } else if constexpr (std::is_same_v<T, Example1Body>) {
          const int n = p.n();
          for (int i = 0; i < n - 2; ++i) {
            if (!p.voter(i).prefers(kY, kX)) return kX;
          }
          return (p.voter(n - 2).prefers(kY, kX) || p.voter(n - 1).prefers(kY, kX)) ? kY : kX;
        } else if constexpr (std::is_same_v<T, CloneCollapsedBody>) {
          const Profile lifted = lift_clone(p);
          if (!b.inner->domain().contains(lifted)) {
            fail(ErrorKind::kContract, "lifted profile " + encode_profile(lifted) + " left the inner domain");
          }
          return b.inner->evaluate(lifted);
        } else {
          fail(ErrorKind::kContract, "table rules are evaluated by index");
        }
      },
      body_);
}

Rule Rule::materialize() const {
  if (is_table()) return *this;
  std::vector<Alternative> values;
  values.reserve(domain_->size());
  for (std::size_t k = 0; k < domain_->size(); ++k) values.push_back(evaluate_at(k));
  return table(domain_, std::move(values));
}

std::string Rule::describe() const {
  const int m = domain_->m();
  return std::visit(
      [m](const auto& b) -> std::string {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, DictatorBody>) {
          return "dictator(" + voter_label(b.voter) + ")";
        } else if constexpr (std::is_same_v<T, ConstantBody>) {
          return std::string("constant(") + alternative_letter(b.value, m) + ")";
        } else if constexpr (std::is_same_v<T, Example1Body>) {
          return "example1";
        } else if constexpr (std::is_same_v<T, CloneCollapsedBody>) {
          return "clone_collapse(" + b.inner->describe() + ")";
        } else {
          return "table";
        }
      },
      body_);
}

Alternative evaluate(const Rule& g, const Profile& p) { return g.evaluate(p); }

Rule example1_rule(int n) {
  if (n <= 3) fail(ErrorKind::kUnsupportedParameters, "example1 is defined for n > 3");
  return Rule::example1(enumerate_np(n, 3));
}

Rule example1_rule(DomainPtr np_domain) { return Rule::example1(std::move(np_domain)); }

namespace {

// Evaluates g on each member of d, preferring index lookups when d is g's own domain.
template <typename Fn>
void for_each_value(const Rule& g, const Domain& d, Fn fn) {
  const bool same = &g.domain() == &d;
  for (std::size_t k = 0; k < d.size(); ++k) {
    fn(k, same ? g.evaluate_at(k) : g.evaluate(d.profile(k)));
  }
}

}  // namespace

RangeReport range_of(const Rule& g, const Domain& d) {
  RangeReport report;
  for_each_value(g, d, [&report](std::size_t k, Alternative a) { report.witnesses.try_emplace(a, k); });
  for (const auto& [a, k] : report.witnesses) report.attained.push_back(a);
  return report;
}

std::optional<DictatorReport> is_dictatorial(const Rule& g, const Domain& d) {
  if (d.size() == 0) return std::nullopt;
  std::vector<Alternative> values;
  values.reserve(d.size());
  for_each_value(g, d, [&values](std::size_t, Alternative a) { values.push_back(a); });
  std::vector<bool> in_range(static_cast<std::size_t>(d.m()), false);
  int range_size = 0;
  for (Alternative a : values) {
    if (!in_range[static_cast<std::size_t>(a.index)]) {
      in_range[static_cast<std::size_t>(a.index)] = true;
      ++range_size;
    }
  }
  if (range_size == 1) return DictatorReport{0, true};
  for (int i = 0; i < d.n(); ++i) {
    bool dictates = true;
    for (std::size_t k = 0; k < d.size() && dictates; ++k) {
      const Ordering& o = d.profile(k).voter(i);
      for (int r = 0; r < o.size(); ++r) {
        if (in_range[static_cast<std::size_t>(o.at(r).index)]) {
          dictates = o.at(r) == values[k];
          break;
        }
      }
    }
    if (dictates) return DictatorReport{i, false};
  }
  return std::nullopt;
}

Profile lift_clone(const Profile& u) {
  std::vector<Ordering> voters = u.voters();
  voters.push_back(voters.back());
  return Profile(std::move(voters));
}

Rule clone_collapse(const RulePtr& g, DomainPtr target) {
  if (!g) fail(ErrorKind::kInvalidArgument, "clone collapse of a null rule");
  const Domain& source = g->domain();
  if (source.kind() != DomainKind::kNP) fail(ErrorKind::kDomainKind, "clone collapse needs a rule on NP");
  if (source.n() < 3) fail(ErrorKind::kUnsupportedParameters, "clone collapse needs n >= 3");
  if (!target) target = enumerate_np(source.n() - 1, source.m());
  if (target->kind() != DomainKind::kNP || target->n() != source.n() - 1 || target->m() != source.m()) {
    fail(ErrorKind::kDomainKind, "clone collapse target must be NP(n-1,m)");
  }
  return Rule::clone_collapsed(std::move(target), g);
}

void write_rule_table(const Rule& g, std::ostream& out) {
  const Domain& d = g.domain();
  out << "n=" << d.n() << " m=" << d.m() << " kind=NP\n";
  for (std::size_t k = 0; k < d.size(); ++k) {
    out << encode_profile(d.profile(k)) << " -> " << alternative_letter(g.evaluate_at(k), d.m()) << '\n';
  }
}

Rule read_rule_table(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) fail(ErrorKind::kParse, "empty rule table");
  int n = 0;
  int m = 0;
  std::string kind;
  {
    std::istringstream hs(header);
    std::string field;
    while (hs >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) fail(ErrorKind::kParse, "bad header field '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      try {
        if (key == "n") {
          n = std::stoi(value);
        } else if (key == "m") {
          m = std::stoi(value);
        } else if (key == "kind") {
          kind = value;
        } else {
          fail(ErrorKind::kParse, "unknown header key '" + key + "'");
        }
      } catch (const std::logic_error&) {
        fail(ErrorKind::kParse, "bad header value '" + field + "'");
      }
    }
  }
  if (n <= 0 || m <= 0 || kind != "NP") fail(ErrorKind::kParse, "header must read 'n=<n> m=<m> kind=NP'");
  DomainPtr domain = enumerate_np(n, m);
  std::vector<int> values(domain->size(), -1);
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto arrow = line.find(" -> ");
    if (arrow == std::string::npos || arrow + 5 != line.size()) {
      fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected '<profile> -> <letter>'");
    }
    const Profile p = decode_profile(std::string_view(line).substr(0, arrow), n, m);
    const auto index = domain->find(p);
    if (!index) fail(ErrorKind::kMembership, "line " + std::to_string(line_no) + ": profile not in NP");
    const auto a = parse_alternative(line.back(), m);
    if (!a) fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": bad alternative letter");
    if (values[*index] >= 0) fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": duplicate profile");
    values[*index] = a->index;
  }
  std::vector<Alternative> table;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] < 0) fail(ErrorKind::kParse, "profile " + encode_profile(domain->profile(k)) + " missing");
    table.push_back(Alternative{values[k]});
  }
  return Rule::table(std::move(domain), std::move(table));
}

}  // namespace npv
