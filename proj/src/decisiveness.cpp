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

#include <bit>
#include <unordered_map>

#include "npv/error.hpp"

namespace npv {

Coalition Coalition::of(std::initializer_list<int> members) {
  std::uint32_t mask = 0;
  for (int v : members) mask |= 1u << v;
  return Coalition(mask);
}

int Coalition::size() const { return std::popcount(mask_); }

std::vector<int> Coalition::members() const {
  std::vector<int> out;
  for (int v = 0; v < 32; ++v) {
    if (contains(v)) out.push_back(v);
  }
  return out;
}

std::string format_coalition(const Coalition& c) {
  std::string out = "{";
  bool first = true;
  for (int v : c.members()) {
    if (!first) out += ",";
    out += voter_label(v);
    first = false;
  }
  return out + "}";
}

std::string_view to_string(Decisiveness d) {
  switch (d) {
    case Decisiveness::kDecisive: return "decisive";
    case Decisiveness::kNotDecisive: return "not";
    case Decisiveness::kVacuous: return "vacuous";
  }
  return "?";
}

namespace {

void check_pair(const Domain& d, Alternative a, Alternative b) {
  if (a == b) fail(ErrorKind::kInvalidPair, "decisiveness needs distinct alternatives");
  if (a.index < 0 || a.index >= d.m() || b.index < 0 || b.index >= d.m()) {
    fail(ErrorKind::kInvalidAlternative, "alternative outside the domain's universe");
  }
}

// Per test-profile pattern (mask of voters ranking a over b): whether a
// profile with that pattern exists and whether all of them select a.
struct PatternSummary {
  bool seen = false;
  bool always_a = true;
};

std::unordered_map<std::uint32_t, PatternSummary> summarize(const Rule& g, const Domain& d, Alternative a,
                                                            Alternative b, bool* range_warning) {
  std::unordered_map<std::uint32_t, PatternSummary> out;
  const bool same = &g.domain() == &d;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Profile& p = d.profile(k);
    std::uint32_t mask = 0;
    for (int i = 0; i < d.n(); ++i) {
      if (p.voter(i).prefers(a, b)) mask |= 1u << i;
    }
    const Alternative value = same ? g.evaluate_at(k) : g.evaluate(p);
    if (range_warning && value != a && value != b) *range_warning = true;
    PatternSummary& s = out[mask];
    s.seen = true;
    if (value != a) s.always_a = false;
  }
  return out;
}

Decisiveness classify(const std::unordered_map<std::uint32_t, PatternSummary>& summary, const Coalition& c) {
  const auto it = summary.find(c.mask());
  if (it == summary.end() || !it->second.seen) return Decisiveness::kVacuous;
  return it->second.always_a ? Decisiveness::kDecisive : Decisiveness::kNotDecisive;
}

}  // namespace

Decisiveness is_decisive(const Rule& g, const Domain& d, const Coalition& c, Alternative a, Alternative b) {
  check_pair(d, a, b);
  return classify(summarize(g, d, a, b, nullptr), c);
}

DecisivenessReport minimal_decisive_families(const Rule& g, const Domain& d, Alternative a, Alternative b,
                                             const DecisivenessOptions& options) {
  check_pair(d, a, b);
  if (d.n() > options.coalition_cap) {
    fail(ErrorKind::kCoalitionCap, "n=" + std::to_string(d.n()) + " exceeds the coalition cap of " +
                                       std::to_string(options.coalition_cap));
  }
  DecisivenessReport report;
  report.a = a;
  report.b = b;
  const auto summary = summarize(g, d, a, b, &report.range_warning);
  const std::uint32_t everyone = (1u << d.n()) - 1;
  std::vector<Decisiveness> outcome(everyone + 1, Decisiveness::kNotDecisive);
  for (std::uint32_t mask = 1; mask < everyone; ++mask) {
    const Coalition c(mask);
    outcome[mask] = classify(summary, c);
    report.entries.push_back(CoalitionEntry{c, outcome[mask]});
    if (outcome[mask] == Decisiveness::kDecisive) report.decisive.push_back(c);
    if (outcome[mask] == Decisiveness::kVacuous) report.vacuous.push_back(c);
  }
  for (const Coalition& c : report.decisive) {
    bool minimal = true;
    // Proper nonempty submasks.
    for (std::uint32_t sub = (c.mask() - 1) & c.mask(); sub != 0 && minimal; sub = (sub - 1) & c.mask()) {
      if (outcome[sub] == Decisiveness::kDecisive) minimal = false;
    }
    if (minimal) report.minimal.push_back(c);
  }
  // Vacuous supersets carry no evidence either way and are skipped.
  for (const Coalition& c : report.decisive) {
    for (std::uint32_t super = c.mask(); super < everyone; super = (super + 1) | c.mask()) {
      if (outcome[super] == Decisiveness::kNotDecisive) {
        report.monotone = false;
        break;
      }
    }
    if (!report.monotone) break;
  }
  return report;
}

std::string format_report(const DecisivenessReport& report, int m) {
  std::string out;
  const std::string pair = std::string(1, alternative_letter(report.a, m)) + ">" + alternative_letter(report.b, m);
  for (const CoalitionEntry& e : report.entries) {
    out += format_coalition(e.coalition) + " " + pair + " : " + std::string(to_string(e.outcome)) + "\n";
  }
  return out;
}

bool TransferReport::all_hold() const {
  for (const TransferItem& item : items) {
    if (!item.holds()) return false;
  }
  return true;
}

namespace {

bool decisive(const DecisivenessReport& r, const Coalition& c) {
  if (c.empty()) return false;
  for (const CoalitionEntry& e : r.entries) {
    if (e.coalition == c) return e.outcome == Decisiveness::kDecisive;
  }
  return false;  // the full voter set is never a decisiveness candidate
}

bool minimally_decisive(const DecisivenessReport& r, const Coalition& c) {
  if (!decisive(r, c)) return false;
  for (std::uint32_t sub = (c.mask() - 1) & c.mask(); sub != 0; sub = (sub - 1) & c.mask()) {
    if (decisive(r, Coalition(sub))) return false;
  }
  return true;
}

}  // namespace

TransferReport transfer_check(const RulePtr& g, const Coalition& c, Alternative a, Alternative b) {
  if (!g) fail(ErrorKind::kInvalidArgument, "transfer check of a null rule");
  const Domain& np = g->domain();
  const int n = np.n();
  if (np.kind() != DomainKind::kNP || n < 3) fail(ErrorKind::kDomainKind, "transfer check needs a rule on NP, n >= 3");
  if (!c.subset_of(Coalition((1u << (n - 2)) - 1))) {
    fail(ErrorKind::kInvalidArgument, "coalition must lie within voters 1..n-2");
  }
  const auto gstar = std::make_shared<const Rule>(clone_collapse(g));
  const DomainPtr star = np_star(np);

  const int clone = n - 2;  // voter n-1 (1-based); the last voter of g*
  const Coalition with_clone = c.with(clone);
  const Coalition with_pair = c.with(n - 2).with(n - 1);

  TransferReport report;
  report.coalition = c;
  for (const auto& [from, against] : {std::pair{a, b}, std::pair{b, a}}) {
    const auto on_gstar = minimal_decisive_families(*gstar, gstar->domain(), from, against);
    const auto on_star = minimal_decisive_families(*g, *star, from, against);

    TransferItem i1{1, from, against, decisive(on_gstar, c), decisive(on_star, c), {}};
    TransferItem i2{2, from, against, minimally_decisive(on_gstar, c), minimally_decisive(on_star, c), {}};
    TransferItem i3{3, from, against, decisive(on_gstar, with_clone), decisive(on_star, with_pair), {}};
    TransferItem i4{4, from, against, minimally_decisive(on_gstar, with_clone), true, {}};
    for (std::uint32_t sub = (c.mask() - 1) & c.mask(); !c.empty(); sub = (sub - 1) & c.mask()) {
      const Coalition smaller = Coalition(sub).with(n - 2).with(n - 1);
      if (decisive(on_star, smaller)) {
        i4.consequent = false;
        i4.detail = format_coalition(smaller) + " is decisive on NP*";
        break;
      }
      if (sub == 0) break;
    }
    report.items.push_back(i1);
    report.items.push_back(i2);
    report.items.push_back(i3);
    report.items.push_back(i4);
  }
  return report;
}

}  // namespace npv
