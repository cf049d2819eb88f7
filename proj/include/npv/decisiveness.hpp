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

#ifndef NPV_DECISIVENESS_HPP_
#define NPV_DECISIVENESS_HPP_

// Decisive coalitions for two-valued rules.
//
// C is decisive for a against b on d when every test profile of d (members of
// C rank a over b, everyone else ranks b over a) selects a. When d holds no
// test profile the answer is "vacuous", kept apart from true.

#include <cstdint>
#include <string>
#include <vector>

#include "npv/orders.hpp"
#include "npv/profiles.hpp"
#include "npv/rules.hpp"

namespace npv {

class Coalition {
 public:
  Coalition() = default;
  explicit Coalition(std::uint32_t mask) : mask_(mask) {}
  // 0-based members.
  static Coalition of(std::initializer_list<int> members);

  std::uint32_t mask() const { return mask_; }
  bool contains(int voter) const { return (mask_ >> voter) & 1u; }
  bool empty() const { return mask_ == 0; }
  int size() const;
  bool subset_of(const Coalition& other) const { return (mask_ & ~other.mask_) == 0; }
  bool proper_subset_of(const Coalition& other) const { return subset_of(other) && mask_ != other.mask_; }
  Coalition with(int voter) const { return Coalition(mask_ | (1u << voter)); }
  std::vector<int> members() const;

  friend auto operator<=>(const Coalition&, const Coalition&) = default;

 private:
  std::uint32_t mask_ = 0;
};

// `{1,3}` (1-based).
std::string format_coalition(const Coalition& c);

enum class Decisiveness { kDecisive, kNotDecisive, kVacuous };

std::string_view to_string(Decisiveness d);

// Throws kInvalidPair when a == b.
Decisiveness is_decisive(const Rule& g, const Domain& d, const Coalition& c, Alternative a, Alternative b);

struct CoalitionEntry {
  Coalition coalition;
  Decisiveness outcome;
};

struct DecisivenessReport {
  Alternative a;
  Alternative b;
  std::vector<CoalitionEntry> entries;  // every nonempty proper coalition, by mask
  std::vector<Coalition> decisive;
  std::vector<Coalition> minimal;
  std::vector<Coalition> vacuous;
  // Supersets (within proper coalitions) of decisive coalitions are decisive.
  bool monotone = true;
  // Range(g|d) is not within {a, b}.
  bool range_warning = false;
};

struct DecisivenessOptions {
  int coalition_cap = 12;
};

DecisivenessReport minimal_decisive_families(const Rule& g, const Domain& d, Alternative a, Alternative b,
                                             const DecisivenessOptions& options = {});

// `{1,3} y>z : decisive|not|vacuous`, one line per coalition.
std::string format_report(const DecisivenessReport& report, int m);

struct TransferItem {
  int item = 0;           // 1..4
  Alternative a;          // decisive for a ...
  Alternative b;          // ... against b
  bool antecedent = false;
  bool consequent = false;
  bool holds() const { return !antecedent || consequent; }
  std::string detail;
};

struct TransferReport {
  Coalition coalition;
  std::vector<TransferItem> items;  // items 1-4 for (a,b) then for (b,a)
  bool all_hold() const;
};

// Checks, for the given g on NP(n,m) and C within voters 1..n-2, the four
// statements relating decisiveness for the clone collapse g* on NP(n-1,m) and
// for g restricted to NP*(n,m):
//   1. C decisive for g*                 => C decisive for g|NP*
//   2. C minimally decisive for g*       => C minimally decisive for g|NP*
//   3. C+{n-1} decisive for g*           => C+{n-1,n} decisive for g|NP*
//   4. C+{n-1} minimally decisive for g* => no proper subset C' of C has
//      C'+{n-1,n} decisive for g|NP*
TransferReport transfer_check(const RulePtr& g, const Coalition& c, Alternative a, Alternative b);

}  // namespace npv

#endif  // NPV_DECISIVENESS_HPP_
