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

#ifndef NPV_STRATEGYPROOF_HPP_
#define NPV_STRATEGYPROOF_HPP_

#include <bitset>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "npv/profiles.hpp"
#include "npv/rules.hpp"

namespace npv {

// Voter `voter` gains at profile `at` by reporting their ordering from `via`.
struct ManipulationWitness {
  std::size_t at = 0;
  std::size_t via = 0;
  int voter = 0;
  Alternative outcome_at;
  Alternative outcome_via;
};

// Scans each unordered h-variant pair of d once (lower index first) and tests
// both directions. Absent iff g is strategy-proof on d.
std::optional<ManipulationWitness> find_manipulation(const Rule& g, const Domain& d);

// `voter h manipulates at <profile> via <profile>: g=<a> -> g=<b>`
std::string format_witness(const Domain& d, const ManipulationWitness& w);

struct SequenceStep {
  std::size_t profile = 0;  // index in the domain after this step
  int voter = 0;            // voter whose ordering changed
};

struct SequencePath {
  std::vector<SequenceStep> steps;
};

// Replaces voters' orderings one at a time (in `order`, skipping voters that
// already agree) from `from` to `to`. Absent if an intermediate profile leaves
// d. Every voter that differs must appear in `order`.
std::optional<SequencePath> standard_sequence(const Domain& d, const Profile& from, const Profile& to,
                                              const std::vector<int>& order);
// Ascending voter order.
std::optional<SequencePath> standard_sequence(const Domain& d, const Profile& from, const Profile& to);

using AltSet = std::bitset<kMaxAlternatives>;

struct PropagationResult {
  std::vector<AltSet> candidates;                 // per domain index
  std::optional<std::size_t> contradiction;       // first profile whose set emptied
  std::map<std::size_t, Alternative> assignments;  // profiles narrowed to one value

  bool consistent() const { return !contradiction.has_value(); }
};

// Arc consistency of the strategy-proofness constraint between h-variants:
// b stays possible at q only if some a possible at p makes neither
// b >_{p(h)} a nor a >_{q(h)} b.
PropagationResult propagate_candidates(const Domain& d, std::vector<AltSet> candidates);

// Starts from the given assignments (everything else unconstrained).
PropagationResult forced_value_propagation(const Domain& d, const std::map<std::size_t, Alternative>& assignments);

}  // namespace npv

#endif  // NPV_STRATEGYPROOF_HPP_
