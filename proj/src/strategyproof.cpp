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

#include <algorithm>
#include <deque>

#include "npv/error.hpp"

namespace npv {

std::optional<ManipulationWitness> find_manipulation(const Rule& g, const Domain& d) {
  std::vector<Alternative> values;
  values.reserve(d.size());
  const bool same = &g.domain() == &d;
  for (std::size_t k = 0; k < d.size(); ++k) values.push_back(same ? g.evaluate_at(k) : g.evaluate(d.profile(k)));

  for (std::size_t p = 0; p < d.size(); ++p) {
    for (int h = 0; h < d.n(); ++h) {
      for (std::size_t q : d.variant_indices(p, h)) {
        if (q < p) continue;
        if (d.profile(p).voter(h).prefers(values[q], values[p])) {
          return ManipulationWitness{p, q, h, values[p], values[q]};
        }
        if (d.profile(q).voter(h).prefers(values[p], values[q])) {
          return ManipulationWitness{q, p, h, values[q], values[p]};
        }
      }
    }
  }
  return std::nullopt;
}

std::string format_witness(const Domain& d, const ManipulationWitness& w) {
  return "voter " + voter_label(w.voter) + " manipulates at " + encode_profile(d.profile(w.at)) + " via " +
         encode_profile(d.profile(w.via)) + ": g=" + alternative_letter(w.outcome_at, d.m()) +
         " -> g=" + alternative_letter(w.outcome_via, d.m());
}

std::optional<SequencePath> standard_sequence(const Domain& d, const Profile& from, const Profile& to,
                                              const std::vector<int>& order) {
  d.index_of(from);
  d.index_of(to);
  for (int i = 0; i < d.n(); ++i) {
    if (from.voter(i) != to.voter(i) && std::find(order.begin(), order.end(), i) == order.end()) {
      fail(ErrorKind::kInvalidArgument, "voter " + voter_label(i) + " differs but is not in the sequence order");
    }
  }
  SequencePath path;
  Profile current = from;
  for (int i : order) {
    if (i < 0 || i >= d.n()) fail(ErrorKind::kInvalidArgument, "voter out of range in sequence order");
    if (current.voter(i) == to.voter(i)) continue;
    current = current.with_voter(i, to.voter(i));
    const auto index = d.find(current);
    if (!index) return std::nullopt;
    path.steps.push_back(SequenceStep{*index, i});
  }
  return path;
}

std::optional<SequencePath> standard_sequence(const Domain& d, const Profile& from, const Profile& to) {
  std::vector<int> order(static_cast<std::size_t>(d.n()));
  for (int i = 0; i < d.n(); ++i) order[static_cast<std::size_t>(i)] = i;
  return standard_sequence(d, from, to, order);
}

namespace {

// Values of q still supported by p's candidate set, for h-variants p, q.
AltSet supported(const Domain& d, std::size_t p, std::size_t q, int h, const AltSet& from_p) {
  const Ordering& op = d.profile(p).voter(h);
  const Ordering& oq = d.profile(q).voter(h);
  AltSet out;
  for (int b = 0; b < d.m(); ++b) {
    for (int a = 0; a < d.m(); ++a) {
      if (!from_p.test(static_cast<std::size_t>(a))) continue;
      if (!op.prefers(Alternative{b}, Alternative{a}) && !oq.prefers(Alternative{a}, Alternative{b})) {
        out.set(static_cast<std::size_t>(b));
        break;
      }
    }
  }
  return out;
}

}  // namespace

PropagationResult propagate_candidates(const Domain& d, std::vector<AltSet> candidates) {
  if (candidates.size() != d.size()) fail(ErrorKind::kInvalidArgument, "one candidate set per profile expected");
  PropagationResult result;
  AltSet full;
  for (int a = 0; a < d.m(); ++a) full.set(static_cast<std::size_t>(a));

  std::deque<std::size_t> queue;
  std::vector<bool> queued(d.size(), false);
  for (std::size_t k = 0; k < d.size(); ++k) {
    candidates[k] &= full;
    if (candidates[k].none() && !result.contradiction) result.contradiction = k;
    if (candidates[k] != full) {
      queue.push_back(k);
      queued[k] = true;
    }
  }
  while (!queue.empty() && !result.contradiction) {
    const std::size_t p = queue.front();
    queue.pop_front();
    queued[p] = false;
    for (int h = 0; h < d.n() && !result.contradiction; ++h) {
      for (std::size_t q : d.variant_indices(p, h)) {
        const AltSet narrowed = candidates[q] & supported(d, p, q, h, candidates[p]);
        if (narrowed == candidates[q]) continue;
        candidates[q] = narrowed;
        if (narrowed.none()) {
          result.contradiction = q;
          break;
        }
        if (!queued[q]) {
          queue.push_back(q);
          queued[q] = true;
        }
      }
    }
  }
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (candidates[k].count() == 1) {
      for (int a = 0; a < d.m(); ++a) {
        if (candidates[k].test(static_cast<std::size_t>(a))) result.assignments.emplace(k, Alternative{a});
      }
    }
  }
  result.candidates = std::move(candidates);
  return result;
}

PropagationResult forced_value_propagation(const Domain& d, const std::map<std::size_t, Alternative>& assignments) {
  AltSet full;
  for (int a = 0; a < d.m(); ++a) full.set(static_cast<std::size_t>(a));
  std::vector<AltSet> candidates(d.size(), full);
  for (const auto& [k, a] : assignments) {
    if (k >= d.size() || a.index < 0 || a.index >= d.m()) fail(ErrorKind::kInvalidArgument, "assignment out of range");
    candidates[k] = AltSet{}.set(static_cast<std::size_t>(a.index));
  }
  return propagate_candidates(d, std::move(candidates));
}

}  // namespace npv
