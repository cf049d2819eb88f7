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

#ifndef NPV_PROFILES_HPP_
#define NPV_PROFILES_HPP_

// Profiles (one ordering per voter) and materialized, canonically indexed
// domains of profiles: NP (no Pareto domination), NP* (last two voters
// agree), and NP^wz (w and z adjacent for every voter).
//
// Voters are 0-based here; every user-facing string numbers them from 1.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "npv/orders.hpp"

namespace npv {

class Profile {
 public:
  Profile() = default;
  // Throws kInvalidArgument if empty or the universes differ.
  explicit Profile(std::vector<Ordering> voters);

  int n() const { return static_cast<int>(voters_.size()); }
  int m() const { return voters_.empty() ? 0 : voters_.front().size(); }
  const Ordering& voter(int i) const { return voters_[static_cast<std::size_t>(i)]; }
  const std::vector<Ordering>& voters() const { return voters_; }

  Profile with_voter(int i, const Ordering& o) const;

  friend bool operator==(const Profile&, const Profile&) = default;
  friend auto operator<=>(const Profile&, const Profile&) = default;

 private:
  std::vector<Ordering> voters_;
};

// True iff every voter ranks a above b. Throws kInvalidPair when a == b.
bool pareto_dominates(const Profile& p, Alternative a, Alternative b);

// True iff no ordered pair is Pareto-dominated. With m == 1 there are no
// pairs, so the single-alternative profile qualifies.
bool is_np(const Profile& p);

// Mixed-radix code of a profile (voter 1 most significant, digit = lexicographic
// rank of the voter's ordering). Sorting by code is the canonical order.
std::uint64_t profile_code(const Profile& p);

enum class DomainKind { kNP, kNPStar, kNPWZ, kCustom };

std::string_view to_string(DomainKind kind);

class Domain {
 public:
  // Sorts canonically and drops duplicates. `kind` is a tag; callers that
  // construct tagged domains are responsible for the membership predicate.
  Domain(int n, int m, DomainKind kind, std::vector<Profile> profiles,
         std::optional<std::pair<Alternative, Alternative>> wz = std::nullopt);

  int n() const { return n_; }
  int m() const { return m_; }
  DomainKind kind() const { return kind_; }
  std::optional<std::pair<Alternative, Alternative>> wz() const { return wz_; }
  // Set when n < 3 or m < 3; such domains exist for oracle use only.
  bool below_standing_assumptions() const { return n_ < 3 || m_ < 3; }

  std::size_t size() const { return profiles_.size(); }
  const Profile& profile(std::size_t index) const { return profiles_[index]; }
  const std::vector<Profile>& profiles() const { return profiles_; }
  std::uint64_t code(std::size_t index) const { return codes_[index]; }

  std::optional<std::size_t> find(const Profile& p) const;
  bool contains(const Profile& p) const { return find(p).has_value(); }
  // Throws kMembership when p is not a member.
  std::size_t index_of(const Profile& p) const;

  // Indices of h-variants of profile `index` (excluding itself), ascending.
  std::vector<std::size_t> variant_indices(std::size_t index, int h) const;

 private:
  int n_;
  int m_;
  DomainKind kind_;
  std::optional<std::pair<Alternative, Alternative>> wz_;
  std::vector<Profile> profiles_;
  std::vector<std::uint64_t> codes_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<Ordering> orderings_;  // all_orderings(m), for variant lookup
};

using DomainPtr = std::shared_ptr<const Domain>;

struct EnumerateOptions {
  // Upper bound on (m!)^n raw profiles scanned before filtering.
  std::uint64_t raw_cap = 5'000'000;
};

// All profiles of L(X)^N with no Pareto domination, canonically indexed.
DomainPtr enumerate_np(int n, int m, const EnumerateOptions& options = {});

// Members of an NP domain on which the last two voters agree.
DomainPtr np_star(const Domain& d);

// Every profile of L(X)^N (no filter). Used by oracles and custom domains.
DomainPtr enumerate_all(int n, int m, const EnumerateOptions& options = {});

// h-variants of p inside d, excluding p itself. Throws kMembership if p is
// not in d.
std::vector<Profile> variants(const Domain& d, const Profile& p, int h);

// `xyz|zyx|xyz`: voter orderings best-to-worst, joined by '|'.
std::string encode_profile(const Profile& p);
// Throws kParse (with the offending offset) on malformed text.
Profile decode_profile(std::string_view text, int n, int m);

// Relabels alternatives: voter orderings map a -> perm[a].
Profile relabel(const Profile& p, std::span<const Alternative> perm);

// Formats a 0-based voter for display ("1" for voter 0).
std::string voter_label(int voter);

}  // namespace npv

#endif  // NPV_PROFILES_HPP_
