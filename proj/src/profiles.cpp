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

#include "npv/profiles.hpp"

#include <algorithm>
#include <limits>

#include "npv/error.hpp"

namespace npv {

Profile::Profile(std::vector<Ordering> voters) : voters_(std::move(voters)) {
  if (voters_.empty()) fail(ErrorKind::kInvalidArgument, "a profile needs at least one voter");
  for (const Ordering& o : voters_) {
    if (o.size() != voters_.front().size()) {
      fail(ErrorKind::kInvalidArgument, "voters disagree on the number of alternatives");
    }
  }
}

Profile Profile::with_voter(int i, const Ordering& o) const {
  Profile q = *this;
  q.voters_[static_cast<std::size_t>(i)] = o;
  return q;
}

bool pareto_dominates(const Profile& p, Alternative a, Alternative b) {
  if (a == b) fail(ErrorKind::kInvalidPair, "Pareto test needs distinct alternatives");
  if (!p.voter(0).contains(a) || !p.voter(0).contains(b)) {
    fail(ErrorKind::kInvalidAlternative, "alternative outside the profile's universe");
  }
  return std::all_of(p.voters().begin(), p.voters().end(),
                     [&](const Ordering& o) { return o.prefers(a, b); });
}

bool is_np(const Profile& p) {
  const int m = p.m();
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (a != b && pareto_dominates(p, Alternative{a}, Alternative{b})) return false;
    }
  }
  return true;
}

std::uint64_t profile_code(const Profile& p) {
  const std::uint64_t radix = factorial(p.m());
  std::uint64_t code = 0;
  for (const Ordering& o : p.voters()) code = code * radix + o.lex_rank();
  return code;
}

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::kNP: return "NP";
    case DomainKind::kNPStar: return "NP*";
    case DomainKind::kNPWZ: return "NP_WZ";
    case DomainKind::kCustom: return "CUSTOM";
  }
  return "?";
}

namespace {

// (m!)^n must fit the 64-bit profile code.
void check_code_width(int n, int m) {
  const std::uint64_t radix = factorial(m);
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / radix) {
      fail(ErrorKind::kSizeCap, "profile codes for n=" + std::to_string(n) + " m=" + std::to_string(m) +
                                    " exceed 64 bits");
    }
    total *= radix;
  }
}

}  // namespace

Domain::Domain(int n, int m, DomainKind kind, std::vector<Profile> profiles,
               std::optional<std::pair<Alternative, Alternative>> wz)
    : n_(n), m_(m), kind_(kind), wz_(wz), profiles_(std::move(profiles)) {
  if (n <= 0 || m <= 0) fail(ErrorKind::kEmptyUniverse, "domain needs n >= 1 and m >= 1");
  check_code_width(n, m);
  for (const Profile& p : profiles_) {
    if (p.n() != n || p.m() != m) fail(ErrorKind::kInvalidArgument, "profile shape differs from domain");
  }
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  keyed.reserve(profiles_.size());
  for (std::size_t k = 0; k < profiles_.size(); ++k) keyed.emplace_back(profile_code(profiles_[k]), k);
  std::sort(keyed.begin(), keyed.end());
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& l, const auto& r) { return l.first == r.first; }),
              keyed.end());
  std::vector<Profile> sorted;
  sorted.reserve(keyed.size());
  codes_.reserve(keyed.size());
  index_.reserve(keyed.size() * 2);
  for (const auto& [code, from] : keyed) {
    index_.emplace(code, sorted.size());
    codes_.push_back(code);
    sorted.push_back(std::move(profiles_[from]));
  }
  profiles_ = std::move(sorted);
  if (m <= 10) orderings_ = all_orderings(m);
}

std::optional<std::size_t> Domain::find(const Profile& p) const {
  if (p.n() != n_ || p.m() != m_) return std::nullopt;
  const auto it = index_.find(profile_code(p));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Domain::index_of(const Profile& p) const {
  const auto found = find(p);
  if (!found) fail(ErrorKind::kMembership, "profile " + encode_profile(p) + " is not in the domain");
  return *found;
}

std::vector<std::size_t> Domain::variant_indices(std::size_t index, int h) const {
  if (h < 0 || h >= n_) fail(ErrorKind::kInvalidArgument, "voter out of range");
  std::vector<std::size_t> out;
  const std::uint64_t radix = factorial(m_);
  std::uint64_t weight = 1;
  for (int i = n_ - 1; i > h; --i) weight *= radix;
  const std::uint64_t code = codes_[index];
  const std::uint64_t own_digit = (code / weight) % radix;
  const std::uint64_t base = code - own_digit * weight;
  for (std::uint64_t digit = 0; digit < radix; ++digit) {
    if (digit == own_digit) continue;
    const auto it = index_.find(base + digit * weight);
    if (it != index_.end()) out.push_back(it->second);
  }
  // Digits ascend and h is fixed, so codes (hence indices) already ascend.
  return out;
}

namespace {

// Bitmask over ordered pairs (a,b), bit a*m+b set iff a ranks above b.
std::uint64_t pair_mask(const Ordering& o) {
  const int m = o.size();
  std::uint64_t mask = 0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (a != b && o.prefers(Alternative{a}, Alternative{b})) mask |= std::uint64_t{1} << (a * m + b);
    }
  }
  return mask;
}

template <typename Keep>
std::vector<Profile> scan_all(int n, int m, const EnumerateOptions& options, Keep keep) {
  if (n <= 0 || m <= 0) fail(ErrorKind::kEmptyUniverse, "enumeration needs n >= 1 and m >= 1");
  const std::uint64_t radix = factorial(m);
  std::uint64_t raw = 1;
  bool over_cap = false;
  for (int i = 0; i < n && !over_cap; ++i) {
    over_cap = raw > options.raw_cap / radix;
    raw *= radix;
  }
  if (over_cap) {
    fail(ErrorKind::kSizeCap, "(m!)^n for n=" + std::to_string(n) + " m=" + std::to_string(m) +
                                  " exceeds the raw-profile cap of " + std::to_string(options.raw_cap));
  }
  const std::vector<Ordering> orders = all_orderings(m);
  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  std::vector<Profile> out;
  std::vector<Ordering> voters(static_cast<std::size_t>(n), orders[0]);
  while (true) {
    if (keep(digits, orders)) {
      for (int i = 0; i < n; ++i) voters[static_cast<std::size_t>(i)] = orders[digits[static_cast<std::size_t>(i)]];
      out.emplace_back(voters);
    }
    int i = n - 1;
    while (i >= 0 && ++digits[static_cast<std::size_t>(i)] == orders.size()) {
      digits[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

}  // namespace

DomainPtr enumerate_np(int n, int m, const EnumerateOptions& options) {
  std::vector<Profile> members;
  if (m <= 8) {
    std::vector<std::uint64_t> masks;
    for (const Ordering& o : all_orderings(m)) masks.push_back(pair_mask(o));
    members = scan_all(n, m, options, [&](const std::vector<std::size_t>& digits, const auto&) {
      std::uint64_t common = ~std::uint64_t{0};
      for (std::size_t d : digits) common &= masks[d];
      return common == 0;
    });
  } else {
    members = scan_all(n, m, options, [&](const std::vector<std::size_t>& digits, const auto& orders) {
      std::vector<Ordering> voters;
      for (std::size_t d : digits) voters.push_back(orders[d]);
      return is_np(Profile(std::move(voters)));
    });
  }
  return std::make_shared<const Domain>(n, m, DomainKind::kNP, std::move(members));
}

DomainPtr enumerate_all(int n, int m, const EnumerateOptions& options) {
  auto members = scan_all(n, m, options, [](const auto&, const auto&) { return true; });
  return std::make_shared<const Domain>(n, m, DomainKind::kCustom, std::move(members));
}

DomainPtr np_star(const Domain& d) {
  if (d.kind() != DomainKind::kNP) {
    fail(ErrorKind::kDomainKind, "NP* is carved out of an NP domain, got " + std::string(to_string(d.kind())));
  }
  if (d.n() < 3) fail(ErrorKind::kUnsupportedParameters, "NP* needs n >= 3");
  std::vector<Profile> members;
  for (const Profile& p : d.profiles()) {
    if (p.voter(d.n() - 1) == p.voter(d.n() - 2)) members.push_back(p);
  }
  return std::make_shared<const Domain>(d.n(), d.m(), DomainKind::kNPStar, std::move(members));
}

std::vector<Profile> variants(const Domain& d, const Profile& p, int h) {
  const std::size_t index = d.index_of(p);
  std::vector<Profile> out;
  for (std::size_t k : d.variant_indices(index, h)) out.push_back(d.profile(k));
  return out;
}

std::string encode_profile(const Profile& p) {
  std::string out;
  for (int i = 0; i < p.n(); ++i) {
    if (i > 0) out.push_back('|');
    out += encode_ordering(p.voter(i));
  }
  return out;
}

Profile decode_profile(std::string_view text, int n, int m) {
  std::vector<Ordering> voters;
  std::size_t offset = 0;
  for (int i = 0; i < n; ++i) {
    const std::size_t end = std::min(text.find('|', offset), text.size());
    const std::string_view part = text.substr(offset, end - offset);
    try {
      voters.push_back(decode_ordering(part, m));
    } catch (const Error& e) {
      fail(ErrorKind::kParse, "profile '" + std::string(text) + "' voter " + voter_label(i) + " at offset " +
                                  std::to_string(offset) + ": " + e.what());
    }
    offset = end;
    if (i + 1 < n) {
      if (offset >= text.size()) {
        fail(ErrorKind::kParse, "profile '" + std::string(text) + "' ends at offset " + std::to_string(offset) +
                                    " after " + std::to_string(i + 1) + " of " + std::to_string(n) + " voters");
      }
      ++offset;  // '|'
    }
  }
  if (offset != text.size()) {
    fail(ErrorKind::kParse, "profile '" + std::string(text) + "' has trailing text at offset " + std::to_string(offset));
  }
  return Profile(std::move(voters));
}

Profile relabel(const Profile& p, std::span<const Alternative> perm) {
  if (static_cast<int>(perm.size()) != p.m()) fail(ErrorKind::kInvalidArgument, "relabeling has wrong size");
  std::vector<Ordering> voters;
  for (const Ordering& o : p.voters()) {
    std::vector<int> ranked;
    for (int k = 0; k < o.size(); ++k) ranked.push_back(perm[static_cast<std::size_t>(o.at(k).index)].index);
    voters.push_back(Ordering::from_ranked(ranked));
  }
  return Profile(std::move(voters));
}

std::string voter_label(int voter) { return std::to_string(voter + 1); }

}  // namespace npv
