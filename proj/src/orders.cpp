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

#include "npv/orders.hpp"

#include <algorithm>
#include <numeric>

#include "npv/error.hpp"

namespace npv {

namespace {

void check_alternative(const Ordering& o, Alternative a) {
  if (!o.contains(a)) {
    fail(ErrorKind::kInvalidAlternative,
         "alternative " + std::to_string(a.index) + " outside universe of size " +
             std::to_string(o.size()));
  }
}

}  // namespace

char alternative_letter(Alternative a, int m) {
  if (m == 3) return "xyz"[a.index];
  return static_cast<char>('a' + a.index);
}

std::optional<Alternative> parse_alternative(char c, int m) {
  if (m == 3 && c >= 'x' && c <= 'z') return Alternative{c - 'x'};
  if (c >= 'a' && c <= 'z' && c - 'a' < m) return Alternative{c - 'a'};
  return std::nullopt;
}

Ordering Ordering::from_ranked(std::span<const int> ranked) {
  const auto m = static_cast<int>(ranked.size());
  if (m > kMaxAlternatives) {
    fail(ErrorKind::kInvalidArgument, "too many alternatives: " + std::to_string(m));
  }
  std::array<bool, kMaxAlternatives> seen{};
  Ordering o;
  o.size_ = static_cast<std::uint8_t>(m);
  for (int k = 0; k < m; ++k) {
    const int a = ranked[static_cast<std::size_t>(k)];
    if (a < 0 || a >= m || seen[static_cast<std::size_t>(a)]) {
      fail(ErrorKind::kInvalidArgument, "ranked sequence is not a permutation");
    }
    seen[static_cast<std::size_t>(a)] = true;
    o.ranked_[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(a);
  }
  o.rebuild_positions();
  return o;
}

Ordering Ordering::from_ranked(std::initializer_list<int> ranked) {
  return from_ranked(std::span<const int>(ranked.begin(), ranked.size()));
}

Ordering Ordering::identity(int m) {
  std::vector<int> ranked(static_cast<std::size_t>(m));
  std::iota(ranked.begin(), ranked.end(), 0);
  return from_ranked(ranked);
}

void Ordering::rebuild_positions() {
  for (int k = 0; k < size_; ++k) {
    pos_[ranked_[static_cast<std::size_t>(k)]] = static_cast<std::uint8_t>(k);
  }
}

std::vector<Alternative> Ordering::ranked() const {
  std::vector<Alternative> out;
  out.reserve(size_);
  for (int k = 0; k < size_; ++k) out.push_back(at(k));
  return out;
}

std::uint64_t Ordering::lex_rank() const {
  std::uint64_t rank = 0;
  for (int i = 0; i < size_; ++i) {
    int smaller_later = 0;
    for (int k = i + 1; k < size_; ++k) {
      if (ranked_[static_cast<std::size_t>(k)] < ranked_[static_cast<std::size_t>(i)]) ++smaller_later;
    }
    rank += static_cast<std::uint64_t>(smaller_later) * factorial(size_ - 1 - i);
  }
  return rank;
}

bool operator==(const Ordering& lhs, const Ordering& rhs) {
  return lhs.size_ == rhs.size_ &&
         std::equal(lhs.ranked_.begin(), lhs.ranked_.begin() + lhs.size_, rhs.ranked_.begin());
}

std::strong_ordering operator<=>(const Ordering& lhs, const Ordering& rhs) {
  if (auto c = lhs.size_ <=> rhs.size_; c != 0) return c;
  return std::lexicographical_compare_three_way(lhs.ranked_.begin(), lhs.ranked_.begin() + lhs.size_,
                                                rhs.ranked_.begin(), rhs.ranked_.begin() + rhs.size_);
}

std::uint64_t factorial(int m) {
  std::uint64_t f = 1;
  for (int k = 2; k <= m; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

std::vector<Ordering> all_orderings(int m) {
  if (m <= 0) fail(ErrorKind::kEmptyUniverse, "all_orderings needs m >= 1");
  if (m > 10) fail(ErrorKind::kSizeCap, "refusing to list " + std::to_string(m) + "! orderings");
  std::vector<int> ranked(static_cast<std::size_t>(m));
  std::iota(ranked.begin(), ranked.end(), 0);
  std::vector<Ordering> out;
  out.reserve(factorial(m));
  do {
    out.push_back(Ordering::from_ranked(ranked));
  } while (std::next_permutation(ranked.begin(), ranked.end()));
  return out;
}

int position(const Ordering& o, Alternative y) {
  check_alternative(o, y);
  return o.rank_of(y) + 1;
}

Ordering invert(const Ordering& o) {
  std::vector<int> ranked;
  ranked.reserve(static_cast<std::size_t>(o.size()));
  for (int k = o.size() - 1; k >= 0; --k) ranked.push_back(o.at(k).index);
  return Ordering::from_ranked(ranked);
}

std::vector<Alternative> between(const Ordering& o, Alternative a, Alternative b) {
  check_alternative(o, a);
  check_alternative(o, b);
  int lo = o.rank_of(a);
  int hi = o.rank_of(b);
  if (lo > hi) std::swap(lo, hi);
  std::vector<Alternative> out;
  for (int k = lo + 1; k < hi; ++k) out.push_back(o.at(k));
  return out;
}

namespace {

std::vector<int> ranked_ints(const Ordering& o) {
  std::vector<int> r;
  r.reserve(static_cast<std::size_t>(o.size()));
  for (int k = 0; k < o.size(); ++k) r.push_back(o.at(k).index);
  return r;
}

Ordering move_to_rank(const Ordering& o, Alternative a, int target0) {
  std::vector<int> r = ranked_ints(o);
  r.erase(r.begin() + o.rank_of(a));
  r.insert(r.begin() + target0, a.index);
  return Ordering::from_ranked(r);
}

}  // namespace

Ordering apply_move(const Ordering& o, const Move& mv) {
  return std::visit(
      [&o](const auto& m) -> Ordering {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SwapMove>) {
          check_alternative(o, m.a);
          check_alternative(o, m.b);
          std::vector<int> r = ranked_ints(o);
          std::swap(r[static_cast<std::size_t>(o.rank_of(m.a))], r[static_cast<std::size_t>(o.rank_of(m.b))]);
          return Ordering::from_ranked(r);
        } else if constexpr (std::is_same_v<T, RaiseToTopMove>) {
          check_alternative(o, m.a);
          return move_to_rank(o, m.a, 0);
        } else if constexpr (std::is_same_v<T, LowerToBottomMove>) {
          check_alternative(o, m.a);
          return move_to_rank(o, m.a, o.size() - 1);
        } else {
          check_alternative(o, m.a);
          if (m.target_rank < 1 || m.target_rank > o.size()) {
            fail(ErrorKind::kRejectedMove, "target rank " + std::to_string(m.target_rank) + " out of range");
          }
          const int target0 = m.target_rank - 1;
          if (m.barrier) {
            check_alternative(o, *m.barrier);
            if (*m.barrier == m.a) fail(ErrorKind::kRejectedMove, "barrier equals moved alternative");
            const int barrier_rank = o.rank_of(*m.barrier);
            const bool above = barrier_rank < o.rank_of(m.a);
            if ((above && target0 <= barrier_rank) || (!above && target0 >= barrier_rank)) {
              fail(ErrorKind::kRejectedMove, "shift would cross the barrier");
            }
          }
          return move_to_rank(o, m.a, target0);
        }
      },
      mv);
}

Restriction restrict(const Ordering& o, std::span<const Alternative> subset) {
  if (subset.empty()) fail(ErrorKind::kInvalidSubset, "restriction to an empty subset");
  std::vector<Alternative> members(subset.begin(), subset.end());
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    fail(ErrorKind::kInvalidSubset, "subset has repeated alternatives");
  }
  for (Alternative a : members) check_alternative(o, a);

  std::vector<int> reindex(static_cast<std::size_t>(o.size()), -1);
  for (std::size_t k = 0; k < members.size(); ++k) {
    reindex[static_cast<std::size_t>(members[k].index)] = static_cast<int>(k);
  }
  std::vector<int> ranked;
  for (int k = 0; k < o.size(); ++k) {
    const int mapped = reindex[static_cast<std::size_t>(o.at(k).index)];
    if (mapped >= 0) ranked.push_back(mapped);
  }
  return Restriction{Ordering::from_ranked(ranked), std::move(members)};
}

std::string encode_ordering(const Ordering& o) {
  std::string out;
  out.reserve(static_cast<std::size_t>(o.size()));
  for (int k = 0; k < o.size(); ++k) out.push_back(alternative_letter(o.at(k), o.size()));
  return out;
}

Ordering decode_ordering(std::string_view text, int m) {
  if (static_cast<int>(text.size()) != m) {
    fail(ErrorKind::kParse, "ordering '" + std::string(text) + "' has length " +
                                std::to_string(text.size()) + ", expected " + std::to_string(m));
  }
  std::vector<int> ranked;
  std::array<bool, kMaxAlternatives> seen{};
  for (std::size_t k = 0; k < text.size(); ++k) {
    const auto a = parse_alternative(text[k], m);
    if (!a) fail(ErrorKind::kParse, "bad letter '" + std::string(1, text[k]) + "' at offset " + std::to_string(k));
    if (seen[static_cast<std::size_t>(a->index)]) {
      fail(ErrorKind::kParse, "repeated letter '" + std::string(1, text[k]) + "' at offset " + std::to_string(k));
    }
    seen[static_cast<std::size_t>(a->index)] = true;
    ranked.push_back(a->index);
  }
  return Ordering::from_ranked(ranked);
}

}  // namespace npv
