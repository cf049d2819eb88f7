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

#ifndef NPV_ORDERS_HPP_
#define NPV_ORDERS_HPP_

// Strict linear orderings on a finite alternative set {0, ..., m-1}.
//
// An Ordering is stored best-to-worst together with its inverse (rank of each
// alternative), so both "who is at rank k" and "where is a" are O(1).
// Alternatives print as letters: for m == 3 the letters are x, y, z (so the
// usual x, y, z map to 0, 1, 2); otherwise a, b, c, ...

#include <array>
#include <compare>
#include <initializer_list>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace npv {

inline constexpr int kMaxAlternatives = 26;

struct Alternative {
  int index = 0;

  friend auto operator<=>(const Alternative&, const Alternative&) = default;
};

inline constexpr Alternative kX{0};
inline constexpr Alternative kY{1};
inline constexpr Alternative kZ{2};

// Letter for alternative `a` in a universe of `m` alternatives.
char alternative_letter(Alternative a, int m);
// Inverse of alternative_letter. For m == 3 both "xyz" and "abc" are accepted.
std::optional<Alternative> parse_alternative(char c, int m);

class Ordering {
 public:
  Ordering() = default;

  // Throws kInvalidArgument unless `ranked` is a permutation of 0..m-1.
  static Ordering from_ranked(std::span<const int> ranked);
  static Ordering from_ranked(std::initializer_list<int> ranked);
  static Ordering identity(int m);

  int size() const { return size_; }
  // 0-based rank -> alternative.
  Alternative at(int rank) const { return Alternative{ranked_[static_cast<std::size_t>(rank)]}; }
  Alternative top() const { return at(0); }
  Alternative bottom() const { return at(size_ - 1); }
  // 0-based rank of `a`; unchecked.
  int rank_of(Alternative a) const { return pos_[static_cast<std::size_t>(a.index)]; }
  // True iff a ranks above b.
  bool prefers(Alternative a, Alternative b) const { return rank_of(a) < rank_of(b); }
  bool contains(Alternative a) const { return a.index >= 0 && a.index < size_; }

  std::vector<Alternative> ranked() const;
  // Lexicographic index of this ordering in all_orderings(size()).
  std::uint64_t lex_rank() const;

  friend bool operator==(const Ordering& lhs, const Ordering& rhs);
  friend std::strong_ordering operator<=>(const Ordering& lhs, const Ordering& rhs);

 private:
  void rebuild_positions();

  std::uint8_t size_ = 0;
  std::array<std::uint8_t, kMaxAlternatives> ranked_{};
  std::array<std::uint8_t, kMaxAlternatives> pos_{};
};

// All m! orderings in lexicographic order of their ranked sequence.
std::vector<Ordering> all_orderings(int m);

// 1-based position: 1 + number of alternatives ranked above y.
int position(const Ordering& o, Alternative y);

Ordering invert(const Ordering& o);

// Alternatives strictly between a and b (in either orientation), top-to-bottom.
std::vector<Alternative> between(const Ordering& o, Alternative a, Alternative b);

struct SwapMove {
  Alternative a;
  Alternative b;
};
struct RaiseToTopMove {
  Alternative a;
};
struct LowerToBottomMove {
  Alternative a;
};
// Moves `a` to 1-based `target_rank`; the others shift to fill the gap. With a
// barrier, `a` may not cross it.
struct ShiftMove {
  Alternative a;
  int target_rank = 1;
  std::optional<Alternative> barrier;
};
using Move = std::variant<SwapMove, RaiseToTopMove, LowerToBottomMove, ShiftMove>;

Ordering apply_move(const Ordering& o, const Move& mv);

struct Restriction {
  Ordering ordering;
  // to_original[k] is the alternative of the parent universe that became k.
  std::vector<Alternative> to_original;
};

// Restriction of o to the subset Y, re-indexed by increasing original index.
Restriction restrict(const Ordering& o, std::span<const Alternative> subset);

std::string encode_ordering(const Ordering& o);
// Throws kParse on malformed text.
Ordering decode_ordering(std::string_view text, int m);

std::uint64_t factorial(int m);

}  // namespace npv

#endif  // NPV_ORDERS_HPP_
