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

// Brute-force reference implementations. Deliberately naive and free of any
// library types so they can cross-check the real code.

#ifndef NPV_TESTS_ORACLE_HPP_
#define NPV_TESTS_ORACLE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Perm = std::vector<int>;  // best to worst
using Prof = std::vector<Perm>;
using RuleFn = std::function<int(const Prof&)>;

inline std::vector<Perm> perms(int m) {
  std::vector<Perm> out;
  Perm p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline int rank(const Perm& o, int a) {
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (o[i] == a) return static_cast<int>(i);
  }
  return -1;
}

inline bool above(const Perm& o, int a, int b) { return rank(o, a) < rank(o, b); }

inline bool pareto(const Prof& p, int a, int b) {
  for (const Perm& o : p) {
    if (!above(o, a, b)) return false;
  }
  return true;
}

inline bool np(const Prof& p) {
  const int m = static_cast<int>(p.front().size());
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (a != b && pareto(p, a, b)) return false;
    }
  }
  return true;
}

inline std::vector<Prof> all_profiles(int n, int m) {
  const std::vector<Perm> base = perms(m);
  std::vector<Prof> out{Prof{}};
  for (int i = 0; i < n; ++i) {
    std::vector<Prof> next;
    for (const Prof& partial : out) {
      for (const Perm& o : base) {
        Prof q = partial;
        q.push_back(o);
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline std::vector<Prof> np_profiles(int n, int m) {
  std::vector<Prof> out;
  for (Prof& p : all_profiles(n, m)) {
    if (np(p)) out.push_back(std::move(p));
  }
  return out;
}

inline bool last_two_agree(const Prof& p) { return p[p.size() - 1] == p[p.size() - 2]; }

inline std::vector<Prof> np_star_profiles(int n, int m) {
  std::vector<Prof> out;
  for (Prof& p : np_profiles(n, m)) {
    if (last_two_agree(p)) out.push_back(std::move(p));
  }
  return out;
}

inline std::string encode(const Prof& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '|';
    for (int a : p[i]) s += p[i].size() == 3 ? "xyz"[a] : static_cast<char>('a' + a);
  }
  return s;
}

// Differs from q in exactly one voter; returns that voter.
inline std::optional<int> single_difference(const Prof& p, const Prof& q) {
  std::optional<int> h;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != q[i]) {
      if (h) return std::nullopt;
      h = static_cast<int>(i);
    }
  }
  return h;
}

struct Manipulation {
  Prof at;
  Prof via;
  int voter;
};

// Quadratic double loop over every ordered pair of profiles.
inline std::optional<Manipulation> manipulation(const std::vector<Prof>& domain, const RuleFn& g) {
  std::vector<int> value;
  value.reserve(domain.size());
  for (const Prof& p : domain) value.push_back(g(p));
  for (std::size_t i = 0; i < domain.size(); ++i) {
    for (std::size_t j = 0; j < domain.size(); ++j) {
      const auto h = single_difference(domain[i], domain[j]);
      if (!h) continue;
      if (above(domain[i][static_cast<std::size_t>(*h)], value[j], value[i])) {
        return Manipulation{domain[i], domain[j], *h};
      }
    }
  }
  return std::nullopt;
}

inline std::set<int> range(const std::vector<Prof>& domain, const RuleFn& g) {
  std::set<int> out;
  for (const Prof& p : domain) out.insert(g(p));
  return out;
}

inline RuleFn dictator(int voter) {
  return [voter](const Prof& p) { return p[static_cast<std::size_t>(voter)].front(); };
}

inline RuleFn constant(int a) {
  return [a](const Prof&) { return a; };
}

// x = 0, y = 1; y wins iff voters 1..n-2 all prefer y to x and one of the last two does.
inline int example1(const Prof& p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i + 2 < n; ++i) {
    if (!above(p[i], 1, 0)) return 0;
  }
  return above(p[n - 2], 1, 0) || above(p[n - 1], 1, 0) ? 1 : 0;
}

inline int between_count(const Perm& o, int a, int b) {
  const int ra = rank(o, a);
  const int rb = rank(o, b);
  return std::abs(ra - rb) - 1;
}

inline int sigma(const Prof& p, int a, int b) {
  int total = 0;
  for (const Perm& o : p) total += between_count(o, a, b);
  return total;
}

}  // namespace oracle

#endif  // NPV_TESTS_ORACLE_HPP_
