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

#ifndef NPV_TESTS_SUPPORT_HPP_
#define NPV_TESTS_SUPPORT_HPP_

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "npv/error.hpp"
#include "npv/profiles.hpp"
#include "npv/rules.hpp"
#include "oracle.hpp"

namespace npv::testing {

inline oracle::Prof to_oracle(const Profile& p) {
  oracle::Prof out;
  for (const Ordering& o : p.voters()) {
    oracle::Perm perm;
    for (Alternative a : o.ranked()) perm.push_back(a.index);
    out.push_back(perm);
  }
  return out;
}

inline std::vector<oracle::Prof> to_oracle(const Domain& d) {
  std::vector<oracle::Prof> out;
  for (const Profile& p : d.profiles()) out.push_back(to_oracle(p));
  return out;
}

inline Profile from_oracle(const oracle::Prof& p) {
  std::vector<Ordering> voters;
  for (const oracle::Perm& o : p) voters.push_back(Ordering::from_ranked(o));
  return Profile(voters);
}

inline Profile P(const std::string& text, int n, int m = 3) { return decode_profile(text, n, m); }

inline Ordering O(const std::string& text, int m = 3) { return decode_ordering(text, m); }

// The rule as a plain function for the oracles; profiles must be in g's domain.
inline oracle::RuleFn as_fn(const Rule& g) {
  return [&g](const oracle::Prof& p) { return g.evaluate(from_oracle(p)).index; };
}

}  // namespace npv::testing

#define EXPECT_NPV_ERROR(stmt, expected_kind)                                  \
  do {                                                                         \
    try {                                                                      \
      stmt;                                                                    \
      ADD_FAILURE() << "no error from " #stmt;                                 \
    } catch (const ::npv::Error& e) {                                          \
      EXPECT_EQ(e.kind(), expected_kind) << e.what();                          \
    }                                                                          \
  } while (0)

#endif  // NPV_TESTS_SUPPORT_HPP_
