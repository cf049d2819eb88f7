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

#ifndef NPV_ERROR_HPP_
#define NPV_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace npv {

enum class ErrorKind {
  kEmptyUniverse,
  kInvalidAlternative,
  kRejectedMove,
  kInvalidSubset,
  kInvalidPair,
  kInvalidArgument,
  kSizeCap,
  kDomainKind,
  kMembership,
  kParse,
  kUnsupportedParameters,
  kCoalitionCap,
  kContract,
  kScenario,
  kResourceCap,
  kEncodingViolation,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and tests)
// can dispatch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace npv

#endif  // NPV_ERROR_HPP_
