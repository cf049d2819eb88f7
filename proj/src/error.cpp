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

#include "npv/error.hpp"

namespace npv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyUniverse: return "empty-universe";
    case ErrorKind::kInvalidAlternative: return "invalid-alternative";
    case ErrorKind::kRejectedMove: return "rejected-move";
    case ErrorKind::kInvalidSubset: return "invalid-subset";
    case ErrorKind::kInvalidPair: return "invalid-pair";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kSizeCap: return "size-cap";
    case ErrorKind::kDomainKind: return "domain-kind";
    case ErrorKind::kMembership: return "membership";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kUnsupportedParameters: return "unsupported-parameters";
    case ErrorKind::kCoalitionCap: return "coalition-cap";
    case ErrorKind::kContract: return "contract";
    case ErrorKind::kScenario: return "scenario";
    case ErrorKind::kResourceCap: return "resource-cap";
    case ErrorKind::kEncodingViolation: return "encoding-violation";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace npv
