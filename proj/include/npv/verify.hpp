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

#ifndef NPV_VERIFY_HPP_
#define NPV_VERIFY_HPP_

// Named satisfiability scenarios over NP(n,3), the fixed profile lists the
// impossibility arguments revolve around, and the runner that solves them and
// re-checks every witness from scratch.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "npv/cnf.hpp"
#include "npv/profiles.hpp"
#include "npv/rules.hpp"

namespace npv {

// L1, L2, L3 for the two-alternative range argument. Throws
// kUnsupportedParameters for n < 3.
std::array<Profile, 3> build_list_part1(int n);

struct ListPart2 {
  std::array<Profile, 4> base;    // L1..L4
  std::array<Profile, 4> star;    // y and z interchanged
  std::array<Profile, 4> double_star;  // star with the middle block's zyx -> yzx
};

// Voters are laid out as 1, 2, the block 3..n-2, n-1, n; the block is empty
// at n = 4. Throws kUnsupportedParameters for n < 4.
ListPart2 build_list_part2(int n);

// Exchanges y and z in every ordering.
Profile swap_yz(const Profile& p);

enum class Expectation { kSat, kUnsat, kReport };

std::string_view to_string(Expectation e);

// One query against the shared constraints. Each assumption is a literal that
// holds only for this query.
struct ScenarioInstance {
  std::string label;
  std::vector<Lit> assumptions;
};

struct Scenario {
  std::string name;
  int n = 0;
  int m = 3;
  int j = 0;  // list index for lemma4_4; 0 runs every index
  Expectation expected = Expectation::kReport;
  std::string description;
  DomainPtr domain;
  std::vector<ScenarioConstraint> constraints;
  std::vector<ScenarioInstance> instances;  // never empty
};

// Names accepted by make_scenario, catalogue order.
std::vector<std::string> scenario_names();

// Throws kScenario for an unknown name, kUnsupportedParameters for n outside
// the scenario's range.
Scenario make_scenario(const std::string& name, int n, int j = 0);

// The same scenario under a permutation of alternatives (perm[a] is the image
// of a). Profiles are mapped through relabel().
Scenario relabel_scenario(const Scenario& s, std::span<const Alternative> perm);

CnfFormula encode_scenario(const Scenario& s);

struct InstanceResult {
  std::string label;
  SolveStatus status = SolveStatus::kUnsat;
  SolverStats stats;
  std::optional<Rule> witness;
  std::string witness_check;  // empty when the oracle accepted the witness
};

struct Report {
  std::string scenario;
  int n = 0;
  int m = 0;
  Expectation expected = Expectation::kReport;
  std::size_t domain_size = 0;
  std::size_t np_star_size = 0;
  int var_count = 0;
  std::size_t clause_count = 0;
  std::vector<InstanceResult> instances;
  double wall_seconds = 0.0;
  bool from_cache = false;

  // kSat if any instance is satisfiable.
  SolveStatus outcome() const;
  // Every instance matches the expectation and every witness passed the oracle.
  bool expectation_met() const;
};

struct RunOptions {
  SolverOptions solver;
  // Optional on-disk result cache keyed by the encoded instance.
  std::optional<std::filesystem::path> cache_dir;
};

Report run_scenario(const Scenario& s, const RunOptions& options = {});

// Runs independent scenarios on up to `threads` workers; reports keep input order.
std::vector<Report> run_scenarios(const std::vector<Scenario>& scenarios, const RunOptions& options = {},
                                  unsigned threads = 1);

// Empty when g satisfies the scenario's constraints and the instance's
// assumptions, evaluated directly on g; otherwise a description of the first
// failure. Strategy-proofness is checked by find_manipulation.
std::string check_witness(const Rule& g, const Scenario& s, const ScenarioInstance& instance);

// Up to k distinct rules for the first instance, each blocked after
// extraction; every rule has passed check_witness.
std::vector<Rule> enumerate_models(const Scenario& s, std::size_t k, const SolverOptions& options = {});

// Full-constraint DIMACS plus one `a <lits> 0` line per instance.
void write_scenario_dimacs(const Scenario& s, std::ostream& cnf, std::ostream& assumptions);

void write_report(const Report& r, std::ostream& out);
// Key-value document (JSON object).
std::string report_json(const Report& r);

}  // namespace npv

#endif  // NPV_VERIFY_HPP_
