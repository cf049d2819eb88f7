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

#ifndef NPV_CNF_HPP_
#define NPV_CNF_HPP_

// Propositional encoding of "a strategy-proof rule on d with extra properties
// exists", a small conflict-driven solver, and DIMACS interchange.
//
// Variable v[p,a] (profile index p, alternative a) is p*m + a + 1, so the
// numbering is stable for a given canonical domain.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "npv/orders.hpp"
#include "npv/profiles.hpp"
#include "npv/rules.hpp"

namespace npv {

using Lit = int;  // DIMACS convention: +v / -v, never 0

struct CnfFormula {
  int var_count = 0;
  std::vector<std::vector<Lit>> clauses;
  // Shape of the variable map.
  int m = 0;
  std::size_t profile_count = 0;

  int var(std::size_t profile, Alternative a) const {
    return static_cast<int>(profile) * m + a.index + 1;
  }
  // Inverse of var(); only meaningful for 1 <= v <= profile_count * m.
  std::pair<std::size_t, Alternative> decode_var(int v) const {
    return {static_cast<std::size_t>((v - 1) / m), Alternative{(v - 1) % m}};
  }
};

// Exactly-one value per profile plus, for every h-variant pair (p,q) and
// values (a,b) where either endpoint would manipulate, the clause
// -v[p,a] | -v[q,b].
CnfFormula encode_base(const Domain& d);

struct FixConstraint {
  std::size_t profile;
  Alternative value;
};
// Some profile of the subdomain selects `value`.
struct AttainsConstraint {
  Alternative value;
  std::vector<std::size_t> subdomain;
};
// No profile of the subdomain selects `value`.
struct ExcludesConstraint {
  Alternative value;
  std::vector<std::size_t> subdomain;
};
// Somewhere, a member of `range` other than voter's top within `range` is
// selected.
struct NotDictatorConstraint {
  int voter;
  std::vector<Alternative> range;
};
// Every profile of the subdomain selects a member of `allowed`.
struct RangeSubsetConstraint {
  std::vector<Alternative> allowed;
  std::vector<std::size_t> subdomain;
};

using ScenarioConstraint = std::variant<FixConstraint, AttainsConstraint, ExcludesConstraint,
                                        NotDictatorConstraint, RangeSubsetConstraint>;

// Indices in `base` of every member of `sub` (throws kMembership otherwise).
std::vector<std::size_t> subdomain_indices(const Domain& base, const Domain& sub);
std::vector<std::size_t> all_indices(const Domain& base);

CnfFormula add_scenario(CnfFormula f, const Domain& d, const ScenarioConstraint& s);

struct Model {
  std::vector<bool> values;  // values[v] for 1 <= v <= var_count; values[0] unused

  bool value(int var) const { return values[static_cast<std::size_t>(var)]; }
  bool satisfies(Lit lit) const { return lit > 0 ? value(lit) : !value(-lit); }
};

bool satisfies(const CnfFormula& f, const Model& model);

enum class SolveStatus { kSat, kUnsat };

std::string_view to_string(SolveStatus s);

struct SolverOptions {
  // 0 branches on variables in index order; other seeds shuffle the order.
  std::uint64_t seed = 0;
  // Per-call conflict budget; exceeding it throws kResourceCap.
  std::uint64_t conflict_cap = 20'000'000;
};

struct SolverStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t learned = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kUnsat;
  Model model;  // filled when kSat
  SolverStats stats;
};

// Conflict-driven clause learning with first-UIP clauses, two watched
// literals and a fixed branching order. No restarts and no clause deletion.
// Clauses may be added between solve() calls; learned clauses persist.
class Solver {
 public:
  explicit Solver(int var_count, SolverOptions options = {});
  explicit Solver(const CnfFormula& f, SolverOptions options = {});

  void add_clause(std::span<const Lit> clause);
  void add_clause(std::initializer_list<Lit> clause) { add_clause(std::span<const Lit>(clause.begin(), clause.size())); }
  // Satisfiability under the given assumption literals.
  SolveResult solve(std::span<const Lit> assumptions = {});

  int var_count() const { return var_count_; }

 private:
  struct ClauseRef {
    std::uint32_t start;
    std::uint32_t size;
  };
  struct Watcher {
    std::uint32_t clause;
    int blocker;
  };
  static constexpr std::uint32_t kNoReason = 0xffffffffu;

  static int internal(Lit lit) { return lit > 0 ? 2 * (lit - 1) : 2 * (-lit - 1) + 1; }
  static int var_of(int x) { return x >> 1; }
  static int negate(int x) { return x ^ 1; }
  // 1 true, 0 false, -1 unassigned.
  int value(int x) const {
    const int v = assigns_[static_cast<std::size_t>(var_of(x))];
    return v < 0 ? -1 : v ^ (x & 1);
  }

  void enqueue(int x, std::uint32_t reason);
  std::optional<std::uint32_t> propagate();
  void analyze(std::uint32_t conflict, std::vector<int>& learned, int& backjump_level);
  void cancel_until(int level);
  std::uint32_t store_clause(std::span<const int> lits);
  int decision_level() const { return static_cast<int>(trail_limits_.size()); }
  int pick_branch();

  int var_count_;
  SolverOptions options_;
  bool ok_ = true;
  std::vector<int> arena_;
  std::vector<ClauseRef> clauses_;
  std::vector<std::vector<Watcher>> watches_;  // by internal literal
  std::vector<int> assigns_;
  std::vector<int> levels_;
  std::vector<std::uint32_t> reasons_;
  std::vector<int> trail_;
  std::vector<std::size_t> trail_limits_;
  std::size_t queue_head_ = 0;
  std::vector<int> order_;      // branching order of variables
  std::vector<int> order_pos_;  // var -> index in order_
  std::size_t next_branch_ = 0;
  std::vector<char> seen_;
  SolverStats stats_;
};

SolveResult solve(const CnfFormula& f, const SolverOptions& options = {});

// `p cnf <vars> <clauses>` followed by zero-terminated clauses.
std::string export_dimacs(const CnfFormula& f);
void write_dimacs(const CnfFormula& f, std::ostream& out);
// Solver output: `v` lines of literals, terminated by 0; `s`/`c` lines are
// ignored. Unmentioned variables are false.
Model import_model(std::string_view text, const CnfFormula& f);
// `<var> <profile-encoding> <alternative-letter>` for every v[p,a].
void write_var_map(const CnfFormula& f, const Domain& d, std::ostream& out);

// Table rule with g(p) = the unique a with v[p,a] true.
Rule decode_model(const Model& model, const CnfFormula& f, const DomainPtr& d);
// Assignment v[p,a] = (g(p) == a).
Model rule_assignment(const Rule& g, const CnfFormula& f);

}  // namespace npv

#endif  // NPV_CNF_HPP_
