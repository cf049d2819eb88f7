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

#include "npv/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <sstream>

#include "npv/error.hpp"

namespace npv {

CnfFormula encode_base(const Domain& d) {
  CnfFormula f;
  f.m = d.m();
  f.profile_count = d.size();
  f.var_count = static_cast<int>(d.size()) * d.m();
  const int m = d.m();
  for (std::size_t p = 0; p < d.size(); ++p) {
    std::vector<Lit> at_least;
    for (int a = 0; a < m; ++a) at_least.push_back(f.var(p, Alternative{a}));
    f.clauses.push_back(at_least);
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        f.clauses.push_back({-f.var(p, Alternative{a}), -f.var(p, Alternative{b})});
      }
    }
  }
  for (std::size_t p = 0; p < d.size(); ++p) {
    const Profile& pp = d.profile(p);
    for (int h = 0; h < d.n(); ++h) {
      for (std::size_t q : d.variant_indices(p, h)) {
        if (q < p) continue;
        const Ordering& at_p = pp.voter(h);
        const Ordering& at_q = d.profile(q).voter(h);
        for (int a = 0; a < m; ++a) {
          for (int b = 0; b < m; ++b) {
            if (a == b) continue;
            const Alternative va{a}, vb{b};
            if (at_p.prefers(vb, va) || at_q.prefers(va, vb)) {
              f.clauses.push_back({-f.var(p, va), -f.var(q, vb)});
            }
          }
        }
      }
    }
  }
  return f;
}

std::vector<std::size_t> subdomain_indices(const Domain& base, const Domain& sub) {
  std::vector<std::size_t> out;
  out.reserve(sub.size());
  for (const Profile& p : sub.profiles()) out.push_back(base.index_of(p));
  return out;
}

std::vector<std::size_t> all_indices(const Domain& base) {
  std::vector<std::size_t> out(base.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

namespace {

void check_alternative(const Domain& d, Alternative a) {
  if (a.index < 0 || a.index >= d.m()) fail(ErrorKind::kInvalidAlternative, "alternative outside the universe");
}

void check_indices(const Domain& d, const std::vector<std::size_t>& sub) {
  for (std::size_t i : sub) {
    if (i >= d.size()) fail(ErrorKind::kMembership, "subdomain index outside the domain");
  }
}

}  // namespace

CnfFormula add_scenario(CnfFormula f, const Domain& d, const ScenarioConstraint& s) {
  if (f.profile_count != d.size() || f.m != d.m()) {
    fail(ErrorKind::kScenario, "formula does not encode this domain");
  }
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, FixConstraint>) {
          check_alternative(d, c.value);
          if (c.profile >= d.size()) fail(ErrorKind::kMembership, "fixed profile outside the domain");
          f.clauses.push_back({f.var(c.profile, c.value)});
        } else if constexpr (std::is_same_v<T, AttainsConstraint>) {
          check_alternative(d, c.value);
          check_indices(d, c.subdomain);
          std::vector<Lit> clause;
          for (std::size_t p : c.subdomain) clause.push_back(f.var(p, c.value));
          f.clauses.push_back(clause);
        } else if constexpr (std::is_same_v<T, ExcludesConstraint>) {
          check_alternative(d, c.value);
          check_indices(d, c.subdomain);
          for (std::size_t p : c.subdomain) f.clauses.push_back({-f.var(p, c.value)});
        } else if constexpr (std::is_same_v<T, NotDictatorConstraint>) {
          if (c.range.empty()) fail(ErrorKind::kScenario, "declared range is empty");
          if (c.voter < 0 || c.voter >= d.n()) fail(ErrorKind::kInvalidArgument, "voter outside 1..n");
          for (Alternative a : c.range) check_alternative(d, a);
          std::vector<Lit> clause;
          for (std::size_t p = 0; p < d.size(); ++p) {
            const Ordering& o = d.profile(p).voter(c.voter);
            Alternative top = c.range.front();
            for (Alternative a : c.range) {
              if (o.prefers(a, top)) top = a;
            }
            for (Alternative a : c.range) {
              if (a != top) clause.push_back(f.var(p, a));
            }
          }
          f.clauses.push_back(clause);
        } else {
          if (c.allowed.empty()) fail(ErrorKind::kScenario, "allowed range is empty");
          check_indices(d, c.subdomain);
          std::vector<bool> ok(static_cast<std::size_t>(d.m()), false);
          for (Alternative a : c.allowed) {
            check_alternative(d, a);
            ok[static_cast<std::size_t>(a.index)] = true;
          }
          for (std::size_t p : c.subdomain) {
            for (int a = 0; a < d.m(); ++a) {
              if (!ok[static_cast<std::size_t>(a)]) f.clauses.push_back({-f.var(p, Alternative{a})});
            }
          }
        }
      },
      s);
  return f;
}

bool satisfies(const CnfFormula& f, const Model& model) {
  if (static_cast<int>(model.values.size()) < f.var_count + 1) return false;
  for (const auto& clause : f.clauses) {
    if (std::none_of(clause.begin(), clause.end(), [&](Lit l) { return model.satisfies(l); })) return false;
  }
  return true;
}

std::string_view to_string(SolveStatus s) { return s == SolveStatus::kSat ? "SAT" : "UNSAT"; }

// --- solver ---------------------------------------------------------------

Solver::Solver(int var_count, SolverOptions options)
    : var_count_(var_count),
      options_(options),
      watches_(static_cast<std::size_t>(2 * var_count)),
      assigns_(static_cast<std::size_t>(var_count), -1),
      levels_(static_cast<std::size_t>(var_count), 0),
      reasons_(static_cast<std::size_t>(var_count), kNoReason),
      order_(static_cast<std::size_t>(var_count)),
      order_pos_(static_cast<std::size_t>(var_count)),
      seen_(static_cast<std::size_t>(var_count), 0) {
  if (var_count < 0) fail(ErrorKind::kInvalidArgument, "negative variable count");
  for (int v = 0; v < var_count; ++v) order_[static_cast<std::size_t>(v)] = v;
  if (options_.seed != 0) {
    std::mt19937_64 rng(options_.seed);
    std::shuffle(order_.begin(), order_.end(), rng);
  }
  for (int i = 0; i < var_count; ++i) order_pos_[static_cast<std::size_t>(order_[static_cast<std::size_t>(i)])] = i;
}

Solver::Solver(const CnfFormula& f, SolverOptions options) : Solver(f.var_count, options) {
  for (const auto& clause : f.clauses) add_clause(clause);
}

std::uint32_t Solver::store_clause(std::span<const int> lits) {
  const auto index = static_cast<std::uint32_t>(clauses_.size());
  clauses_.push_back({static_cast<std::uint32_t>(arena_.size()), static_cast<std::uint32_t>(lits.size())});
  arena_.insert(arena_.end(), lits.begin(), lits.end());
  watches_[static_cast<std::size_t>(negate(lits[0]))].push_back({index, lits[1]});
  watches_[static_cast<std::size_t>(negate(lits[1]))].push_back({index, lits[0]});
  return index;
}

void Solver::add_clause(std::span<const Lit> clause) {
  if (!ok_) return;
  cancel_until(0);
  std::vector<int> lits;
  for (Lit l : clause) {
    if (l == 0 || std::abs(l) > var_count_) fail(ErrorKind::kInvalidArgument, "literal outside the variable range");
    lits.push_back(internal(l));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<int> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && lits[i + 1] == negate(lits[i])) return;  // tautology
    const int v = value(lits[i]);
    if (v == 1) return;
    if (v == -1) kept.push_back(lits[i]);
  }
  if (kept.empty()) {
    ok_ = false;
  } else if (kept.size() == 1) {
    enqueue(kept[0], kNoReason);
    if (propagate()) ok_ = false;
  } else {
    store_clause(kept);
  }
}

void Solver::enqueue(int x, std::uint32_t reason) {
  const auto v = static_cast<std::size_t>(var_of(x));
  assigns_[v] = (x & 1) ? 0 : 1;
  levels_[v] = decision_level();
  reasons_[v] = reason;
  trail_.push_back(x);
}

std::optional<std::uint32_t> Solver::propagate() {
  while (queue_head_ < trail_.size()) {
    const int p = trail_[queue_head_++];
    ++stats_.propagations;
    // Clauses watching -p now have a false watch.
    auto& ws = watches_[static_cast<std::size_t>(p)];
    std::size_t keep = 0;
    std::size_t i = 0;
    std::optional<std::uint32_t> conflict;
    const int false_lit = negate(p);
    for (; i < ws.size(); ++i) {
      Watcher w = ws[i];
      if (value(w.blocker) == 1) {
        ws[keep++] = w;
        continue;
      }
      const ClauseRef& c = clauses_[w.clause];
      int* lits = arena_.data() + c.start;
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      const int first = lits[0];
      const Watcher updated{w.clause, first};
      if (first != w.blocker && value(first) == 1) {
        ws[keep++] = updated;
        continue;
      }
      bool moved = false;
      for (std::uint32_t k = 2; k < c.size; ++k) {
        if (value(lits[k]) != 0) {
          std::swap(lits[1], lits[k]);
          watches_[static_cast<std::size_t>(negate(lits[1]))].push_back(updated);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[keep++] = updated;
      if (value(first) == 0) {
        conflict = w.clause;
        for (++i; i < ws.size(); ++i) ws[keep++] = ws[i];
        break;
      }
      enqueue(first, w.clause);
    }
    ws.resize(keep);
    if (conflict) {
      queue_head_ = trail_.size();
      return conflict;
    }
  }
  return std::nullopt;
}

void Solver::analyze(std::uint32_t conflict, std::vector<int>& learned, int& backjump_level) {
  learned.clear();
  learned.push_back(-1);  // slot for the asserting literal
  int pending = 0;
  int p = -1;
  std::size_t index = trail_.size();
  std::uint32_t reason = conflict;
  std::vector<int> touched;
  do {
    const ClauseRef& c = clauses_[reason];
    const int* lits = arena_.data() + c.start;
    for (std::uint32_t k = (p == -1 ? 0 : 1); k < c.size; ++k) {
      const int q = lits[k];
      const auto v = static_cast<std::size_t>(var_of(q));
      if (seen_[v] || levels_[v] == 0) continue;
      seen_[v] = 1;
      touched.push_back(var_of(q));
      if (levels_[v] >= decision_level()) {
        ++pending;
      } else {
        learned.push_back(q);
      }
    }
    do {
      p = trail_[--index];
    } while (!seen_[static_cast<std::size_t>(var_of(p))]);
    reason = reasons_[static_cast<std::size_t>(var_of(p))];
    --pending;
  } while (pending > 0);
  learned[0] = negate(p);
  for (int v : touched) seen_[static_cast<std::size_t>(v)] = 0;

  backjump_level = 0;
  if (learned.size() > 1) {
    std::size_t best = 1;
    for (std::size_t k = 2; k < learned.size(); ++k) {
      if (levels_[static_cast<std::size_t>(var_of(learned[k]))] >
          levels_[static_cast<std::size_t>(var_of(learned[best]))]) {
        best = k;
      }
    }
    std::swap(learned[1], learned[best]);
    backjump_level = levels_[static_cast<std::size_t>(var_of(learned[1]))];
  }
}

void Solver::cancel_until(int level) {
  if (decision_level() <= level) return;
  const std::size_t keep = trail_limits_[static_cast<std::size_t>(level)];
  for (std::size_t k = trail_.size(); k-- > keep;) {
    const int v = var_of(trail_[k]);
    assigns_[static_cast<std::size_t>(v)] = -1;
    reasons_[static_cast<std::size_t>(v)] = kNoReason;
    const auto pos = static_cast<std::size_t>(order_pos_[static_cast<std::size_t>(v)]);
    if (pos < next_branch_) next_branch_ = pos;
  }
  trail_.resize(keep);
  trail_limits_.resize(static_cast<std::size_t>(level));
  queue_head_ = trail_.size();
}

int Solver::pick_branch() {
  while (next_branch_ < order_.size()) {
    const int v = order_[next_branch_];
    if (assigns_[static_cast<std::size_t>(v)] < 0) return v;
    ++next_branch_;
  }
  return -1;
}

SolveResult Solver::solve(std::span<const Lit> assumptions) {
  SolveResult result;
  const SolverStats before = stats_;
  auto finish = [&](SolveStatus status) {
    result.status = status;
    if (status == SolveStatus::kSat) {
      result.model.values.assign(static_cast<std::size_t>(var_count_) + 1, false);
      for (int v = 0; v < var_count_; ++v) result.model.values[static_cast<std::size_t>(v) + 1] = assigns_[static_cast<std::size_t>(v)] == 1;
    }
    result.stats.conflicts = stats_.conflicts - before.conflicts;
    result.stats.decisions = stats_.decisions - before.decisions;
    result.stats.propagations = stats_.propagations - before.propagations;
    result.stats.learned = stats_.learned - before.learned;
    cancel_until(0);
    return result;
  };
  if (!ok_) return finish(SolveStatus::kUnsat);
  std::vector<int> assume;
  for (Lit l : assumptions) {
    if (l == 0 || std::abs(l) > var_count_) fail(ErrorKind::kInvalidArgument, "assumption outside the variable range");
    assume.push_back(internal(l));
  }
  cancel_until(0);
  std::vector<int> learned;
  std::uint64_t conflicts = 0;
  for (;;) {
    if (auto conflict = propagate()) {
      ++stats_.conflicts;
      if (++conflicts > options_.conflict_cap) {
        cancel_until(0);
        fail(ErrorKind::kResourceCap, "solver conflict cap exceeded");
      }
      if (decision_level() == 0) {
        ok_ = false;
        return finish(SolveStatus::kUnsat);
      }
      int level = 0;
      analyze(*conflict, learned, level);
      cancel_until(level);
      if (learned.size() == 1) {
        enqueue(learned[0], kNoReason);
      } else {
        const std::uint32_t ref = store_clause(learned);
        ++stats_.learned;
        enqueue(learned[0], ref);
      }
      continue;
    }
    int next = -1;
    while (decision_level() < static_cast<int>(assume.size())) {
      const int a = assume[static_cast<std::size_t>(decision_level())];
      const int v = value(a);
      if (v == 1) {
        trail_limits_.push_back(trail_.size());
      } else if (v == 0) {
        return finish(SolveStatus::kUnsat);
      } else {
        next = a;
        break;
      }
    }
    if (next == -1) {
      const int v = pick_branch();
      if (v < 0) return finish(SolveStatus::kSat);
      next = 2 * v + 1;  // default phase: false
    }
    ++stats_.decisions;
    trail_limits_.push_back(trail_.size());
    enqueue(next, kNoReason);
  }
}

SolveResult solve(const CnfFormula& f, const SolverOptions& options) {
  Solver solver(f, options);
  return solver.solve();
}

// --- interchange ----------------------------------------------------------

void write_dimacs(const CnfFormula& f, std::ostream& out) {
  out << "p cnf " << f.var_count << ' ' << f.clauses.size() << '\n';
  for (const auto& clause : f.clauses) {
    for (Lit l : clause) out << l << ' ';
    out << "0\n";
  }
}

std::string export_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  write_dimacs(f, out);
  return out.str();
}

Model import_model(std::string_view text, const CnfFormula& f) {
  Model model;
  model.values.assign(static_cast<std::size_t>(f.var_count) + 1, false);
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    const std::size_t line_start = offset;
    offset = end + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty() || line[0] == 'c' || line[0] == 's') continue;
    if (line[0] != 'v') fail(ErrorKind::kParse, "unexpected line at offset " + std::to_string(line_start));
    std::size_t k = 1;
    while (k < line.size()) {
      while (k < line.size() && (line[k] == ' ' || line[k] == '\t')) ++k;
      if (k >= line.size()) break;
      std::size_t stop = k;
      while (stop < line.size() && line[stop] != ' ' && line[stop] != '\t') ++stop;
      int lit = 0;
      const auto [ptr, ec] = std::from_chars(line.data() + k, line.data() + stop, lit);
      if (ec != std::errc() || ptr != line.data() + stop) {
        fail(ErrorKind::kParse, "bad literal at offset " + std::to_string(line_start + k));
      }
      if (lit != 0) {
        if (std::abs(lit) > f.var_count) {
          fail(ErrorKind::kParse, "variable out of range at offset " + std::to_string(line_start + k));
        }
        model.values[static_cast<std::size_t>(std::abs(lit))] = lit > 0;
      }
      k = stop;
    }
  }
  return model;
}

void write_var_map(const CnfFormula& f, const Domain& d, std::ostream& out) {
  for (std::size_t p = 0; p < d.size(); ++p) {
    const std::string enc = encode_profile(d.profile(p));
    for (int a = 0; a < d.m(); ++a) {
      out << f.var(p, Alternative{a}) << ' ' << enc << ' ' << alternative_letter(Alternative{a}, d.m()) << '\n';
    }
  }
}

Rule decode_model(const Model& model, const CnfFormula& f, const DomainPtr& d) {
  if (f.profile_count != d->size() || f.m != d->m()) fail(ErrorKind::kEncodingViolation, "formula does not encode this domain");
  if (static_cast<int>(model.values.size()) < f.var_count + 1) fail(ErrorKind::kEncodingViolation, "model too short");
  std::vector<Alternative> values(d->size());
  for (std::size_t p = 0; p < d->size(); ++p) {
    int count = 0;
    for (int a = 0; a < d->m(); ++a) {
      if (model.value(f.var(p, Alternative{a}))) {
        values[p] = Alternative{a};
        ++count;
      }
    }
    if (count != 1) {
      fail(ErrorKind::kEncodingViolation,
           "profile " + encode_profile(d->profile(p)) + " has " + std::to_string(count) + " selected values");
    }
  }
  return Rule::table(d, std::move(values));
}

Model rule_assignment(const Rule& g, const CnfFormula& f) {
  Model model;
  model.values.assign(static_cast<std::size_t>(f.var_count) + 1, false);
  for (std::size_t p = 0; p < f.profile_count; ++p) {
    model.values[static_cast<std::size_t>(f.var(p, g.evaluate_at(p)))] = true;
  }
  return model;
}

}  // namespace npv
