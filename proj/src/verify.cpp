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

#include "npv/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "npv/error.hpp"
#include "npv/strategyproof.hpp"

namespace npv {

namespace {

constexpr std::string_view kCodeVersion = "npverify-1";

Ordering ord(std::string_view text) { return decode_ordering(text, 3); }

Profile checked(std::vector<Ordering> voters, std::string_view what) {
  Profile p(std::move(voters));
  if (!is_np(p)) fail(ErrorKind::kContract, std::string(what) + " is not Pareto-free: " + encode_profile(p));
  return p;
}

// Voters 1, 2, block 3..n-2, n-1, n.
Profile layout(int n, std::string_view v1, std::string_view v2, std::string_view block, std::string_view before_last,
               std::string_view last, std::string_view what) {
  std::vector<Ordering> voters{ord(v1), ord(v2)};
  for (int i = 3; i <= n - 2; ++i) voters.push_back(ord(block));
  voters.push_back(ord(before_last));
  voters.push_back(ord(last));
  return checked(std::move(voters), what);
}

}  // namespace

std::array<Profile, 3> build_list_part1(int n) {
  if (n < 3) fail(ErrorKind::kUnsupportedParameters, "the first list needs n >= 3");
  std::vector<Ordering> l1, l2, l3;
  for (int i = 1; i <= n; ++i) {
    const bool early = i <= n - 2;
    l1.push_back(ord(early || i == n ? "xyz" : "zyx"));
    l2.push_back(ord(i == 1 ? "zxy" : (i == n - 1 ? "yxz" : "xzy")));
    l3.push_back(ord(early ? "xzy" : (i == n - 1 ? "yxz" : "zxy")));
  }
  return {checked(std::move(l1), "L1"), checked(std::move(l2), "L2"), checked(std::move(l3), "L3")};
}

Profile swap_yz(const Profile& p) {
  const std::array<Alternative, 3> perm{kX, kZ, kY};
  return relabel(p, perm);
}

ListPart2 build_list_part2(int n) {
  if (n < 4) fail(ErrorKind::kUnsupportedParameters, "the second list needs n >= 4");
  ListPart2 out{{layout(n, "yxz", "yxz", "yzx", "yzx", "zxy", "L1"), layout(n, "zyx", "yxz", "yzx", "xyz", "yxz", "L2"),
                 layout(n, "yzx", "yxz", "yzx", "xzy", "yxz", "L3"), layout(n, "yxz", "yxz", "yzx", "xyz", "zyx", "L4")},
                {},
                {}};
  for (std::size_t k = 0; k < 4; ++k) {
    out.star[k] = swap_yz(out.base[k]);
    if (!is_np(out.star[k])) fail(ErrorKind::kContract, "L*" + std::to_string(k + 1) + " is not Pareto-free");
    Profile dd = out.star[k];
    for (int i = 2; i <= n - 3; ++i) {
      if (dd.voter(i) == ord("zyx")) dd = dd.with_voter(i, ord("yzx"));
    }
    if (!is_np(dd)) fail(ErrorKind::kContract, "L**" + std::to_string(k + 1) + " is not Pareto-free");
    out.double_star[k] = dd;
  }
  return out;
}

std::string_view to_string(Expectation e) {
  switch (e) {
    case Expectation::kSat:
      return "SAT";
    case Expectation::kUnsat:
      return "UNSAT";
    case Expectation::kReport:
      return "REPORT";
  }
  return "?";
}

std::vector<std::string> scenario_names() {
  return {"gs_np",   "sanity_sat", "nrange_part1", "nrange_part2", "nrange_full", "example1_exists",
          "lemma4_2", "lemma4_3",  "lemma4_4",     "lemma4_5"};
}

namespace {

std::vector<std::size_t> star_indices(const Domain& d) { return subdomain_indices(d, *np_star(d)); }

void require_n(int n, int low, const std::string& name) {
  if (n < low) fail(ErrorKind::kUnsupportedParameters, name + " needs n >= " + std::to_string(low));
}

int var_of(const Scenario& s, const Profile& p, Alternative a) {
  return static_cast<int>(s.domain->index_of(p)) * s.m + a.index + 1;
}

}  // namespace

Scenario make_scenario(const std::string& name, int n, int j) {
  const auto names = scenario_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) fail(ErrorKind::kScenario, "unknown scenario " + name);
  require_n(n, 3, name);
  if (n > 6) fail(ErrorKind::kUnsupportedParameters, name + " supports n <= 6");
  Scenario s;
  s.name = name;
  s.n = n;
  s.m = 3;
  s.domain = enumerate_np(n, 3);
  const Domain& d = *s.domain;
  const auto all = all_indices(d);
  const std::vector<Alternative> xyz{kX, kY, kZ};
  auto one = [&](std::string label) { s.instances.push_back({std::move(label), {}}); };

  if (name == "gs_np" || name == "sanity_sat") {
    for (Alternative a : xyz) s.constraints.push_back(AttainsConstraint{a, all});
    if (name == "gs_np") {
      for (int i = 0; i < n; ++i) s.constraints.push_back(NotDictatorConstraint{i, xyz});
      s.expected = Expectation::kUnsat;
      s.description = "strategy-proof, full range, no dictator";
    } else {
      s.expected = Expectation::kSat;
      s.description = "strategy-proof, full range";
    }
    one("main");
  } else if (name == "nrange_part1") {
    const auto star = star_indices(d);
    s.constraints.push_back(RangeSubsetConstraint{{kY, kZ}, star});
    s.constraints.push_back(AttainsConstraint{kY, star});
    s.constraints.push_back(AttainsConstraint{kZ, star});
    s.constraints.push_back(AttainsConstraint{kX, all});
    s.expected = Expectation::kUnsat;
    s.description = "range {y,z} on NP*, x attained on NP";
    one("main");
  } else if (name == "nrange_part2") {
    s.constraints.push_back(RangeSubsetConstraint{{kX}, star_indices(d)});
    s.constraints.push_back(AttainsConstraint{kY, all});
    s.constraints.push_back(AttainsConstraint{kZ, all});
    s.expected = Expectation::kUnsat;
    s.description = "range {x} on NP*, y and z attained on NP";
    one("main");
  } else if (name == "nrange_full") {
    for (Alternative a : xyz) s.constraints.push_back(AttainsConstraint{a, all});
    const auto star = star_indices(d);
    for (Alternative a : xyz) {
      ScenarioInstance inst{std::string("never ") + alternative_letter(a, 3) + " on NP*", {}};
      for (std::size_t p : star) inst.assumptions.push_back(-(static_cast<int>(p) * 3 + a.index + 1));
      s.instances.push_back(std::move(inst));
    }
    s.expected = Expectation::kUnsat;
    s.description = "full range on NP, some alternative never chosen on NP*";
  } else if (name == "example1_exists") {
    s.constraints.push_back(RangeSubsetConstraint{{kX}, star_indices(d)});
    s.constraints.push_back(AttainsConstraint{kY, all});
    s.expected = n > 3 ? Expectation::kSat : Expectation::kReport;
    s.description = "range {x} on NP*, y attained on NP";
    one("main");
  } else if (name == "lemma4_2" || name == "lemma4_3") {
    s.constraints.push_back(RangeSubsetConstraint{{kX}, star_indices(d)});
    const bool top = name == "lemma4_2";
    for (std::size_t p = 0; p < d.size(); ++p) {
      const Profile& u = d.profile(p);
      int who = -1;
      for (int i = 0; i + 2 < n && who < 0; ++i) {
        if (top ? u.voter(i).top() == kX : u.voter(i).bottom() == kY) who = i;
      }
      if (who < 0) continue;
      const int lit = top ? -(static_cast<int>(p) * 3 + kX.index + 1) : static_cast<int>(p) * 3 + kY.index + 1;
      s.instances.push_back({encode_profile(u), {lit}});
    }
    s.expected = Expectation::kUnsat;
    s.description = top ? "range {x} on NP*, g(u) != x where one of 1..n-2 ranks x first"
                        : "range {x} on NP*, g(u) = y where one of 1..n-2 ranks y last";
  } else if (name == "lemma4_4" || name == "lemma4_5") {
    require_n(n, 4, name);
    const ListPart2 lists = build_list_part2(n);
    auto query = [&](std::string label, const Profile& fixed, const Profile& other) {
      s.instances.push_back({std::move(label), {var_of(s, fixed, kX), -var_of(s, other, kX)}});
    };
    if (name == "lemma4_4") {
      if (j < 0 || j > 4) fail(ErrorKind::kUnsupportedParameters, "lemma4_4 takes j in 1..4");
      s.j = j;
      for (int k = 1; k <= 4; ++k) {
        if (j != 0 && k != j) continue;
        const auto idx = static_cast<std::size_t>(k - 1);
        query("j=" + std::to_string(k), lists.double_star[idx], lists.star[idx]);
      }
      s.description = "g(Lj**) = x and g(Lj*) != x";
    } else {
      query("main", lists.double_star[2], lists.double_star[1]);
      s.description = "g(L3**) = x and g(L2**) != x";
    }
    s.expected = Expectation::kUnsat;
  }
  if (s.instances.empty()) fail(ErrorKind::kScenario, name + " has no qualifying profiles at n=" + std::to_string(n));
  return s;
}

Scenario relabel_scenario(const Scenario& s, std::span<const Alternative> perm) {
  if (static_cast<int>(perm.size()) != s.m) fail(ErrorKind::kInvalidArgument, "relabeling has wrong size");
  const Domain& d = *s.domain;
  std::vector<std::size_t> map(d.size());
  for (std::size_t p = 0; p < d.size(); ++p) map[p] = d.index_of(relabel(d.profile(p), perm));
  auto alt = [&](Alternative a) { return perm[static_cast<std::size_t>(a.index)]; };
  auto alts = [&](std::vector<Alternative> v) {
    for (Alternative& a : v) a = alt(a);
    return v;
  };
  auto idx = [&](std::vector<std::size_t> v) {
    for (std::size_t& p : v) p = map[p];
    return v;
  };
  Scenario out = s;
  out.name = s.name + "/relabeled";
  out.constraints.clear();
  for (const ScenarioConstraint& c : s.constraints) {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, FixConstraint>) {
            out.constraints.push_back(FixConstraint{map[k.profile], alt(k.value)});
          } else if constexpr (std::is_same_v<T, AttainsConstraint>) {
            out.constraints.push_back(AttainsConstraint{alt(k.value), idx(k.subdomain)});
          } else if constexpr (std::is_same_v<T, ExcludesConstraint>) {
            out.constraints.push_back(ExcludesConstraint{alt(k.value), idx(k.subdomain)});
          } else if constexpr (std::is_same_v<T, NotDictatorConstraint>) {
            out.constraints.push_back(NotDictatorConstraint{k.voter, alts(k.range)});
          } else {
            out.constraints.push_back(RangeSubsetConstraint{alts(k.allowed), idx(k.subdomain)});
          }
        },
        c);
  }
  for (ScenarioInstance& inst : out.instances) {
    for (Lit& l : inst.assumptions) {
      const int v = std::abs(l) - 1;
      const int moved = static_cast<int>(map[static_cast<std::size_t>(v / s.m)]) * s.m + alt(Alternative{v % s.m}).index + 1;
      l = l > 0 ? moved : -moved;
    }
  }
  return out;
}

CnfFormula encode_scenario(const Scenario& s) {
  CnfFormula f = encode_base(*s.domain);
  for (const ScenarioConstraint& c : s.constraints) f = add_scenario(std::move(f), *s.domain, c);
  return f;
}

SolveStatus Report::outcome() const {
  for (const InstanceResult& r : instances) {
    if (r.status == SolveStatus::kSat) return SolveStatus::kSat;
  }
  return SolveStatus::kUnsat;
}

bool Report::expectation_met() const {
  for (const InstanceResult& r : instances) {
    if (r.witness && !r.witness_check.empty()) return false;
    if (expected == Expectation::kSat && r.status != SolveStatus::kSat) return false;
    if (expected == Expectation::kUnsat && r.status != SolveStatus::kUnsat) return false;
  }
  return true;
}

std::string check_witness(const Rule& g, const Scenario& s, const ScenarioInstance& instance) {
  const Domain& d = *s.domain;
  if (g.domain().size() != d.size()) return "witness is defined on a different domain";
  if (auto w = find_manipulation(g, d)) return format_witness(d, *w);
  auto name = [&](Alternative a) { return std::string(1, alternative_letter(a, s.m)); };
  for (const ScenarioConstraint& c : s.constraints) {
    std::string problem;
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, FixConstraint>) {
            if (g.evaluate_at(k.profile) != k.value) problem = "fixed value " + name(k.value) + " not selected";
          } else if constexpr (std::is_same_v<T, AttainsConstraint>) {
            if (std::none_of(k.subdomain.begin(), k.subdomain.end(),
                             [&](std::size_t p) { return g.evaluate_at(p) == k.value; })) {
              problem = name(k.value) + " never selected";
            }
          } else if constexpr (std::is_same_v<T, ExcludesConstraint>) {
            for (std::size_t p : k.subdomain) {
              if (g.evaluate_at(p) == k.value) problem = name(k.value) + " selected at " + encode_profile(d.profile(p));
            }
          } else if constexpr (std::is_same_v<T, NotDictatorConstraint>) {
            bool deviates = false;
            for (std::size_t p = 0; p < d.size() && !deviates; ++p) {
              const Ordering& o = d.profile(p).voter(k.voter);
              Alternative top = k.range.front();
              for (Alternative a : k.range) {
                if (o.prefers(a, top)) top = a;
              }
              deviates = g.evaluate_at(p) != top;
            }
            if (!deviates) problem = "voter " + voter_label(k.voter) + " is a dictator";
          } else {
            for (std::size_t p : k.subdomain) {
              if (std::find(k.allowed.begin(), k.allowed.end(), g.evaluate_at(p)) == k.allowed.end()) {
                problem = "value outside the allowed range at " + encode_profile(d.profile(p));
              }
            }
          }
        },
        c);
    if (!problem.empty()) return problem;
  }
  for (Lit l : instance.assumptions) {
    const int v = std::abs(l) - 1;
    const bool chosen = g.evaluate_at(static_cast<std::size_t>(v / s.m)) == Alternative{v % s.m};
    if (chosen != (l > 0)) return "assumption " + std::to_string(l) + " does not hold";
  }
  return {};
}

namespace {

std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string cache_key(const Scenario& s, const CnfFormula& f) {
  std::ostringstream text;
  text << kCodeVersion << '\n' << s.name << ' ' << s.n << ' ' << s.m << ' ' << s.j << '\n';
  write_dimacs(f, text);
  for (const ScenarioInstance& inst : s.instances) {
    text << "a";
    for (Lit l : inst.assumptions) text << ' ' << l;
    text << '\n';
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(text.str());
  return hex.str();
}

std::string witness_letters(const Rule& g) {
  std::string out;
  for (std::size_t p = 0; p < g.domain().size(); ++p) out += alternative_letter(g.evaluate_at(p), g.domain().m());
  return out;
}

bool load_cached(const std::filesystem::path& file, const Scenario& s, Report& report) {
  std::ifstream in(file);
  if (!in) return false;
  std::vector<InstanceResult> results;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string status, letters;
    InstanceResult r;
    if (!(fields >> status >> r.stats.conflicts >> r.stats.decisions >> letters)) return false;
    r.status = status == "SAT" ? SolveStatus::kSat : SolveStatus::kUnsat;
    if (letters != "-") {
      if (letters.size() != s.domain->size()) return false;
      std::vector<Alternative> values;
      for (char c : letters) {
        const auto a = parse_alternative(c, s.m);
        if (!a) return false;
        values.push_back(*a);
      }
      r.witness = Rule::table(s.domain, std::move(values));
    }
    results.push_back(std::move(r));
  }
  if (results.size() != s.instances.size()) return false;
  for (std::size_t k = 0; k < results.size(); ++k) {
    results[k].label = s.instances[k].label;
    if (results[k].witness) results[k].witness_check = check_witness(*results[k].witness, s, s.instances[k]);
  }
  report.instances = std::move(results);
  return true;
}

void store_cached(const std::filesystem::path& file, const Report& report) {
  std::filesystem::create_directories(file.parent_path());
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    for (const InstanceResult& r : report.instances) {
      out << to_string(r.status) << ' ' << r.stats.conflicts << ' ' << r.stats.decisions << ' '
          << (r.witness ? witness_letters(*r.witness) : std::string("-")) << '\n';
    }
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace

Report run_scenario(const Scenario& s, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.scenario = s.name;
  report.n = s.n;
  report.m = s.m;
  report.expected = s.expected;
  report.domain_size = s.domain->size();
  report.np_star_size = np_star(*s.domain)->size();
  const CnfFormula f = encode_scenario(s);
  report.var_count = f.var_count;
  report.clause_count = f.clauses.size();

  std::optional<std::filesystem::path> cache_file;
  if (options.cache_dir) cache_file = *options.cache_dir / (cache_key(s, f) + ".txt");
  if (cache_file && load_cached(*cache_file, s, report)) {
    report.from_cache = true;
  } else {
    Solver solver(f, options.solver);
    for (const ScenarioInstance& inst : s.instances) {
      InstanceResult r;
      r.label = inst.label;
      SolveResult res = solver.solve(inst.assumptions);
      r.status = res.status;
      r.stats = res.stats;
      if (res.status == SolveStatus::kSat) {
        r.witness = decode_model(res.model, f, s.domain);
        r.witness_check = check_witness(*r.witness, s, inst);
      }
      report.instances.push_back(std::move(r));
    }
    if (cache_file) store_cached(*cache_file, report);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<Report> run_scenarios(const std::vector<Scenario>& scenarios, const RunOptions& options, unsigned threads) {
  std::vector<Report> reports(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < scenarios.size(); k = next++) {
      try {
        reports[k] = run_scenario(scenarios[k], options);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(scenarios.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return reports;
}

std::vector<Rule> enumerate_models(const Scenario& s, std::size_t k, const SolverOptions& options) {
  std::vector<Rule> out;
  if (k == 0) return out;
  const CnfFormula f = encode_scenario(s);
  Solver solver(f, options);
  const ScenarioInstance& inst = s.instances.front();
  while (out.size() < k) {
    const SolveResult res = solver.solve(inst.assumptions);
    if (res.status != SolveStatus::kSat) break;
    Rule g = decode_model(res.model, f, s.domain);
    const std::string problem = check_witness(g, s, inst);
    if (!problem.empty()) fail(ErrorKind::kEncodingViolation, "enumerated model rejected: " + problem);
    std::vector<Lit> block;
    for (std::size_t p = 0; p < s.domain->size(); ++p) block.push_back(-f.var(p, g.evaluate_at(p)));
    solver.add_clause(block);
    out.push_back(std::move(g));
  }
  return out;
}

void write_scenario_dimacs(const Scenario& s, std::ostream& cnf, std::ostream& assumptions) {
  write_dimacs(encode_scenario(s), cnf);
  for (const ScenarioInstance& inst : s.instances) {
    assumptions << 'a';
    for (Lit l : inst.assumptions) assumptions << ' ' << l;
    assumptions << " 0\n";
  }
}

void write_report(const Report& r, std::ostream& out) {
  out << "scenario " << r.scenario << " n=" << r.n << " m=" << r.m << " expected=" << to_string(r.expected) << '\n';
  out << "domain |NP|=" << r.domain_size << " |NP*|=" << r.np_star_size << " vars=" << r.var_count
      << " clauses=" << r.clause_count << '\n';
  std::size_t sat = 0;
  for (const InstanceResult& inst : r.instances) {
    if (inst.status == SolveStatus::kSat) ++sat;
  }
  const bool brief = r.instances.size() > 8;
  for (const InstanceResult& inst : r.instances) {
    if (brief && inst.status == SolveStatus::kUnsat) continue;
    out << "instance " << inst.label << ": " << to_string(inst.status) << " conflicts=" << inst.stats.conflicts
        << " decisions=" << inst.stats.decisions;
    if (inst.witness) out << " witness=" << (inst.witness_check.empty() ? "verified" : "REJECTED " + inst.witness_check);
    out << '\n';
  }
  if (brief) out << "instances " << r.instances.size() << " (" << sat << " SAT, " << r.instances.size() - sat << " UNSAT)\n";
  out << "result " << to_string(r.outcome()) << ' ' << (r.expectation_met() ? "expectation met" : "EXPECTATION VIOLATED")
      << std::fixed << std::setprecision(3) << " time=" << r.wall_seconds << "s" << (r.from_cache ? " cached" : "")
      << '\n';
}

std::string report_json(const Report& r) {
  nlohmann::json doc;
  doc["scenario"] = r.scenario;
  doc["n"] = r.n;
  doc["m"] = r.m;
  doc["expected"] = std::string(to_string(r.expected));
  doc["outcome"] = std::string(to_string(r.outcome()));
  doc["expectation_met"] = r.expectation_met();
  doc["domain_size"] = r.domain_size;
  doc["np_star_size"] = r.np_star_size;
  doc["var_count"] = r.var_count;
  doc["clause_count"] = r.clause_count;
  doc["wall_seconds"] = r.wall_seconds;
  doc["cached"] = r.from_cache;
  nlohmann::json list = nlohmann::json::array();
  for (const InstanceResult& inst : r.instances) {
    nlohmann::json item;
    item["label"] = inst.label;
    item["status"] = std::string(to_string(inst.status));
    item["conflicts"] = inst.stats.conflicts;
    item["decisions"] = inst.stats.decisions;
    if (inst.witness) {
      item["witness"] = witness_letters(*inst.witness);
      item["witness_verified"] = inst.witness_check.empty();
    }
    list.push_back(std::move(item));
  }
  doc["instances"] = std::move(list);
  return doc.dump(2);
}

}  // namespace npv
