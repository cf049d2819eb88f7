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

// Command-line front end. Exit status: 0 when every expectation holds, 2 when
// one is violated, 1 on operational errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "npv/collapse.hpp"
#include "npv/decisiveness.hpp"
#include "npv/error.hpp"
#include "npv/strategyproof.hpp"
#include "npv/verify.hpp"

namespace {

using npv::Alternative;
using nlohmann::json;

constexpr int kMet = 0;
constexpr int kOperational = 1;
constexpr int kViolated = 2;

struct Globals {
  std::uint64_t seed = 0;
  std::string format = "text";
  bool structured() const { return format == "structured"; }
};

Alternative parse_alt(const std::string& text, int m) {
  if (text.size() != 1) npv::fail(npv::ErrorKind::kParse, "alternative must be one letter: " + text);
  const auto a = npv::parse_alternative(text[0], m);
  if (!a) npv::fail(npv::ErrorKind::kInvalidAlternative, "unknown alternative " + text);
  return *a;
}

std::string letter(Alternative a, int m) { return std::string(1, npv::alternative_letter(a, m)); }

std::string letters(const std::vector<Alternative>& set, int m) {
  std::string out = "{";
  for (std::size_t k = 0; k < set.size(); ++k) out += (k ? "," : "") + letter(set[k], m);
  return out + "}";
}

// dictator:<i> | constant:<a> | example1 | clone:<builtin>
npv::RulePtr builtin_rule(const std::string& spec, int n, int m) {
  if (spec.rfind("clone:", 0) == 0) {
    const npv::RulePtr inner = builtin_rule(spec.substr(6), n + 1, m);
    return std::make_shared<const npv::Rule>(npv::clone_collapse(inner));
  }
  const npv::DomainPtr d = npv::enumerate_np(n, m);
  if (spec.rfind("dictator:", 0) == 0) {
    const int voter = std::stoi(spec.substr(9));
    if (voter < 1 || voter > n) npv::fail(npv::ErrorKind::kInvalidArgument, "dictator voter outside 1..n");
    return std::make_shared<const npv::Rule>(npv::Rule::dictator(d, voter - 1));
  }
  if (spec.rfind("constant:", 0) == 0) {
    return std::make_shared<const npv::Rule>(npv::Rule::constant(d, parse_alt(spec.substr(9), m)));
  }
  if (spec == "example1") return std::make_shared<const npv::Rule>(npv::Rule::example1(d));
  npv::fail(npv::ErrorKind::kInvalidArgument, "unknown builtin rule " + spec);
}

void emit(const Globals& g, const json& doc, const std::string& text) {
  if (g.structured()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

int domain_enum(const Globals& g, int n, int m, bool star, const std::vector<std::string>& wz, bool list) {
  npv::DomainPtr d = npv::enumerate_np(n, m);
  if (star) d = npv::np_star(*d);
  if (!wz.empty()) d = npv::contiguous_domain(*d, parse_alt(wz.at(0), m), parse_alt(wz.at(1), m));
  json doc{{"n", n}, {"m", m}, {"kind", std::string(npv::to_string(d->kind()))}, {"size", d->size()}};
  std::ostringstream text;
  text << to_string(d->kind()) << "(" << n << "," << m << ") size=" << d->size() << '\n';
  if (list) {
    json profiles = json::array();
    for (const npv::Profile& p : d->profiles()) {
      profiles.push_back(npv::encode_profile(p));
      text << npv::encode_profile(p) << '\n';
    }
    doc["profiles"] = profiles;
  }
  emit(g, doc, text.str());
  return kMet;
}

int rule_check(const Globals& g, const std::string& file, const std::string& builtin, int n, int m,
               const std::string& write_table) {
  npv::RulePtr rule;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) npv::fail(npv::ErrorKind::kInvalidArgument, "cannot open " + file);
    rule = std::make_shared<const npv::Rule>(npv::read_rule_table(in));
  } else {
    rule = builtin_rule(builtin, n, m);
  }
  const npv::Domain& d = rule->domain();
  const auto witness = npv::find_manipulation(*rule, d);
  const auto range = npv::range_of(*rule, d);
  const auto star_range = npv::range_of(*rule, *npv::np_star(d));
  const auto dict = npv::is_dictatorial(*rule, d);
  if (!write_table.empty()) {
    std::ofstream out(write_table);
    npv::write_rule_table(*rule, out);
  }
  json doc{{"rule", rule->describe()},
           {"n", d.n()},
           {"m", d.m()},
           {"strategy_proof", !witness.has_value()},
           {"range", letters(range.attained, d.m())},
           {"range_np_star", letters(star_range.attained, d.m())}};
  std::ostringstream text;
  text << "rule " << rule->describe() << " on NP(" << d.n() << "," << d.m() << ")\n";
  if (witness) {
    doc["manipulation"] = npv::format_witness(d, *witness);
    text << "manipulable: " << npv::format_witness(d, *witness) << '\n';
  } else {
    text << "strategy-proof\n";
  }
  text << "range " << letters(range.attained, d.m()) << "\nrange on NP* " << letters(star_range.attained, d.m())
       << '\n';
  if (dict) {
    doc["dictator"] = dict->voter + 1;
    doc["dictator_degenerate"] = dict->degenerate;
    text << "dictator " << dict->voter + 1 << (dict->degenerate ? " (single-valued)" : "") << '\n';
  } else {
    text << "not dictatorial\n";
  }
  emit(g, doc, text.str());
  return witness ? kViolated : kMet;
}

int scenario_run(const Globals& g, const std::string& name, int n, int j, const std::string& dimacs,
                 const std::string& cache) {
  const npv::Scenario s = npv::make_scenario(name, n, j);
  if (!dimacs.empty()) {
    std::ofstream cnf(dimacs);
    std::ofstream assumptions(dimacs + ".assume");
    std::ofstream map(dimacs + ".map");
    if (!cnf || !assumptions || !map) npv::fail(npv::ErrorKind::kInvalidArgument, "cannot write " + dimacs);
    npv::write_scenario_dimacs(s, cnf, assumptions);
    npv::write_var_map(npv::encode_base(*s.domain), *s.domain, map);
  }
  npv::RunOptions options;
  options.solver.seed = g.seed;
  if (!cache.empty()) options.cache_dir = cache;
  const npv::Report r = npv::run_scenario(s, options);
  if (g.structured()) {
    std::cout << npv::report_json(r) << '\n';
  } else {
    npv::write_report(r, std::cout);
  }
  return r.expectation_met() ? kMet : kViolated;
}

int scenario_list(const Globals& g) {
  json doc = json::array();
  std::ostringstream text;
  for (const std::string& name : npv::scenario_names()) {
    const npv::Scenario s = npv::make_scenario(name, 4);
    doc.push_back({{"name", name}, {"expected_at_n4", std::string(npv::to_string(s.expected))},
                   {"description", s.description}});
    text << name << "  expected(n=4)=" << npv::to_string(s.expected) << "  " << s.description << '\n';
  }
  emit(g, doc, text.str());
  return kMet;
}

int collapse_run(const Globals& g, int n, int m, const std::string& w, const std::string& z, const std::string& rule_spec,
                 bool trace, bool skip_raise) {
  const npv::CollapseSpec spec = npv::make_collapse_spec(n, m, parse_alt(w, m), parse_alt(z, m));
  const npv::RulePtr rule = builtin_rule(rule_spec, n, m);
  const npv::CollapseResult collapsed = npv::collapse_rule(*rule, spec);
  const auto range = npv::range_of(*collapsed.rule, *spec.target);
  std::vector<std::string> range_names;
  for (Alternative a : range.attained) range_names.push_back(spec.star_label(a));
  const bool full = range.attained.size() == static_cast<std::size_t>(spec.target->m());
  npv::DescentOptions options;
  options.skip_direct_raise = skip_raise;
  std::size_t ok = 0;
  std::size_t longest = 0;
  std::vector<std::string> failures;
  std::ostringstream traces;
  for (const npv::Profile& r : spec.source->profiles()) {
    const npv::DescentResult res = npv::reduce_to_contiguous(*rule, r, spec, options);
    if (res.ok) {
      ++ok;
      longest = std::max(longest, res.path.size() - 1);
    } else {
      failures.push_back(res.failure);
    }
    if (trace) traces << npv::format_trace(res, m) << '\n';
  }
  json doc{{"rule", rule->describe()},
           {"n", n},
           {"m", m},
           {"w", w},
           {"z", z},
           {"target_size", spec.target->size()},
           {"disagreements", collapsed.disagreements.size()},
           {"unextendable", collapsed.unextendable.size()},
           {"collapsed_range", range_names},
           {"collapsed_full_range", full},
           {"descents", spec.source->size()},
           {"descents_ok", ok},
           {"longest_descent", longest}};
  std::ostringstream text;
  text << "collapse " << rule->describe() << " on NP(" << n << "," << m << ") w=" << w << " z=" << z << '\n';
  text << "extensions: " << collapsed.disagreements.size() << " disagreements, " << collapsed.unextendable.size()
       << " unextendable profiles of " << spec.target->size() << '\n';
  text << "range of collapsed rule {";
  for (std::size_t k = 0; k < range_names.size(); ++k) text << (k ? "," : "") << range_names[k];
  text << "}" << (full ? " = X*" : " != X*") << '\n';
  text << "descent: " << ok << "/" << spec.source->size() << " profiles reach sigma=0, longest " << longest
       << " steps\n";
  for (const std::string& f : failures) text << "FAILED " << f << '\n';
  if (trace) text << traces.str();
  emit(g, doc, text.str());
  return collapsed.well_defined() && failures.empty() ? kMet : kViolated;
}

int decisive_report(const Globals& g, const std::string& rule_spec, int n, int m, const std::string& pair) {
  const npv::RulePtr rule = builtin_rule(rule_spec, n, m);
  const auto comma = pair.find(',');
  if (comma == std::string::npos) npv::fail(npv::ErrorKind::kParse, "--pair expects a,b");
  const Alternative a = parse_alt(pair.substr(0, comma), rule->domain().m());
  const Alternative b = parse_alt(pair.substr(comma + 1), rule->domain().m());
  const auto report = npv::minimal_decisive_families(*rule, rule->domain(), a, b);
  json minimal = json::array();
  for (const npv::Coalition& c : report.minimal) minimal.push_back(npv::format_coalition(c));
  json doc{{"rule", rule->describe()},
           {"pair", pair},
           {"decisive", report.decisive.size()},
           {"minimal", minimal},
           {"vacuous", report.vacuous.size()},
           {"monotone", report.monotone},
           {"range_warning", report.range_warning}};
  std::ostringstream text;
  text << npv::format_report(report, rule->domain().m());
  text << "minimal:";
  for (const npv::Coalition& c : report.minimal) text << ' ' << npv::format_coalition(c);
  text << "\nmonotone " << (report.monotone ? "yes" : "no") << '\n';
  if (report.range_warning) text << "warning: range exceeds the pair\n";
  emit(g, doc, text.str());
  return report.monotone ? kMet : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategy-proofness on the Pareto-free domain: enumeration, rules, SAT scenarios, collapse"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "solver branching seed (0 = variable order)");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "structured"}));

  int n = 3;
  int m = 3;
  int j = 0;

  auto* domain = app.add_subcommand("domain", "domain operations");
  domain->require_subcommand(1);
  auto* denum = domain->add_subcommand("enum", "enumerate NP(n,m) or a subdomain");
  bool star = false;
  bool list = false;
  std::vector<std::string> wz;
  denum->add_option("--n", n)->required();
  denum->add_option("--m", m)->required();
  auto* star_flag = denum->add_flag("--np-star", star, "last two voters agree");
  denum->add_option("--wz", wz, "w and z adjacent for everyone")->expected(2)->excludes(star_flag);
  denum->add_flag("--list", list, "print every profile");

  auto* rule = app.add_subcommand("rule", "rule operations");
  rule->require_subcommand(1);
  auto* rcheck = rule->add_subcommand("check", "strategy-proofness, range and dictatorship of a rule");
  std::string file;
  std::string builtin;
  std::string write_table;
  auto* file_opt = rcheck->add_option("--file", file, "rule table");
  auto* builtin_opt = rcheck->add_option("--builtin", builtin, "dictator:<i> | constant:<a> | example1 | clone:<rule>");
  file_opt->excludes(builtin_opt);
  rcheck->add_option("--n", n);
  rcheck->add_option("--m", m);
  rcheck->add_option("--write-table", write_table, "write the rule table here");

  auto* scenario = app.add_subcommand("scenario", "SAT scenarios");
  scenario->require_subcommand(1);
  auto* srun = scenario->add_subcommand("run", "solve a scenario");
  std::string name;
  std::string dimacs;
  std::string cache;
  srun->add_option("name", name)->required();
  srun->add_option("--n", n)->required();
  srun->add_option("--j", j, "list index for lemma4_4 (0 = all)");
  srun->add_option("--export-dimacs", dimacs, "write CNF here, plus .assume and .map sidecars");
  srun->add_option("--cache", cache, "result cache directory");
  auto* slist = scenario->add_subcommand("list", "list scenarios");

  auto* collapse = app.add_subcommand("collapse", "collapse operations");
  collapse->require_subcommand(1);
  auto* crun = collapse->add_subcommand("run", "collapse w,z and run the sigma descent from every profile");
  std::string w;
  std::string z;
  std::string crule = "dictator:1";
  bool trace = false;
  bool skip_raise = false;
  crun->add_option("--n", n)->required();
  crun->add_option("--m", m, "size of X")->required();
  crun->add_option("--w", w)->required();
  crun->add_option("--z", z)->required();
  crun->add_option("--rule", crule, "builtin rule");
  crun->add_flag("--trace", trace, "print every descent");
  crun->add_flag("--skip-direct-raise", skip_raise, "force the three-alternative dictator step");

  auto* decisive = app.add_subcommand("decisive", "decisive coalitions");
  decisive->require_subcommand(1);
  auto* dreport = decisive->add_subcommand("report", "classify coalitions for a pair");
  std::string drule;
  std::string pair;
  dreport->add_option("--rule", drule)->required();
  dreport->add_option("--pair", pair, "a,b")->required();
  dreport->add_option("--n", n);
  dreport->add_option("--m", m);

  CLI11_PARSE(app, argc, argv);
  try {
    if (denum->parsed()) return domain_enum(g, n, m, star, wz, list);
    if (rcheck->parsed()) {
      if (file.empty() && builtin.empty()) npv::fail(npv::ErrorKind::kInvalidArgument, "give --file or --builtin");
      return rule_check(g, file, builtin, n, m, write_table);
    }
    if (srun->parsed()) return scenario_run(g, name, n, j, dimacs, cache);
    if (slist->parsed()) return scenario_list(g);
    if (crun->parsed()) return collapse_run(g, n, m, w, z, crule, trace, skip_raise);
    if (dreport->parsed()) return decisive_report(g, drule, n, m, pair);
  } catch (const npv::Error& e) {
    std::cerr << "error (" << npv::to_string(e.kind()) << "): " << e.what() << '\n';
    return kOperational;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOperational;
  }
  return kOperational;
}
