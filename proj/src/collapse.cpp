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

#include "npv/collapse.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "npv/error.hpp"

namespace npv {

namespace {

std::vector<int> ranked_ints(const Ordering& o) {
  std::vector<int> out(static_cast<std::size_t>(o.size()));
  for (int k = 0; k < o.size(); ++k) out[static_cast<std::size_t>(k)] = o.at(k).index;
  return out;
}

Ordering swap_alternatives(const Ordering& o, Alternative a, Alternative b) {
  std::vector<int> r = ranked_ints(o);
  std::swap(r[static_cast<std::size_t>(o.rank_of(a))], r[static_cast<std::size_t>(o.rank_of(b))]);
  return Ordering::from_ranked(r);
}

// Removes `a` and reinserts it immediately above `anchor`.
Ordering place_above(const Ordering& o, Alternative a, Alternative anchor) {
  std::vector<int> r = ranked_ints(o);
  r.erase(std::find(r.begin(), r.end(), a.index));
  r.insert(std::find(r.begin(), r.end(), anchor.index), a.index);
  return Ordering::from_ranked(r);
}

// Removes `a` and reinserts it at 0-based rank `rank`.
Ordering place_at(const Ordering& o, Alternative a, int rank) {
  std::vector<int> r = ranked_ints(o);
  r.erase(std::find(r.begin(), r.end(), a.index));
  r.insert(r.begin() + rank, a.index);
  return Ordering::from_ranked(r);
}

Profile invert_all(const Profile& p) {
  std::vector<Ordering> v;
  v.reserve(static_cast<std::size_t>(p.n()));
  for (const Ordering& o : p.voters()) v.push_back(invert(o));
  return Profile(std::move(v));
}

bool contains(const std::vector<Alternative>& set, Alternative a) {
  return std::find(set.begin(), set.end(), a) != set.end();
}

std::string letter(Alternative a, int m) { return std::string(1, alternative_letter(a, m)); }

std::string voter_move(int voter, const Ordering& before, const Ordering& after) {
  return "v" + voter_label(voter) + " " + encode_ordering(before) + "->" + encode_ordering(after);
}

std::optional<Alternative> value_at(const Rule& g, const Profile& p) {
  const auto index = g.domain().find(p);
  if (!index) return std::nullopt;
  return g.evaluate_at(*index);
}

}  // namespace

Alternative CollapseSpec::to_star(Alternative a) const {
  if (a == w || a == z) return x_star();
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (kept[k] == a) return Alternative{static_cast<int>(k)};
  }
  fail(ErrorKind::kInvalidAlternative, "alternative outside X");
}

std::string CollapseSpec::star_label(Alternative a) const {
  if (a == x_star()) return "x*";
  if (a.index < 0 || a.index >= static_cast<int>(kept.size())) fail(ErrorKind::kInvalidAlternative, "alternative outside X*");
  return letter(kept[static_cast<std::size_t>(a.index)], source->m());
}

CollapseSpec make_collapse_spec(int n, int m_plus_1, Alternative w, Alternative z, DomainPtr source) {
  if (m_plus_1 < 3) fail(ErrorKind::kInvalidArgument, "collapse needs at least three alternatives");
  if (w.index < 0 || w.index >= m_plus_1 || z.index < 0 || z.index >= m_plus_1) {
    fail(ErrorKind::kInvalidAlternative, "w or z outside X");
  }
  if (w == z) fail(ErrorKind::kInvalidPair, "w and z must differ");
  CollapseSpec spec;
  spec.w = w;
  spec.z = z;
  spec.source = source ? source : enumerate_np(n, m_plus_1);
  if (spec.source->n() != n || spec.source->m() != m_plus_1 || spec.source->kind() != DomainKind::kNP) {
    fail(ErrorKind::kDomainKind, "collapse source must be NP(n, m+1)");
  }
  spec.target = enumerate_np(n, m_plus_1 - 1);
  for (int a = 0; a < m_plus_1; ++a) {
    if (a != w.index && a != z.index) spec.kept.push_back(Alternative{a});
  }
  return spec;
}

SigmaStats sigma(const Profile& p, Alternative a, Alternative b) {
  if (a == b) fail(ErrorKind::kInvalidPair, "sigma needs two distinct alternatives");
  if (a.index < 0 || a.index >= p.m() || b.index < 0 || b.index >= p.m()) {
    fail(ErrorKind::kInvalidAlternative, "alternative outside the universe");
  }
  SigmaStats s;
  for (const Ordering& o : p.voters()) {
    const int gap = std::abs(o.rank_of(a) - o.rank_of(b)) - 1;
    s.per_voter.push_back(gap);
    s.total += gap;
  }
  return s;
}

DomainPtr contiguous_domain(const Domain& np, Alternative w, Alternative z) {
  if (np.m() < 3) fail(ErrorKind::kInvalidArgument, "contiguous domain needs at least three alternatives");
  std::vector<Profile> kept;
  for (const Profile& p : np.profiles()) {
    if (sigma(p, w, z).total == 0) kept.push_back(p);
  }
  return std::make_shared<const Domain>(np.n(), np.m(), DomainKind::kNPWZ, std::move(kept), std::make_pair(w, z));
}

DomainPtr contiguous_domain(int n, int m_plus_1, Alternative w, Alternative z) {
  return contiguous_domain(*enumerate_np(n, m_plus_1), w, z);
}

ExtensionResult extend_profile(const Profile& p, const CollapseSpec& spec) {
  if (!spec.target->contains(p)) fail(ErrorKind::kMembership, "profile is not in the collapsed domain");
  const int n = p.n();
  const int star = spec.x_star().index;
  ExtensionResult result;
  std::vector<std::size_t> found;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<Ordering> voters;
    for (int i = 0; i < n; ++i) {
      std::vector<int> r;
      for (int k = 0; k < p.m(); ++k) {
        const int a = p.voter(i).at(k).index;
        if (a == star) {
          const bool w_first = ((mask >> i) & 1u) == 0;
          r.push_back(w_first ? spec.w.index : spec.z.index);
          r.push_back(w_first ? spec.z.index : spec.w.index);
        } else {
          r.push_back(spec.kept[static_cast<std::size_t>(a)].index);
        }
      }
      voters.push_back(Ordering::from_ranked(r));
    }
    Profile candidate(std::move(voters));
    if (auto index = spec.source->find(candidate)) found.push_back(*index);
  }
  std::sort(found.begin(), found.end());
  for (std::size_t index : found) result.extensions.push_back(spec.source->profile(index));
  if (found.empty()) {
    result.diagnostic = "no block ordering of " + letter(spec.w, spec.source->m()) + letter(spec.z, spec.source->m()) +
                        " avoids Pareto domination for " + encode_profile(p);
  }
  return result;
}

CollapseResult collapse_rule(const Rule& g, const CollapseSpec& spec) {
  if (g.domain().n() != spec.source->n() || g.domain().m() != spec.source->m()) {
    fail(ErrorKind::kDomainKind, "rule is not defined on the collapse source");
  }
  CollapseResult result;
  std::vector<Alternative> values(spec.target->size(), spec.x_star());
  for (std::size_t t = 0; t < spec.target->size(); ++t) {
    const ExtensionResult ext = extend_profile(spec.target->profile(t), spec);
    if (ext.extensions.empty()) {
      result.unextendable.push_back(t);
      continue;
    }
    CollapseDisagreement entry{t, {}};
    bool agree = true;
    for (const Profile& r : ext.extensions) {
      const Alternative v = g.evaluate(r);
      entry.values.emplace_back(r, v);
      if (spec.to_star(v) != spec.to_star(entry.values.front().second)) agree = false;
    }
    values[t] = spec.to_star(entry.values.front().second);
    if (!agree) result.disagreements.push_back(std::move(entry));
  }
  result.rule = std::make_shared<const Rule>(Rule::table(spec.target, std::move(values)));
  return result;
}

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::kFound:
      return "found";
    case StepKind::kCertified:
      return "certified";
    case StepKind::kCertifiedTrivial:
      return "certified-trivial";
    case StepKind::kViolation:
      return "violation";
  }
  return "?";
}

StepOutcome reduce_sigma_step(const Rule& g, const Profile& r, const ReductionContext& ctx) {
  const int j = ctx.voter;
  const int m = r.m();
  if (j < 0 || j >= r.n()) fail(ErrorKind::kContract, "voter outside 1..n");
  if (ctx.a.index < 0 || ctx.a.index >= m || ctx.b.index < 0 || ctx.b.index >= m || ctx.a == ctx.b) {
    fail(ErrorKind::kContract, "bracket needs two distinct alternatives of X");
  }
  if (!r.voter(j).prefers(ctx.a, ctx.b)) fail(ErrorKind::kContract, "a must rank above b for the pivot voter");
  const Alternative x = g.evaluate(r);
  const std::vector<Alternative> y = between(r.voter(j), ctx.a, ctx.b);
  const bool lower = ctx.part == StepPart::kLowerUpper;
  if (contains(y, x)) fail(ErrorKind::kContract, "selected alternative lies inside the bracket");
  if (lower && x == ctx.a) fail(ErrorKind::kContract, "selected alternative is the one being lowered");

  StepOutcome out;
  if (y.empty()) {
    out.kind = StepKind::kCertifiedTrivial;
    return out;
  }
  // Lowering a in r is raising a in the upside-down profile.
  const Profile view = lower ? invert_all(r) : r;
  const Alternative top = lower ? ctx.b : ctx.a;
  const Alternative bot = lower ? ctx.a : ctx.b;
  const std::vector<Alternative> ys = between(view.voter(j), top, bot);
  const std::size_t t_count = ys.size();
  auto real = [&](const Profile& v) { return lower ? invert_all(v) : v; };
  auto record = [&](const Profile& before, const Profile& after) {
    return voter_move(j, real(before).voter(j), real(after).voter(j));
  };
  auto violation = [&](const Profile& at, Alternative got, std::string what) {
    out.kind = StepKind::kViolation;
    out.detail = what + " at " + encode_profile(real(at)) + ": value " + letter(got, m) + " instead of " + letter(x, m);
    return out;
  };

  const Profile s = view.with_voter(j, swap_alternatives(view.voter(j), ys[t_count - 1], bot));
  if (auto v = value_at(g, real(s))) {
    if (*v != x) return violation(s, *v, "adjacent swap");
    out.kind = StepKind::kFound;
    out.found = real(s);
    out.moves.push_back(record(view, s));
    return out;
  }
  for (std::size_t t0 = t_count - 1; t0-- > 0;) {
    bool implied = false;
    for (std::size_t k = t0 + 1; k < t_count && !implied; ++k) {
      bool all = true;
      for (int i = 0; i < view.n() && all; ++i) {
        if (i != j && !view.voter(i).prefers(ys[k], ys[t0])) all = false;
      }
      implied = all;
    }
    if (implied) continue;
    const Profile q = view.with_voter(j, place_above(view.voter(j), ys[t0], bot));
    const auto qv = value_at(g, real(q));
    if (!qv) continue;
    if (*qv != x) return violation(q, *qv, "lowering inside the bracket");
    const Profile u = q.with_voter(j, swap_alternatives(q.voter(j), ys[t0], bot));
    if (auto uv = value_at(g, real(u))) {
      if (*uv != x) return violation(u, *uv, "swap after lowering");
      out.kind = StepKind::kFound;
      out.found = real(u);
      out.moves.push_back(record(view, q));
      out.moves.push_back(record(q, u));
      return out;
    }
  }
  for (int i = 0; i < view.n(); ++i) {
    if (i == j) continue;
    for (Alternative t : ys) {
      if (!view.voter(i).prefers(bot, t)) {
        out.kind = StepKind::kViolation;
        out.detail = "unanimity check failed for voter " + voter_label(i) + " at " + encode_profile(r);
        return out;
      }
    }
  }
  out.kind = StepKind::kCertified;
  return out;
}

namespace {

// One descent step: finds a profile with smaller sigma by the case analysis
// of the range argument.
class Descender {
 public:
  Descender(const Rule& g, const CollapseSpec& spec, const DescentOptions& options, const Profile& r)
      : g_(g), spec_(spec), options_(options), r_(r), m_(r.m()), n_(r.n()), x_(g.evaluate(r)) {
    sig_ = sigma(r, spec.w, spec.z);
  }

  std::optional<std::pair<Profile, std::string>> step() {
    if (x_ == spec_.w || x_ == spec_.z) return case3();
    if (auto u = case1()) return u;
    return case2();
  }

  bool violated() const { return violated_; }

  std::string context() const {
    std::ostringstream out;
    out << "stuck at profile=" << encode_profile(r_) << " value=" << letter(x_, m_) << " sigma=";
    for (std::size_t i = 0; i < sig_.per_voter.size(); ++i) out << (i ? "," : "") << sig_.per_voter[i];
    out << " w=" << letter(spec_.w, m_) << " z=" << letter(spec_.z, m_);
    for (const std::string& t : tried_) out << "\n  " << t;
    return out.str();
  }

 private:
  using Found = std::optional<std::pair<Profile, std::string>>;

  Alternative upper(const Profile& p, int i) const {
    return p.voter(i).prefers(spec_.w, spec_.z) ? spec_.w : spec_.z;
  }
  Alternative lower(const Profile& p, int i) const {
    return p.voter(i).prefers(spec_.w, spec_.z) ? spec_.z : spec_.w;
  }
  bool strictly_inside(const Profile& p, int i, Alternative a) const {
    return contains(between(p.voter(i), upper(p, i), lower(p, i)), a);
  }
  int total(const Profile& p) const { return sigma(p, spec_.w, spec_.z).total; }

  // Pivot order: voters satisfying `want`, those of maximal sigma first.
  template <typename Pred>
  std::vector<std::pair<int, bool>> pivots(Pred want) const {
    int best = 0;
    for (int i = 0; i < n_; ++i) {
      if (want(i)) best = std::max(best, sig_.per_voter[static_cast<std::size_t>(i)]);
    }
    std::vector<std::pair<int, bool>> out;
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < n_; ++i) {
        const bool max = sig_.per_voter[static_cast<std::size_t>(i)] == best;
        if (want(i) && max == (pass == 0)) out.emplace_back(i, max);
      }
    }
    return out;
  }

  // Accepts p when it is an NP member selecting x (the value every move in
  // cases 1 and 2 must keep).
  bool keeps(const Profile& p) {
    const auto v = value_at(g_, p);
    if (v && *v != x_) {
      violated_ = true;
      tried_.push_back("value changed to " + letter(*v, m_) + " at " + encode_profile(p));
    }
    return v && *v == x_;
  }

  Found accept(const Profile& u, const std::string& label, std::vector<std::string> moves) {
    if (total(u) >= sig_.total) {
      tried_.push_back(label + ": no sigma decrease");
      return std::nullopt;
    }
    std::string desc = label;
    for (std::size_t k = 0; k < moves.size(); ++k) desc += (k ? ", " : " ") + moves[k];
    return std::make_pair(u, desc);
  }

  Found bracket_step(const Profile& p, int voter, Alternative a, Alternative b, StepPart part, const std::string& label,
              std::vector<std::string> prefix, bool need_decrease = true) {
    if (!p.voter(voter).prefers(a, b)) return std::nullopt;
    const Alternative x = g_.evaluate(p);
    const std::vector<Alternative> y = between(p.voter(voter), a, b);
    if (contains(y, x) || (part == StepPart::kLowerUpper && x == a)) return std::nullopt;
    const StepOutcome o = reduce_sigma_step(g_, p, {voter, a, b, part});
    const std::string name = label + (part == StepPart::kRaiseLower ? " raise " : " lower ") + "v" +
                             voter_label(voter) + "(" + letter(a, m_) + "," + letter(b, m_) + ")";
    if (o.kind == StepKind::kViolation) {
      violated_ = true;
      tried_.push_back(name + ": " + o.detail);
      return std::nullopt;
    }
    if (o.kind != StepKind::kFound) {
      tried_.push_back(name + ": " + std::string(to_string(o.kind)));
      return std::nullopt;
    }
    prefix.insert(prefix.end(), o.moves.begin(), o.moves.end());
    if (!need_decrease) return std::make_pair(*o.found, name);
    return accept(*o.found, name, prefix);
  }

  Found swap_in(const Profile& p, int voter, Alternative a, Alternative b, const std::string& label,
                std::vector<std::string> prefix) {
    const Profile u = p.with_voter(voter, swap_alternatives(p.voter(voter), a, b));
    if (!keeps(u)) {
      tried_.push_back(label + ": swap " + letter(a, m_) + letter(b, m_) + " in v" + voter_label(voter) + " rejected");
      return std::nullopt;
    }
    prefix.push_back(voter_move(voter, p.voter(voter), u.voter(voter)));
    return accept(u, label, prefix);
  }

  Found case1() {
    auto want = [&](int i) {
      return sig_.per_voter[static_cast<std::size_t>(i)] > 0 && !strictly_inside(r_, i, x_);
    };
    for (const auto& [j, max] : pivots(want)) {
      const std::string label = std::string("case1[") + (max ? "max" : "any") + "]";
      const Alternative up = upper(r_, j);
      const Alternative lo = lower(r_, j);
      if (auto u = bracket_step(r_, j, up, lo, StepPart::kRaiseLower, label, {})) return u;
      if (violated_) return std::nullopt;
      if (auto u = bracket_step(r_, j, up, lo, StepPart::kLowerUpper, label, {})) return u;
      if (violated_) return std::nullopt;
      for (int h = 0; h < n_; ++h) {
        if (h == j || !r_.voter(h).prefers(lo, up)) continue;
        const int rank = r_.voter(h).rank_of(up);
        if (rank == 0) continue;
        const Alternative above = r_.voter(h).at(rank - 1);
        if (above == lo) continue;
        if (auto u = swap_in(r_, h, above, up, label, {})) return u;
      }
    }
    return std::nullopt;
  }

  // Raises x in voter j as far as NP allows without passing the upper end.
  Profile raise_x(const Profile& p, int j, std::vector<std::string>& moves) {
    const Alternative up = upper(p, j);
    const int from = p.voter(j).rank_of(x_);
    for (int t = p.voter(j).rank_of(up) + 1; t < from; ++t) {
      const Profile q = p.with_voter(j, place_at(p.voter(j), x_, t));
      if (keeps(q)) {
        moves.push_back(voter_move(j, p.voter(j), q.voter(j)));
        return q;
      }
    }
    return p;
  }

  Found case2() {
    auto inside = [&](int i) { return strictly_inside(r_, i, x_); };
    for (const auto& [j, max] : pivots(inside)) {
      const std::string label = std::string("case2[") + (max ? "max" : "any") + "]";
      std::vector<std::string> moves;
      const Profile r1 = raise_x(r_, j, moves);
      if (violated_) return std::nullopt;
      if (auto u = part1_either(r1, j, label + ".part1", moves)) return u;
      if (violated_) return std::nullopt;
    }
    if (auto u = part2(r_)) return u;
    return std::nullopt;
  }

  // Part 1 on the raised profile, or on r_ itself when raising x emptied A.
  Found part1_either(const Profile& raised, int j, const std::string& label, const std::vector<std::string>& moves) {
    if (!between(raised.voter(j), upper(raised, j), x_).empty()) return part1(raised, j, label, moves);
    if (raised.voter(j) != r_.voter(j) && !between(r_.voter(j), upper(r_, j), x_).empty()) {
      return part1(r_, j, label, {});
    }
    return std::nullopt;
  }

  Found part1(const Profile& r, int j, const std::string& label, const std::vector<std::string>& moves) {
    const Alternative up = upper(r, j);
    const Alternative lo = lower(r, j);
    if (auto u = bracket_step(r, j, up, x_, StepPart::kLowerUpper, label, moves)) return u;
    if (violated_) return std::nullopt;
    if (auto u = bracket_step(r, j, x_, lo, StepPart::kRaiseLower, label, moves)) return u;
    if (violated_) return std::nullopt;
    const std::vector<Alternative> a_set = between(r.voter(j), up, x_);
    const std::vector<Alternative> b_set = between(r.voter(j), x_, lo);
    for (int h = 0; h < n_; ++h) {
      if (h == j || !r.voter(h).prefers(lo, up)) continue;
      const Ordering& oh = r.voter(h);
      Alternative ah = a_set.front();
      for (Alternative a : a_set) {
        if (oh.rank_of(a) > oh.rank_of(ah)) ah = a;
      }
      if (!oh.prefers(ah, up)) continue;
      const std::vector<Alternative> c_set = between(oh, ah, up);
      if (oh.prefers(lo, ah)) {
        if (c_set.empty()) {
          if (auto u = swap_in(r, h, ah, up, label + ".I", moves)) return u;
          continue;
        }
        if (contains(c_set, x_)) continue;
        if (auto u = bracket_step(r, h, ah, up, StepPart::kRaiseLower, label + ".II", moves)) return u;
        if (violated_) return std::nullopt;
        // Lift C above a^h, keeping its internal order, then apply I.
        std::vector<int> ranked = ranked_ints(oh);
        for (Alternative c : c_set) ranked.erase(std::find(ranked.begin(), ranked.end(), c.index));
        auto at = std::find(ranked.begin(), ranked.end(), ah.index);
        std::vector<int> block;
        for (Alternative c : c_set) block.push_back(c.index);
        ranked.insert(at, block.begin(), block.end());
        const Profile r2 = r.with_voter(h, Ordering::from_ranked(ranked));
        if (!keeps(r2)) {
          tried_.push_back(label + ".II: lifting C rejected");
          continue;
        }
        std::vector<std::string> more = moves;
        more.push_back(voter_move(h, oh, r2.voter(h)));
        if (auto u = swap_in(r2, h, ah, up, label + ".II", more)) return u;
        continue;
      }
      // III: lo lies between a^h and up.
      const std::vector<Alternative> c2 = between(oh, lo, up);
      if (!c2.empty()) {
        if (contains(c2, x_)) continue;
        if (auto u = bracket_step(r, h, lo, up, StepPart::kRaiseLower, label + ".III", moves)) return u;
        if (violated_) return std::nullopt;
        if (auto u = bracket_step(r, h, lo, up, StepPart::kLowerUpper, label + ".III", moves)) return u;
        if (violated_) return std::nullopt;
        continue;
      }
      if (b_set.empty()) continue;
      if (auto u = steps_iv_v(r, j, h, b_set, label, moves)) return u;
      if (violated_) return std::nullopt;
    }
    return std::nullopt;
  }

  Found steps_iv_v(Profile r, int j, int h, const std::vector<Alternative>& b_set, const std::string& label,
                   std::vector<std::string> moves) {
    const Alternative up = upper(r, j);
    const Alternative lo = lower(r, j);
    Alternative bh = b_set.front();
    for (Alternative b : b_set) {
      if (r.voter(h).rank_of(b) < r.voter(h).rank_of(bh)) bh = b;
    }
    if (!r.voter(h).prefers(up, bh)) return std::nullopt;
    // V: raise b^h toward up in r(h) until they are adjacent.
    for (std::size_t guard = 0; !between(r.voter(h), up, bh).empty(); ++guard) {
      if (guard > static_cast<std::size_t>(m_)) return std::nullopt;
      if (contains(between(r.voter(h), up, bh), x_)) return std::nullopt;
      auto u = bracket_step(r, h, up, bh, StepPart::kRaiseLower, label + ".V", {}, false);
      if (!u) return std::nullopt;
      moves.push_back(voter_move(h, r.voter(h), u->first.voter(h)));
      r = u->first;
    }
    // IV: reverse B in r(j) following r(h), so b^h sits just above lo.
    const Ordering& oj = r.voter(j);
    const Ordering& oh = r.voter(h);
    std::vector<Alternative> b_by_h = b_set;
    std::sort(b_by_h.begin(), b_by_h.end(), [&](Alternative a, Alternative b) { return oh.rank_of(a) > oh.rank_of(b); });
    std::vector<int> slots;
    for (Alternative b : b_set) slots.push_back(oj.rank_of(b));
    std::sort(slots.begin(), slots.end());
    std::vector<int> ranked = ranked_ints(oj);
    for (std::size_t k = 0; k < slots.size(); ++k) ranked[static_cast<std::size_t>(slots[k])] = b_by_h[k].index;
    const Profile q = r.with_voter(j, Ordering::from_ranked(ranked));
    if (!keeps(q)) {
      tried_.push_back(label + ".IV: reordering B rejected");
      return std::nullopt;
    }
    if (q.voter(j) != oj) moves.push_back(voter_move(j, oj, q.voter(j)));
    // In r(h), lo up b^h becomes b^h lo up on the same three ranks.
    const Ordering& qh = q.voter(h);
    const int first = std::min({qh.rank_of(lo), qh.rank_of(up), qh.rank_of(bh)});
    std::vector<int> rh = ranked_ints(qh);
    rh[static_cast<std::size_t>(first)] = bh.index;
    rh[static_cast<std::size_t>(first + 1)] = lo.index;
    rh[static_cast<std::size_t>(first + 2)] = up.index;
    const Profile s = q.with_voter(h, Ordering::from_ranked(rh));
    if (!keeps(s)) {
      tried_.push_back(label + ".IV: lifting b^h rejected");
      return std::nullopt;
    }
    moves.push_back(voter_move(h, qh, s.voter(h)));
    return swap_in(s, j, lo, bh, label + ".IV", moves);
  }

  Found part2(const Profile& r0) {
    const std::string label = "case2.part2";
    for (int i = 0; i < n_; ++i) {
      if (!strictly_inside(r0, i, x_)) continue;
      std::vector<std::string> moves;
      const Profile r1 = raise_x(r0, i, moves);
      if (auto u = part1_either(r1, i, label + ".part1", moves)) return u;
      if (violated_) return std::nullopt;
    }
    // From here on x sits as high as NP allows in every bracket holding it.
    std::vector<std::string> prefix;
    Profile r = r0;
    for (int i = 0; i < n_; ++i) {
      if (strictly_inside(r, i, x_)) r = raise_x(r, i, prefix);
    }
    if (violated_) return std::nullopt;
    for (int i = 0; i < n_; ++i) {
      if (strictly_inside(r, i, x_) || sig_.per_voter[static_cast<std::size_t>(i)] == 0) continue;
      if (auto u = bracket_step(r, i, upper(r, i), lower(r, i), StepPart::kRaiseLower, label + ".A", prefix)) return u;
      if (violated_) return std::nullopt;
      if (auto u = bracket_step(r, i, upper(r, i), lower(r, i), StepPart::kLowerUpper, label + ".A", prefix)) return u;
      if (violated_) return std::nullopt;
    }
    for (int i = 0; i < n_; ++i) {
      if (!strictly_inside(r, i, x_)) continue;
      const Alternative lo = lower(r, i);
      const std::vector<Alternative> b_set = between(r.voter(i), x_, lo);
      if (b_set.empty()) continue;
      if (auto u = swap_in(r, i, b_set.back(), lo, label + ".B", prefix)) return u;
      if (auto u = bracket_step(r, i, x_, lo, StepPart::kRaiseLower, label + ".B", prefix)) return u;
      if (violated_) return std::nullopt;
    }
    if (!options_.skip_direct_raise) {
      for (int i = 0; i < n_; ++i) {
        if (!strictly_inside(r, i, x_)) continue;
        const Alternative up = upper(r, i);
        if (r.voter(i).rank_of(x_) != r.voter(i).rank_of(up) + 1) continue;
        if (auto u = swap_in(r, i, x_, up, label + ".raise", prefix)) return u;
      }
    }
    return mu_fallback(r);
  }

  // Restricts g to {w,x,z} around r, finds the dictator of the
  // three-alternative rule and uses it to put x between w and z for nobody.
  Found mu_fallback(const Profile& r) {
    const std::string label = "case2.part2.mu";
    std::vector<Alternative> triple{spec_.w, x_, spec_.z};
    std::sort(triple.begin(), triple.end());
    const DomainPtr small = enumerate_np(n_, 3);
    // Ranks held by w, x, z in each r(i); everything else stays put.
    std::vector<std::array<int, 3>> slots(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      auto& sl = slots[static_cast<std::size_t>(i)];
      sl = {r.voter(i).rank_of(spec_.w), r.voter(i).rank_of(x_), r.voter(i).rank_of(spec_.z)};
      std::sort(sl.begin(), sl.end());
    }
    auto extend = [&](const Profile& rho) {
      std::vector<Ordering> voters;
      for (int i = 0; i < n_; ++i) {
        std::vector<int> ranked = ranked_ints(r.voter(i));
        for (int k = 0; k < 3; ++k) {
          ranked[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)])] =
              triple[static_cast<std::size_t>(rho.voter(i).at(k).index)].index;
        }
        voters.push_back(Ordering::from_ranked(ranked));
      }
      return Profile(std::move(voters));
    };
    std::vector<Alternative> values;
    for (const Profile& rho : small->profiles()) {
      const Profile p = extend(rho);
      const auto v = value_at(g_, p);
      if (!v) {
        tried_.push_back(label + ": extension " + encode_profile(p) + " leaves NP");
        return std::nullopt;
      }
      const auto k = std::find(triple.begin(), triple.end(), *v);
      if (k == triple.end()) {
        tried_.push_back(label + ": value " + letter(*v, m_) + " outside {w,x,z} at " + encode_profile(p));
        return std::nullopt;
      }
      values.push_back(Alternative{static_cast<int>(k - triple.begin())});
    }
    const Rule mu = Rule::table(small, std::move(values));
    const auto dict = is_dictatorial(mu, *small);
    if (!dict || dict->degenerate) {
      violated_ = true;
      tried_.push_back(label + ": restricted rule is not dictatorial");
      return std::nullopt;
    }
    auto local = [&](Alternative a) {
      return static_cast<int>(std::find(triple.begin(), triple.end(), a) - triple.begin());
    };
    std::vector<Ordering> rho;
    for (int i = 0; i < n_; ++i) {
      if (i == dict->voter) {
        rho.push_back(Ordering::from_ranked({local(x_), local(spec_.w), local(spec_.z)}));
      } else {
        rho.push_back(Ordering::from_ranked({local(spec_.z), local(spec_.w), local(x_)}));
      }
    }
    const Profile u = extend(Profile(std::move(rho)));
    if (!keeps(u)) {
      tried_.push_back(label + ": dictator profile rejected");
      return std::nullopt;
    }
    std::vector<std::string> moves;
    for (int i = 0; i < n_; ++i) {
      if (u.voter(i) != r.voter(i)) moves.push_back(voter_move(i, r.voter(i), u.voter(i)));
    }
    return accept(u, label + "[dictator " + voter_label(dict->voter) + "]", moves);
  }

  Found case3() {
    const std::string label = "case3";
    for (int i = 0; i < n_; ++i) {
      if (sig_.per_voter[static_cast<std::size_t>(i)] == 0) continue;
      const Alternative up = upper(r_, i);
      const Alternative lo = lower(r_, i);
      if (auto u = bracket_step(r_, i, up, lo, StepPart::kRaiseLower, label, {})) return u;
      if (violated_) return std::nullopt;
      if (x_ != up) {
        if (auto u = bracket_step(r_, i, up, lo, StepPart::kLowerUpper, label, {})) return u;
        if (violated_) return std::nullopt;
      }
    }
    return std::nullopt;
  }

  const Rule& g_;
  const CollapseSpec& spec_;
  const DescentOptions& options_;
  Profile r_;
  int m_;
  int n_;
  Alternative x_;
  SigmaStats sig_;
  bool violated_ = false;
  std::vector<std::string> tried_;
};

}  // namespace

DescentResult reduce_to_contiguous(const Rule& g, const Profile& r, const CollapseSpec& spec,
                                   const DescentOptions& options) {
  if (g.domain().n() != spec.source->n() || g.domain().m() != spec.source->m() ||
      g.domain().kind() != DomainKind::kNP) {
    fail(ErrorKind::kDomainKind, "rule must be defined on NP(n, m+1)");
  }
  DescentResult result;
  Profile cur = r;
  const Alternative start_value = g.evaluate(r);
  const bool in_block = start_value == spec.w || start_value == spec.z;
  result.path.push_back({cur, sigma(cur, spec.w, spec.z).total, start_value, "start"});
  while (result.path.back().sigma > 0) {
    if (result.path.size() > options.max_steps) {
      result.failure = "step budget exhausted at " + encode_profile(cur);
      return result;
    }
    Descender d(g, spec, options, cur);
    const auto next = d.step();
    if (!next) {
      result.failure = d.context();
      return result;
    }
    const auto& [u, move] = *next;
    const auto value = value_at(g, u);
    const int s = sigma(u, spec.w, spec.z).total;
    const bool value_ok = value && (in_block ? (*value == spec.w || *value == spec.z) : *value == start_value);
    if (!value_ok || s >= result.path.back().sigma) {
      result.failure = "invalid step " + move + " to " + encode_profile(u);
      return result;
    }
    result.path.push_back({u, s, *value, move});
    cur = u;
  }
  result.ok = true;
  return result;
}

std::string format_trace(const DescentResult& result, int m) {
  std::ostringstream out;
  for (const DescentStep& step : result.path) {
    out << "σ=" << step.sigma << " profile=" << encode_profile(step.profile) << " value=" << letter(step.value, m)
        << " move=" << step.move << '\n';
  }
  if (!result.ok) out << "FAILED " << result.failure << '\n';
  return out.str();
}

}  // namespace npv
