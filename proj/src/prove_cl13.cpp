#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "colkit/proofs.hpp"

namespace colkit {
namespace {

// No general letters and nothing beyond ~ /\ \/ %& %| over elementary atoms.
bool quasielementary(const Formula& f) {
  switch (f.op) {
    case Op::Top:
    case Op::Bot:
    case Op::Elem:
      return true;
    case Op::Not:
      return f.kids[0].op == Op::Elem;
    case Op::PAnd:
    case Op::POr:
    case Op::TAnd:
    case Op::TOr:
      return quasielementary(f.kids[0]) && quasielementary(f.kids[1]);
    default:
      return false;
  }
}

// Defined on quasielementary formulas only; there quasielementarize is the
// identity, so the elementarization alone settles it.
bool stable(const Formula& f) {
  return classical_valid(elementarize_cl13(f), ClassicalEffort::prop()).kind == Validity::Valid;
}

bool through_parallel(Op o) { return o == Op::PAnd || o == Op::POr; }
bool through_semisurface(Op o) { return o != Op::ChAnd && o != Op::ChOr; }

std::vector<OccPath> surface_occs(const Formula& f, Op which) {
  return find_occurrences(
      f, [which](const Formula& g) { return g.op == which; }, through_parallel);
}

std::vector<OccPath> semisurface_occs(const Formula& f, Op which) {
  return find_occurrences(
      f, [which](const Formula& g) { return g.op == which; }, through_semisurface);
}

// True when every strict ancestor along p satisfies `through` and p lands on
// a real node. The checker uses this to validate occurrence parameters.
bool path_through(const Formula& f, const OccPath& p, bool (*through)(Op)) {
  const Formula* cur = &f;
  for (int step : p) {
    if (!through(cur->op)) return false;
    if (step < 0 || static_cast<std::size_t>(step) >= cur->kids.size()) return false;
    cur = &cur->kids[static_cast<std::size_t>(step)];
  }
  return true;
}

bool positive_occ(const Formula& f, const OccPath& p) {
  if (p.empty()) return true;
  OccPath parent(p.begin(), p.end() - 1);
  return subformula_at(f, parent)->op != Op::Not;
}

void push_unique(std::vector<Formula>& v, Formula f) {
  if (std::find(v.begin(), v.end(), f) == v.end()) v.push_back(std::move(f));
}

// Premises of the settling rule: both single-component replacements of every
// surface %& osubformula, in path order. Empty when there is no surface %&,
// which is the axiom case.
std::vector<Formula> settle_premises(const Formula& f) {
  std::vector<Formula> out;
  for (const auto& occ : surface_occs(f, Op::TAnd)) {
    const Formula* g = subformula_at(f, occ);
    push_unique(out, replace_at(f, occ, g->kids[0]));
    push_unique(out, replace_at(f, occ, g->kids[1]));
  }
  return out;
}

// Premises of the waiting rule: the quasielementarization first, then every
// single environment move: either component of a semisurface &, or the tail
// of a semisurface .&.
std::vector<Formula> wait_premises(const Formula& f) {
  std::vector<Formula> out;
  push_unique(out, quasielementarize(f));
  for (const auto& occ : semisurface_occs(f, Op::ChAnd)) {
    const Formula* g = subformula_at(f, occ);
    push_unique(out, replace_at(f, occ, g->kids[0]));
    push_unique(out, replace_at(f, occ, g->kids[1]));
  }
  for (const auto& occ : semisurface_occs(f, Op::SAnd)) {
    const Formula* g = subformula_at(f, occ);
    push_unique(out, replace_at(f, occ, g->kids[1]));
  }
  return out;
}

// A matchable pair: a positive and a negative semisurface occurrence of one
// general letter. The negative one is addressed by its ~ node.
struct MatchSpot {
  OccPath pos, neg;
};

std::vector<MatchSpot> match_spots(const Formula& f) {
  auto gens = find_occurrences(
      f, [](const Formula& g) { return g.op == Op::Gen; }, through_semisurface);
  auto negs = find_occurrences(
      f, [](const Formula& g) { return g.op == Op::Not && g.kids[0].op == Op::Gen; },
      through_semisurface);
  std::vector<MatchSpot> out;
  for (const auto& pp : gens) {
    if (!positive_occ(f, pp)) continue;
    for (const auto& np : negs) {
      if (subformula_at(f, pp)->name == subformula_at(f, np)->kids[0].name)
        out.push_back({pp, np});
    }
  }
  return out;
}

void elem_letters(const Formula& f, std::set<std::string>& out) {
  if (f.op == Op::Elem) out.insert(f.name);
  for (const auto& k : f.kids) elem_letters(k, out);
}

std::string fresh_elem(const Formula& f) {
  std::set<std::string> used;
  elem_letters(f, used);
  for (int k = 0;; ++k) {
    std::string name = "_m" + std::to_string(k);
    if (!used.count(name)) return name;
  }
}

Formula match_premise(const Formula& f, const MatchSpot& spot, const std::string& letter) {
  Formula out = replace_at(f, spot.pos, mk_elem(letter));
  return replace_at(out, spot.neg, mk_unary(Op::Not, mk_elem(letter)));
}

struct Just {
  std::string rule;
  std::map<std::string, std::string> params;
  std::vector<Formula> premises;
};

// Backward decision procedure. Every rule strictly shrinks the count of
// choice, sequential and toggling operators plus general-literal occurrences,
// so plain recursion with a verdict cache terminates and its No answers are
// final.
struct Searcher {
  bool rev = false;
  std::map<std::string, bool> known;
  std::map<std::string, Just> how;

  template <typename T>
  std::vector<T> ordered(std::vector<T> v) const {
    if (rev) std::reverse(v.begin(), v.end());
    return v;
  }

  bool decide(const Formula& f) {
    const std::string key = print_formula(f);
    auto it = known.find(key);
    if (it != known.end()) return it->second;
    bool ok = attempt(f, key);
    known[key] = ok;
    return ok;
  }

  bool all_provable(const std::vector<Formula>& prems) {
    for (const auto& g : prems)
      if (!decide(g)) return false;
    return true;
  }

  bool won(const std::string& key, std::string rule,
           std::map<std::string, std::string> params, std::vector<Formula> prems) {
    how[key] = {std::move(rule), std::move(params), std::move(prems)};
    return true;
  }

  bool attempt(const Formula& f, const std::string& key) {
    if (quasielementary(f)) {
      if (stable(f)) {
        auto prems = settle_premises(f);
        if (all_provable(prems)) return won(key, "Settle", {}, std::move(prems));
      }
      for (const auto& occ : ordered(surface_occs(f, Op::TOr))) {
        const Formula* g = subformula_at(f, occ);
        for (int side : ordered(std::vector<int>{0, 1})) {
          Formula prem = replace_at(f, occ, g->kids[side]);
          if (decide(prem))
            return won(key, "Toggle", {{"occ", print_path(occ)}, {"side", std::to_string(side)}},
                       {std::move(prem)});
        }
      }
      return false;
    }
    for (const auto& occ : ordered(semisurface_occs(f, Op::ChOr))) {
      const Formula* g = subformula_at(f, occ);
      for (int side : ordered(std::vector<int>{0, 1})) {
        Formula prem = replace_at(f, occ, g->kids[side]);
        if (decide(prem))
          return won(key, "Choose", {{"occ", print_path(occ)}, {"side", std::to_string(side)}},
                     {std::move(prem)});
      }
    }
    for (const auto& occ : ordered(semisurface_occs(f, Op::SOr))) {
      Formula prem = replace_at(f, occ, subformula_at(f, occ)->kids[1]);
      if (decide(prem)) return won(key, "Switch", {{"occ", print_path(occ)}}, {std::move(prem)});
    }
    for (const auto& spot : ordered(match_spots(f))) {
      Formula prem = match_premise(f, spot, fresh_elem(f));
      if (decide(prem))
        return won(key, "Match", {{"pos", print_path(spot.pos)}, {"neg", print_path(spot.neg)}},
                   {std::move(prem)});
    }
    auto prems = wait_premises(f);
    if (all_provable(prems)) return won(key, "Wait", {}, std::move(prems));
    return false;
  }

  int emit(const Formula& f, Proof& p, std::map<std::string, int>& done) {
    const std::string key = print_formula(f);
    auto it = done.find(key);
    if (it != done.end()) return it->second;
    const Just& j = how.at(key);
    std::vector<int> prems;
    for (const auto& g : j.premises) prems.push_back(emit(g, p, done));
    ProofStep st;
    st.index = static_cast<int>(p.steps.size()) + 1;
    st.statement = f;
    st.rule = j.rule;
    st.premises = std::move(prems);
    st.params = j.params;
    const int idx = st.index;
    p.steps.push_back(std::move(st));
    done[key] = idx;
    return idx;
  }
};

}  // namespace

std::vector<std::string> check_cl13(const Proof& p) {
  std::vector<std::string> errs;
  for (const auto& st : p.steps) {
    auto oops = [&](const std::string& w) {
      errs.push_back("step " + std::to_string(st.index) + ": " + w);
    };
    if (st.is_sequent()) {
      oops("cl13 statements are formulas, not sequents");
      continue;
    }
    const Formula& f = st.formula();
    bool bad = false;
    for (auto& v : fragment_check(f, SystemId::CL13)) {
      oops(v);
      bad = true;
    }
    if (!bad && f != officialize(f)) {
      oops("statement is not in official form: " + print_formula(f));
      bad = true;
    }
    for (int q : st.premises) {
      if (q < 1 || q >= st.index) {
        oops("premise " + std::to_string(q) + " is not an earlier step");
        bad = true;
      } else if (p.at(q).is_sequent()) {
        oops("premise " + std::to_string(q) + " is not a formula");
        bad = true;
      }
    }
    if (bad) continue;

    auto premise = [&](int i) -> const Formula& { return p.at(st.premises[i]).formula(); };
    auto expect_list = [&](const std::vector<Formula>& want) {
      if (st.premises.size() != want.size()) {
        oops("rule " + st.rule + " needs " + std::to_string(want.size()) + " premise(s), got " +
             std::to_string(st.premises.size()));
        return;
      }
      for (std::size_t i = 0; i < want.size(); ++i)
        if (!(premise(static_cast<int>(i)) == want[i]))
          oops("premise " + std::to_string(i + 1) + " should be " + print_formula(want[i]));
    };
    auto need = [&](const char* k, std::string* dst) {
      auto it = st.params.find(k);
      if (it == st.params.end()) {
        oops("rule " + st.rule + " needs a '" + std::string(k) + "' parameter");
        return false;
      }
      *dst = it->second;
      return true;
    };
    auto need_path = [&](const char* k, OccPath* dst) {
      std::string text;
      if (!need(k, &text)) return false;
      try {
        *dst = parse_path(text);
      } catch (const std::exception& e) {
        oops(e.what());
        return false;
      }
      return true;
    };
    auto need_side = [&](int* dst) {
      std::string text;
      if (!need("side", &text)) return false;
      if (text != "0" && text != "1") {
        oops("side must be 0 or 1");
        return false;
      }
      *dst = text == "1" ? 1 : 0;
      return true;
    };

    if (st.rule == "Settle") {
      if (!quasielementary(f))
        oops("Settle needs a quasielementary conclusion");
      else if (!stable(f))
        oops("Settle needs a stable conclusion: " + print_formula(f));
      else
        expect_list(settle_premises(f));
    } else if (st.rule == "Toggle") {
      OccPath occ;
      int side = 0;
      if (!quasielementary(f)) {
        oops("Toggle needs a quasielementary conclusion");
      } else if (need_path("occ", &occ) && need_side(&side)) {
        const Formula* g = subformula_at(f, occ);
        if (!g || g->op != Op::TOr || !path_through(f, occ, through_parallel))
          oops("occ must name a surface %| osubformula");
        else
          expect_list({replace_at(f, occ, g->kids[side])});
      }
    } else if (st.rule == "Wait") {
      if (quasielementary(f))
        oops("Wait needs a non-quasielementary conclusion");
      else
        expect_list(wait_premises(f));
    } else if (st.rule == "Choose") {
      OccPath occ;
      int side = 0;
      if (need_path("occ", &occ) && need_side(&side)) {
        const Formula* g = subformula_at(f, occ);
        if (!g || g->op != Op::ChOr || !path_through(f, occ, through_semisurface))
          oops("occ must name a semisurface | osubformula");
        else
          expect_list({replace_at(f, occ, g->kids[side])});
      }
    } else if (st.rule == "Switch") {
      OccPath occ;
      if (need_path("occ", &occ)) {
        const Formula* g = subformula_at(f, occ);
        if (!g || g->op != Op::SOr || !path_through(f, occ, through_semisurface))
          oops("occ must name a semisurface .| osubformula");
        else
          expect_list({replace_at(f, occ, g->kids[1])});
      }
    } else if (st.rule == "Match") {
      OccPath pos, neg;
      if (need_path("pos", &pos) && need_path("neg", &neg)) {
        const Formula* pg = subformula_at(f, pos);
        const Formula* ng = subformula_at(f, neg);
        if (!pg || pg->op != Op::Gen || !positive_occ(f, pos) ||
            !path_through(f, pos, through_semisurface)) {
          oops("pos must name a positive semisurface general oliteral");
        } else if (!ng || ng->op != Op::Not || ng->kids[0].op != Op::Gen ||
                   !path_through(f, neg, through_semisurface)) {
          oops("neg must name a negative semisurface general oliteral");
        } else if (pg->name != ng->kids[0].name) {
          oops("pos and neg must carry the same general letter");
        } else if (st.premises.size() != 1) {
          oops("rule Match needs 1 premise(s), got " + std::to_string(st.premises.size()));
        } else {
          const Formula* q = subformula_at(premise(0), pos);
          std::set<std::string> used;
          elem_letters(f, used);
          if (!q || q->op != Op::Elem || !q->terms.empty())
            oops("the premise must carry an elementary letter at pos");
          else if (used.count(q->name))
            oops("letter '" + q->name + "' already occurs in the conclusion");
          else
            expect_list({match_premise(f, {pos, neg}, q->name)});
        }
      }
    } else {
      oops("unknown cl13 rule '" + st.rule + "'");
    }
  }
  return errs;
}

ProveResult prove_cl13(const Formula& goal, bool reverse_order) {
  auto complaints = fragment_check(goal, SystemId::CL13);
  if (!complaints.empty()) throw std::invalid_argument(complaints.front());

  Searcher se;
  se.rev = reverse_order;
  Formula start = officialize(goal);
  ProveResult res;
  if (se.decide(start)) {
    Proof p;
    p.system = SystemId::CL13;
    std::map<std::string, int> done;
    se.emit(start, p, done);
    res.kind = Provability::Provable;
    res.proof = std::move(p);
  } else {
    res.kind = Provability::NotProvable;
  }
  return res;
}

}  // namespace colkit
