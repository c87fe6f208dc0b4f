#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "colkit/proofs.hpp"

namespace colkit {
namespace {

// Surface here means reachable without crossing a choice operator; the blind
// quantifiers and the parallel connectives are transparent.
bool through_surface(Op o) {
  return o == Op::PAnd || o == Op::POr || o == Op::BlindAll || o == Op::BlindEx;
}

std::vector<OccPath> surface_occs(const Formula& f, Op which) {
  return find_occurrences(
      f, [which](const Formula& g) { return g.op == which; }, through_surface);
}

bool path_through(const Formula& f, const OccPath& p) {
  const Formula* cur = &f;
  for (int step : p) {
    if (!through_surface(cur->op)) return false;
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

void bound_vars(const Formula& f, std::set<std::string>& out) {
  if (is_quantifier(f.op)) out.insert(f.name);
  for (const auto& k : f.kids) bound_vars(k, out);
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

std::string fresh_var(const Formula& f) {
  std::set<std::string> used = all_vars(f);
  for (int k = 0;; ++k) {
    std::string name = "_v" + std::to_string(k);
    if (!used.count(name)) return name;
  }
}

// A matchable pair: a positive and a negative surface occurrence of one
// general letter. The argument tuples may differ; the replacement keeps them.
struct MatchSpot {
  OccPath pos, neg;
};

std::vector<MatchSpot> match_spots(const Formula& f) {
  auto gens = find_occurrences(
      f, [](const Formula& g) { return g.op == Op::Gen; }, through_surface);
  auto negs = find_occurrences(
      f, [](const Formula& g) { return g.op == Op::Not && g.kids[0].op == Op::Gen; },
      through_surface);
  std::vector<MatchSpot> out;
  for (const auto& pp : gens) {
    if (!positive_occ(f, pp)) continue;
    const Formula* pg = subformula_at(f, pp);
    for (const auto& np : negs) {
      const Formula& ng = subformula_at(f, np)->kids[0];
      if (pg->name == ng.name && pg->terms.size() == ng.terms.size()) out.push_back({pp, np});
    }
  }
  return out;
}

Formula match_premise(const Formula& f, const MatchSpot& spot, const std::string& letter) {
  Formula pos_atom = mk_elem(letter, subformula_at(f, spot.pos)->terms);
  Formula neg_atom = mk_elem(letter, subformula_at(f, spot.neg)->kids[0].terms);
  Formula out = replace_at(f, spot.pos, std::move(pos_atom));
  return replace_at(out, spot.neg, mk_unary(Op::Not, std::move(neg_atom)));
}

Formula choose_term_premise(const Formula& f, const OccPath& occ, const Term& t) {
  const Formula* q = subformula_at(f, occ);
  return replace_at(f, occ, substitute(q->kids[0], q->name, t));
}

// Finds the term standing in `act` where the first in-scope occurrence of the
// bound variable x stands in `pat`. Shape mismatches end the walk quietly;
// the caller's final equality test catches them.
bool aligned_term(const Term& pat, const Term& act, const std::string& x, Term* out) {
  if (pat.kind == TermKind::Var && pat.text == x) {
    *out = act;
    return true;
  }
  if (pat.kind == TermKind::App && act.kind == TermKind::App && pat.text == act.text &&
      pat.args.size() == act.args.size()) {
    for (std::size_t i = 0; i < pat.args.size(); ++i)
      if (aligned_term(pat.args[i], act.args[i], x, out)) return true;
  }
  return false;
}

bool aligned_term(const Formula& pat, const Formula& act, const std::string& x, Term* out) {
  if (is_quantifier(pat.op) && pat.name == x) return false;
  for (std::size_t i = 0; i < pat.terms.size() && i < act.terms.size(); ++i)
    if (aligned_term(pat.terms[i], act.terms[i], x, out)) return true;
  for (std::size_t i = 0; i < pat.kids.size() && i < act.kids.size(); ++i)
    if (aligned_term(pat.kids[i], act.kids[i], x, out)) return true;
  return false;
}

struct Just {
  std::string rule;
  std::map<std::string, std::string> params;
  std::vector<Formula> premises;
};

// Backward search. Every rule strictly shrinks the count of choice operators
// plus general-literal occurrences, so recursion with a verdict cache
// terminates. No answers are final unless a stability check came back
// undecided, which taints the verdict to Unknown.
struct Searcher {
  ClassicalEffort effort = ClassicalEffort::fo(2);
  std::map<std::string, Provability> known;
  std::map<std::string, Just> how;
  std::string gripe;  // first undecided stability check, for the detail line

  Provability decide(const Formula& f) {
    const std::string key = print_formula(f);
    auto it = known.find(key);
    if (it != known.end()) return it->second;
    Provability out = attempt(f, key);
    known[key] = out;
    return out;
  }

  bool won(const std::string& key, std::string rule,
           std::map<std::string, std::string> params, std::vector<Formula> prems) {
    how[key] = {std::move(rule), std::move(params), std::move(prems)};
    return true;
  }

  // Constants and free variables of f, then one fresh variable. Any other
  // witness renames to one of these.
  std::vector<Term> term_universe(const Formula& f) {
    std::vector<Term> out;
    for (const auto& c : constants_of(f)) out.push_back(mk_num(c));
    for (const auto& v : free_vars(f)) out.push_back(mk_var(v));
    out.push_back(mk_var(fresh_var(f)));
    return out;
  }

  Provability attempt(const Formula& f, const std::string& key) {
    bool open = false;  // an undecided branch blocks a NotProvable verdict
    auto sub = [&](const Formula& g) {
      Provability r = decide(g);
      if (r == Provability::Unknown) open = true;
      return r == Provability::Provable;
    };

    for (const auto& occ : surface_occs(f, Op::ChOr)) {
      const Formula* g = subformula_at(f, occ);
      for (int side = 0; side < 2; ++side) {
        Formula prem = replace_at(f, occ, g->kids[side]);
        if (sub(prem)) {
          won(key, "Choose", {{"occ", print_path(occ)}, {"side", std::to_string(side)}},
              {std::move(prem)});
          return Provability::Provable;
        }
      }
    }
    for (const auto& occ : surface_occs(f, Op::ChEx)) {
      for (const auto& t : term_universe(f)) {
        Formula prem = choose_term_premise(f, occ, t);
        if (sub(prem)) {
          won(key, "ChooseTerm", {{"occ", print_path(occ)}, {"term", print_term(t)}},
              {std::move(prem)});
          return Provability::Provable;
        }
      }
    }
    for (const auto& spot : match_spots(f)) {
      Formula prem = match_premise(f, spot, fresh_elem(f));
      if (sub(prem)) {
        won(key, "Match", {{"pos", print_path(spot.pos)}, {"neg", print_path(spot.neg)}},
            {std::move(prem)});
        return Provability::Provable;
      }
    }

    auto st = classical_valid(elementarize_cl4(f), effort);
    if (st.kind == Validity::Unknown) {
      open = true;
      if (gripe.empty())
        gripe = "stability of " + print_formula(f) + " is undecided at this effort";
    } else if (st.kind == Validity::Valid) {
      std::vector<Formula> prems;
      for (const auto& occ : surface_occs(f, Op::ChAnd)) {
        const Formula* g = subformula_at(f, occ);
        prems.push_back(replace_at(f, occ, g->kids[0]));
        prems.push_back(replace_at(f, occ, g->kids[1]));
      }
      for (const auto& occ : surface_occs(f, Op::ChAll)) {
        const Formula* g = subformula_at(f, occ);
        prems.push_back(replace_at(f, occ, substitute(g->kids[0], g->name, mk_var(fresh_var(f)))));
      }
      // The premise set is canonical, so one refuted member sinks Wait for
      // good; only unknowns with no refutation leave it undecided.
      bool any_no = false, any_unknown = false;
      for (const auto& g : prems) {
        Provability r = decide(g);
        if (r == Provability::NotProvable) {
          any_no = true;
          break;
        }
        if (r == Provability::Unknown) any_unknown = true;
      }
      if (!any_no && !any_unknown) {
        won(key, "Wait", {}, std::move(prems));
        return Provability::Provable;
      }
      if (!any_no && any_unknown) open = true;
    }
    return open ? Provability::Unknown : Provability::NotProvable;
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

std::vector<std::string> check_cl4(const Proof& p, const ProveLimits& lim) {
  std::vector<std::string> errs;
  for (const auto& st : p.steps) {
    auto oops = [&](const std::string& w) {
      errs.push_back("step " + std::to_string(st.index) + ": " + w);
    };
    if (st.is_sequent()) {
      oops("cl4 statements are formulas, not sequents");
      continue;
    }
    const Formula& f = st.formula();
    bool bad = false;
    for (auto& v : fragment_check(f, SystemId::CL4)) {
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

    auto premise = [&](std::size_t i) -> const Formula& {
      return p.at(st.premises[i]).formula();
    };
    auto expect_one = [&](const Formula& want) {
      if (st.premises.size() != 1)
        oops("rule " + st.rule + " needs 1 premise, got " + std::to_string(st.premises.size()));
      else if (!(premise(0) == want))
        oops("premise should be " + print_formula(want));
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

    if (st.rule == "Choose") {
      OccPath occ;
      std::string side;
      if (need_path("occ", &occ) && need("side", &side)) {
        const Formula* g = subformula_at(f, occ);
        if (side != "0" && side != "1")
          oops("side must be 0 or 1");
        else if (!g || g->op != Op::ChOr || !path_through(f, occ))
          oops("occ must name a surface | osubformula");
        else
          expect_one(replace_at(f, occ, g->kids[side == "1" ? 1 : 0]));
      }
    } else if (st.rule == "ChooseTerm") {
      OccPath occ;
      std::string text;
      if (need_path("occ", &occ) && need("term", &text)) {
        const Formula* g = subformula_at(f, occ);
        Term t;
        bool t_ok = true;
        try {
          t = parse_term(text);
        } catch (const std::exception& e) {
          oops(e.what());
          t_ok = false;
        }
        if (!t_ok) {
        } else if (t.kind == TermKind::App) {
          oops("the chosen term must be a constant or a variable");
        } else if (!g || g->op != Op::ChEx || !path_through(f, occ)) {
          oops("occ must name a surface ce osubformula");
        } else {
          Formula want = replace_at(f, occ, substitute(g->kids[0], g->name, t));
          if (t.kind == TermKind::Var) {
            std::set<std::string> bound;
            bound_vars(want, bound);
            if (bound.count(t.text)) {
              oops("variable '" + t.text + "' is bound in the premise");
              continue;
            }
          }
          expect_one(want);
        }
      }
    } else if (st.rule == "Match") {
      OccPath pos, neg;
      if (need_path("pos", &pos) && need_path("neg", &neg)) {
        const Formula* pg = subformula_at(f, pos);
        const Formula* ng = subformula_at(f, neg);
        if (!pg || pg->op != Op::Gen || !positive_occ(f, pos) || !path_through(f, pos)) {
          oops("pos must name a positive surface general oliteral");
        } else if (!ng || ng->op != Op::Not || ng->kids[0].op != Op::Gen ||
                   !path_through(f, neg)) {
          oops("neg must name a negative surface general oliteral");
        } else if (pg->name != ng->kids[0].name ||
                   pg->terms.size() != ng->kids[0].terms.size()) {
          oops("pos and neg must carry the same general letter");
        } else if (st.premises.size() != 1) {
          oops("rule Match needs 1 premise, got " + std::to_string(st.premises.size()));
        } else {
          const Formula* q = subformula_at(premise(0), pos);
          std::set<std::string> used;
          elem_letters(f, used);
          if (!q || q->op != Op::Elem)
            oops("the premise must carry an elementary letter at pos");
          else if (used.count(q->name))
            oops("letter '" + q->name + "' already occurs in the conclusion");
          else
            expect_one(match_premise(f, {pos, neg}, q->name));
        }
      }
    } else if (st.rule == "Wait") {
      auto sv = classical_valid(elementarize_cl4(f), lim.effort);
      if (sv.kind == Validity::Invalid) {
        oops("conclusion is not stable: " + print_formula(f));
        continue;
      }
      if (sv.kind == Validity::Unknown) {
        oops("stability of " + print_formula(f) + " is undecided at this effort");
        continue;
      }
      auto ands = surface_occs(f, Op::ChAnd);
      auto alls = surface_occs(f, Op::ChAll);
      if (st.premises.size() != 2 * ands.size() + alls.size()) {
        oops("rule Wait needs " + std::to_string(2 * ands.size() + alls.size()) +
             " premise(s), got " + std::to_string(st.premises.size()));
        continue;
      }
      std::size_t at = 0;
      for (const auto& occ : ands) {
        const Formula* g = subformula_at(f, occ);
        for (int side = 0; side < 2; ++side, ++at) {
          Formula want = replace_at(f, occ, g->kids[side]);
          if (!(premise(at) == want))
            oops("premise " + std::to_string(at + 1) + " should be " + print_formula(want));
        }
      }
      for (const auto& occ : alls) {
        const Formula* g = subformula_at(f, occ);
        const Formula& got = premise(at);
        ++at;
        if (!free_vars(g->kids[0]).count(g->name)) {
          // The bound variable is idle; the premise just drops the quantifier.
          if (!(got == replace_at(f, occ, g->kids[0])))
            oops("premise " + std::to_string(at) + " should drop the idle ca at " +
                 print_path(occ));
          continue;
        }
        const Formula* img = subformula_at(got, occ);
        Term y;
        if (!img || !aligned_term(g->kids[0], *img, g->name, &y) || y.kind != TermKind::Var) {
          oops("premise " + std::to_string(at) + " does not instantiate the ca at " +
               print_path(occ) + " with a variable");
          continue;
        }
        if (all_vars(f).count(y.text)) {
          oops("variable '" + y.text + "' already occurs in the conclusion");
          continue;
        }
        if (!(got == replace_at(f, occ, substitute(g->kids[0], g->name, y))))
          oops("premise " + std::to_string(at) + " does not match the ca at " + print_path(occ));
      }
    } else {
      oops("unknown cl4 rule '" + st.rule + "'");
    }
  }
  return errs;
}

ProveResult prove_cl4(const Formula& goal, const ProveLimits& lim) {
  auto complaints = fragment_check(goal, SystemId::CL4);
  if (!complaints.empty()) throw std::invalid_argument(complaints.front());

  Searcher se;
  se.effort = lim.effort;
  Formula start = officialize(goal);
  ProveResult res;
  switch (se.decide(start)) {
    case Provability::Provable: {
      Proof p;
      p.system = SystemId::CL4;
      std::map<std::string, int> done;
      se.emit(start, p, done);
      res.kind = Provability::Provable;
      res.proof = std::move(p);
      break;
    }
    case Provability::NotProvable:
      res.kind = Provability::NotProvable;
      res.detail = "term universe: subgoal constants and free variables plus one fresh variable";
      break;
    case Provability::Unknown:
      res.kind = Provability::Unknown;
      res.detail = se.gripe;
      break;
  }
  return res;
}

}  // namespace colkit
