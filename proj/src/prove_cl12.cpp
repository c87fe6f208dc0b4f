#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

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

void bound_vars(const Formula& f, std::set<std::string>& out) {
  if (is_quantifier(f.op)) out.insert(f.name);
  for (const auto& k : f.kids) bound_vars(k, out);
}

bool has_choice(const Formula& f) {
  if (f.op == Op::ChAnd || f.op == Op::ChOr || f.op == Op::ChAll || f.op == Op::ChEx)
    return true;
  for (const auto& k : f.kids)
    if (has_choice(k)) return true;
  return false;
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

std::set<std::string> seq_free_vars(const Sequent& s) {
  std::set<std::string> out = free_vars(s.succedent);
  for (const auto& g : s.antecedent) {
    auto v = free_vars(g);
    out.insert(v.begin(), v.end());
  }
  return out;
}

std::set<std::string> seq_all_vars(const Sequent& s) {
  std::set<std::string> out = all_vars(s.succedent);
  for (const auto& g : s.antecedent) {
    auto v = all_vars(g);
    out.insert(v.begin(), v.end());
  }
  return out;
}

std::set<std::string> seq_constants(const Sequent& s) {
  std::set<std::string> out = constants_of(s.succedent);
  for (const auto& g : s.antecedent) {
    auto v = constants_of(g);
    out.insert(v.begin(), v.end());
  }
  return out;
}

std::set<std::string> seq_bound_vars(const Sequent& s) {
  std::set<std::string> out;
  bound_vars(s.succedent, out);
  for (const auto& g : s.antecedent) bound_vars(g, out);
  return out;
}

std::string fresh_var(const Sequent& s) {
  std::set<std::string> used = seq_all_vars(s);
  for (int k = 0;; ++k) {
    std::string name = "_v" + std::to_string(k);
    if (!used.count(name)) return name;
  }
}

// where = -1 addresses the succedent, anything else an antecedent slot.
const Formula& part(const Sequent& s, int where) {
  return where < 0 ? s.succedent : s.antecedent[static_cast<std::size_t>(where)];
}

Sequent put(const Sequent& s, int where, Formula g) {
  Sequent out = s;
  if (where < 0)
    out.succedent = std::move(g);
  else
    out.antecedent[static_cast<std::size_t>(where)] = std::move(g);
  return out;
}

std::string where_text(int where) {
  return where < 0 ? "s" : std::to_string(where);
}

// One obligation the Wait rule imposes on its premise list. A pair spot
// (succedent ca, antecedent |) contributes a premise per side; a quant spot
// (succedent ca x, antecedent ce x) contributes one eigenvariable premise.
struct WaitSpot {
  int where;
  OccPath occ;
  bool quant;
};

std::vector<WaitSpot> wait_spots(const Sequent& s) {
  std::vector<WaitSpot> out;
  for (const auto& occ : surface_occs(s.succedent, Op::ChAnd)) out.push_back({-1, occ, false});
  for (std::size_t i = 0; i < s.antecedent.size(); ++i)
    for (const auto& occ : surface_occs(s.antecedent[i], Op::ChOr))
      out.push_back({static_cast<int>(i), occ, false});
  for (const auto& occ : surface_occs(s.succedent, Op::ChAll)) out.push_back({-1, occ, true});
  for (std::size_t i = 0; i < s.antecedent.size(); ++i)
    for (const auto& occ : surface_occs(s.antecedent[i], Op::ChEx))
      out.push_back({static_cast<int>(i), occ, true});
  return out;
}

struct State {
  Sequent s;
  std::vector<int> origin;  // per antecedent slot: which original formula it copies
  std::vector<int> budget;  // per original formula: replications left
};

// Budgets matter only through how they group and limit the slots, so the key
// renumbers origins by first appearance to let isomorphic states share a verdict.
std::string state_key(const State& st) {
  std::string k = print_sequent(st.s) + " ~";
  std::map<int, int> ren;
  for (int o : st.origin) {
    auto it = ren.try_emplace(o, static_cast<int>(ren.size())).first;
    k += " " + std::to_string(it->second) + ":" + std::to_string(st.budget[static_cast<std::size_t>(o)]);
  }
  return k;
}

// Eigenvariable names carry no information beyond their pattern of reuse, so
// cache keys renumber them by first appearance. Search branches that differ
// only in naming accidents then share one verdict.
std::string renumber_eigens(const std::string& text) {
  auto ident = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  std::string out;
  out.reserve(text.size());
  std::map<std::string, int> seen;
  std::size_t i = 0;
  while (i < text.size()) {
    bool at_start = i == 0 || !ident(text[i - 1]);
    if (at_start && i + 2 < text.size() && text[i] == '_' && text[i + 1] == 'v' &&
        std::isdigit(static_cast<unsigned char>(text[i + 2]))) {
      std::size_t j = i + 2;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == text.size() || !ident(text[j])) {
        auto it = seen.try_emplace(text.substr(i, j - i), static_cast<int>(seen.size())).first;
        out += "_v" + std::to_string(it->second);
        i = j;
        continue;
      }
    }
    out += text[i];
    ++i;
  }
  return out;
}

// Provability never depends on the order the antecedent happens to list its
// formulas in, only on which slots share a replication budget. The failure
// memo therefore keys a state by its sorted origin blocks; two states that
// collide here are permutations of each other and lose together.
std::string canon_key(const State& st) {
  std::map<int, std::pair<int, std::vector<std::string>>> blocks;
  for (std::size_t i = 0; i < st.origin.size(); ++i) {
    auto& b = blocks[st.origin[i]];
    b.first = st.budget[static_cast<std::size_t>(st.origin[i])];
    b.second.push_back(print_formula(st.s.antecedent[i]));
  }
  std::vector<std::string> parts;
  for (auto& [o, b] : blocks) {
    std::sort(b.second.begin(), b.second.end());
    std::string t = std::to_string(b.first) + "#";
    for (const auto& f : b.second) t += f + " | ";
    parts.push_back(std::move(t));
  }
  std::sort(parts.begin(), parts.end());
  std::string k = print_formula(st.s.succedent) + " <=";
  for (const auto& t : parts) k += " {" + t + "}";
  return renumber_eigens(k);
}

struct Just {
  std::string rule;
  std::map<std::string, std::string> params;
  std::vector<State> premises;
};

// Backward search, iteratively deepened on the count of committing moves
// (Choose, ChooseTerm, Replicate). Within one round Wait spends no fuel but
// strictly shrinks the sequent's stock of choice operators, so every round
// terminates, and the deepening loop stops at the first round that ran out of
// moves rather than fuel. A No verdict is only trusted when the replicate
// budget never pinched and every stability check was decisive.
struct Searcher {
  ClassicalEffort effort = ClassicalEffort::fo(2);
  std::map<std::string, Just> how;    // winning move per proven state, exact key
  std::map<std::string, int> failed;  // canonical key -> largest fuel that still lost
  std::map<std::string, Validity> stability;  // keyed by the elementarization
  bool depth_cut = false;  // current round suppressed a move for lack of fuel
  bool budget_hit = false;
  std::string gripe;  // first undecided stability check, for the detail line

  bool decide(const State& st, int fuel) {
    const std::string key = state_key(st);
    if (how.count(key)) return true;
    const std::string ck = canon_key(st);
    auto it = failed.find(ck);
    if (it != failed.end() && it->second >= fuel) return false;
    if (attempt(st, key, fuel)) return true;
    auto& worst = failed[ck];
    worst = std::max(worst, fuel);
    return false;
  }

  bool won(const std::string& key, std::string rule,
           std::map<std::string, std::string> params, std::vector<State> prems) {
    how[key] = {std::move(rule), std::move(params), std::move(prems)};
    return true;
  }

  // Most reachable positions are unstable, and a two-element countermodel is
  // far cheaper to find than a doomed refutation is to give up on, so probe
  // small structures before asking for the full validity verdict.
  Validity stable_kind(const Sequent& s) {
    Formula e = elementarize_cl12(s);
    const std::string key = renumber_eigens(print_formula(e));
    auto it = stability.find(key);
    if (it != stability.end()) return it->second;
    Validity v = small_countermodel(e, 2, 500000) ? Validity::Invalid
                                                  : classical_valid(e, effort).kind;
    stability[key] = v;
    return v;
  }

  // Free variables newest first, then constants, then one fresh variable. Any
  // other witness renames to one of these, and in an equational chain the
  // most recent observation is usually the one the next move has to name.
  std::vector<Term> term_universe(const Sequent& s) {
    auto age = [](const std::string& v) {
      long n = -1;
      if (v.size() > 2 && v[0] == '_' && v[1] == 'v') {
        char* end = nullptr;
        n = std::strtol(v.c_str() + 2, &end, 10);
        if (*end != '\0') n = -1;
      }
      return n;
    };
    auto fv = seq_free_vars(s);
    std::vector<std::string> vars(fv.begin(), fv.end());
    std::sort(vars.begin(), vars.end(), [&](const std::string& a, const std::string& b) {
      long x = age(a), y = age(b);
      if (x != y) return x > y;
      return a < b;
    });
    std::vector<Term> out;
    for (const auto& v : vars) out.push_back(mk_var(v));
    for (const auto& c : seq_constants(s)) out.push_back(mk_num(c));
    out.push_back(mk_var(fresh_var(s)));
    return out;
  }

  State child(const State& st, Sequent next) {
    State out;
    out.s = std::move(next);
    out.origin = st.origin;
    out.budget = st.budget;
    return out;
  }

  bool attempt(const State& st, const std::string& key, int fuel) {
    const Sequent& s = st.s;

    // Waiting is the strategy's default whenever the position is stable, and
    // it commits the machine to nothing, so it is tried first and spends no
    // fuel.
    Validity sv = stable_kind(s);
    if (sv == Validity::Unknown && gripe.empty())
      gripe = "stability of " + print_sequent(s) + " is undecided at this effort";
    if (sv == Validity::Valid) {
      std::vector<State> prems;
      bool all = true;
      for (const auto& spot : wait_spots(s)) {
        const Formula& host = part(s, spot.where);
        const Formula* g = subformula_at(host, spot.occ);
        if (spot.quant) {
          Formula inst = substitute(g->kids[0], g->name, mk_var(fresh_var(s)));
          prems.push_back(child(st, put(s, spot.where, replace_at(host, spot.occ, std::move(inst)))));
        } else {
          prems.push_back(child(st, put(s, spot.where, replace_at(host, spot.occ, g->kids[0]))));
          prems.push_back(child(st, put(s, spot.where, replace_at(host, spot.occ, g->kids[1]))));
        }
      }
      for (const auto& q : prems)
        if (!decide(q, fuel)) {
          all = false;
          break;
        }
      if (all) return won(key, "Wait", {}, std::move(prems));
    }

    if (fuel == 0) {
      // Out of committing moves this round. Note whether any were on offer so
      // the deepening loop knows another round could still reach further, and
      // whether one was barred by the replicate budget alone.
      bool any = !surface_occs(s.succedent, Op::ChOr).empty() ||
                 !surface_occs(s.succedent, Op::ChEx).empty();
      for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
        if (!any)
          any = !surface_occs(s.antecedent[i], Op::ChAnd).empty() ||
                !surface_occs(s.antecedent[i], Op::ChAll).empty();
        if (has_choice(s.antecedent[i])) {
          if (st.budget[static_cast<std::size_t>(st.origin[i])] > 0) any = true;
          else budget_hit = true;
        }
      }
      if (any) depth_cut = true;
      return false;
    }

    for (const auto& occ : surface_occs(s.succedent, Op::ChOr)) {
      const Formula* g = subformula_at(s.succedent, occ);
      for (int side = 0; side < 2; ++side) {
        State prem = child(st, put(s, -1, replace_at(s.succedent, occ, g->kids[side])));
        if (decide(prem, fuel - 1))
          return won(key, "Choose",
                     {{"occ", print_path(occ)}, {"side", std::to_string(side)}, {"where", "s"}},
                     {std::move(prem)});
      }
    }
    for (const auto& occ : surface_occs(s.succedent, Op::ChEx)) {
      for (const auto& t : term_universe(s)) {
        State prem = child(st, put(s, -1, choose_term_premise(s.succedent, occ, t)));
        if (t.kind == TermKind::Var && seq_bound_vars(prem.s).count(t.text)) continue;
        if (decide(prem, fuel - 1))
          return won(key, "ChooseTerm",
                     {{"occ", print_path(occ)}, {"term", print_term(t)}, {"where", "s"}},
                     {std::move(prem)});
      }
    }
    for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
      for (const auto& occ : surface_occs(s.antecedent[i], Op::ChAnd)) {
        const Formula* g = subformula_at(s.antecedent[i], occ);
        for (int side = 0; side < 2; ++side) {
          State prem = child(
              st, put(s, static_cast<int>(i), replace_at(s.antecedent[i], occ, g->kids[side])));
          if (decide(prem, fuel - 1))
            return won(key, "Choose",
                       {{"occ", print_path(occ)},
                        {"side", std::to_string(side)},
                        {"where", std::to_string(i)}},
                       {std::move(prem)});
        }
      }
      for (const auto& occ : surface_occs(s.antecedent[i], Op::ChAll)) {
        for (const auto& t : term_universe(s)) {
          State prem =
              child(st, put(s, static_cast<int>(i), choose_term_premise(s.antecedent[i], occ, t)));
          if (t.kind == TermKind::Var && seq_bound_vars(prem.s).count(t.text)) continue;
          if (decide(prem, fuel - 1))
            return won(key, "ChooseTerm",
                       {{"occ", print_path(occ)},
                        {"term", print_term(t)},
                        {"where", std::to_string(i)}},
                       {std::move(prem)});
        }
      }
    }

    // Replicating a choice-free formula hands the play nothing it can use, so
    // only formulas that still carry choice operators are worth copying.
    for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
      if (!has_choice(s.antecedent[i])) continue;
      int o = st.origin[i];
      if (st.budget[static_cast<std::size_t>(o)] == 0) {
        budget_hit = true;
        continue;
      }
      State prem = st;
      prem.s.antecedent.push_back(s.antecedent[i]);
      prem.origin.push_back(o);
      prem.budget[static_cast<std::size_t>(o)] -= 1;
      if (decide(prem, fuel - 1))
        return won(key, "Replicate", {{"where", std::to_string(i)}}, {std::move(prem)});
    }
    return false;
  }

  int emit(const State& st, Proof& p, std::map<std::string, int>& done) {
    const std::string text = print_sequent(st.s);
    auto it = done.find(text);
    if (it != done.end()) return it->second;
    const Just& j = how.at(state_key(st));
    std::vector<int> prems;
    for (const auto& q : j.premises) prems.push_back(emit(q, p, done));
    ProofStep step;
    step.index = static_cast<int>(p.steps.size()) + 1;
    step.statement = st.s;
    step.rule = j.rule;
    step.premises = std::move(prems);
    step.params = j.params;
    const int idx = step.index;
    p.steps.push_back(std::move(step));
    done[text] = idx;
    return idx;
  }
};

}  // namespace

std::vector<std::string> check_cl12(const Proof& p, const ProveLimits& lim) {
  std::vector<std::string> errs;
  for (const auto& st : p.steps) {
    auto oops = [&](const std::string& w) {
      errs.push_back("step " + std::to_string(st.index) + ": " + w);
    };
    if (!st.is_sequent()) {
      oops("cl12 statements are sequents, not formulas");
      continue;
    }
    const Sequent& s = st.sequent();
    bool bad = false;
    for (auto& v : fragment_check(s, SystemId::CL12)) {
      oops(v);
      bad = true;
    }
    if (!bad && !(s == officialize(s))) {
      oops("statement is not in official form: " + print_sequent(s));
      bad = true;
    }
    for (int q : st.premises) {
      if (q < 1 || q >= st.index) {
        oops("premise " + std::to_string(q) + " is not an earlier step");
        bad = true;
      } else if (!p.at(q).is_sequent()) {
        oops("premise " + std::to_string(q) + " is not a sequent");
        bad = true;
      }
    }
    if (bad) continue;

    auto premise = [&](std::size_t i) -> const Sequent& {
      return p.at(st.premises[i]).sequent();
    };
    auto expect_one = [&](const Sequent& want) {
      if (st.premises.size() != 1)
        oops("rule " + st.rule + " needs 1 premise, got " + std::to_string(st.premises.size()));
      else if (!(premise(0) == want))
        oops("premise should be " + print_sequent(want));
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
    // where = "s" picks the succedent; a number picks an antecedent slot.
    auto need_where = [&](int* dst) {
      std::string text;
      if (!need("where", &text)) return false;
      if (text == "s") {
        *dst = -1;
        return true;
      }
      std::size_t idx = 0;
      try {
        idx = std::stoul(text);
      } catch (const std::exception&) {
        oops("where must be 's' or an antecedent index");
        return false;
      }
      if (idx >= s.antecedent.size()) {
        oops("antecedent index " + text + " is out of range");
        return false;
      }
      *dst = static_cast<int>(idx);
      return true;
    };

    if (st.rule == "Choose") {
      OccPath occ;
      std::string side;
      int where = 0;
      if (need_where(&where) && need_path("occ", &occ) && need("side", &side)) {
        const Formula& host = part(s, where);
        const Formula* g = subformula_at(host, occ);
        Op wantop = where < 0 ? Op::ChOr : Op::ChAnd;
        if (side != "0" && side != "1")
          oops("side must be 0 or 1");
        else if (!g || g->op != wantop || !path_through(host, occ))
          oops(where < 0 ? "occ must name a surface | of the succedent"
                         : "occ must name a surface & of the antecedent formula");
        else
          expect_one(put(s, where, replace_at(host, occ, g->kids[side == "1" ? 1 : 0])));
      }
    } else if (st.rule == "ChooseTerm") {
      OccPath occ;
      std::string text;
      int where = 0;
      if (need_where(&where) && need_path("occ", &occ) && need("term", &text)) {
        const Formula& host = part(s, where);
        const Formula* g = subformula_at(host, occ);
        Op wantop = where < 0 ? Op::ChEx : Op::ChAll;
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
        } else if (!g || g->op != wantop || !path_through(host, occ)) {
          oops(where < 0 ? "occ must name a surface ce of the succedent"
                         : "occ must name a surface ca of the antecedent formula");
        } else {
          Sequent want = put(s, where, choose_term_premise(host, occ, t));
          if (t.kind == TermKind::Var && seq_bound_vars(want).count(t.text)) {
            oops("variable '" + t.text + "' is bound in the premise");
            continue;
          }
          expect_one(want);
        }
      }
    } else if (st.rule == "Replicate") {
      int where = 0;
      if (need_where(&where)) {
        if (where < 0) {
          oops("Replicate acts on an antecedent slot, not the succedent");
        } else {
          Sequent want = s;
          want.antecedent.push_back(s.antecedent[static_cast<std::size_t>(where)]);
          expect_one(want);
        }
      }
    } else if (st.rule == "Wait") {
      auto sv = classical_valid(elementarize_cl12(s), lim.effort);
      if (sv.kind == Validity::Invalid) {
        oops("conclusion is not stable: " + print_sequent(s));
        continue;
      }
      if (sv.kind == Validity::Unknown) {
        oops("stability of " + print_sequent(s) + " is undecided at this effort");
        continue;
      }
      auto spots = wait_spots(s);
      std::size_t wanted = 0;
      for (const auto& sp : spots) wanted += sp.quant ? 1 : 2;
      if (st.premises.size() != wanted) {
        oops("rule Wait needs " + std::to_string(wanted) + " premise(s), got " +
             std::to_string(st.premises.size()));
        continue;
      }
      std::size_t at = 0;
      for (const auto& sp : spots) {
        const Formula& host = part(s, sp.where);
        const Formula* g = subformula_at(host, sp.occ);
        const char* opname = sp.where < 0 ? (sp.quant ? "ca" : "&") : (sp.quant ? "ce" : "|");
        if (!sp.quant) {
          for (int side = 0; side < 2; ++side, ++at) {
            Sequent want = put(s, sp.where, replace_at(host, sp.occ, g->kids[side]));
            if (!(premise(at) == want))
              oops("premise " + std::to_string(at + 1) + " should be " + print_sequent(want));
          }
          continue;
        }
        const Sequent& got = premise(at);
        ++at;
        if (got.antecedent.size() != s.antecedent.size()) {
          oops("premise " + std::to_string(at) + " reshapes the antecedent");
          continue;
        }
        if (!free_vars(g->kids[0]).count(g->name)) {
          // The bound variable is idle; the premise just drops the quantifier.
          if (!(got == put(s, sp.where, replace_at(host, sp.occ, g->kids[0]))))
            oops("premise " + std::to_string(at) + " should drop the idle " + opname + " at " +
                 print_path(sp.occ));
          continue;
        }
        const Formula* img = subformula_at(part(got, sp.where), sp.occ);
        Term y;
        if (!img || !aligned_term(g->kids[0], *img, g->name, &y) || y.kind != TermKind::Var) {
          oops("premise " + std::to_string(at) + " does not instantiate the " + opname + " at " +
               print_path(sp.occ) + " with a variable");
          continue;
        }
        if (seq_free_vars(s).count(y.text)) {
          oops("variable '" + y.text + "' occurs free in the conclusion");
          continue;
        }
        if (!(got == put(s, sp.where, replace_at(host, sp.occ, substitute(g->kids[0], g->name, y)))))
          oops("premise " + std::to_string(at) + " does not match the " + opname + " at " +
               print_path(sp.occ));
      }
    } else {
      oops("unknown cl12 rule '" + st.rule + "'");
    }
  }
  return errs;
}

ProveResult prove_cl12(const Sequent& goal, const ProveLimits& lim) {
  auto complaints = fragment_check(goal, SystemId::CL12);
  if (!complaints.empty()) throw std::invalid_argument(complaints.front());

  Searcher se;
  se.effort = lim.effort;
  State start;
  start.s = officialize(goal);
  start.origin.resize(start.s.antecedent.size());
  for (std::size_t i = 0; i < start.origin.size(); ++i) start.origin[i] = static_cast<int>(i);
  start.budget.assign(start.s.antecedent.size(), lim.replicate_budget);

  // Deepen on committing moves until a round either wins or exhausts the
  // naturally finite tree. The replicate budget bounds how many commits any
  // branch can string together, so the loop always reaches a final round; the
  // cap is a backstop for that arithmetic, not a tuning knob.
  bool proved = false;
  for (int fuel = 0; fuel <= 64; ++fuel) {
    se.depth_cut = false;
    if (se.decide(start, fuel)) {
      proved = true;
      break;
    }
    if (!se.depth_cut) break;
    if (fuel == 64) se.budget_hit = true;
  }

  ProveResult res;
  if (proved) {
    Proof p;
    p.system = SystemId::CL12;
    std::map<std::string, int> done;
    se.emit(start, p, done);
    res.kind = Provability::Provable;
    res.proof = std::move(p);
  } else if (!se.gripe.empty()) {
    res.kind = Provability::Unknown;
    res.detail = se.gripe;
  } else if (se.budget_hit) {
    res.kind = Provability::Unknown;
    res.detail = "search stopped at the replicate budget of " +
                 std::to_string(lim.replicate_budget) + " per antecedent formula";
  } else {
    res.kind = Provability::NotProvable;
    res.detail = "term universe: subgoal constants and free variables plus one fresh variable";
  }
  return res;
}

}  // namespace colkit
