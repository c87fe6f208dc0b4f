#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "colkit/proofs.hpp"

namespace colkit {
namespace {

// CL7's implication is plain ->. Int+ writes its reduction arrow o-> as
// !lhs -> rhs, and the fragment check has already forced every implication
// into that shape, so both systems decompose through this one helper.
bool imp_parts(const Formula& f, bool intplus, const Formula** lhs, const Formula** rhs) {
  if (f.op != Op::Imp) return false;
  if (intplus) {
    if (f.kids[0].op != Op::BRec) return false;
    *lhs = &f.kids[0].kids[0];
  } else {
    *lhs = &f.kids[0];
  }
  *rhs = &f.kids[1];
  return true;
}

std::vector<Formula> sorted_forms(std::vector<Formula> v) {
  std::sort(v.begin(), v.end(), [](const Formula& a, const Formula& b) {
    return print_formula(a) < print_formula(b);
  });
  return v;
}

bool same_multiset(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  if (a.size() != b.size()) return false;
  return sorted_forms(a) == sorted_forms(b);
}

// Erases one occurrence equal to f; false when absent.
bool erase_one(std::vector<Formula>& v, const Formula& f) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == f) {
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
      return true;
    }
  }
  return false;
}

struct Flags {
  bool intplus = false;
  bool contraction = false;
  bool choice = false;
};

std::vector<std::string> check_engine(const Proof& p, const Flags& fl) {
  std::vector<std::string> errs;
  SystemId sys = fl.intplus ? SystemId::IntPlus : SystemId::CL7;
  for (const auto& st : p.steps) {
    auto oops = [&](const std::string& w) {
      errs.push_back("step " + std::to_string(st.index) + ": " + w);
    };
    if (!st.is_sequent()) {
      oops("statement must be a sequent");
      continue;
    }
    const Sequent& s = st.sequent();
    if (s.flavor != SequentFlavor::Gentzen) oops("sequent must use =>");
    for (auto& c : fragment_check(s, sys)) oops(c);
    bool prem_ok = true;
    for (int k : st.premises)
      if (!p.at(k).is_sequent()) prem_ok = false;
    if (!prem_ok) {
      oops("premise is not a sequent");
      continue;
    }
    auto prem = [&](std::size_t i) -> const Sequent& { return p.at(st.premises[i]).sequent(); };
    auto side_of = [&]() -> int {
      auto it = st.params.find("side");
      if (it == st.params.end() || (it->second != "0" && it->second != "1")) return -1;
      return it->second == "1" ? 1 : 0;
    };

    if (st.rule == "Axiom") {
      if (!st.premises.empty()) {
        oops("Axiom takes no premises");
        continue;
      }
      bool found = false;
      for (const auto& g : s.antecedent)
        if (g == s.succedent) found = true;
      if (!found) oops("an axiom must repeat its succedent in the antecedent");
    } else if (st.rule == "RightImp") {
      if (st.premises.size() != 1) {
        oops("RightImp takes one premise");
        continue;
      }
      const Formula *e, *f;
      if (!imp_parts(s.succedent, fl.intplus, &e, &f)) {
        oops("succedent is not an implication");
        continue;
      }
      const Sequent& q = prem(0);
      std::vector<Formula> want = s.antecedent;
      want.push_back(*e);
      if (!(q.succedent == *f) || !same_multiset(q.antecedent, want))
        oops("premise does not match RightImp");
    } else if (st.rule == "LeftImp") {
      if (st.premises.size() != 2) {
        oops("LeftImp takes two premises");
        continue;
      }
      const Sequent& q1 = prem(0);
      const Sequent& q2 = prem(1);
      if (!(q1.succedent == s.succedent)) {
        oops("first premise must keep the succedent");
        continue;
      }
      bool ok = false;
      for (std::size_t i = 0; i < s.antecedent.size() && !ok; ++i) {
        const Formula *e, *f;
        if (!imp_parts(s.antecedent[i], fl.intplus, &e, &f)) continue;
        if (!(q2.succedent == *e)) continue;
        std::vector<Formula> rest = s.antecedent;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        std::vector<Formula> combined = q1.antecedent;
        if (!erase_one(combined, *f)) continue;
        combined.insert(combined.end(), q2.antecedent.begin(), q2.antecedent.end());
        ok = same_multiset(combined, rest);
      }
      if (!ok) oops("premises do not fit LeftImp");
    } else if (st.rule == "Contract") {
      if (!fl.contraction) {
        oops("Contraction is not available in this system");
        continue;
      }
      if (st.premises.size() != 1) {
        oops("Contract takes one premise");
        continue;
      }
      const Sequent& q = prem(0);
      bool ok = false;
      if (q.succedent == s.succedent && q.antecedent.size() == s.antecedent.size() + 1) {
        for (const auto& e : s.antecedent) {
          std::vector<Formula> want = s.antecedent;
          want.push_back(e);
          if (same_multiset(want, q.antecedent)) ok = true;
        }
      }
      if (!ok) oops("premise must duplicate one antecedent formula");
    } else if (fl.choice && st.rule == "LeftChOr") {
      if (st.premises.size() != 2) {
        oops("LeftChOr takes two premises");
        continue;
      }
      const Sequent& q1 = prem(0);
      const Sequent& q2 = prem(1);
      bool ok = false;
      for (std::size_t i = 0; i < s.antecedent.size() && !ok; ++i) {
        if (s.antecedent[i].op != Op::ChOr) continue;
        std::vector<Formula> w1 = s.antecedent, w2 = s.antecedent;
        w1[i] = s.antecedent[i].kids[0];
        w2[i] = s.antecedent[i].kids[1];
        ok = q1.succedent == s.succedent && q2.succedent == s.succedent &&
             same_multiset(q1.antecedent, w1) && same_multiset(q2.antecedent, w2);
      }
      if (!ok) oops("premises do not fit LeftChOr");
    } else if (fl.choice && st.rule == "RightChOr") {
      int side = side_of();
      if (st.premises.size() != 1 || side < 0) {
        oops("RightChOr takes one premise and a side");
        continue;
      }
      const Sequent& q = prem(0);
      if (s.succedent.op != Op::ChOr || !(q.succedent == s.succedent.kids[static_cast<std::size_t>(side)]) ||
          !same_multiset(q.antecedent, s.antecedent))
        oops("premise does not match RightChOr");
    } else if (fl.choice && st.rule == "LeftChAnd") {
      int side = side_of();
      if (st.premises.size() != 1 || side < 0) {
        oops("LeftChAnd takes one premise and a side");
        continue;
      }
      const Sequent& q = prem(0);
      bool ok = false;
      for (std::size_t i = 0; i < s.antecedent.size() && !ok; ++i) {
        if (s.antecedent[i].op != Op::ChAnd) continue;
        std::vector<Formula> w = s.antecedent;
        w[i] = s.antecedent[i].kids[static_cast<std::size_t>(side)];
        ok = q.succedent == s.succedent && same_multiset(q.antecedent, w);
      }
      if (!ok) oops("premise does not match LeftChAnd");
    } else if (fl.choice && st.rule == "RightChAnd") {
      if (st.premises.size() != 2) {
        oops("RightChAnd takes two premises");
        continue;
      }
      const Sequent& q1 = prem(0);
      const Sequent& q2 = prem(1);
      if (s.succedent.op != Op::ChAnd || !(q1.succedent == s.succedent.kids[0]) ||
          !(q2.succedent == s.succedent.kids[1]) || !same_multiset(q1.antecedent, s.antecedent) ||
          !same_multiset(q2.antecedent, s.antecedent))
        oops("premises do not fit RightChAnd");
    } else {
      oops("unknown rule " + st.rule);
    }
  }
  return errs;
}

// Backward proof search. Antecedents are kept sorted so that memo keys are
// canonical; with Contraction the antecedent multiplicity of any one formula
// is capped, which makes the sequent space finite and the search terminating.
//
// Failure caching under cycles (Contraction makes them possible) is the
// delicate part: a failure discovered while an ancestor was still open may be
// an artifact of the path, not a fact about the sequent. The search therefore
// runs in sweeps. Proved entries persist; failed entries live only inside one
// sweep. A sweep that proves nothing new has reached a fixpoint, and since a
// minimal proof repeats no sequent along a branch, each earlier sweep proves
// at least the next layer of any proof that exists. So "no new facts" really
// does mean unprovable.
struct Searcher {
  Flags fl;
  static constexpr int kCap = 3;

  struct Info {
    std::string rule;
    std::map<std::string, std::string> params;
    std::vector<std::string> premem;
    Sequent display;
    std::optional<Formula> aux;  // the formula a shared-context macro acted on
  };
  std::map<std::string, Info> proved;
  std::set<std::string> failed;  // this sweep only
  std::set<std::string> open;    // current branch

  static Sequent canon(std::vector<Formula> ante, Formula succ) {
    return {sorted_forms(std::move(ante)), std::move(succ), SequentFlavor::Gentzen};
  }

  bool over_cap(const Sequent& s) const {
    for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
      int count = 1;
      for (std::size_t j = i + 1; j < s.antecedent.size(); ++j)
        if (s.antecedent[j] == s.antecedent[i]) ++count;
      if (count > kCap) return true;
    }
    return false;
  }

  bool dfs(const Sequent& s) {
    if (fl.contraction && over_cap(s)) return false;
    const std::string k = print_sequent(s);
    if (proved.count(k)) return true;
    if (failed.count(k) || open.count(k)) return false;
    open.insert(k);
    Info in;
    in.display = s;
    bool ok = attempt(s, in);
    open.erase(k);
    if (ok)
      proved.emplace(k, std::move(in));
    else
      failed.insert(k);
    return ok;
  }

  bool try_rule(Info& in, const std::string& rule, std::map<std::string, std::string> params,
                const std::vector<Sequent>& prems, std::optional<Formula> aux = std::nullopt) {
    for (const auto& q : prems)
      if (!dfs(q)) return false;
    in.rule = rule;
    in.params = std::move(params);
    in.premem.clear();
    for (const auto& q : prems) in.premem.push_back(print_sequent(q));
    in.aux = std::move(aux);
    return true;
  }

  // Without Contraction the left implication rule is applied literally, with
  // every split of the side formulas. With Contraction that enumeration blows
  // up, so the search switches to shared-context forms (the implication stays
  // available in its own condition premise, choice formulas stay put next to
  // the side they released); those are macros that emit() later expands into
  // official Contract plus left-rule steps.
  bool attempt(const Sequent& s, Info& in) {
    for (const auto& g : s.antecedent)
      if (g == s.succedent) return try_rule(in, "Axiom", {}, {});

    const Formula *e, *f;
    if (imp_parts(s.succedent, fl.intplus, &e, &f)) {
      std::vector<Formula> a = s.antecedent;
      a.push_back(*e);
      if (try_rule(in, "RightImp", {}, {canon(std::move(a), *f)})) return true;
    }
    if (fl.choice && s.succedent.op == Op::ChAnd) {
      if (try_rule(in, "RightChAnd", {},
                   {canon(s.antecedent, s.succedent.kids[0]), canon(s.antecedent, s.succedent.kids[1])}))
        return true;
    }
    if (fl.choice) {
      for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
        if (i > 0 && s.antecedent[i] == s.antecedent[i - 1]) continue;  // sorted, skip repeats
        if (s.antecedent[i].op != Op::ChOr) continue;
        std::vector<Formula> w1 = s.antecedent, w2 = s.antecedent;
        if (fl.contraction) {
          w1.push_back(s.antecedent[i].kids[0]);
          w2.push_back(s.antecedent[i].kids[1]);
          if (try_rule(in, "LeftChOrC", {}, {canon(std::move(w1), s.succedent), canon(std::move(w2), s.succedent)},
                       s.antecedent[i]))
            return true;
        } else {
          w1[i] = s.antecedent[i].kids[0];
          w2[i] = s.antecedent[i].kids[1];
          if (try_rule(in, "LeftChOr", {}, {canon(std::move(w1), s.succedent), canon(std::move(w2), s.succedent)}))
            return true;
        }
      }
      for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
        if (i > 0 && s.antecedent[i] == s.antecedent[i - 1]) continue;
        if (s.antecedent[i].op != Op::ChAnd) continue;
        for (int side = 0; side < 2; ++side) {
          std::vector<Formula> w = s.antecedent;
          if (fl.contraction) {
            w.push_back(s.antecedent[i].kids[static_cast<std::size_t>(side)]);
            if (try_rule(in, "LeftChAndC", {{"side", std::to_string(side)}}, {canon(std::move(w), s.succedent)},
                         s.antecedent[i]))
              return true;
          } else {
            w[i] = s.antecedent[i].kids[static_cast<std::size_t>(side)];
            if (try_rule(in, "LeftChAnd", {{"side", std::to_string(side)}}, {canon(std::move(w), s.succedent)}))
              return true;
          }
        }
      }
      if (s.succedent.op == Op::ChOr) {
        for (int side = 0; side < 2; ++side) {
          if (try_rule(in, "RightChOr", {{"side", std::to_string(side)}},
                       {canon(s.antecedent, s.succedent.kids[static_cast<std::size_t>(side)])}))
            return true;
        }
      }
    }

    for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
      if (i > 0 && s.antecedent[i] == s.antecedent[i - 1]) continue;
      if (!imp_parts(s.antecedent[i], fl.intplus, &e, &f)) continue;
      if (fl.contraction) {
        std::vector<Formula> after = s.antecedent;
        after[i] = *f;
        if (try_rule(in, "LeftImpC", {}, {canon(s.antecedent, *e), canon(std::move(after), s.succedent)},
                     s.antecedent[i]))
          return true;
      } else {
        std::vector<Formula> rest = s.antecedent;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        const std::size_t n = rest.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
          std::vector<Formula> left, right;
          for (std::size_t j = 0; j < n; ++j)
            (mask & (std::size_t{1} << j) ? right : left).push_back(rest[j]);
          left.push_back(*f);
          if (try_rule(in, "LeftImp", {},
                       {canon(std::move(left), s.succedent), canon(std::move(right), *e)}))
            return true;
        }
      }
    }
    return false;
  }

  int push_step(Proof& p, Sequent stmt, std::string rule, std::vector<int> prems,
                std::map<std::string, std::string> params = {}) {
    ProofStep st;
    st.index = static_cast<int>(p.steps.size()) + 1;
    st.statement = std::move(stmt);
    st.rule = std::move(rule);
    st.premises = std::move(prems);
    st.params = std::move(params);
    p.steps.push_back(std::move(st));
    return p.steps.back().index;
  }

  // Turns a run of duplicated antecedent formulas back into the target via
  // Contract steps, one per extra copy, and returns the final step index.
  int contract_down(Proof& p, int from_idx, std::vector<Formula> ante, const Formula& succ,
                    const std::vector<Formula>& extras) {
    int cur = from_idx;
    for (const auto& x : extras) {
      std::vector<Formula> next = ante;
      bool dropped = false;
      for (std::size_t i = 0; i < next.size(); ++i) {
        if (next[i] == x) {
          next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
          dropped = true;
          break;
        }
      }
      if (!dropped) throw std::logic_error("contract_down lost track of a duplicate");
      cur = push_step(p, canon(next, succ), "Contract", {cur});
      ante = std::move(next);
    }
    return cur;
  }

  void emit(const std::string& k, Proof& p, std::map<std::string, int>& done) {
    if (done.count(k)) return;
    const Info in = proved.at(k);
    for (const auto& pk : in.premem) emit(pk, p, done);
    std::vector<int> prems;
    for (const auto& pk : in.premem) prems.push_back(done.at(pk));
    const Sequent& s = in.display;

    int idx;
    if (in.rule == "LeftImpC") {
      // Premises were [ante => E, ante with imp replaced by F => G]. Official
      // LeftImp with the whole antecedent given to both sides concludes the
      // doubled sequent; Contract steps then shrink it back to s.
      std::vector<Formula> doubled = s.antecedent;
      for (const auto& g : s.antecedent) doubled.push_back(g);
      int li = push_step(p, canon(doubled, s.succedent), "LeftImp", {prems[1], prems[0]});
      idx = contract_down(p, li, doubled, s.succedent, s.antecedent);
    } else if (in.rule == "LeftChOrC" || in.rule == "LeftChAndC") {
      // Premises keep the choice formula; officially that is Contract first,
      // then the left choice rule on the spare copy.
      std::vector<Formula> mid = s.antecedent;
      mid.push_back(*in.aux);
      int ci = push_step(p, canon(mid, s.succedent),
                         in.rule == "LeftChOrC" ? "LeftChOr" : "LeftChAnd", prems, in.params);
      idx = push_step(p, s, "Contract", {ci});
    } else {
      idx = push_step(p, s, in.rule, prems, in.params);
    }
    done[k] = idx;
  }
};

ProveResult run_search(const Sequent& goal, const Flags& fl) {
  SystemId sys = fl.intplus ? SystemId::IntPlus : SystemId::CL7;
  auto complaints = fragment_check(goal, sys);
  if (!complaints.empty()) throw std::invalid_argument(complaints.front());

  Searcher se;
  se.fl = fl;
  Sequent start = Searcher::canon(goal.antecedent, goal.succedent);
  bool won = false;
  for (;;) {
    se.failed.clear();
    const std::size_t before = se.proved.size();
    if (se.dfs(start)) {
      won = true;
      break;
    }
    if (se.proved.size() == before) break;
  }

  ProveResult res;
  if (won) {
    Proof p;
    p.system = sys;
    std::map<std::string, int> done;
    se.emit(print_sequent(start), p, done);
    // Present the root exactly as asked, antecedent order included.
    p.steps.back().statement = goal;
    res.kind = Provability::Provable;
    res.proof = std::move(p);
  } else {
    res.kind = Provability::NotProvable;
    if (fl.contraction)
      res.detail = "exhaustive up to antecedent multiplicity " + std::to_string(Searcher::kCap);
  }
  return res;
}

}  // namespace

std::vector<std::string> check_cl7(const Proof& p, bool with_contraction) {
  return check_engine(p, {false, with_contraction, false});
}

std::vector<std::string> check_intplus(const Proof& p) {
  return check_engine(p, {true, true, true});
}

ProveResult prove_cl7(const Sequent& goal, bool with_contraction) {
  return run_search(goal, {false, with_contraction, false});
}

ProveResult prove_intplus(const Sequent& goal) {
  return run_search(goal, {true, true, true});
}

}  // namespace colkit
