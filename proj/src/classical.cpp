#include "colkit/classical.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace colkit {

bool is_elementary(const Formula& f) {
  switch (f.op) {
    case Op::Top: case Op::Bot: case Op::Equal: case Op::Elem:
      return true;
    case Op::Gen:
      return false;
    case Op::Not:
    case Op::BlindAll:
    case Op::BlindEx:
      return is_elementary(f.kids[0]);
    case Op::PAnd: case Op::POr: case Op::Imp:
      return is_elementary(f.kids[0]) && is_elementary(f.kids[1]);
    default:
      return false;
  }
}

namespace {

bool has_quantifier(const Formula& f) {
  if (is_quantifier(f.op)) return true;
  for (const auto& k : f.kids)
    if (has_quantifier(k)) return true;
  return false;
}

bool ground(const Term& t) {
  if (t.kind == TermKind::Var) return false;
  for (const auto& a : t.args)
    if (!ground(a)) return false;
  return true;
}

// ---------- propositional path ----------

void collect_prop_atoms(const Formula& f, std::vector<std::string>& atoms) {
  if (f.op == Op::Elem || f.op == Op::Equal) {
    std::string key = print_formula(f);
    if (std::find(atoms.begin(), atoms.end(), key) == atoms.end()) atoms.push_back(key);
    return;
  }
  for (const auto& k : f.kids) collect_prop_atoms(k, atoms);
}

bool eval_prop(const Formula& f, const std::map<std::string, bool>& env) {
  switch (f.op) {
    case Op::Top: return true;
    case Op::Bot: return false;
    case Op::Elem:
    case Op::Equal: return env.at(print_formula(f));
    case Op::Not: return !eval_prop(f.kids[0], env);
    case Op::PAnd: return eval_prop(f.kids[0], env) && eval_prop(f.kids[1], env);
    case Op::POr: return eval_prop(f.kids[0], env) || eval_prop(f.kids[1], env);
    case Op::Imp: return !eval_prop(f.kids[0], env) || eval_prop(f.kids[1], env);
    default:
      throw std::invalid_argument("non-propositional operator under propositional effort: " +
                                  print_formula(f));
  }
}

ClassicalVerdict prop_decide(const Formula& f) {
  std::vector<std::string> atoms;
  collect_prop_atoms(f, atoms);
  if (atoms.size() > 24) return {Validity::Unknown, "more than 24 distinct atoms"};
  std::map<std::string, bool> env;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << atoms.size()); ++bits) {
    for (std::size_t i = 0; i < atoms.size(); ++i) env[atoms[i]] = (bits >> i) & 1;
    if (!eval_prop(f, env)) {
      std::string cm;
      for (std::size_t i = 0; i < atoms.size(); ++i)
        cm += atoms[i] + "=" + (env[atoms[i]] ? "1" : "0") + " ";
      return {Validity::Invalid, cm};
    }
  }
  return {Validity::Valid, ""};
}

// ---------- clausal refutation with congruence closure ----------

struct Lit {
  bool pos = true;
  bool eq = false;
  std::string pred;        // empty for equality
  std::vector<Term> args;  // two terms for equality
  bool operator==(const Lit&) const = default;
};

using Clause = std::vector<Lit>;

struct Skolemizer {
  int next_sk = 0;
  int next_univ = 0;

  // f in nnf; emits quantifier-free formula with universal variables renamed
  // V0,V1,... left free and existentials replaced by skolem terms.
  Formula run(const Formula& f, std::map<std::string, Term>& env, std::vector<Term>& univ) {
    switch (f.op) {
      case Op::BlindAll: {
        std::string v = "V" + std::to_string(next_univ++);
        auto saved = env.find(f.name) != env.end() ? std::optional<Term>(env[f.name]) : std::nullopt;
        env[f.name] = mk_var(v);
        univ.push_back(mk_var(v));
        Formula body = run(f.kids[0], env, univ);
        univ.pop_back();
        if (saved) env[f.name] = *saved; else env.erase(f.name);
        // keep the variable free in the matrix: universals are implicit
        return body;
      }
      case Op::BlindEx: {
        Term sk = mk_app("_sk" + std::to_string(next_sk++), univ);
        auto saved = env.find(f.name) != env.end() ? std::optional<Term>(env[f.name]) : std::nullopt;
        env[f.name] = sk;
        Formula body = run(f.kids[0], env, univ);
        if (saved) env[f.name] = *saved; else env.erase(f.name);
        return body;
      }
      case Op::PAnd:
      case Op::POr: {
        Formula out = f;
        out.kids[0] = run(f.kids[0], env, univ);
        out.kids[1] = run(f.kids[1], env, univ);
        return out;
      }
      case Op::Not: {
        Formula out = f;
        out.kids[0] = apply_env(f.kids[0], env);
        return out;
      }
      default:
        return apply_env(f, env);
    }
  }

  static Term subst_env(const Term& t, const std::map<std::string, Term>& env) {
    if (t.kind == TermKind::Var) {
      auto it = env.find(t.text);
      return it == env.end() ? t : it->second;
    }
    Term out = t;
    for (auto& a : out.args) a = subst_env(a, env);
    return out;
  }

  static Formula apply_env(const Formula& f, const std::map<std::string, Term>& env) {
    Formula out = f;
    for (auto& t : out.terms) t = subst_env(t, env);
    for (auto& k : out.kids) k = apply_env(k, env);
    return out;
  }
};

bool cnf(const Formula& f, std::vector<Clause>& out, std::size_t cap) {
  switch (f.op) {
    case Op::Top: return true;  // contributes nothing
    case Op::Bot: out.push_back({}); return true;
    case Op::Equal: out.push_back({Lit{true, true, "", f.terms}}); return true;
    case Op::Elem: out.push_back({Lit{true, false, f.name, f.terms}}); return true;
    case Op::Not: {
      const Formula& a = f.kids[0];
      if (a.op == Op::Equal) { out.push_back({Lit{false, true, "", a.terms}}); return true; }
      if (a.op == Op::Elem) { out.push_back({Lit{false, false, a.name, a.terms}}); return true; }
      if (a.op == Op::Top) { out.push_back({}); return true; }
      if (a.op == Op::Bot) return true;
      return false;
    }
    case Op::PAnd: return cnf(f.kids[0], out, cap) && cnf(f.kids[1], out, cap);
    case Op::POr: {
      std::vector<Clause> l, r;
      if (!cnf(f.kids[0], l, cap) || !cnf(f.kids[1], r, cap)) return false;
      if (l.size() * r.size() + out.size() > cap) return false;
      for (const auto& cl : l)
        for (const auto& cr : r) {
          Clause c = cl;
          c.insert(c.end(), cr.begin(), cr.end());
          out.push_back(std::move(c));
        }
      return true;
    }
    default:
      return false;  // general letters etc. cannot appear in elementary input
  }
}

void clause_vars(const Clause& c, std::set<std::string>& vs) {
  for (const auto& l : c)
    for (const auto& t : l.args)
      for (auto& v : free_vars(t)) vs.insert(v);
}

void collect_ground_subterms(const Term& t, std::vector<Term>& out) {
  if (!ground(t)) {
    for (const auto& a : t.args) collect_ground_subterms(a, out);
    return;
  }
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  for (const auto& a : t.args) collect_ground_subterms(a, out);
}

// Interning of ground terms and atoms for the SAT+congruence core.
struct GroundStore {
  std::vector<std::pair<std::string, std::vector<int>>> nodes;
  std::map<std::pair<std::string, std::vector<int>>, int> node_ids;
  // atom: (eq?, pred, arg ids); equality args stored sorted for symmetry
  std::vector<std::tuple<bool, std::string, std::vector<int>>> atoms;
  std::map<std::tuple<bool, std::string, std::vector<int>>, int> atom_ids;

  int intern_term(const Term& t) {
    std::string head;
    switch (t.kind) {
      case TermKind::Num: head = "#" + t.text; break;
      case TermKind::Var: head = "$" + t.text; break;  // groundified free variable
      case TermKind::App: head = t.text; break;
    }
    std::vector<int> kids;
    for (const auto& a : t.args) kids.push_back(intern_term(a));
    auto key = std::make_pair(head, std::move(kids));
    auto it = node_ids.find(key);
    if (it != node_ids.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    nodes.push_back(key);
    node_ids.emplace(std::move(key), id);
    return id;
  }

  int intern_atom(const Lit& l) {
    std::vector<int> ids;
    for (const auto& t : l.args) ids.push_back(intern_term(t));
    if (l.eq && ids[0] > ids[1]) std::swap(ids[0], ids[1]);
    auto key = std::make_tuple(l.eq, l.pred, std::move(ids));
    auto it = atom_ids.find(key);
    if (it != atom_ids.end()) return it->second;
    int id = static_cast<int>(atoms.size());
    atoms.push_back(key);
    atom_ids.emplace(std::move(key), id);
    return id;
  }
};

struct UnionFind {
  std::vector<int> up;
  explicit UnionFind(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0); }
  int find(int a) { return up[a] == a ? a : up[a] = find(up[a]); }
  bool unite(int a, int b) {
    a = find(a); b = find(b);
    if (a == b) return false;
    up[a] = b;
    return true;
  }
};

// model[i]: 0 false, 1 true. Checks whether the assignment is consistent with
// the equality theory via congruence closure.
bool congruence_consistent(const GroundStore& gs, const std::vector<int>& model) {
  UnionFind uf(gs.nodes.size());
  for (std::size_t i = 0; i < gs.atoms.size(); ++i) {
    const auto& [eq, pred, args] = gs.atoms[i];
    if (eq && model[i] == 1) uf.unite(args[0], args[1]);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < gs.nodes.size(); ++a)
      for (std::size_t b = a + 1; b < gs.nodes.size(); ++b) {
        if (gs.nodes[a].first != gs.nodes[b].first) continue;
        if (gs.nodes[a].second.size() != gs.nodes[b].second.size()) continue;
        if (uf.find(static_cast<int>(a)) == uf.find(static_cast<int>(b))) continue;
        bool all = true;
        for (std::size_t i = 0; i < gs.nodes[a].second.size(); ++i)
          if (uf.find(gs.nodes[a].second[i]) != uf.find(gs.nodes[b].second[i])) { all = false; break; }
        if (all) { uf.unite(static_cast<int>(a), static_cast<int>(b)); changed = true; }
      }
  }
  for (std::size_t i = 0; i < gs.atoms.size(); ++i) {
    const auto& [eq, pred, args] = gs.atoms[i];
    if (eq && model[i] == 0 && uf.find(args[0]) == uf.find(args[1])) return false;
  }
  // predicate congruence: equal tuples must agree
  for (std::size_t i = 0; i < gs.atoms.size(); ++i)
    for (std::size_t j = i + 1; j < gs.atoms.size(); ++j) {
      const auto& [eqi, predi, argsi] = gs.atoms[i];
      const auto& [eqj, predj, argsj] = gs.atoms[j];
      if (eqi || eqj || predi != predj || argsi.size() != argsj.size()) continue;
      if (model[i] == model[j]) continue;
      bool all = true;
      for (std::size_t k = 0; k < argsi.size(); ++k)
        if (uf.find(argsi[k]) != uf.find(argsj[k])) { all = false; break; }
      if (all) return false;
    }
  return true;
}

enum class SatResult { Sat, Unsat, Budget };

struct SatSolver {
  const GroundStore& gs;
  std::vector<std::vector<int>> clauses;  // literals: +(atom+1) / -(atom+1)
  std::vector<int> model;                 // -1 unassigned
  long budget = 400000;
  std::vector<int> found_model;

  explicit SatSolver(const GroundStore& s) : gs(s) {}

  SatResult solve() {
    model.assign(gs.atoms.size(), -1);
    return search();
  }

  SatResult search() {
    if (--budget < 0) return SatResult::Budget;
    // unit propagation
    std::vector<int> trail;
    for (;;) {
      int unit = 0;
      bool conflict = false;
      for (const auto& c : clauses) {
        int unassigned = 0, last = 0;
        bool sat = false;
        for (int lit : c) {
          int a = std::abs(lit) - 1;
          if (model[a] == -1) { ++unassigned; last = lit; }
          else if ((lit > 0) == (model[a] == 1)) { sat = true; break; }
        }
        if (sat) continue;
        if (unassigned == 0) { conflict = true; break; }
        if (unassigned == 1) { unit = last; break; }
      }
      if (conflict) {
        for (int a : trail) model[a] = -1;
        return SatResult::Unsat;
      }
      if (unit == 0) break;
      int a = std::abs(unit) - 1;
      model[a] = unit > 0 ? 1 : 0;
      trail.push_back(a);
    }
    int pick = -1;
    for (std::size_t i = 0; i < model.size(); ++i)
      if (model[i] == -1) { pick = static_cast<int>(i); break; }
    if (pick == -1) {
      if (congruence_consistent(gs, model)) {
        found_model = model;
        for (int a : trail) model[a] = -1;
        return SatResult::Sat;
      }
      for (int a : trail) model[a] = -1;
      return SatResult::Unsat;
    }
    for (int v : {1, 0}) {
      model[pick] = v;
      SatResult r = search();
      if (r != SatResult::Unsat) {
        model[pick] = -1;
        for (int a : trail) model[a] = -1;
        return r;
      }
    }
    model[pick] = -1;
    for (int a : trail) model[a] = -1;
    return SatResult::Unsat;
  }
};

Term subst_tuple(const Term& t, const std::map<std::string, Term>& m) {
  return Skolemizer::subst_env(t, m);
}

// ---------- finite model search ----------

struct Signature {
  std::map<std::string, std::size_t> preds;   // elementary letters
  std::map<std::string, std::size_t> funs;    // function letters incl. skolem-free surface ones
  std::set<std::string> numerals;
  std::set<std::string> freevars;  // groundified as constants
};

void scan_term(const Term& t, Signature& sig) {
  switch (t.kind) {
    case TermKind::Num: sig.numerals.insert(t.text); break;
    case TermKind::Var: sig.freevars.insert(t.text); break;
    case TermKind::App:
      sig.funs.emplace(t.text, t.args.size());
      for (const auto& a : t.args) scan_term(a, sig);
      break;
  }
}

void scan_formula(const Formula& f, Signature& sig, std::set<std::string> bound) {
  if (f.op == Op::Elem) sig.preds.emplace(f.name, f.terms.size());
  for (const auto& t : f.terms) {
    // bound variables are not free constants
    Signature tmp;
    scan_term(t, tmp);
    for (auto& n : tmp.numerals) sig.numerals.insert(n);
    for (auto& fn : tmp.funs) sig.funs.emplace(fn.first, fn.second);
    for (auto& v : tmp.freevars)
      if (!bound.count(v)) sig.freevars.insert(v);
  }
  if (is_quantifier(f.op)) bound.insert(f.name);
  for (const auto& k : f.kids) scan_formula(k, sig, bound);
}

struct FiniteStructure {
  int n = 1;
  std::map<std::string, int> consts;                    // numerals and free vars
  std::map<std::string, std::vector<int>> funs;         // row-major tables
  std::map<std::string, std::vector<char>> preds;

  int eval_term(const Term& t, const std::map<std::string, int>& env) const {
    switch (t.kind) {
      case TermKind::Num: return consts.at("#" + t.text);
      case TermKind::Var: {
        auto it = env.find(t.text);
        if (it != env.end()) return it->second;
        return consts.at("$" + t.text);
      }
      case TermKind::App: {
        const auto& table = funs.at(t.text);
        int idx = 0;
        for (const auto& a : t.args) idx = idx * n + eval_term(a, env);
        return table[idx];
      }
    }
    return 0;
  }

  bool eval(const Formula& f, std::map<std::string, int>& env) const {
    switch (f.op) {
      case Op::Top: return true;
      case Op::Bot: return false;
      case Op::Equal: return eval_term(f.terms[0], env) == eval_term(f.terms[1], env);
      case Op::Elem: {
        const auto& table = preds.at(f.name);
        int idx = 0;
        for (const auto& a : f.terms) idx = idx * n + eval_term(a, env);
        return table[idx] != 0;
      }
      case Op::Not: return !eval(f.kids[0], env);
      case Op::PAnd: return eval(f.kids[0], env) && eval(f.kids[1], env);
      case Op::POr: return eval(f.kids[0], env) || eval(f.kids[1], env);
      case Op::Imp: return !eval(f.kids[0], env) || eval(f.kids[1], env);
      case Op::BlindAll: {
        for (int d = 0; d < n; ++d) {
          env[f.name] = d;
          bool r = eval(f.kids[0], env);
          env.erase(f.name);
          if (!r) return false;
        }
        return true;
      }
      case Op::BlindEx: {
        for (int d = 0; d < n; ++d) {
          env[f.name] = d;
          bool r = eval(f.kids[0], env);
          env.erase(f.name);
          if (r) return true;
        }
        return false;
      }
      default:
        throw std::invalid_argument("non-elementary operator in finite model evaluation");
    }
  }

  std::string describe() const {
    std::ostringstream os;
    os << "domain size " << n << ";";
    for (const auto& [k, v] : consts) os << " " << k << "=" << v;
    for (const auto& [k, v] : preds) {
      os << " " << k << ":";
      for (char b : v) os << (b ? "1" : "0");
    }
    for (const auto& [k, v] : funs) {
      os << " " << k << ":";
      for (int x : v) os << x;
    }
    return os.str();
  }
};

std::optional<FiniteStructure> find_model(const Formula& target, int max_n, long combo_cap) {
  Signature sig;
  scan_formula(target, sig, {});
  for (int n = 1; n <= max_n; ++n) {
    // lay out all cells
    struct CellGroup { std::string key; bool pred; long cells; };
    std::vector<std::string> const_keys;
    for (const auto& c : sig.numerals) const_keys.push_back("#" + c);
    for (const auto& v : sig.freevars) const_keys.push_back("$" + v);
    long total_cells = static_cast<long>(const_keys.size());
    long table_cells = 0;
    for (const auto& [f, a] : sig.funs) {
      long cells = 1;
      for (std::size_t i = 0; i < a; ++i) cells *= n;
      table_cells += cells;
    }
    for (const auto& [p, a] : sig.preds) {
      long cells = 1;
      for (std::size_t i = 0; i < a; ++i) cells *= n;
      table_cells += cells;
    }
    // combos = n^(consts + fun cells) * 2^(pred cells)
    double combos = 1;
    for (long i = 0; i < total_cells; ++i) combos *= n;
    for (const auto& [f, a] : sig.funs) {
      long cells = 1;
      for (std::size_t i = 0; i < a; ++i) cells *= n;
      for (long i = 0; i < cells; ++i) combos *= n;
    }
    for (const auto& [p, a] : sig.preds) {
      long cells = 1;
      for (std::size_t i = 0; i < a; ++i) cells *= n;
      for (long i = 0; i < cells; ++i) combos *= 2;
    }
    if (combos > static_cast<double>(combo_cap)) continue;
    (void)table_cells;

    // odometer over all structures
    FiniteStructure st;
    st.n = n;
    std::vector<std::pair<std::string, int>> cells;  // (slot key, radix)
    for (const auto& k : const_keys) cells.emplace_back("c:" + k, n);
    for (const auto& [f, a] : sig.funs) {
      long cc = 1;
      for (std::size_t i = 0; i < a; ++i) cc *= n;
      for (long i = 0; i < cc; ++i) cells.emplace_back("f:" + f + ":" + std::to_string(i), n);
    }
    for (const auto& [p, a] : sig.preds) {
      long cc = 1;
      for (std::size_t i = 0; i < a; ++i) cc *= n;
      for (long i = 0; i < cc; ++i) cells.emplace_back("p:" + p + ":" + std::to_string(i), 2);
    }
    std::vector<int> odo(cells.size(), 0);
    for (;;) {
      // materialize structure
      st.consts.clear(); st.funs.clear(); st.preds.clear();
      for (const auto& [f, a] : sig.funs) {
        long cc = 1;
        for (std::size_t i = 0; i < a; ++i) cc *= n;
        st.funs[f].assign(cc, 0);
      }
      for (const auto& [p, a] : sig.preds) {
        long cc = 1;
        for (std::size_t i = 0; i < a; ++i) cc *= n;
        st.preds[p].assign(cc, 0);
      }
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string& key = cells[i].first;
        if (key[0] == 'c') st.consts[key.substr(2)] = odo[i];
        else {
          auto c1 = key.find(':', 2);
          std::string name = key.substr(2, c1 - 2);
          long idx = std::stol(key.substr(c1 + 1));
          if (key[0] == 'f') st.funs[name][idx] = odo[i];
          else st.preds[name][idx] = static_cast<char>(odo[i]);
        }
      }
      std::map<std::string, int> env;
      if (st.eval(target, env)) return st;
      // bump odometer
      std::size_t i = 0;
      for (; i < odo.size(); ++i) {
        if (++odo[i] < cells[i].second) break;
        odo[i] = 0;
      }
      if (i == odo.size()) break;
    }
  }
  return std::nullopt;
}

}  // namespace

ClassicalVerdict classical_valid(const Formula& input, ClassicalEffort effort) {
  Formula f = nnf(input);
  if (!is_elementary(f))
    throw std::invalid_argument("classical_valid requires an elementary formula: " +
                                print_formula(input));
  // Free variables are read universally; freeze them as fresh constants so the
  // refutation of the negation treats them existentially.
  for (const auto& v : free_vars(f)) f = substitute(f, v, mk_app("_fv$" + v, {}));

  bool quantified = has_quantifier(f);
  bool has_terms = false;
  {
    struct Scan {
      static void run(const Formula& g, bool& t) {
        if (g.op == Op::Equal || (g.op == Op::Elem && !g.terms.empty())) t = true;
        for (const auto& k : g.kids) run(k, t);
      }
    };
    Scan::run(f, has_terms);
  }

  if (!effort.first_order) {
    if (quantified)
      throw std::invalid_argument("propositional effort cannot judge quantifiers: " +
                                  print_formula(input));
    if (!has_terms) return prop_decide(f);
    // fall through to the ground decision below with a small default bound
    effort = ClassicalEffort::fo(2);
  }
  if (!quantified && !has_terms) return prop_decide(f);

  // Refutation: skolemize and clausify the negation, ground-instantiate, SAT
  // with congruence closure.
  Formula neg = nnf(mk_unary(Op::Not, f));
  Skolemizer sk;
  std::map<std::string, Term> env;
  std::vector<Term> univ;
  Formula matrix = sk.run(neg, env, univ);

  std::vector<Clause> clauses;
  bool clausal_ok = cnf(matrix, clauses, 4000);

  bool refutation_complete = true;  // stays true only when grounding was exhaustive
  SatResult sat = SatResult::Budget;
  GroundStore gs;
  SatSolver solver{gs};

  if (clausal_ok) {
    // split clauses into ground and universal templates
    std::vector<Clause> ground_clauses, templates;
    for (auto& c : clauses) {
      std::set<std::string> vs;
      clause_vars(c, vs);
      (vs.empty() ? ground_clauses : templates).push_back(c);
    }
    if (!templates.empty()) refutation_complete = false;

    std::vector<Term> terms;  // ground instantiation universe
    for (const auto& c : clauses)
      for (const auto& l : c)
        for (const auto& t : l.args) collect_ground_subterms(t, terms);
    if (terms.empty() && !templates.empty()) terms.push_back(mk_app("_d0", {}));

    std::vector<Clause> inst = ground_clauses;
    bool capped = false;
    for (int round = 0; round < std::max(1, effort.depth) && !templates.empty(); ++round) {
      std::size_t before = inst.size();
      for (const auto& tmpl : templates) {
        std::set<std::string> vs;
        clause_vars(tmpl, vs);
        std::vector<std::string> vars(vs.begin(), vs.end());
        if (vars.size() > 3) { capped = true; continue; }
        std::vector<std::size_t> idx(vars.size(), 0);
        for (;;) {
          std::map<std::string, Term> m;
          for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = terms[idx[i]];
          Clause g;
          for (const auto& l : tmpl) {
            Lit gl = l;
            for (auto& t : gl.args) t = subst_tuple(t, m);
            g.push_back(std::move(gl));
          }
          if (std::find(inst.begin(), inst.end(), g) == inst.end()) inst.push_back(std::move(g));
          if (inst.size() > 30000) { capped = true; break; }
          std::size_t i = 0;
          for (; i < idx.size(); ++i) {
            if (++idx[i] < terms.size()) break;
            idx[i] = 0;
          }
          if (i == idx.size() || idx.empty()) break;
        }
        if (capped) break;
      }
      // grow the term universe from the new instances
      for (std::size_t ci = before; ci < inst.size(); ++ci)
        for (const auto& l : inst[ci])
          for (const auto& t : l.args) collect_ground_subterms(t, terms);
      if (terms.size() > 64) { capped = true; terms.resize(64); }
      if (capped) break;
    }
    if (capped) refutation_complete = false;

    // intern and solve
    for (const auto& c : inst) {
      std::vector<int> ic;
      bool taut = false;
      for (const auto& l : c) {
        int a = gs.intern_atom(l);
        int lit = l.pos ? a + 1 : -(a + 1);
        if (std::find(ic.begin(), ic.end(), -lit) != ic.end()) { taut = true; break; }
        if (std::find(ic.begin(), ic.end(), lit) == ic.end()) ic.push_back(lit);
      }
      if (!taut) solver.clauses.push_back(std::move(ic));
    }
    sat = solver.solve();
    if (sat == SatResult::Unsat) return {Validity::Valid, ""};
  } else {
    refutation_complete = false;
  }

  if (!quantified) {
    // Quantifier-free: grounding was exhaustive, so a consistent model is a
    // genuine countermodel over the term quotient.
    if (clausal_ok && sat == SatResult::Sat) {
      std::string d = "term-model:";
      for (std::size_t i = 0; i < gs.atoms.size(); ++i) {
        const auto& [eq, pred, args] = gs.atoms[i];
        d += std::string(" ") + (solver.found_model[i] ? "+" : "-") +
             (eq ? "=" : pred) + "/" + std::to_string(args.size());
      }
      return {Validity::Invalid, d};
    }
    if (refutation_complete && sat == SatResult::Budget)
      return {Validity::Unknown, "SAT budget exhausted"};
  }

  // Bounded countermodel search on the negation.
  auto model = find_model(neg, std::min(effort.depth, 3), 2000000);
  if (model) return {Validity::Invalid, model->describe()};

  return {Validity::Unknown, "refutation depth " + std::to_string(effort.depth) + " exhausted"};
}

bool small_countermodel(const Formula& input, int max_n, long combo_cap) {
  Formula f = nnf(input);
  if (!is_elementary(f))
    throw std::invalid_argument("small_countermodel requires an elementary formula: " +
                                print_formula(input));
  for (const auto& v : free_vars(f)) f = substitute(f, v, mk_app("_fv$" + v, {}));
  Formula neg = nnf(mk_unary(Op::Not, f));
  return find_model(neg, max_n, combo_cap).has_value();
}

}  // namespace colkit
