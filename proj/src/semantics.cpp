#include "colkit/semantics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace colkit {

bool Universe::ideal() const {
  if (denotation.size() != domain.size()) return false;
  std::set<Individual> hit;
  for (const auto& [name, v] : denotation) {
    if (std::find(domain.begin(), domain.end(), v) == domain.end()) return false;
    if (!hit.insert(v).second) return false;
  }
  return true;
}

Universe standard_universe(int domain_size, int constant_count) {
  if (domain_size <= 0) throw std::invalid_argument("universe needs a nonempty domain");
  Universe u;
  for (int i = 0; i < domain_size; ++i) u.domain.push_back(i);
  int names = constant_count < 0 ? domain_size : constant_count;
  for (int i = 0; i < names; ++i) u.denotation[std::to_string(i)] = i % domain_size;
  return u;
}

Interpretation standard_arith(Universe u) {
  long n = static_cast<long>(u.domain.size());
  Interpretation i;
  i.universe = std::move(u);
  i.functions["'"] = {1, [n](const std::vector<Individual>& a) { return (a[0] + 1) % n; }};
  i.functions["+"] = {2, [n](const std::vector<Individual>& a) { return (a[0] + a[1]) % n; }};
  i.functions["*"] = {2, [n](const std::vector<Individual>& a) { return (a[0] * a[1]) % n; }};
  return i;
}

Individual eval_term(const Term& t, const Valuation& e, const Interpretation& i) {
  switch (t.kind) {
    case TermKind::Var: {
      auto it = e.at.find(t.text);
      if (it == e.at.end()) throw std::invalid_argument("unbound variable: " + t.text);
      return it->second;
    }
    case TermKind::Num: {
      auto it = i.universe.denotation.find(t.text);
      if (it == i.universe.denotation.end())
        throw std::invalid_argument("constant outside the universe: " + t.text);
      return it->second;
    }
    case TermKind::App: {
      auto it = i.functions.find(t.text);
      if (it == i.functions.end())
        throw std::invalid_argument("uninterpreted function letter: " + t.text);
      if (it->second.arity != t.args.size())
        throw std::invalid_argument("arity mismatch for function letter: " + t.text);
      std::vector<Individual> args;
      for (const auto& a : t.args) args.push_back(eval_term(a, e, i));
      return it->second.fn(args);
    }
  }
  throw std::logic_error("unreachable term kind");
}

namespace {

// Numerals sort by value; lengths break ties for malformed names.
std::vector<std::string> sorted_constants(const Universe& u) {
  std::vector<std::string> out;
  for (const auto& [name, v] : u.denotation) out.push_back(name);
  std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

// Compares the move menus of two games at every reachable position. The
// shared counter accumulates visited positions across calls; exceeding the
// budget throws.
bool same_structure(const ConstantGame& a, const ConstantGame& b, std::size_t budget,
                    std::size_t& used, Run& witness) {
  auto sorted = [](std::vector<ColoredMove> ms) {
    std::sort(ms.begin(), ms.end(), [](const ColoredMove& x, const ColoredMove& y) {
      return x.by != y.by ? x.by < y.by : x.move < y.move;
    });
    return ms;
  };
  std::vector<Position> frontier{{}};
  while (!frontier.empty()) {
    Position p = std::move(frontier.back());
    frontier.pop_back();
    if (++used > budget)
      throw std::invalid_argument("structure comparison exceeded its budget");
    auto ma = sorted(a.moves(p)), mb = sorted(b.moves(p));
    if (ma != mb) {
      witness = p;
      return false;
    }
    for (const auto& m : ma) {
      Position q = p;
      q.push_back(m);
      frontier.push_back(std::move(q));
    }
  }
  return true;
}

struct Evaluator {
  const Interpretation& interp;
  std::vector<std::string> constants;
  EvalBounds bounds;

  ConstantGame atom_game(const Formula& f, const Valuation& e) {
    switch (f.op) {
      case Op::Top: return moveless(Player::Machine);
      case Op::Bot: return moveless(Player::Environment);
      case Op::Equal:
        return moveless(eval_term(f.terms[0], e, interp) == eval_term(f.terms[1], e, interp)
                            ? Player::Machine
                            : Player::Environment);
      case Op::Elem: {
        auto it = interp.elementaries.find(f.name);
        if (it == interp.elementaries.end()) {
          if (interp.default_false) return moveless(Player::Environment);
          throw std::invalid_argument("uninterpreted elementary letter: " + f.name);
        }
        if (it->second.arity != f.terms.size())
          throw std::invalid_argument("arity mismatch for elementary letter: " + f.name);
        std::vector<Individual> args;
        for (const auto& t : f.terms) args.push_back(eval_term(t, e, interp));
        return moveless(it->second.fn(args) ? Player::Machine : Player::Environment);
      }
      case Op::Gen: {
        auto it = interp.generals.find(f.name);
        if (it == interp.generals.end()) {
          if (interp.default_false) return moveless(Player::Environment);
          throw std::invalid_argument("uninterpreted general letter: " + f.name);
        }
        if (it->second.arity != f.terms.size())
          throw std::invalid_argument("arity mismatch for general letter: " + f.name);
        std::vector<Individual> args;
        for (const auto& t : f.terms) args.push_back(eval_term(t, e, interp));
        return it->second.fn(args);
      }
      default:
        throw std::logic_error("atom_game on a non-atom");
    }
  }

  std::vector<ConstantGame> family(const Formula& f, const Valuation& e) {
    std::vector<ConstantGame> out;
    for (const auto& c : constants) {
      Valuation e2 = e;
      e2.at[f.name] = interp.universe.denotation.at(c);
      out.push_back(eval(f.kids[0], e2));
    }
    return out;
  }

  std::vector<ConstantGame> copies(const Formula& f, const Valuation& e) {
    ConstantGame g = eval(f.kids[0], e);
    return std::vector<ConstantGame>(constants.size(), g);
  }

  // Blind-bound general atoms must present one structure across the domain;
  // checked atom by atom where the atom's variables are in scope, with the
  // whole-body check in op_blind as the backstop.
  void check_admissible(const Formula& body, const std::string& var, const Valuation& e) {
    if (body.op == Op::Gen) {
      auto vars = free_vars(body);
      if (vars.count(var)) {
        for (const auto& v : vars)
          if (v != var && !e.at.count(v)) return;  // inner binder owns it; backstop applies
        Valuation ea = e, eb = e;
        std::size_t used = 0;
        for (std::size_t x = 0; x < interp.universe.domain.size(); ++x)
          for (std::size_t y = x + 1; y < interp.universe.domain.size(); ++y) {
            ea.at[var] = interp.universe.domain[x];
            eb.at[var] = interp.universe.domain[y];
            Run w;
            if (!same_structure(atom_game(body, ea), atom_game(body, eb), 200000, used, w))
              throw std::invalid_argument(
                  "inadmissible interpretation: general atom " + print_formula(body) +
                  " changes structure in " + var + " (witness position ⟨" + print_run(w) + "⟩)");
          }
      }
    }
    if (is_quantifier(body.op) && body.name == var) return;  // shadowed
    for (const auto& k : body.kids) check_admissible(k, var, e);
  }

  ConstantGame eval(const Formula& f, const Valuation& e) {
    switch (f.op) {
      case Op::Top: case Op::Bot: case Op::Equal: case Op::Elem: case Op::Gen:
        return atom_game(f, e);
      case Op::Not: return op_not(eval(f.kids[0], e));
      case Op::Imp:
        return op_parallel(ParallelKind::Disj, {"0", "1"},
                           {op_not(eval(f.kids[0], e)), eval(f.kids[1], e)});
      case Op::PAnd:
        return op_parallel(ParallelKind::Conj, {"0", "1"}, {eval(f.kids[0], e), eval(f.kids[1], e)});
      case Op::POr:
        return op_parallel(ParallelKind::Disj, {"0", "1"}, {eval(f.kids[0], e), eval(f.kids[1], e)});
      case Op::ChAnd:
        return op_choice(ChoiceKind::Conj, {"0", "1"}, {eval(f.kids[0], e), eval(f.kids[1], e)});
      case Op::ChOr:
        return op_choice(ChoiceKind::Disj, {"0", "1"}, {eval(f.kids[0], e), eval(f.kids[1], e)});
      case Op::SAnd:
        return op_sequential(SeqKind::Conj, {eval(f.kids[0], e), eval(f.kids[1], e)});
      case Op::SOr:
        return op_sequential(SeqKind::CoConj, {eval(f.kids[0], e), eval(f.kids[1], e)});
      case Op::TAnd: return toggled(ToggleKind::Conj, {eval(f.kids[0], e), eval(f.kids[1], e)});
      case Op::TOr: return toggled(ToggleKind::CoConj, {eval(f.kids[0], e), eval(f.kids[1], e)});
      case Op::ChAll: return op_choice(ChoiceKind::Conj, constants, family(f, e));
      case Op::ChEx: return op_choice(ChoiceKind::Disj, constants, family(f, e));
      case Op::PAll: return op_parallel(ParallelKind::Conj, constants, family(f, e));
      case Op::PEx: return op_parallel(ParallelKind::Disj, constants, family(f, e));
      case Op::SAll: return op_sequential(SeqKind::Conj, family(f, e));
      case Op::SEx: return op_sequential(SeqKind::CoConj, family(f, e));
      case Op::TAll: return toggled(ToggleKind::Conj, family(f, e));
      case Op::TEx: return toggled(ToggleKind::CoConj, family(f, e));
      case Op::BRec: return op_branching(BranchKind::Rec, eval(f.kids[0], e), bounds.thread_depth);
      case Op::CoBRec:
        return op_branching(BranchKind::CoRec, eval(f.kids[0], e), bounds.thread_depth);
      case Op::PRec: return op_parallel(ParallelKind::Conj, constants, copies(f, e));
      case Op::CoPRec: return op_parallel(ParallelKind::Disj, constants, copies(f, e));
      case Op::SRec: return op_sequential(SeqKind::Conj, copies(f, e));
      case Op::CoSRec: return op_sequential(SeqKind::CoConj, copies(f, e));
      case Op::TRec: return toggled(ToggleKind::Conj, copies(f, e));
      case Op::CoTRec: return toggled(ToggleKind::CoConj, copies(f, e));
      case Op::BlindAll:
      case Op::BlindEx: {
        check_admissible(f.kids[0], f.name, e);
        std::vector<ConstantGame> instances;
        for (Individual d : interp.universe.domain) {
          Valuation e2 = e;
          e2.at[f.name] = d;
          instances.push_back(eval(f.kids[0], e2));
        }
        try {
          return op_blind(f.op == Op::BlindAll ? BlindKind::All : BlindKind::Ex, instances);
        } catch (const std::invalid_argument& ex) {
          throw std::invalid_argument("inadmissible interpretation under " + print_formula(f) +
                                      ": " + ex.what());
        }
      }
    }
    throw std::logic_error("unreachable operator");
  }

  // Toggling games admit unbounded re-switching, so their exploration horizon
  // is a policy choice: branch depths plus the switch allowance.
  ConstantGame toggled(ToggleKind kind, std::vector<ConstantGame> branches) {
    int extra = bounds.seq_switch_max > 0 ? bounds.seq_switch_max
                                          : 2 * static_cast<int>(branches.size());
    int d = extra;
    for (const auto& b : branches) d += b.depth_bound;
    ConstantGame g = op_toggling(kind, std::move(branches));
    g.depth_bound = d;
    return g;
  }
};

}  // namespace

ConstantGame eval_formula(const Formula& f, const Valuation& e, const Interpretation& i,
                          const EvalBounds& bounds) {
  for (const auto& v : free_vars(f))
    if (!e.at.count(v)) throw std::invalid_argument("unbound variable: " + v);
  Evaluator ev{i, bounds.constants.empty() ? sorted_constants(i.universe) : bounds.constants,
               bounds};
  if (ev.constants.empty()) throw std::invalid_argument("no constants to bound quantifiers with");
  return ev.eval(f, e);
}

Formula closure(const Formula& f, ClosureKind kind) {
  Op op = kind == ClosureKind::ChAll    ? Op::ChAll
          : kind == ClosureKind::ChEx   ? Op::ChEx
          : kind == ClosureKind::BlindAll ? Op::BlindAll
                                          : Op::BlindEx;
  auto vars = free_vars(f);
  Formula out = f;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) out = mk_quant(op, *it, std::move(out));
  return out;
}

StructureReport check_unistructural(const GameFamily& fam, const std::string& var,
                                    std::size_t budget) {
  StructureReport rep;
  std::vector<std::string> others;
  for (const auto& v : fam.depends_on)
    if (v != var) others.push_back(v);

  std::vector<Valuation> bases{{}};
  for (const auto& v : others) {
    std::vector<Valuation> next;
    for (const auto& base : bases)
      for (Individual d : fam.universe.domain) {
        Valuation e = base;
        e.at[v] = d;
        next.push_back(std::move(e));
      }
    bases = std::move(next);
  }

  std::size_t used = 0;
  for (const auto& base : bases)
    for (std::size_t x = 0; x < fam.universe.domain.size(); ++x)
      for (std::size_t y = x + 1; y < fam.universe.domain.size(); ++y) {
        Valuation ea = base, eb = base;
        ea.at[var] = fam.universe.domain[x];
        eb.at[var] = fam.universe.domain[y];
        Run w;
        try {
          if (!same_structure(fam.at(ea), fam.at(eb), budget, used, w)) {
            rep.ok = false;
            rep.base = base;
            rep.left = fam.universe.domain[x];
            rep.right = fam.universe.domain[y];
            rep.witness = w;
            return rep;
          }
        } catch (const std::invalid_argument&) {
          rep.conclusive = false;
          return rep;
        }
      }
  return rep;
}

namespace {

std::pair<std::string, std::size_t> name_arity(const std::string& tok) {
  auto slash = tok.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 >= tok.size())
    throw std::invalid_argument("expected <name>/<arity>, got: " + tok);
  return {tok.substr(0, slash), std::stoul(tok.substr(slash + 1))};
}

std::size_t table_size(std::size_t domain, std::size_t arity) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (n > 1u << 20) throw std::invalid_argument("interpretation table too large");
    n *= domain;
  }
  return n;
}

// Row-major index of a tuple over domain {0..n-1}.
std::size_t tuple_index(const std::vector<Individual>& args, std::size_t n) {
  std::size_t idx = 0;
  for (Individual a : args) {
    if (a < 0 || a >= static_cast<Individual>(n))
      throw std::invalid_argument("individual outside the domain in a table lookup");
    idx = idx * n + static_cast<std::size_t>(a);
  }
  return idx;
}

}  // namespace

Interpretation parse_interpretation(const std::string& text) {
  Interpretation out;
  long domain = 0;
  bool have_domain = false;
  bool have_constants = false;
  // general letter scripts: letter -> (tuple or wildcard -> tree)
  std::map<std::string, std::map<std::vector<Individual>, GameTree>> gen_cases;
  std::map<std::string, GameTree> gen_default;
  std::map<std::string, std::size_t> gen_arity;

  std::istringstream all(text);
  std::string line;
  int lineno = 0;
  while (std::getline(all, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string kw;
    if (!(is >> kw)) continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("interpretation line " + std::to_string(lineno) + ": " + why);
    };
    if (kw == "domain") {
      if (!(is >> domain) || domain <= 0) fail("domain needs a positive size");
      have_domain = true;
      out = standard_arith(standard_universe(static_cast<int>(domain)));
      continue;
    }
    if (!have_domain) fail("domain must come first");
    if (kw == "constants") {
      long m = 0;
      if (!(is >> m) || m < 0) fail("constants needs a count");
      out.universe.denotation.clear();
      for (long i2 = 0; i2 < m; ++i2) out.universe.denotation[std::to_string(i2)] = i2 % domain;
      have_constants = true;
    } else if (kw == "constant") {
      std::string name;
      long v = 0;
      if (!(is >> name >> v)) fail("constant needs a name and a value");
      if (v < 0 || v >= domain) fail("constant value outside the domain");
      if (!have_constants) have_constants = true;
      out.universe.denotation[name] = v;
    } else if (kw == "fun" || kw == "elem") {
      std::string head, mode;
      if (!(is >> head >> mode)) fail("expected <name>/<arity> and a mode");
      auto [name, arity] = name_arity(head);
      if (mode == "mod") {
        std::string which;
        if (!(is >> which)) fail("mod needs a shorthand name");
        long n = domain;
        if (kw == "fun") {
          if (which == "succ" && arity == 1)
            out.functions[name] = {1, [n](const std::vector<Individual>& a) { return (a[0] + 1) % n; }};
          else if (which == "add" && arity == 2)
            out.functions[name] = {2, [n](const std::vector<Individual>& a) { return (a[0] + a[1]) % n; }};
          else if (which == "mul" && arity == 2)
            out.functions[name] = {2, [n](const std::vector<Individual>& a) { return (a[0] * a[1]) % n; }};
          else
            fail("unknown function shorthand or wrong arity: " + which);
        } else {
          if (which == "even" && arity == 1)
            out.elementaries[name] = {1, [](const std::vector<Individual>& a) { return a[0] % 2 == 0; }};
          else if (which == "odd" && arity == 1)
            out.elementaries[name] = {1, [](const std::vector<Individual>& a) { return a[0] % 2 == 1; }};
          else if (which == "true")
            out.elementaries[name] = {arity, [](const std::vector<Individual>&) { return true; }};
          else if (which == "false")
            out.elementaries[name] = {arity, [](const std::vector<Individual>&) { return false; }};
          else
            fail("unknown elementary shorthand or wrong arity: " + which);
        }
      } else if (mode == "table") {
        std::size_t need = table_size(static_cast<std::size_t>(domain), arity);
        std::vector<long> vals;
        long v = 0;
        while (is >> v) vals.push_back(v);
        if (vals.size() != need)
          fail("table needs " + std::to_string(need) + " entries, got " +
               std::to_string(vals.size()));
        std::size_t n = static_cast<std::size_t>(domain);
        if (kw == "fun") {
          for (long x : vals)
            if (x < 0 || x >= domain) fail("function table value outside the domain");
          out.functions[name] = {arity, [vals, n](const std::vector<Individual>& a) {
                                   return vals[tuple_index(a, n)];
                                 }};
        } else {
          out.elementaries[name] = {arity, [vals, n](const std::vector<Individual>& a) {
                                      return vals[tuple_index(a, n)] != 0;
                                    }};
        }
      } else {
        fail("unknown mode: " + mode);
      }
    } else if (kw == "gen") {
      std::string head;
      if (!(is >> head)) fail("expected <name>/<arity>");
      auto [name, arity] = name_arity(head);
      gen_arity[name] = arity;
      std::vector<Individual> tuple;
      bool wildcard = false;
      for (std::size_t i2 = 0; i2 < arity; ++i2) {
        std::string t;
        if (!(is >> t)) fail("general letter case needs " + std::to_string(arity) + " individuals");
        if (t == "*") {
          wildcard = true;
          break;
        }
        tuple.push_back(std::stol(t));
      }
      std::string rest;
      std::getline(is, rest);
      GameTree tree = parse_game_tree(rest);
      if (wildcard) gen_default[name] = tree;
      else gen_cases[name][tuple] = tree;
    } else {
      fail("unknown keyword: " + kw);
    }
  }
  if (!have_domain) throw std::invalid_argument("interpretation file declares no domain");

  for (const auto& [name, arity] : gen_arity) {
    auto cases = gen_cases[name];
    bool has_default = gen_default.count(name) != 0;
    GameTree dflt = has_default ? gen_default[name] : GameTree{};
    out.generals[name] = {arity, [cases, has_default, dflt, name](const std::vector<Individual>& a) {
                            auto it = cases.find(a);
                            if (it != cases.end()) return tree_game(it->second);
                            if (has_default) return tree_game(dflt);
                            throw std::invalid_argument("general letter " + name +
                                                        " has no case for this tuple");
                          }};
  }
  return out;
}

}  // namespace colkit
