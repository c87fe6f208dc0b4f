#include "colkit/cirquent15.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "colkit/proofs.hpp"

namespace colkit {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument(msg); }

int int_param(const std::map<std::string, std::string>& ps, const std::string& rule,
              const std::string& key) {
  auto it = ps.find(key);
  if (it == ps.end()) bad(rule + " needs a '" + key + "' parameter");
  const std::string& v = it->second;
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos || v == "0")
    bad(rule + ": '" + key + "' must be a positive number, got '" + v + "'");
  return std::stoi(v);
}

// comma-separated 1-based indices; an absent key is the empty list
std::vector<int> list_param(const std::map<std::string, std::string>& ps, const std::string& rule,
                            const std::string& key) {
  std::vector<int> out;
  auto it = ps.find(key);
  if (it == ps.end()) return out;
  std::stringstream ss(it->second);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (piece.empty() || piece.find_first_not_of("0123456789") != std::string::npos || piece == "0")
      bad(rule + ": '" + key + "' must list positive numbers, got '" + it->second + "'");
    out.push_back(std::stoi(piece));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int oformula_param(const std::map<std::string, std::string>& ps, const std::string& rule,
                   const Cirquent& c) {
  int i = int_param(ps, rule, "of");
  if (i > static_cast<int>(c.oformulas.size())) bad(rule + ": no oformula " + std::to_string(i));
  return i - 1;
}

bool member(const std::vector<int>& g, int i) {
  return std::find(g.begin(), g.end(), i) != g.end();
}

void add_member(std::vector<int>& g, int i) {
  auto it = std::lower_bound(g.begin(), g.end(), i);
  if (it == g.end() || *it != i) g.insert(it, i);
}

void drop_member(std::vector<int>& g, int i) {
  auto it = std::find(g.begin(), g.end(), i);
  if (it != g.end()) g.erase(it);
}

void shift_for_insert(std::vector<std::vector<int>>& layer, int after) {
  for (auto& g : layer)
    for (auto& i : g)
      if (i > after) ++i;
}

void shift_for_erase(std::vector<std::vector<int>>& layer, int gone) {
  for (auto& g : layer)
    for (auto& i : g)
      if (i > gone) --i;
}

// make room for a twin of slot i0 right after it, sharing all its groups
void twin_slot(Cirquent& c, int i0) {
  shift_for_insert(c.under, i0);
  shift_for_insert(c.over, i0);
  for (auto& g : c.under)
    if (member(g, i0)) add_member(g, i0 + 1);
  for (auto& g : c.over)
    if (member(g, i0)) add_member(g, i0 + 1);
}

std::string group_text(const std::vector<int>& g) {
  std::string s = "{";
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(g[k] + 1);
  }
  return s + "}";
}

}  // namespace

std::vector<std::string> cirquent_problems(const Cirquent& c) {
  std::vector<std::string> out;
  const int n = static_cast<int>(c.oformulas.size());
  if (n == 0) {
    out.push_back("a cirquent needs at least one oformula");
    return out;
  }
  auto scan = [&](const std::vector<std::vector<int>>& layer, const char* what) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (std::size_t g = 0; g < layer.size(); ++g) {
      if (layer[g].empty())
        out.push_back(std::string(what) + "group " + std::to_string(g + 1) + " is empty");
      for (int i : layer[g]) {
        if (i < 0 || i >= n)
          out.push_back(std::string(what) + "group " + std::to_string(g + 1) +
                        " points at a missing oformula");
        else
          seen[static_cast<std::size_t>(i)] = 1;
      }
    }
    for (int i = 0; i < n; ++i)
      if (!seen[static_cast<std::size_t>(i)])
        out.push_back("oformula " + std::to_string(i + 1) + " is in no " + what + "group");
  };
  scan(c.under, "under");
  scan(c.over, "over");
  return out;
}

Cirquent axiom_cirquent(const std::vector<Formula>& fs) {
  if (fs.empty()) throw std::invalid_argument("an axiom needs at least one formula");
  Cirquent c;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    c.oformulas.push_back(officialize(mk_unary(Op::Not, fs[k])));
    c.oformulas.push_back(officialize(fs[k]));
    int a = static_cast<int>(2 * k);
    c.under.push_back({a, a + 1});
    c.over.push_back({a, a + 1});
  }
  return c;
}

bool is_axiom(const Cirquent& c) {
  const int n = static_cast<int>(c.oformulas.size());
  if (n < 2 || n % 2 != 0) return false;
  if (static_cast<int>(c.under.size()) != n / 2 || static_cast<int>(c.over.size()) != n / 2)
    return false;
  auto family = [](const std::vector<std::vector<int>>& layer) {
    auto s = layer;
    for (auto& g : s) std::sort(g.begin(), g.end());
    std::sort(s.begin(), s.end());
    return s;
  };
  auto pairs = family(c.under);
  if (pairs != family(c.over)) return false;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (const auto& g : pairs) {
    if (g.size() != 2) return false;
    int a = g[0], b = g[1];
    if (a < 0 || b >= n || a == b) return false;
    if (used[static_cast<std::size_t>(a)] || used[static_cast<std::size_t>(b)]) return false;
    used[static_cast<std::size_t>(a)] = used[static_cast<std::size_t>(b)] = 1;
    const Formula& left = c.oformulas[static_cast<std::size_t>(a)];
    const Formula& right = c.oformulas[static_cast<std::size_t>(b)];
    if (!(right == officialize(mk_unary(Op::Not, left)) ||
          left == officialize(mk_unary(Op::Not, right))))
      return false;
  }
  return true;
}

Cirquent apply_rule(const std::string& rule, const Cirquent& conclusion,
                    const std::map<std::string, std::string>& params) {
  Cirquent c = conclusion;
  const int n = static_cast<int>(c.oformulas.size());

  if (rule == "ExchangeF") {
    int a0 = int_param(params, rule, "at") - 1;
    if (a0 + 1 >= n) bad("ExchangeF: no adjacent oformula pair at position " + std::to_string(a0 + 1));
    std::swap(c.oformulas[static_cast<std::size_t>(a0)], c.oformulas[static_cast<std::size_t>(a0) + 1]);
    for (auto* layer : {&c.under, &c.over})
      for (auto& g : *layer) {
        for (auto& i : g) {
          if (i == a0)
            i = a0 + 1;
          else if (i == a0 + 1)
            i = a0;
        }
        std::sort(g.begin(), g.end());
      }
    return c;
  }

  if (rule == "ExchangeU" || rule == "ExchangeO") {
    auto& layer = rule == "ExchangeU" ? c.under : c.over;
    int a0 = int_param(params, rule, "at") - 1;
    if (a0 + 1 >= static_cast<int>(layer.size()))
      bad(rule + ": no adjacent group pair at position " + std::to_string(a0 + 1));
    std::swap(layer[static_cast<std::size_t>(a0)], layer[static_cast<std::size_t>(a0) + 1]);
    return c;
  }

  if (rule == "Weakening") {
    int u0 = int_param(params, rule, "under") - 1;
    if (u0 >= static_cast<int>(c.under.size()))
      bad("Weakening: no undergroup " + std::to_string(u0 + 1));
    int i0 = oformula_param(params, rule, c);
    auto& g = c.under[static_cast<std::size_t>(u0)];
    if (!member(g, i0))
      bad("Weakening: undergroup " + std::to_string(u0 + 1) + " has no arc to oformula " +
          std::to_string(i0 + 1));
    if (g.size() < 2)
      bad("Weakening: removing the arc would empty undergroup " + std::to_string(u0 + 1));
    drop_member(g, i0);
    bool orphaned = true;
    for (const auto& h : c.under)
      if (member(h, i0)) orphaned = false;
    if (orphaned) {
      // the oformula leaves with its overgroup arcs, and overgroups that
      // held nothing else leave with it
      for (auto& h : c.over) drop_member(h, i0);
      c.over.erase(std::remove_if(c.over.begin(), c.over.end(),
                                  [](const std::vector<int>& h) { return h.empty(); }),
                   c.over.end());
      c.oformulas.erase(c.oformulas.begin() + i0);
      shift_for_erase(c.under, i0);
      shift_for_erase(c.over, i0);
    }
    return c;
  }

  if (rule == "Contraction") {
    int i0 = oformula_param(params, rule, c);
    if (c.oformulas[static_cast<std::size_t>(i0)].op != Op::CoBRec)
      bad("Contraction applies to ?-oformulas, not " +
          print_formula(c.oformulas[static_cast<std::size_t>(i0)]));
    twin_slot(c, i0);
    Formula copy = c.oformulas[static_cast<std::size_t>(i0)];
    c.oformulas.insert(c.oformulas.begin() + i0 + 1, std::move(copy));
    return c;
  }

  if (rule == "DuplicationU" || rule == "DuplicationO") {
    auto& layer = rule == "DuplicationU" ? c.under : c.over;
    int a0 = int_param(params, rule, "at") - 1;
    if (a0 + 1 >= static_cast<int>(layer.size()))
      bad(rule + ": no adjacent group pair at position " + std::to_string(a0 + 1));
    auto x = layer[static_cast<std::size_t>(a0)];
    auto y = layer[static_cast<std::size_t>(a0) + 1];
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y)
      bad(rule + ": groups " + std::to_string(a0 + 1) + " and " + std::to_string(a0 + 2) +
          " have different contents");
    layer.erase(layer.begin() + a0 + 1);
    return c;
  }

  if (rule == "Merging") {
    int o0 = int_param(params, rule, "over") - 1;
    if (o0 >= static_cast<int>(c.over.size())) bad("Merging: no overgroup " + std::to_string(o0 + 1));
    if (!params.count("left") || !params.count("right"))
      bad("Merging needs 'left' and 'right' parameters");
    std::vector<int> left = list_param(params, rule, "left");
    std::vector<int> right = list_param(params, rule, "right");
    for (auto* side : {&left, &right})
      for (auto& i : *side) --i;
    if (left.empty() || right.empty()) bad("Merging: both halves must be nonempty");
    std::vector<int> joined;
    std::set_union(left.begin(), left.end(), right.begin(), right.end(),
                   std::back_inserter(joined));
    auto whole = c.over[static_cast<std::size_t>(o0)];
    std::sort(whole.begin(), whole.end());
    if (joined != whole)
      bad("Merging: left and right together must cover overgroup " + std::to_string(o0 + 1) +
          " exactly");
    c.over[static_cast<std::size_t>(o0)] = std::move(left);
    c.over.insert(c.over.begin() + o0 + 1, std::move(right));
    return c;
  }

  if (rule == "DisjIntro") {
    int i0 = oformula_param(params, rule, c);
    Formula f = c.oformulas[static_cast<std::size_t>(i0)];
    if (f.op != Op::POr) bad("DisjIntro applies to \\/-oformulas, not " + print_formula(f));
    twin_slot(c, i0);
    c.oformulas[static_cast<std::size_t>(i0)] = f.kids[0];
    c.oformulas.insert(c.oformulas.begin() + i0 + 1, f.kids[1]);
    return c;
  }

  if (rule == "ConjIntro") {
    int i0 = oformula_param(params, rule, c);
    Formula f = c.oformulas[static_cast<std::size_t>(i0)];
    if (f.op != Op::PAnd) bad("ConjIntro applies to /\\-oformulas, not " + print_formula(f));
    twin_slot(c, i0);
    c.oformulas[static_cast<std::size_t>(i0)] = f.kids[0];
    c.oformulas.insert(c.oformulas.begin() + i0 + 1, f.kids[1]);
    // the conjuncts share overgroups, but every undergroup that held the
    // conjunction splits into a left-conjunct copy and a right-conjunct copy
    std::vector<std::vector<int>> split;
    for (auto& g : c.under) {
      if (!member(g, i0)) {
        split.push_back(std::move(g));
        continue;
      }
      auto left = g;
      auto right = g;
      drop_member(left, i0 + 1);
      drop_member(right, i0);
      split.push_back(std::move(left));
      split.push_back(std::move(right));
    }
    c.under = std::move(split);
    return c;
  }

  if (rule == "RecIntro") {
    int i0 = oformula_param(params, rule, c);
    if (c.oformulas[static_cast<std::size_t>(i0)].op != Op::BRec)
      bad("RecIntro applies to !-oformulas, not " +
          print_formula(c.oformulas[static_cast<std::size_t>(i0)]));
    Formula inner = c.oformulas[static_cast<std::size_t>(i0)].kids[0];
    c.oformulas[static_cast<std::size_t>(i0)] = std::move(inner);
    int a0 = params.count("at") ? int_param(params, rule, "at") - 1
                                : static_cast<int>(c.over.size());
    if (a0 > static_cast<int>(c.over.size()))
      bad("RecIntro: overgroup position " + std::to_string(a0 + 1) + " is out of range");
    c.over.insert(c.over.begin() + a0, {i0});
    return c;
  }

  if (rule == "CorecIntro") {
    int i0 = oformula_param(params, rule, c);
    if (c.oformulas[static_cast<std::size_t>(i0)].op != Op::CoBRec)
      bad("CorecIntro applies to ?-oformulas, not " +
          print_formula(c.oformulas[static_cast<std::size_t>(i0)]));
    Formula inner = c.oformulas[static_cast<std::size_t>(i0)].kids[0];
    c.oformulas[static_cast<std::size_t>(i0)] = std::move(inner);
    for (int k : list_param(params, rule, "join")) {
      if (k > static_cast<int>(c.over.size())) bad("CorecIntro: no overgroup " + std::to_string(k));
      auto& g = c.over[static_cast<std::size_t>(k) - 1];
      if (member(g, i0))
        bad("CorecIntro: overgroup " + std::to_string(k) + " already holds oformula " +
            std::to_string(i0 + 1));
      add_member(g, i0);
    }
    return c;
  }

  bad("unknown rule: " + rule);
}

Cirquent canon_cirquent(Cirquent c) {
  for (auto* layer : {&c.under, &c.over}) {
    for (auto& g : *layer) {
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
    }
    std::sort(layer->begin(), layer->end());
  }
  return c;
}

std::string print_cirquent(const Cirquent& c) {
  std::string out = "O:";
  for (const auto& g : c.over) out += " " + group_text(g);
  out += "\nF:";
  for (std::size_t i = 0; i < c.oformulas.size(); ++i)
    out += (i ? " ; " : " ") + print_formula(c.oformulas[i]);
  out += "\nU:";
  for (const auto& g : c.under) out += " " + group_text(g);
  out += "\n";
  return out;
}

std::string print_cirquent_proof(const CirquentProof& p) {
  std::string out;
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    if (k) out += "\n";
    out += ":: " + p.steps[k].rule;
    if (!p.steps[k].params.empty()) {
      out += " {";
      bool first = true;
      for (const auto& [key, val] : p.steps[k].params) {
        if (!first) out += " ";
        first = false;
        out += key + "=" + val;
      }
      out += "}";
    }
    out += "\n" + print_cirquent(p.steps[k].c);
  }
  return out;
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::vector<int>> parse_groups(const std::string& body, int line_no) {
  auto fail = [&](const std::string& m) -> void {
    throw std::runtime_error("cirquent proof line " + std::to_string(line_no) + ": " + m);
  };
  std::vector<std::vector<int>> out;
  std::size_t i = 0;
  while (i < body.size()) {
    if (std::isspace(static_cast<unsigned char>(body[i]))) {
      ++i;
      continue;
    }
    if (body[i] != '{') fail("expected '{' in a group list");
    ++i;
    std::vector<int> g;
    for (;;) {
      while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
      if (i < body.size() && body[i] == '}') {
        ++i;
        break;
      }
      std::size_t j = i;
      while (j < body.size() && std::isdigit(static_cast<unsigned char>(body[j]))) ++j;
      if (j == i) fail("expected an oformula number");
      int v = std::stoi(body.substr(i, j - i));
      if (v < 1) fail("oformula numbers are 1-based");
      g.push_back(v - 1);
      i = j;
      while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
      if (i < body.size() && body[i] == ',') {
        ++i;
        continue;
      }
      if (i < body.size() && body[i] == '}') {
        ++i;
        break;
      }
      fail("expected ',' or '}' in a group");
    }
    if (g.empty()) fail("a group cannot be empty");
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

CirquentProof parse_cirquent_proof(const std::string& text) {
  CirquentProof p;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& m) -> void {
    throw std::runtime_error("cirquent proof line " + std::to_string(line_no) + ": " + m);
  };
  bool open = false;
  CirquentStep cur;
  std::optional<std::vector<std::vector<int>>> over, under;
  std::optional<std::vector<Formula>> ofs;
  auto flush = [&]() {
    if (!open) return;
    if (!over || !ofs || !under) fail("a cirquent block needs O:, F: and U: lines");
    cur.c.oformulas = std::move(*ofs);
    cur.c.over = std::move(*over);
    cur.c.under = std::move(*under);
    p.steps.push_back(std::move(cur));
    cur = {};
    over.reset();
    under.reset();
    ofs.reset();
    open = false;
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trimmed(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("::", 0) == 0) {
      flush();
      open = true;
      std::string rest = trimmed(t.substr(2));
      std::size_t brace = rest.find('{');
      std::string name = trimmed(brace == std::string::npos ? rest : rest.substr(0, brace));
      if (name.empty()) fail("expected a rule name after '::'");
      cur.rule = name;
      if (brace != std::string::npos) {
        if (rest.back() != '}') fail("unterminated parameter block");
        std::istringstream ps(rest.substr(brace + 1, rest.size() - brace - 2));
        std::string tok;
        while (ps >> tok) {
          std::size_t eq = tok.find('=');
          if (eq == std::string::npos || eq == 0) fail("parameters look like key=value");
          cur.params[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
      }
      continue;
    }
    if (!open) fail("expected a ':: rule' line before cirquent lines");
    if (t.rfind("O:", 0) == 0) {
      if (over) fail("duplicate O: line");
      over = parse_groups(t.substr(2), line_no);
      continue;
    }
    if (t.rfind("U:", 0) == 0) {
      if (under) fail("duplicate U: line");
      under = parse_groups(t.substr(2), line_no);
      continue;
    }
    if (t.rfind("F:", 0) == 0) {
      if (ofs) fail("duplicate F: line");
      std::vector<Formula> fs;
      std::string body = t.substr(2);
      std::size_t start = 0;
      while (start <= body.size()) {
        std::size_t sep = body.find(';', start);
        std::string piece =
            trimmed(sep == std::string::npos ? body.substr(start) : body.substr(start, sep - start));
        if (piece.empty()) fail("empty formula in the F: line");
        try {
          fs.push_back(parse_formula(piece));
        } catch (const ParseError& e) {
          fail("bad formula '" + piece + "': " + e.what());
        }
        if (sep == std::string::npos) break;
        start = sep + 1;
      }
      if (fs.empty()) fail("a cirquent needs at least one oformula");
      ofs = std::move(fs);
      continue;
    }
    fail("unrecognized line: " + t);
  }
  flush();
  if (p.steps.empty()) throw std::runtime_error("cirquent proof has no steps");
  return p;
}

CirquentProof load_cirquent_proof(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_cirquent_proof(ss.str());
}

std::vector<std::string> check_cirquent_proof(const CirquentProof& p, const Formula& goal) {
  std::vector<std::string> errs;
  for (const auto& w : fragment_check(goal, SystemId::CL15)) errs.push_back("goal: " + w);
  if (p.steps.empty()) {
    errs.push_back("the proof has no steps");
    return errs;
  }
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    const std::string tag = "step " + std::to_string(k + 1) + ": ";
    for (const auto& w : cirquent_problems(p.steps[k].c)) errs.push_back(tag + w);
    for (const auto& f : p.steps[k].c.oformulas)
      for (const auto& w : fragment_check(f, SystemId::CL15)) errs.push_back(tag + w);
  }
  if (!errs.empty()) return errs;  // rule replay needs well-formed cirquents

  if (p.steps[0].rule != "Axiom")
    errs.push_back("step 1: a cirquent proof opens with Axiom");
  else if (!p.steps[0].params.empty())
    errs.push_back("step 1: Axiom takes no parameters");
  else if (!is_axiom(p.steps[0].c))
    errs.push_back("step 1: the opening cirquent is not an axiom");
  for (std::size_t k = 1; k < p.steps.size(); ++k) {
    const std::string tag = "step " + std::to_string(k + 1) + ": ";
    if (p.steps[k].rule == "Axiom") {
      errs.push_back(tag + "Axiom can only open a proof");
      continue;
    }
    try {
      Cirquent premise = apply_rule(p.steps[k].rule, p.steps[k].c, p.steps[k].params);
      if (canon_cirquent(premise) != canon_cirquent(p.steps[k - 1].c))
        errs.push_back(tag + p.steps[k].rule + " does not lead back to the previous cirquent");
    } catch (const std::invalid_argument& e) {
      errs.push_back(tag + e.what());
    }
  }
  Cirquent want{{officialize(goal)}, {{0}}, {{0}}};
  if (canon_cirquent(p.steps.back().c) != want)
    errs.push_back("the final cirquent is not the one-oformula form of the goal");
  return errs;
}

std::string to_dot(const Cirquent& c) {
  auto esc = [](const std::string& s) {
    std::string out;
    for (char ch : s) {
      if (ch == '"' || ch == '\\') out += '\\';
      out += ch;
    }
    return out;
  };
  std::string out = "graph cirquent {\n  rankdir=TB;\n  node [fontname=\"monospace\"];\n";
  out += "  { rank=min;";
  for (std::size_t g = 0; g < c.over.size(); ++g)
    out += " og" + std::to_string(g) + " [shape=point];";
  out += " }\n  { rank=same;";
  for (std::size_t i = 0; i < c.oformulas.size(); ++i)
    out += " f" + std::to_string(i) + " [shape=box label=\"" + esc(print_formula(c.oformulas[i])) +
           "\"];";
  out += " }\n  { rank=max;";
  for (std::size_t g = 0; g < c.under.size(); ++g)
    out += " ug" + std::to_string(g) + " [shape=point];";
  out += " }\n";
  for (std::size_t g = 0; g < c.over.size(); ++g)
    for (int i : c.over[g]) out += "  og" + std::to_string(g) + " -- f" + std::to_string(i) + ";\n";
  for (std::size_t g = 0; g < c.under.size(); ++g)
    for (int i : c.under[g]) out += "  f" + std::to_string(i) + " -- ug" + std::to_string(g) + ";\n";
  out += "}\n";
  return out;
}

namespace {

// order-blind fingerprint: oformulas sorted by their text, group indices
// remapped to the sorted order. Equal keys name isomorphic cirquents, which
// exchange moves carry onto each other, so pruning on the key is safe.
std::string cirquent_key(const Cirquent& c) {
  const std::size_t n = c.oformulas.size();
  std::vector<std::string> ps(n);
  for (std::size_t i = 0; i < n; ++i) ps[i] = print_formula(c.oformulas[i]);
  std::vector<int> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
    return ps[static_cast<std::size_t>(a)] < ps[static_cast<std::size_t>(b)];
  });
  std::vector<int> pos(n);
  for (std::size_t r = 0; r < n; ++r) pos[static_cast<std::size_t>(ord[r])] = static_cast<int>(r);
  auto layer_text = [&](const std::vector<std::vector<int>>& layer) {
    std::vector<std::vector<int>> gs;
    gs.reserve(layer.size());
    for (const auto& g : layer) {
      std::vector<int> h;
      h.reserve(g.size());
      for (int i : g) h.push_back(pos[static_cast<std::size_t>(i)]);
      std::sort(h.begin(), h.end());
      gs.push_back(std::move(h));
    }
    std::sort(gs.begin(), gs.end());
    std::string t;
    for (const auto& g : gs) {
      t += " {";
      for (std::size_t k = 0; k < g.size(); ++k) t += (k ? "," : "") + std::to_string(g[k]);
      t += "}";
    }
    return t;
  };
  std::string key;
  for (std::size_t r = 0; r < n; ++r) key += ps[static_cast<std::size_t>(ord[r])] + " ; ";
  return key + "U" + layer_text(c.under) + " O" + layer_text(c.over);
}

bool literal_only(const Cirquent& c) {
  for (const auto& f : c.oformulas)
    if (!(f.op == Op::Gen || (f.op == Op::Not && f.kids[0].op == Op::Gen))) return false;
  return true;
}

// the two formulas an axiom pairs up: each is the other's normalized negation
bool dual_mates(const Formula& a, const Formula& b) {
  return b == officialize(mk_unary(Op::Not, a)) || a == officialize(mk_unary(Op::Not, b));
}

// A literal cirquent descends from an axiom by weakening, merging, and
// duplication alone exactly when some pairing of dual slots into diamonds
// satisfies: every undergroup wholly contains a diamond, the diamonds can be
// matched to distinct undergroups (each axiom undergroup must survive as a
// descendant), and no overgroup contains half a diamond (the over layer only
// ever unions whole diamonds). Unpaired slots are the ones weakening brought
// in later. The witness records which diamond each undergroup descends from.
struct EndgameWitness {
  std::vector<std::pair<int, int>> diamonds;
  std::vector<int> witness;  // per undergroup, an index into diamonds
};

std::optional<EndgameWitness> solve_endgame(const Cirquent& c) {
  const int n = static_cast<int>(c.oformulas.size());
  // candidate diamonds: dual pairs sharing an undergroup (the matching needs a
  // home for each) and never split by an overgroup
  std::vector<std::pair<int, int>> cand;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!dual_mates(c.oformulas[static_cast<std::size_t>(i)],
                      c.oformulas[static_cast<std::size_t>(j)]))
        continue;
      bool together = false;
      for (const auto& u : c.under)
        if (member(u, i) && member(u, j)) {
          together = true;
          break;
        }
      if (!together) continue;
      bool split = false;
      for (const auto& o : c.over)
        if (member(o, i) != member(o, j)) {
          split = true;
          break;
        }
      if (!split) cand.push_back({i, j});
    }
  const int m = static_cast<int>(cand.size());
  std::vector<std::vector<int>> in_u(c.under.size());
  for (std::size_t u = 0; u < c.under.size(); ++u) {
    for (int k = 0; k < m; ++k)
      if (member(c.under[u], cand[static_cast<std::size_t>(k)].first) &&
          member(c.under[u], cand[static_cast<std::size_t>(k)].second))
        in_u[u].push_back(k);
    if (in_u[u].empty()) return std::nullopt;  // this undergroup can never hold a diamond
  }

  // choose pairwise-disjoint candidates until every undergroup holds one; any
  // full witness shrinks to such a covering, so trying only these loses nothing
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<int> chosen;
  std::optional<EndgameWitness> found;

  auto matches_distinct = [&]() -> bool {
    std::vector<int> rev(c.under.size(), -1);  // undergroup -> index into chosen
    std::function<bool(int, std::vector<char>&)> augment = [&](int k,
                                                               std::vector<char>& seen) -> bool {
      const auto& d = cand[static_cast<std::size_t>(chosen[static_cast<std::size_t>(k)])];
      for (std::size_t u = 0; u < c.under.size(); ++u) {
        if (seen[u] || !member(c.under[u], d.first) || !member(c.under[u], d.second)) continue;
        seen[u] = 1;
        if (rev[u] < 0 || augment(rev[u], seen)) {
          rev[u] = k;
          return true;
        }
      }
      return false;
    };
    for (int k = 0; k < static_cast<int>(chosen.size()); ++k) {
      std::vector<char> seen(c.under.size(), 0);
      if (!augment(k, seen)) return false;
    }
    EndgameWitness w;
    for (int k : chosen) w.diamonds.push_back(cand[static_cast<std::size_t>(k)]);
    w.witness.resize(c.under.size());
    for (std::size_t u = 0; u < c.under.size(); ++u) {
      if (rev[u] >= 0) {
        w.witness[u] = rev[u];
      } else {
        for (int k = 0; k < static_cast<int>(chosen.size()); ++k) {
          const auto& d = cand[static_cast<std::size_t>(chosen[static_cast<std::size_t>(k)])];
          if (member(c.under[u], d.first) && member(c.under[u], d.second)) {
            w.witness[u] = k;
            break;
          }
        }
      }
    }
    found = std::move(w);
    return true;
  };

  std::function<bool(std::size_t)> cover = [&](std::size_t u) -> bool {
    if (u == c.under.size()) return matches_distinct();
    for (int k : chosen) {
      const auto& d = cand[static_cast<std::size_t>(k)];
      if (member(c.under[u], d.first) && member(c.under[u], d.second)) return cover(u + 1);
    }
    for (int k : in_u[u]) {
      const auto& d = cand[static_cast<std::size_t>(k)];
      if (used[static_cast<std::size_t>(d.first)] || used[static_cast<std::size_t>(d.second)])
        continue;
      used[static_cast<std::size_t>(d.first)] = 1;
      used[static_cast<std::size_t>(d.second)] = 1;
      chosen.push_back(k);
      if (cover(u + 1)) return true;
      chosen.pop_back();
      used[static_cast<std::size_t>(d.first)] = 0;
      used[static_cast<std::size_t>(d.second)] = 0;
    }
    return false;
  };

  cover(0);
  return found;
}

// The backward chain from a solvable literal cirquent down to an axiom, axiom
// line first, built directly from the witness: strip foreign arcs (weakening),
// merge duplicated undergroups, split multi-diamond overgroups, merge
// duplicated overgroups.
std::vector<CirquentStep> construct_endgame(Cirquent cur) {
  std::vector<CirquentStep> moves;
  while (!is_axiom(cur)) {
    auto eg = solve_endgame(cur);
    if (!eg) throw std::logic_error("cirquent endgame lost its witness");
    std::string rule;
    std::map<std::string, std::string> ps;
    for (std::size_t u = 0; rule.empty() && u < cur.under.size(); ++u) {
      const auto& d = eg->diamonds[static_cast<std::size_t>(eg->witness[u])];
      for (int z : cur.under[u])
        if (z != d.first && z != d.second) {
          rule = "Weakening";
          ps = {{"under", std::to_string(u + 1)}, {"of", std::to_string(z + 1)}};
          break;
        }
    }
    for (std::size_t a = 0; rule.empty() && a + 1 < cur.under.size(); ++a)
      if (cur.under[a] == cur.under[a + 1]) {
        rule = "DuplicationU";
        ps = {{"at", std::to_string(a + 1)}};
      }
    for (std::size_t o = 0; rule.empty() && o < cur.over.size(); ++o) {
      if (cur.over[o].size() <= 2) continue;
      for (const auto& [a, b] : eg->diamonds)
        if (member(cur.over[o], a) && member(cur.over[o], b)) {
          std::string right;
          for (int z : cur.over[o])
            if (z != a && z != b) {
              if (!right.empty()) right += ",";
              right += std::to_string(z + 1);
            }
          rule = "Merging";
          ps = {{"over", std::to_string(o + 1)},
                {"left", std::to_string(a + 1) + "," + std::to_string(b + 1)},
                {"right", right}};
          break;
        }
    }
    for (std::size_t a = 0; rule.empty() && a + 1 < cur.over.size(); ++a)
      if (cur.over[a] == cur.over[a + 1]) {
        rule = "DuplicationO";
        ps = {{"at", std::to_string(a + 1)}};
      }
    if (rule.empty()) throw std::logic_error("cirquent endgame stalled before the axiom");
    moves.push_back({cur, rule, ps});
    cur = canon_cirquent(apply_rule(rule, cur, ps));
  }
  std::vector<CirquentStep> out;
  out.push_back({cur, "Axiom", {}});
  for (auto it = moves.rbegin(); it != moves.rend(); ++it) out.push_back(std::move(*it));
  return out;
}

struct CirquentProver {
  int width = 10;
  long nodes = 0;
  long node_cap = 4000000;
  bool cut = false;      // some branch was stopped by the depth or width bound
  bool starved = false;  // the node budget ran out; results past here are partial
  std::map<std::string, int> lost;  // key -> largest remaining budget that still failed
  static constexpr int kSettled = 1 << 29;  // failure independent of budget

  bool dfs(const Cirquent& c, int remaining, std::vector<CirquentStep>& out) {
    if (starved) return false;
    if (++nodes > node_cap) {
      starved = true;
      cut = true;
      return false;
    }
    if (is_axiom(c)) {
      out.push_back({c, "Axiom", {}});
      return true;
    }
    const std::string key = cirquent_key(c);
    if (auto it = lost.find(key); it != lost.end() && it->second >= remaining) return false;
    const int n = static_cast<int>(c.oformulas.size());

    auto attempt = [&](const char* rule, std::map<std::string, std::string> ps,
                       int cost) -> bool {
      Cirquent premise;
      try {
        premise = canon_cirquent(apply_rule(rule, c, ps));
      } catch (const std::invalid_argument&) {
        return false;  // that parameterization does not apply here
      }
      if (static_cast<int>(premise.oformulas.size()) > width ||
          static_cast<int>(premise.over.size()) > width + 2 ||
          static_cast<int>(premise.under.size()) > width + 2) {
        cut = true;
        return false;
      }
      if (!dfs(premise, remaining - cost, out)) return false;
      out.push_back({c, rule, std::move(ps)});
      return true;
    };

    // parallel and recurrence strips are deterministic: any proof can be
    // rearranged to end on the strip of a chosen occurrence, so the first
    // strippable occurrence is taken unconditionally and costs no budget
    int disj = -1, conj = -1, rec = -1;
    for (int i = 0; i < n; ++i) {
      switch (c.oformulas[static_cast<std::size_t>(i)].op) {
        case Op::POr:
          if (disj < 0) disj = i;
          break;
        case Op::PAnd:
          if (conj < 0) conj = i;
          break;
        case Op::BRec:
          if (rec < 0) rec = i;
          break;
        default:
          break;
      }
    }
    if (disj >= 0 || conj >= 0 || rec >= 0) {
      bool ok = disj >= 0 ? attempt("DisjIntro", {{"of", std::to_string(disj + 1)}}, 0)
                : conj >= 0 ? attempt("ConjIntro", {{"of", std::to_string(conj + 1)}}, 0)
                            : attempt("RecIntro", {{"of", std::to_string(rec + 1)}}, 0);
      if (!ok && !starved) {
        int& worst = lost[key];
        worst = std::max(worst, remaining);
      }
      return ok;
    }

    // the formula-preserving rules might already close this cirquent out; if
    // they can, the witness yields the whole remaining chain for free
    if (solve_endgame(c)) {
      auto chain = construct_endgame(c);
      for (auto& step : chain) out.push_back(std::move(step));
      return true;
    }
    // with nothing left to strip, a literal cirquent those rules cannot close
    // is dead no matter the budget
    if (literal_only(c)) {
      lost[key] = kSettled;
      return false;
    }

    // what is left holds at least one ?-occurrence: budgeted choice territory
    if (remaining == 0) {
      cut = true;
      return false;
    }
    for (int i = 0; i < n; ++i) {
      if (c.oformulas[static_cast<std::size_t>(i)].op != Op::CoBRec) continue;
      const std::string of = std::to_string(i + 1);
      // every way the unwrapped formula could join existing overgroups,
      // cheapest first; past six overgroups only the empty and single joins
      const int m = static_cast<int>(c.over.size());
      std::vector<std::vector<int>> joins{{}};
      if (m <= 6) {
        for (int mask = 1; mask < (1 << m); ++mask) {
          std::vector<int> js;
          for (int b = 0; b < m; ++b)
            if (mask & (1 << b)) js.push_back(b + 1);
          joins.push_back(std::move(js));
        }
        std::stable_sort(joins.begin(), joins.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); });
      } else {
        for (int b = 0; b < m; ++b) joins.push_back({b + 1});
      }
      for (auto& js : joins) {
        std::map<std::string, std::string> ps{{"of", of}};
        if (!js.empty()) {
          std::string v;
          for (std::size_t k = 0; k < js.size(); ++k) v += (k ? "," : "") + std::to_string(js[k]);
          ps["join"] = v;
        }
        if (attempt("CorecIntro", std::move(ps), 1)) return true;
      }
    }
    for (int i = 0; i < n; ++i)
      if (c.oformulas[static_cast<std::size_t>(i)].op == Op::CoBRec &&
          attempt("Contraction", {{"of", std::to_string(i + 1)}}, 1))
        return true;
    for (std::size_t a = 0; a + 1 < c.under.size(); ++a)
      if (c.under[a] == c.under[a + 1] && attempt("DuplicationU", {{"at", std::to_string(a + 1)}}, 1))
        return true;
    for (std::size_t a = 0; a + 1 < c.over.size(); ++a)
      if (c.over[a] == c.over[a + 1] && attempt("DuplicationO", {{"at", std::to_string(a + 1)}}, 1))
        return true;
    for (std::size_t o = 0; o < c.over.size(); ++o) {
      const auto& g = c.over[o];
      const int sz = static_cast<int>(g.size());
      if (sz < 2 || sz > 8) continue;
      // proper two-part splits; the half holding g[0] is "left", so each
      // split shows up once (group order washes out in canonical form)
      for (int mask = 0; mask < (1 << (sz - 1)) - 1; ++mask) {
        std::string left = std::to_string(g[0] + 1);
        std::string right;
        for (int b = 1; b < sz; ++b) {
          if ((mask >> (b - 1)) & 1) {
            left += "," + std::to_string(g[static_cast<std::size_t>(b)] + 1);
          } else {
            if (!right.empty()) right += ",";
            right += std::to_string(g[static_cast<std::size_t>(b)] + 1);
          }
        }
        if (attempt("Merging", {{"over", std::to_string(o + 1)}, {"left", left}, {"right", right}},
                    1))
          return true;
      }
    }
    for (std::size_t u = 0; u < c.under.size(); ++u) {
      if (c.under[u].size() < 2) continue;
      for (int i : c.under[u])
        if (attempt("Weakening", {{"under", std::to_string(u + 1)}, {"of", std::to_string(i + 1)}},
                    1))
          return true;
    }

    if (!starved) {
      int& worst = lost[key];
      worst = std::max(worst, remaining);
    }
    return false;
  }
};

}  // namespace

bool cirquent_reaches_axiom(const Cirquent& c) {
  Cirquent cc = canon_cirquent(c);
  if (!solve_endgame(cc)) return false;
  construct_endgame(std::move(cc));  // throws if the witness fails to realize
  return true;
}

ProveResult prove_cl15_formula(const Formula& goal, const ProveLimits& lim) {
  auto problems = fragment_check(goal, SystemId::CL15);
  if (!problems.empty()) throw std::invalid_argument(problems.front());
  Cirquent root = canon_cirquent(Cirquent{{officialize(goal)}, {{0}}, {{0}}});
  CirquentProver pv;
  pv.width = std::max(lim.max_width, 1);
  std::vector<CirquentStep> steps;
  bool found = false;
  bool exhausted = false;
  for (int d = 0; d <= lim.max_steps; ++d) {
    pv.cut = false;
    steps.clear();
    if (pv.dfs(root, d, steps)) {
      found = true;
      break;
    }
    if (pv.starved) break;
    if (!pv.cut) {
      exhausted = true;
      break;
    }
  }
  ProveResult res;
  if (found) {
    res.kind = Provability::Provable;
    res.cirquent = CirquentProof{std::move(steps)};
    return res;
  }
  res.kind = Provability::Unknown;
  if (exhausted)
    res.detail = "backward search ran out of distinct cirquents at width " +
                 std::to_string(pv.width) +
                 " without reaching an axiom; that does not certify unprovability";
  else
    res.detail = "no proof within " + std::to_string(lim.max_steps) + " choice steps at width " +
                 std::to_string(pv.width) + "; that does not certify unprovability";
  return res;
}

}  // namespace colkit
